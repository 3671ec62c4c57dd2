#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "normsplit/matrix.hpp"

namespace normsplit {

enum class EnsembleKind { gaussian, orthonormal_columns, sign, theorem4 };

EnsembleKind parse_ensemble_kind(std::string_view name);
const char* ensemble_kind_name(EnsembleKind kind);

/// Member `index` of the ensemble (deterministic in (seed, index)).
/// gaussian: i.i.d. N(0,1) entries. orthonormal_columns: thin Q of a seeded
/// Gaussian (requires N >= n). sign: +-1 coin flips, columns scaled to unit
/// q-norm. theorem4: the extremal family member with k = N/2 (N even;
/// index ignored).
Matrix make_ensemble_matrix(EnsembleKind kind, int big_n, int n, double q,
                            std::uint64_t seed, int index);

std::vector<Matrix> generate_ensemble(EnsembleKind kind, int big_n, int n, double q,
                                      int count, std::uint64_t seed);

}  // namespace normsplit
