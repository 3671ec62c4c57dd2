#include "normsplit/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "normsplit/norms.hpp"

namespace normsplit {

namespace {

constexpr int kMaxK = 6;  // 2^(2k-1) columns; k = 6 is already 2048

std::vector<int> mask_to_indices(std::uint32_t mask, int n_bits) {
  std::vector<int> out;
  for (int i = 0; i < n_bits; ++i) {
    if ((mask >> i) & 1u) {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

SubsetFamily theorem4_family(int k) {
  if (k < 1 || k > kMaxK) {
    throw std::invalid_argument("theorem4_family: k must be in [1," + std::to_string(kMaxK) +
                                "]");
  }
  const int big_n = 2 * k;
  const std::uint32_t all = (std::uint32_t{1} << big_n) - 1;

  SubsetFamily family;
  family.k = k;
  family.big_n = big_n;
  family.n = 1 << (2 * k - 1);
  family.subsets.reserve(family.n);

  // One representative per complementary pair {S, ~S}: the larger side; equal
  // sizes resolve to the lexicographically smaller index sequence. Masks with
  // bit 0 set enumerate each pair exactly once.
  for (std::uint32_t mask = 1; mask <= all; mask += 2) {
    const std::uint32_t comp = all & ~mask;
    const int size_s = __builtin_popcount(mask);
    const int size_c = big_n - size_s;
    std::uint32_t chosen = 0;
    if (size_s != size_c) {
      chosen = size_s > size_c ? mask : comp;
    } else {
      const auto s_idx = mask_to_indices(mask, big_n);
      const auto c_idx = mask_to_indices(comp, big_n);
      chosen = std::lexicographical_compare(s_idx.begin(), s_idx.end(), c_idx.begin(),
                                            c_idx.end())
                   ? mask
                   : comp;
    }
    family.subsets.push_back(mask_to_indices(chosen, big_n));
  }

  std::stable_sort(family.subsets.begin(), family.subsets.end(),
                   [](const std::vector<int>& lhs, const std::vector<int>& rhs) {
                     if (lhs.size() != rhs.size()) {
                       return lhs.size() > rhs.size();
                     }
                     return std::lexicographical_compare(lhs.begin(), lhs.end(),
                                                         rhs.begin(), rhs.end());
                   });
  return family;
}

Matrix theorem4_matrix(int k, double q) {
  if (std::isnan(q) || q < 1.0 || std::isinf(q)) {
    throw std::invalid_argument("theorem4_matrix: q must be in [1,inf)");
  }
  const SubsetFamily family = theorem4_family(k);
  std::vector<double> scale(family.n);
  std::vector<std::uint32_t> masks(family.n, 0);
  for (int j = 0; j < family.n; ++j) {
    scale[j] = std::pow(static_cast<double>(family.subsets[j].size()), -1.0 / q);
    for (int i : family.subsets[j]) {
      masks[j] |= std::uint32_t{1} << i;
    }
  }
  return Matrix(family.big_n, family.n, [&](int i, int j) {
    return ((masks[j] >> i) & 1u) ? scale[j] : 0.0;
  });
}

VerificationReport verify_theorem4(int k, double q) {
  const SubsetFamily family = theorem4_family(k);
  if (std::isnan(q) || q < 1.0 || std::isinf(q)) {
    throw std::invalid_argument("verify_theorem4: q must be in [1,inf)");
  }

  std::vector<std::uint32_t> subset_masks(family.n, 0);
  for (int j = 0; j < family.n; ++j) {
    for (int i : family.subsets[j]) {
      subset_masks[j] |= std::uint32_t{1} << i;
    }
  }
  const std::uint32_t all = (std::uint32_t{1} << family.big_n) - 1;

  VerificationReport report;
  report.tag = TheoremTag::t4_full_norm;
  report.claimed = 1.0;
  report.exactness = Exactness::exact;
  report.tolerance = 0.0;
  report.pass = true;

  // ||A(block)||_(1,q)^q = max_j |block ∩ B_j| / |B_j|: pure integer
  // comparisons, so equality with the full norm carries no rounding at all.
  const std::uint64_t total = std::uint64_t{1} << (family.big_n - 1);
  for (std::uint64_t pmask = 0; pmask < total; ++pmask) {
    // Row 0 in block1; partition-mask bit (t-1) puts row t in block2.
    const std::uint32_t block2 = static_cast<std::uint32_t>(pmask) << 1;
    const std::uint32_t block1 = all & ~block2;
    int witness = -1;
    for (int j = 0; j < family.n; ++j) {
      const std::uint32_t b = subset_masks[j];
      if ((b & block1) == b || (b & block2) == b) {
        witness = j;
        break;
      }
    }
    if (witness < 0) {
      report.pass = false;
      report.note = "partition mask " + std::to_string(pmask) +
                    " shrinks every column (family coverage broken)";
      break;
    }
  }

  report.achieved = {report.pass ? 1.0 : 0.0, report.pass ? 1.0 : 0.0};
  report.achieved_max = report.achieved[0];
  report.failed = !report.pass;
  if (report.pass) {
    report.note = std::to_string(total) + " canonical partitions, all attain the full norm";
  }
  return report;
}

}  // namespace normsplit
