#include "normsplit/ensemble.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "eigen_support.hpp"
#include "normsplit/counterexamples.hpp"

namespace normsplit {

namespace {

std::mt19937_64 member_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x5eedu};
  return std::mt19937_64(seq);
}

}  // namespace

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "gaussian") {
    return EnsembleKind::gaussian;
  }
  if (name == "orthonormal-columns") {
    return EnsembleKind::orthonormal_columns;
  }
  if (name == "sign") {
    return EnsembleKind::sign;
  }
  if (name == "theorem4") {
    return EnsembleKind::theorem4;
  }
  throw std::invalid_argument("unknown ensemble kind '" + std::string(name) + "'");
}

const char* ensemble_kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::gaussian:
      return "gaussian";
    case EnsembleKind::orthonormal_columns:
      return "orthonormal-columns";
    case EnsembleKind::sign:
      return "sign";
    case EnsembleKind::theorem4:
      return "theorem4";
  }
  return "unknown";
}

Matrix make_ensemble_matrix(EnsembleKind kind, int big_n, int n, double q,
                            std::uint64_t seed, int index) {
  switch (kind) {
    case EnsembleKind::gaussian: {
      if (big_n < 1 || n < 1) {
        throw std::invalid_argument("gaussian ensemble: N and n must be positive");
      }
      auto rng = member_rng(seed, index);
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::vector<double> entries(static_cast<size_t>(big_n) * n);
      for (double& v : entries) {
        v = gauss(rng);
      }
      return Matrix(big_n, n, std::move(entries));
    }
    case EnsembleKind::orthonormal_columns: {
      if (big_n < 1 || n < 1 || big_n < n) {
        throw std::invalid_argument("orthonormal-columns ensemble requires N >= n >= 1");
      }
      auto rng = member_rng(seed, index);
      std::normal_distribution<double> gauss(0.0, 1.0);
      Eigen::MatrixXd g(big_n, n);
      for (int i = 0; i < big_n; ++i) {
        for (int j = 0; j < n; ++j) {
          g(i, j) = gauss(rng);
        }
      }
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
      Eigen::MatrixXd thin_q =
          qr.householderQ() * Eigen::MatrixXd::Identity(big_n, n);
      const Eigen::MatrixXd r =
          qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
      for (int j = 0; j < n; ++j) {  // fix the sign convention: R diagonal >= 0
        if (r(j, j) < 0.0) {
          thin_q.col(j) = -thin_q.col(j);
        }
      }
      return Matrix(big_n, n, [&](int i, int j) { return thin_q(i, j); });
    }
    case EnsembleKind::sign: {
      if (big_n < 1 || n < 1) {
        throw std::invalid_argument("sign ensemble: N and n must be positive");
      }
      if (std::isnan(q) || q < 1.0 || std::isinf(q)) {
        throw std::invalid_argument("sign ensemble: q must be in [1,inf)");
      }
      auto rng = member_rng(seed, index);
      const double scale = std::pow(static_cast<double>(big_n), -1.0 / q);
      std::vector<double> entries(static_cast<size_t>(big_n) * n);
      for (double& v : entries) {
        v = (rng() & 1u) ? scale : -scale;
      }
      return Matrix(big_n, n, std::move(entries));
    }
    case EnsembleKind::theorem4: {
      if (big_n < 2 || big_n % 2 != 0) {
        throw std::invalid_argument("theorem4 ensemble: N must be even (N = 2k)");
      }
      const int k = big_n / 2;
      if (n != 0 && n != (1 << (2 * k - 1))) {
        throw std::invalid_argument("theorem4 ensemble: n is fixed to 2^(2k-1) = " +
                                    std::to_string(1 << (2 * k - 1)));
      }
      return theorem4_matrix(k, q);
    }
  }
  throw std::invalid_argument("unknown ensemble kind");
}

std::vector<Matrix> generate_ensemble(EnsembleKind kind, int big_n, int n, double q,
                                      int count, std::uint64_t seed) {
  if (count < 0) {
    throw std::invalid_argument("ensemble count must be non-negative");
  }
  std::vector<Matrix> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(make_ensemble_matrix(kind, big_n, n, q, seed, i));
  }
  return out;
}

}  // namespace normsplit
