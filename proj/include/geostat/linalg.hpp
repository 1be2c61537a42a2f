#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "geostat/errors.hpp"

// Dense symmetric linear algebra for the exact likelihood, simulation and
// kriging paths. Storage and factorization delegate to Eigen; the jitter
// escalation policy and error semantics live here.

namespace geostat {

// Dense symmetric matrix. The lower triangle is authoritative: construction
// mirrors it onto the upper triangle and nothing re-checks symmetry later.
class SymmetricMatrix {
 public:
  static SymmetricMatrix from_lower(Eigen::MatrixXd lower) {
    if (lower.rows() != lower.cols() || lower.rows() < 1)
      throw DimensionMismatch("SymmetricMatrix: need a square matrix of order >= 1");
    lower.triangularView<Eigen::StrictlyUpper>() =
        lower.triangularView<Eigen::StrictlyLower>().transpose();
    if (!lower.allFinite())
      throw DomainError("SymmetricMatrix: non-finite entry");
    return SymmetricMatrix(std::move(lower));
  }

  static SymmetricMatrix identity(Eigen::Index n) {
    return SymmetricMatrix(Eigen::MatrixXd::Identity(n, n));
  }

  Eigen::Index n() const { return mat_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }
  const Eigen::MatrixXd& dense() const { return mat_; }

 private:
  explicit SymmetricMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {}
  Eigen::MatrixXd mat_;
};

// Diagonal ridge escalation, as multiples of mean(diag A). Nonstationary
// models with near-coincident points produce numerically semidefinite
// matrices; a fixed schedule keeps runs reproducible.
struct JitterPolicy {
  std::vector<double> scale_factors{1e-12, 1e-10, 1e-8, 1e-6};
};

class CholeskyFactor {
 public:
  CholeskyFactor(Eigen::MatrixXd lower, double jitter_applied)
      : lower_(std::move(lower)), jitter_(jitter_applied) {}

  Eigen::Index n() const { return lower_.rows(); }
  double jitter_applied() const { return jitter_; }
  const Eigen::MatrixXd& lower() const { return lower_; }

 private:
  Eigen::MatrixXd lower_;
  double jitter_;
};

// L with L·Lᵀ = A + jitter·I, taking jitter = 0 when A factors directly and
// otherwise the smallest value from the schedule that succeeds.
inline CholeskyFactor cholesky(const SymmetricMatrix& a,
                               const JitterPolicy& policy = JitterPolicy{}) {
  const double diag_mean = a.dense().diagonal().mean();
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  std::size_t attempt = 0;
  for (;;) {
    if (jitter == 0.0) {
      llt.compute(a.dense());
    } else {
      Eigen::MatrixXd shifted = a.dense();
      shifted.diagonal().array() += jitter;
      llt.compute(shifted);
    }
    if (llt.info() == Eigen::Success)
      return CholeskyFactor(llt.matrixL(), jitter);
    if (attempt == policy.scale_factors.size())
      throw NotPositiveDefinite(
          "cholesky: matrix of order " + std::to_string(a.n()) +
          " is not positive definite even with jitter " + std::to_string(jitter) +
          " (invalid covariance model or degenerate co-located points?)");
    jitter = policy.scale_factors[attempt++] * diag_mean;
  }
}

// x with L·x = b (forward substitution).
inline Eigen::VectorXd solve_lower(const CholeskyFactor& f, const Eigen::VectorXd& b) {
  if (b.size() != f.n())
    throw DimensionMismatch("solve_lower: vector length " + std::to_string(b.size()) +
                            " != order " + std::to_string(f.n()));
  return f.lower().triangularView<Eigen::Lower>().solve(b);
}

// log |A| = 2 Σ log L(i,i) of the factored matrix.
inline double log_det(const CholeskyFactor& f) {
  return 2.0 * f.lower().diagonal().array().log().sum();
}

// zᵀ A⁻¹ z = ‖L⁻¹ z‖² of the factored matrix.
inline double quadratic_form(const CholeskyFactor& f, const Eigen::VectorXd& z) {
  if (z.size() != f.n())
    throw DimensionMismatch("quadratic_form: vector length " + std::to_string(z.size()) +
                            " != order " + std::to_string(f.n()));
  return solve_lower(f, z).squaredNorm();
}

}  // namespace geostat
