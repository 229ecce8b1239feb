#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "textcat/linalg.hpp"
#include "textcat/vectorize.hpp"

namespace textcat {

enum class ReductionMethod { pca, svd };

std::string_view to_string(ReductionMethod m);
ReductionMethod parse_reduction_method(std::string_view name);

/// Linear projection onto the leading directions of the training data.
struct ProjectionModel {
  ReductionMethod method = ReductionMethod::pca;
  /// Whether the data was mean-centered before decomposition.
  bool centered = true;
  /// Length L; all zero when not centered.
  std::vector<double> mean;
  /// Descending, non-negative; covers the numerical rank (at least L′
  /// entries, zero padded).
  std::vector<double> eigenvalues;
  /// L×L′ with orthonormal columns.
  Matrix basis;

  std::size_t input_dim() const noexcept { return basis.rows(); }
  std::size_t output_dim() const noexcept { return basis.cols(); }

  /// Throws InputError when shapes or orthonormality do not hold.
  void validate() const;
};

/// Eigenvectors of the covariance matrix for the `lprime` largest
/// eigenvalues. Uses the N×N Gram matrix when N < L.
ProjectionModel fit_pca(const Matrix& data, std::size_t lprime);
ProjectionModel fit_pca(std::span<const FeatureVector> vectors, std::size_t lprime);

/// Leading right singular vectors of the (by default uncentered) data
/// matrix, from a one-sided Jacobi SVD. Eigenvalue slots hold σ²/N.
ProjectionModel fit_svd(const Matrix& data, std::size_t lprime, bool center = false);
ProjectionModel fit_svd(std::span<const FeatureVector> vectors, std::size_t lprime, bool center = false);

/// Stacks vectors into an N×L matrix.
Matrix stack_rows(std::span<const FeatureVector> vectors);

/// basisᵀ·(v − mean).
std::vector<double> project(const ProjectionModel& model, std::span<const double> v);

/// mean + basis·reduced.
std::vector<double> reconstruct(const ProjectionModel& model, std::span<const double> reduced);

/// The same model restricted to its leading `lprime` directions.
ProjectionModel truncate(const ProjectionModel& model, std::size_t lprime);

/// 100·(1 − Σ_{j≤L′}λ_j / Σ_j λ_j) for each requested L′.
/// Throws InputError when the total variance is zero.
std::vector<std::pair<std::size_t, double>> reconstruction_error_curve(
    const ProjectionModel& model, std::span<const std::size_t> lprimes);

/// Same curve, additionally checked against the mean squared residual of
/// `data` (the training data of `model`). Every L′ must be ≤ the model's L′.
/// Throws NumericalError when the two disagree beyond 1e-6 relative.
std::vector<std::pair<std::size_t, double>> reconstruction_error_curve(
    const ProjectionModel& model, std::span<const std::size_t> lprimes, const Matrix& data);

/// Mean squared residual over total squared deviation, in percent, using the
/// leading `lprime` directions.
double empirical_reconstruction_error(const ProjectionModel& model, const Matrix& data,
                                      std::size_t lprime);

}  // namespace textcat
