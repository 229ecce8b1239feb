#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textcat/linalg.hpp"

namespace textcat {

/// Length of x(v) for an input of dimension `dim` and polynomial `order`.
/// 1 + L′ for order 1; 1 + L′ + L′(L′+1)/2 for order 2.
std::size_t expansion_size(std::size_t dim, int order);

/// Polynomial expansion: constant, linear terms, then for order 2 every
/// product v_j·v_k with j ≤ k in lexicographic (j, k) order.
std::vector<double> expand(std::span<const double> v, int order);

struct ClassifierModel {
  int order = 1;
  std::size_t input_dim = 0;
  std::vector<std::string> class_names;
  /// X×K coefficients; scores are d(v) = Aᵀ·x(v).
  Matrix coefficients;

  std::size_t num_classes() const noexcept { return coefficients.cols(); }
  std::size_t expansion_dim() const noexcept { return coefficients.rows(); }

  void validate() const;
};

struct Sample {
  std::vector<double> features;
  std::size_t label = 0;
};

struct FitOptions {
  int order = 1;
  /// Penalty on every non-constant coefficient. nullopt selects
  /// 1e-8·trace(Σxxᵀ)/X.
  std::optional<double> ridge;
  /// Fall back to the pseudo-inverse when the unregularized system is singular.
  bool allow_pseudo_inverse = true;
};

struct FitReport {
  double ridge = 0.0;
  bool used_pseudo_inverse = false;
  /// ‖(M + ridge·D)·A − R‖ / ‖R‖ of the normal equations.
  double normal_residual = 0.0;
  std::vector<std::string> warnings;
};

/// Least-squares fit of one-hot class targets on x(v).
ClassifierModel fit(std::span<const Sample> samples, std::vector<std::string> class_names,
                    const FitOptions& options = {}, FitReport* report = nullptr);

/// d(v) = Aᵀ·x(v), unclipped.
std::vector<double> predict(const ClassifierModel& model, std::span<const double> v);

/// Index of the largest score; ties go to the lowest index.
std::size_t decide(std::span<const double> scores);

}  // namespace textcat
