#include "textcat/polyclassify.hpp"

#include <cmath>
#include <string>

#include "textcat/error.hpp"

namespace textcat {

namespace {

void check_order(int order) {
  if (order != 1 && order != 2) {
    throw ConfigError("unsupported polynomial order " + std::to_string(order) + " (expected 1 or 2)");
  }
}

}  // namespace

std::size_t expansion_size(std::size_t dim, int order) {
  check_order(order);
  return order == 1 ? 1 + dim : 1 + dim + dim * (dim + 1) / 2;
}

std::vector<double> expand(std::span<const double> v, int order) {
  check_order(order);
  std::vector<double> x;
  x.reserve(expansion_size(v.size(), order));
  x.push_back(1.0);
  x.insert(x.end(), v.begin(), v.end());
  if (order == 2) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      for (std::size_t k = j; k < v.size(); ++k) x.push_back(v[j] * v[k]);
    }
  }
  return x;
}

void ClassifierModel::validate() const {
  check_order(order);
  if (class_names.empty()) throw InputError("classifier has no classes");
  if (coefficients.cols() != class_names.size()) {
    throw InputError("classifier coefficient columns do not match the class count");
  }
  if (coefficients.rows() != expansion_size(input_dim, order)) {
    throw InputError("classifier expansion size " + std::to_string(coefficients.rows()) + " does not match L' = " +
                     std::to_string(input_dim) + " at order " + std::to_string(order));
  }
  for (double a : coefficients.data()) {
    if (!std::isfinite(a)) throw InputError("classifier coefficients are not finite");
  }
}

ClassifierModel fit(std::span<const Sample> samples, std::vector<std::string> class_names,
                    const FitOptions& options, FitReport* report) {
  check_order(options.order);
  const std::size_t k = class_names.size();
  if (k == 0) throw InputError("no classes to fit");
  if (samples.empty()) throw InputError("no training samples");
  const std::size_t dim = samples.front().features.size();

  FitReport local;
  FitReport& rep = report ? *report : local;
  rep = FitReport{};

  std::vector<std::size_t> per_class(k, 0);
  for (const auto& s : samples) {
    if (s.features.size() != dim) throw InputError("training samples differ in dimension");
    if (s.label >= k) throw InputError("sample label " + std::to_string(s.label) + " outside the class set");
    ++per_class[s.label];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (per_class[c] == 0) throw InputError("class '" + class_names[c] + "' has no training samples");
  }

  const std::size_t x_dim = expansion_size(dim, options.order);
  if (samples.size() < x_dim) {
    rep.warnings.push_back("fewer samples (" + std::to_string(samples.size()) + ") than coefficients per class (" +
                           std::to_string(x_dim) + ")");
  }
  if (options.order == 2) {
    bool enough = dim < 100;
    for (std::size_t c : per_class) enough = enough && c > 1000;
    if (!enough) {
      rep.warnings.push_back("second order classifier is only advisable for L' < 100 and more than 1000 samples per class");
    }
  }

  // Moment matrix M = Σ x·xᵀ and right-hand side R = Σ x·yᵀ.
  Matrix m(x_dim, x_dim);
  Matrix r(x_dim, k);
  for (const auto& s : samples) {
    const auto x = expand(s.features, options.order);
    for (std::size_t i = 0; i < x_dim; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      auto row = m.row(i);
      for (std::size_t j = 0; j <= i; ++j) row[j] += xi * x[j];
      r(i, s.label) += xi;
    }
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < x_dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) m(j, i) = m(i, j);
    trace += m(i, i);
  }

  const double ridge = options.ridge ? *options.ridge : 1e-8 * trace / static_cast<double>(x_dim);
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ConfigError("ridge must be a non-negative number");
  rep.ridge = ridge;

  // The constant term is never penalized so the scores keep summing to one.
  Matrix system = m;
  for (std::size_t i = 1; i < x_dim; ++i) system(i, i) += ridge;

  Matrix a;
  if (auto l = cholesky(system)) {
    a = cholesky_solve(*l, r);
  } else if (ridge == 0.0 && options.allow_pseudo_inverse) {
    a = psd_pseudo_inverse(system) * r;
    rep.used_pseudo_inverse = true;
  } else {
    throw NumericalError("normal equations are singular (ridge " + std::to_string(ridge) + ")");
  }

  const Matrix lhs = system * a;
  Matrix diff = lhs;
  for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= r.data()[i];
  const double rnorm = frobenius_norm(r);
  rep.normal_residual = rnorm > 0.0 ? frobenius_norm(diff) / rnorm : frobenius_norm(diff);

  ClassifierModel model;
  model.order = options.order;
  model.input_dim = dim;
  model.class_names = std::move(class_names);
  model.coefficients = std::move(a);
  for (double v : model.coefficients.data()) {
    if (!std::isfinite(v)) throw NumericalError("classifier coefficients are not finite");
  }
  return model;
}

std::vector<double> predict(const ClassifierModel& model, std::span<const double> v) {
  if (v.size() != model.input_dim) {
    throw InputError("reduced vector of length " + std::to_string(v.size()) + " does not match classifier L' = " +
                     std::to_string(model.input_dim));
  }
  const auto x = expand(v, model.order);
  return transpose_times(model.coefficients, x);
}

std::size_t decide(std::span<const double> scores) {
  if (scores.empty()) throw InputError("cannot decide on an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace textcat
