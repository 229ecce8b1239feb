#include "textcat/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "textcat/error.hpp"

namespace textcat {

std::string_view to_string(ReductionMethod m) { return m == ReductionMethod::pca ? "pca" : "svd"; }

ReductionMethod parse_reduction_method(std::string_view name) {
  if (name == "pca") return ReductionMethod::pca;
  if (name == "svd") return ReductionMethod::svd;
  throw ConfigError("unknown reduction method '" + std::string(name) + "' (expected pca|svd)");
}

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-6;
constexpr double kOrthonormalTolerance = 1e-9;

void check_shape(std::size_t n, std::size_t l, std::size_t lprime) {
  if (n < 2) throw InputError("dimension reduction needs at least 2 vectors, got " + std::to_string(n));
  if (l == 0) throw InputError("feature vectors are empty");
  if (lprime < 1 || lprime > l) {
    throw ConfigError("L' = " + std::to_string(lprime) + " outside [1, " + std::to_string(l) + "]");
  }
  if (lprime > n) {
    throw ConfigError("L' = " + std::to_string(lprime) + " exceeds the number of training vectors " +
                      std::to_string(n));
  }
}

std::vector<double> column_mean(const Matrix& data) {
  std::vector<double> mean(data.cols(), 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    for (std::size_t c = 0; c < data.cols(); ++c) mean[c] += row[c];
  }
  for (auto& m : mean) m /= static_cast<double>(data.rows());
  return mean;
}

Matrix subtract_mean(const Matrix& data, const std::vector<double>& mean) {
  Matrix out = data;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < out.cols(); ++c) row[c] -= mean[c];
  }
  return out;
}

// Orthogonalizes `v` against the first `count` columns of `basis` (twice, for
// stability) and normalizes. Returns false when nothing is left.
bool orthonormalize_into(Matrix& basis, std::size_t count, std::vector<double> v) {
  const double original = norm(v);
  if (original == 0.0) return false;
  for (int round = 0; round < 2; ++round) {
    for (std::size_t j = 0; j < count; ++j) {
      double proj = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) proj += basis(i, j) * v[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * basis(i, j);
    }
  }
  const double remaining = norm(v);
  if (remaining <= 1e-8 * original) return false;
  for (std::size_t i = 0; i < v.size(); ++i) basis(i, count) = v[i] / remaining;
  return true;
}

// Scatter of the (already centered or raw) data applied to b: Xᵀ(X·b)/N.
std::vector<double> scatter_times(const Matrix& x, std::span<const double> b) {
  auto xb = x * b;
  auto out = transpose_times(x, xb);
  for (auto& v : out) v /= static_cast<double>(x.rows());
  return out;
}

// Assembles the model from descending (eigenvalue, direction) candidates:
// rank cut, orthonormal completion, sign convention, residual check.
ProjectionModel finish_model(ReductionMethod method, bool centered, std::vector<double> mean,
                             const Matrix& x, std::vector<double> values, const Matrix& directions,
                             std::size_t lprime) {
  const std::size_t l = x.cols();
  const double lambda_max = values.empty() ? 0.0 : std::max(values.front(), 0.0);
  std::size_t rank = 0;
  while (rank < values.size() && values[rank] > kRankTolerance * lambda_max) ++rank;

  ProjectionModel model;
  model.method = method;
  model.centered = centered;
  model.mean = std::move(mean);
  model.eigenvalues.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank));
  if (model.eigenvalues.size() < lprime) model.eigenvalues.resize(lprime, 0.0);
  model.basis = Matrix(l, lprime);

  std::size_t filled = 0;
  for (std::size_t j = 0; j < std::min(rank, lprime); ++j) {
    if (!orthonormalize_into(model.basis, filled, directions.column(j))) {
      throw NumericalError("direction " + std::to_string(j) + " is numerically dependent");
    }
    ++filled;
  }
  // Directions beyond the rank carry no variance; complete with unit vectors.
  for (std::size_t e = 0; filled < lprime && e < l; ++e) {
    std::vector<double> unit(l, 0.0);
    unit[e] = 1.0;
    if (orthonormalize_into(model.basis, filled, std::move(unit))) {
      model.eigenvalues[filled] = 0.0;
      ++filled;
    }
  }
  if (filled < lprime) throw NumericalError("could not complete an orthonormal basis");

  for (std::size_t j = 0; j < lprime; ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < l; ++i) {
      if (std::abs(model.basis(i, j)) > std::abs(model.basis(arg, j))) arg = i;
    }
    if (model.basis(arg, j) < 0.0) {
      for (std::size_t i = 0; i < l; ++i) model.basis(i, j) = -model.basis(i, j);
    }
  }

  const double tolerance = kResidualTolerance * std::max(lambda_max, 1e-300);
  for (std::size_t j = 0; j < lprime; ++j) {
    const auto b = model.basis.column(j);
    auto cb = scatter_times(x, b);
    for (std::size_t i = 0; i < l; ++i) cb[i] -= model.eigenvalues[j] * b[i];
    if (norm(cb) > tolerance) {
      throw NumericalError("eigenpair " + std::to_string(j) + " residual " + std::to_string(norm(cb)) +
                           " exceeds tolerance");
    }
  }
  return model;
}

}  // namespace

void ProjectionModel::validate() const {
  const std::size_t l = basis.rows();
  const std::size_t lp = basis.cols();
  if (l == 0 || lp == 0) throw InputError("projection basis is empty");
  if (lp > l) throw InputError("projection L' exceeds L");
  if (mean.size() != l) throw InputError("projection mean has length " + std::to_string(mean.size()));
  if (eigenvalues.size() < lp) throw InputError("projection spectrum shorter than L'");
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    if (!std::isfinite(eigenvalues[j]) || eigenvalues[j] < 0.0) {
      throw InputError("projection eigenvalue " + std::to_string(j) + " is negative or not finite");
    }
    if (j > 0 && eigenvalues[j] > eigenvalues[j - 1]) throw InputError("projection eigenvalues not descending");
  }
  for (std::size_t a = 0; a < lp; ++a) {
    for (std::size_t b = a; b < lp; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < l; ++i) s += basis(i, a) * basis(i, b);
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(s - expected) > kOrthonormalTolerance) {
        throw InputError("projection basis is not orthonormal");
      }
    }
  }
}

Matrix stack_rows(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) return {};
  const std::size_t l = vectors.front().size();
  Matrix m(vectors.size(), l);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].size() != l) throw InputError("feature vectors differ in length");
    std::copy(vectors[r].values.begin(), vectors[r].values.end(), m.row(r).begin());
  }
  return m;
}

ProjectionModel fit_pca(const Matrix& data, std::size_t lprime) {
  const std::size_t n = data.rows();
  const std::size_t l = data.cols();
  check_shape(n, l, lprime);
  auto mean = column_mean(data);
  const Matrix x = subtract_mean(data, mean);
  const double inv_n = 1.0 / static_cast<double>(n);

  if (n < l) {
    // Eigenvectors u of X·Xᵀ/N map to covariance eigenvectors Xᵀu/√(Nλ).
    Matrix g = gram_rows(x);
    for (auto& v : g.data()) v *= inv_n;
    auto eig = symmetric_eigen(g);
    const double lambda_max = std::max(eig.values.front(), 0.0);
    Matrix directions(l, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double lambda = eig.values[j];
      if (!(lambda > kRankTolerance * lambda_max)) break;
      const auto u = eig.vectors.column(j);
      const auto b = transpose_times(x, u);
      const double scale = 1.0 / std::sqrt(static_cast<double>(n) * lambda);
      for (std::size_t i = 0; i < l; ++i) directions(i, j) = b[i] * scale;
    }
    return finish_model(ReductionMethod::pca, true, std::move(mean), x, std::move(eig.values), directions,
                        lprime);
  }

  Matrix c = transpose_times(x, x);
  for (auto& v : c.data()) v *= inv_n;
  auto eig = symmetric_eigen(c);
  return finish_model(ReductionMethod::pca, true, std::move(mean), x, std::move(eig.values), eig.vectors,
                      lprime);
}

ProjectionModel fit_pca(std::span<const FeatureVector> vectors, std::size_t lprime) {
  return fit_pca(stack_rows(vectors), lprime);
}

namespace {

// One-sided (Hestenes) Jacobi: rotates the columns of `w` until they are
// mutually orthogonal, applying the same rotations to `v` when given.
void orthogonalize_columns(std::vector<std::vector<double>>& w, std::vector<std::vector<double>>* v) {
  const std::size_t n = w.size();
  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto& wp = w[p];
        auto& wq = w[q];
        const double alpha = dot(wp, wp);
        const double beta = dot(wq, wq);
        const double gamma = dot(wp, wq);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < wp.size(); ++i) {
          const double a = wp[i];
          const double b = wq[i];
          wp[i] = c * a - s * b;
          wq[i] = s * a + c * b;
        }
        if (v) {
          auto& vp = (*v)[p];
          auto& vq = (*v)[q];
          for (std::size_t i = 0; i < vp.size(); ++i) {
            const double a = vp[i];
            const double b = vq[i];
            vp[i] = c * a - s * b;
            vq[i] = s * a + c * b;
          }
        }
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("Jacobi SVD did not converge");
}

}  // namespace

ProjectionModel fit_svd(const Matrix& data, std::size_t lprime, bool center) {
  const std::size_t n = data.rows();
  const std::size_t l = data.cols();
  check_shape(n, l, lprime);
  std::vector<double> mean(l, 0.0);
  if (center) mean = column_mean(data);
  const Matrix x = center ? subtract_mean(data, mean) : data;

  std::vector<double> sigma;
  Matrix right;  // L×m candidate right singular vectors
  if (n <= l) {
    // Columns of Xᵀ are the data rows; after orthogonalization they are the
    // right singular vectors scaled by σ.
    std::vector<std::vector<double>> cols(n);
    for (std::size_t r = 0; r < n; ++r) cols[r].assign(x.row(r).begin(), x.row(r).end());
    orthogonalize_columns(cols, nullptr);
    sigma.resize(n);
    right = Matrix(l, n);
    for (std::size_t j = 0; j < n; ++j) {
      sigma[j] = norm(cols[j]);
      if (sigma[j] == 0.0) continue;
      for (std::size_t i = 0; i < l; ++i) right(i, j) = cols[j][i] / sigma[j];
    }
  } else {
    std::vector<std::vector<double>> cols(l, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < l; ++c) cols[c][r] = x(r, c);
    }
    std::vector<std::vector<double>> v(l, std::vector<double>(l, 0.0));
    for (std::size_t c = 0; c < l; ++c) v[c][c] = 1.0;
    orthogonalize_columns(cols, &v);
    sigma.resize(l);
    right = Matrix(l, l);
    for (std::size_t j = 0; j < l; ++j) {
      sigma[j] = norm(cols[j]);
      for (std::size_t i = 0; i < l; ++i) right(i, j) = v[j][i];
    }
  }

  std::vector<std::size_t> order(sigma.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });
  std::vector<double> values(order.size());
  Matrix directions(l, order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    values[j] = sigma[order[j]] * sigma[order[j]] / static_cast<double>(n);
    for (std::size_t i = 0; i < l; ++i) directions(i, j) = right(i, order[j]);
  }
  return finish_model(ReductionMethod::svd, center, std::move(mean), x, std::move(values), directions, lprime);
}

ProjectionModel fit_svd(std::span<const FeatureVector> vectors, std::size_t lprime, bool center) {
  return fit_svd(stack_rows(vectors), lprime, center);
}

std::vector<double> project(const ProjectionModel& model, std::span<const double> v) {
  if (v.size() != model.input_dim()) {
    throw InputError("vector of length " + std::to_string(v.size()) + " does not match projection input " +
                     std::to_string(model.input_dim()));
  }
  std::vector<double> centered(v.begin(), v.end());
  for (std::size_t i = 0; i < centered.size(); ++i) centered[i] -= model.mean[i];
  return transpose_times(model.basis, centered);
}

std::vector<double> reconstruct(const ProjectionModel& model, std::span<const double> reduced) {
  if (reduced.size() != model.output_dim()) {
    throw InputError("reduced vector of length " + std::to_string(reduced.size()) +
                     " does not match projection output " + std::to_string(model.output_dim()));
  }
  auto out = model.basis * reduced;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += model.mean[i];
  return out;
}

ProjectionModel truncate(const ProjectionModel& model, std::size_t lprime) {
  if (lprime < 1 || lprime > model.output_dim()) {
    throw ConfigError("cannot truncate projection of L' = " + std::to_string(model.output_dim()) + " to " +
                      std::to_string(lprime));
  }
  ProjectionModel out = model;
  out.basis = model.basis.left_columns(lprime);
  return out;
}

std::vector<std::pair<std::size_t, double>> reconstruction_error_curve(const ProjectionModel& model,
                                                                       std::span<const std::size_t> lprimes) {
  const double total = std::accumulate(model.eigenvalues.begin(), model.eigenvalues.end(), 0.0);
  if (!(total > 0.0)) throw InputError("degenerate data: total variance is zero");
  std::vector<std::pair<std::size_t, double>> curve;
  curve.reserve(lprimes.size());
  for (std::size_t lp : lprimes) {
    const std::size_t kept = std::min(lp, model.eigenvalues.size());
    const double retained = std::accumulate(model.eigenvalues.begin(),
                                            model.eigenvalues.begin() + static_cast<std::ptrdiff_t>(kept), 0.0);
    curve.emplace_back(lp, std::max(0.0, 100.0 * (1.0 - retained / total)));
  }
  return curve;
}

double empirical_reconstruction_error(const ProjectionModel& model, const Matrix& data, std::size_t lprime) {
  if (lprime > model.output_dim()) {
    throw ConfigError("L' = " + std::to_string(lprime) + " exceeds the fitted L' " +
                      std::to_string(model.output_dim()));
  }
  if (data.cols() != model.input_dim()) throw InputError("data width does not match projection input");
  double residual = 0.0;
  double total = 0.0;
  std::vector<double> centered(data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    for (std::size_t i = 0; i < centered.size(); ++i) centered[i] = row[i] - model.mean[i];
    const double sq = dot(centered, centered);
    total += sq;
    double kept = 0.0;
    for (std::size_t j = 0; j < lprime; ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i < centered.size(); ++i) c += model.basis(i, j) * centered[i];
      kept += c * c;
    }
    residual += sq - kept;
  }
  if (!(total > 0.0)) throw InputError("degenerate data: total variance is zero");
  return std::max(0.0, 100.0 * residual / total);
}

std::vector<std::pair<std::size_t, double>> reconstruction_error_curve(const ProjectionModel& model,
                                                                       std::span<const std::size_t> lprimes,
                                                                       const Matrix& data) {
  auto curve = reconstruction_error_curve(model, lprimes);
  for (const auto& [lp, spectral] : curve) {
    const double empirical = empirical_reconstruction_error(model, data, lp);
    const double a = spectral / 100.0;
    const double b = empirical / 100.0;
    if (std::abs(a - b) > kResidualTolerance * std::max(a, b) + 1e-12) {
      throw NumericalError("reconstruction error at L' = " + std::to_string(lp) + ": spectral " +
                           std::to_string(spectral) + "% vs empirical " + std::to_string(empirical) + "%");
    }
  }
  return curve;
}

}  // namespace textcat
