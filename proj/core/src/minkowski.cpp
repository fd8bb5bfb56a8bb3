#include "quakebend/minkowski.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>

#include "quakebend/errors.hpp"

namespace qb {

namespace {

void require_square(const Mat& M, const char* who) {
  if (M.rows() != M.cols() || M.rows() < 3 || M.rows() > 5)
    fail_config(std::string(who) + ": expected square matrix of size 3..5");
}

Eigen::VectorXcd eigenvalues_of(const Mat& M) {
  Eigen::EigenSolver<Mat> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues();
}

}  // namespace

Mat eta_matrix(int n) {
  Mat e = Mat::Identity(n + 1, n + 1);
  e(n, n) = -1.0;
  return e;
}

double minkowski_dot(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) fail_config("minkowski_dot: dimension mismatch");
  Eigen::Index last = u.size() - 1;
  return u.head(last).dot(v.head(last)) - u(last) * v(last);
}

bool is_lorentz(const Mat& M, double tolerance) {
  if (M.rows() != M.cols()) return false;
  int n = static_cast<int>(M.rows()) - 1;
  Mat eta = eta_matrix(n);
  if ((M.transpose() * eta * M - eta).norm() > tolerance * std::max(1.0, M.squaredNorm()))
    return false;
  // the determinant of an (n+1)x(n+1) product carries rounding error of
  // order eps * |M|^(n+1); beyond that scale the sign is unknowable anyway
  double det_tol = 1e-6 * std::max(1.0, std::pow(M.norm(), static_cast<double>(M.rows())));
  if (std::abs(M.determinant() - 1.0) > det_tol) return false;
  return M(n, n) >= 1.0 - 1e-9;  // future-preserving
}

bool is_lie(const Mat& X, double tolerance) {
  if (X.rows() != X.cols()) return false;
  int n = static_cast<int>(X.rows()) - 1;
  Mat eta = eta_matrix(n);
  return (X.transpose() * eta + eta * X).norm() <= tolerance * std::max(1.0, X.norm());
}

Mat lorentz_inverse(const Mat& M) {
  require_square(M, "lorentz_inverse");
  int n = static_cast<int>(M.rows()) - 1;
  Mat eta = eta_matrix(n);
  return eta * M.transpose() * eta;
}

Mat eta_orthonormalize(const Mat& M) {
  require_square(M, "eta_orthonormalize");
  int n = static_cast<int>(M.rows()) - 1;
  Mat out = M;
  for (int j = 0; j <= n; ++j) {
    Vec v = out.col(j);
    for (int i = 0; i < j; ++i) {
      double sign = (i == n) ? -1.0 : 1.0;  // <c_i, c_i> after normalization
      v -= sign * minkowski_dot(out.col(j), out.col(i)) * out.col(i);
    }
    double q = minkowski_dot(v, v);
    if (j < n) {
      if (q <= 0) fail_degenerate("eta_orthonormalize: spacelike column degenerated");
      out.col(j) = v / std::sqrt(q);
    } else {
      if (q >= 0) fail_degenerate("eta_orthonormalize: timelike column degenerated");
      v /= std::sqrt(-q);
      if (v(n) < 0) fail_degenerate("eta_orthonormalize: past-pointing timelike column");
      out.col(j) = v;
    }
  }
  if (out.determinant() < 0) fail_degenerate("eta_orthonormalize: orientation flipped");
  return out;
}

BoundaryPoint boundary_point(const Vec& raw, double tolerance) {
  Eigen::Index last = raw.size() - 1;
  if (std::abs(raw(last)) < 1e-300) fail_degenerate("boundary_point: zero time coordinate");
  Vec v = raw / raw(last);
  double err = std::abs(minkowski_dot(v, v));
  if (err > tolerance) fail_degenerate("boundary_point: vector is not null");
  // snap the spatial part onto the unit sphere
  double s = v.head(last).norm();
  v.head(last) /= s;
  return BoundaryPoint{v};
}

ElementType classify(const Mat& M, double spec_tolerance) {
  require_square(M, "classify");
  if (!is_lorentz(M, 1e-6)) fail_config("classify: input is not in SO+(n,1)");
  int n = static_cast<int>(M.rows()) - 1;
  Eigen::VectorXcd ev = eigenvalues_of(M);
  double sr = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) sr = std::max(sr, std::abs(ev(i)));
  if (sr > 1.0 + spec_tolerance) return ElementType::loxodromic;

  // All eigenvalue moduli are ~1: elliptic iff some fixed vector is timelike.
  Eigen::JacobiSVD<Mat> svd(M - Mat::Identity(n + 1, n + 1), Eigen::ComputeFullV);
  double scale = std::max(1.0, M.norm());
  std::vector<int> kernel;
  for (int i = 0; i <= n; ++i)
    if (svd.singularValues()(i) <= spec_tolerance * scale) kernel.push_back(i);
  if (kernel.empty()) return ElementType::parabolic_or_boundary;
  Mat K(n + 1, static_cast<int>(kernel.size()));
  for (std::size_t c = 0; c < kernel.size(); ++c) K.col(c) = svd.matrixV().col(kernel[c]);
  Mat gram = K.transpose() * eta_matrix(n) * K;
  Eigen::SelfAdjointEigenSolver<Mat> ges(gram);
  if (ges.eigenvalues().minCoeff() < -spec_tolerance) return ElementType::elliptic;
  return ElementType::parabolic_or_boundary;
}

double translation_length(const Mat& M) {
  require_square(M, "translation_length");
  Eigen::VectorXcd ev = eigenvalues_of(M);
  double sr = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) sr = std::max(sr, std::abs(ev(i)));
  return sr > 1.0 ? std::log(sr) : 0.0;
}

namespace {

// Dominant eigenvector, with the arbitrary complex phase stripped.  For a
// loxodromic element the top eigenvalue is real and simple, and the dominant
// eigenvector is the only one the solver computes stably when the matrix has
// a large norm: its perturbation is ~ eps * |M| / lambda_max, i.e. relative
// machine precision, while eigenvectors of the small eigenvalues are lost in
// the solver's backward error.
Vec dominant_eigenvector(const Mat& M) {
  Eigen::EigenSolver<Mat> es(M);
  Eigen::Index imax = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(imax))) imax = i;
  Eigen::VectorXcd col = es.eigenvectors().col(imax);
  Eigen::Index big = 0;
  for (Eigen::Index i = 0; i < col.size(); ++i)
    if (std::abs(col(i)) > std::abs(col(big))) big = i;
  Eigen::VectorXcd aligned = col * (std::conj(col(big)) / std::abs(col(big)));
  if (aligned.imag().norm() > 1e-6 * aligned.real().norm())
    fail_degenerate("fixed_points: extreme eigenvector is not real");
  return Vec(aligned.real());
}

}  // namespace

std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const Mat& M) {
  require_square(M, "fixed_points");
  if (classify(M) != ElementType::loxodromic)
    fail_degenerate("fixed_points: element is not loxodromic");
  // The repelling point is the attracting point of the inverse.  Using the
  // exact form of the inverse keeps both computations on the dominant branch.
  BoundaryPoint attracting = boundary_point(dominant_eigenvector(M));
  BoundaryPoint repelling = boundary_point(dominant_eigenvector(lorentz_inverse(M)));
  return {repelling, attracting};
}

Mat lie_generator(const BoundaryPoint& x, const BoundaryPoint& y) {
  int n = x.n();
  if (y.n() != n) fail_config("lie_generator: dimension mismatch");
  double b = minkowski_dot(x.v, y.v);  // = cos(angle) - 1, in [-2, 0)
  if (std::abs(b) < tol::sep) fail_degenerate("lie_generator: endpoints coincide");
  Mat eta = eta_matrix(n);
  return (y.v * x.v.transpose() - x.v * y.v.transpose()) * eta / b;
}

Mat hyperbolic_translation(const BoundaryPoint& x, const BoundaryPoint& y, double t) {
  Mat V = lie_generator(x, y);
  int n = x.n();
  // V has eigenvalues -1, +1, 0^{n-1}, so exp(tV) closes up in V^2.
  return Mat::Identity(n + 1, n + 1) + std::sinh(t) * V + (std::cosh(t) - 1.0) * (V * V);
}

std::pair<Mat, Mat> loxodromic_factorization(const Mat& M) {
  auto [p, q] = fixed_points(M);
  double l = translation_length(M);
  Mat sigma = hyperbolic_translation(p, q, l);
  Mat theta = lorentz_inverse(sigma) * M;
  double scale = std::max(1.0, M.norm());
  if ((sigma * theta - theta * sigma).norm() > 1e-7 * scale)
    fail_degenerate("loxodromic_factorization: factors do not commute");
  return {sigma, theta};
}

Mat exp_lie(const Mat& X) {
  require_square(X, "exp_lie");
  if (!is_lie(X, 1e-7)) fail_config("exp_lie: input is not in so(n,1)");
  Mat out = X.exp();
  if (!is_lorentz(out, 1e-7)) fail_degenerate("exp_lie: result drifted off the group");
  return out;
}

Mat log_group(const Mat& M) {
  require_square(M, "log_group");
  if (!is_lorentz(M, 1e-6)) fail_config("log_group: input is not in SO+(n,1)");
  Eigen::VectorXcd ev = eigenvalues_of(M);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i).real() <= 0.0 && std::abs(ev(i).imag()) < 1e-12)
      fail_degenerate("log_group: spectrum touches the negative real axis");
  }
  return M.log();
}

GroupDistance group_distance(const Mat& M1, const Mat& M2) {
  if (M1.rows() != M2.rows() || M1.cols() != M2.cols())
    fail_config("group_distance: dimension mismatch");
  Mat D = lorentz_inverse(M1) * M2;
  Eigen::VectorXcd ev = eigenvalues_of(D);
  bool principal = true;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i).real() <= 0.0 && std::abs(ev(i).imag()) < 1e-12) principal = false;
  if (principal) return {Mat(D.log()).norm(), true};
  return {(M1 - M2).norm(), false};
}

}  // namespace qb
