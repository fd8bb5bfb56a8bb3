#pragma once

#include <Eigen/Dense>
#include <utility>

namespace qb {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Shared tolerances.  form: Gram identity residual; spec: spectral-radius
// margin for classification; sep: boundary-point separation / degeneracy
// margin; hom: relator and property-check residuals.
namespace tol {
inline constexpr double form = 1e-9;
inline constexpr double spec = 1e-7;
inline constexpr double sep = 1e-8;
inline constexpr double hom = 1e-8;
}  // namespace tol

// Everything below works in the hyperboloid model: the bilinear form is
// eta = diag(1,...,1,-1) on R^{n,1}, n+1 coordinates, 2 <= n <= 4 supported.
// H^n is the upper sheet <x,x> = -1, x_{n+1} > 0; its boundary consists of
// future null rays, normalized here to last coordinate 1.

Mat eta_matrix(int n);
double minkowski_dot(const Vec& u, const Vec& v);

// M^T eta M = eta, det +1, future-preserving — all within tolerance.
bool is_lorentz(const Mat& M, double tolerance = tol::form);
// X^T eta + eta X = 0 within tolerance.
bool is_lie(const Mat& X, double tolerance = tol::form);
// eta M^T eta; exact inverse for exact Lorentz matrices.
Mat lorentz_inverse(const Mat& M);
// eta-Gram-Schmidt on columns; returns the nearest-in-practice exact Lorentz
// matrix.  Rejects inputs too degenerate to fix (wrong signature, det < 0).
Mat eta_orthonormalize(const Mat& M);

// Point of the ideal boundary S^{n-1}: null vector, last coordinate 1.
struct BoundaryPoint {
  Vec v;
  int n() const { return static_cast<int>(v.size()) - 1; }
  // spatial part, a unit vector of S^{n-1}
  Vec sphere() const { return v.head(v.size() - 1); }
};
// Normalizes a (near-)null vector to a BoundaryPoint; rejects vectors that
// are not null within tolerance after normalization.
BoundaryPoint boundary_point(const Vec& raw, double tolerance = 1e-6);

enum class ElementType { loxodromic, elliptic, parabolic_or_boundary };
ElementType classify(const Mat& M, double spec_tolerance = tol::spec);
// log of the spectral radius; 0 for non-loxodromic elements.
double translation_length(const Mat& M);
// (repelling, attracting) ideal fixed points; requires loxodromic input.
std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const Mat& M);

// Lie algebra element v(x,y) with exp(t v) = H(x,y,t); acts as -1 on the ray
// of x, +1 on the ray of y, 0 on the eta-complement.
Mat lie_generator(const BoundaryPoint& x, const BoundaryPoint& y);
// The rotation-free translation along the geodesic (x -> y), repelling x,
// attracting y, translation length t.  Closed form, no Pade.
Mat hyperbolic_translation(const BoundaryPoint& x, const BoundaryPoint& y, double t);
// M = sigma * theta with sigma = H(p,q,l) along M's own axis and theta
// elliptic fixing the axis pointwise; the factors commute.
std::pair<Mat, Mat> loxodromic_factorization(const Mat& M);

// Matrix exponential of an so(n,1) element (validated), and principal matrix
// log of a Lorentz matrix.  log_group rejects spectra touching the negative
// real axis (outside the principal branch).
Mat exp_lie(const Mat& X);
Mat log_group(const Mat& M);

// Bi-invariant-flavored distance surrogate: ||log(M1^{-1} M2)||_F when the
// principal log exists; otherwise plain Frobenius distance with the fallback
// flagged.
struct GroupDistance {
  double value = 0.0;
  bool log_branch = true;
};
GroupDistance group_distance(const Mat& M1, const Mat& M2);

}  // namespace qb
