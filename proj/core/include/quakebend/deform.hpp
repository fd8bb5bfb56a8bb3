#pragma once

#include <vector>

#include "quakebend/covering.hpp"
#include "quakebend/minkowski.hpp"
#include "quakebend/word.hpp"

namespace qb {

// A representation of the surface group into SO+(n,1), stored by generator
// images.  Constructed through make_representation, which enforces the
// Lorentz and relator invariants.
struct Representation {
  SurfacePresentation pres;
  int n = 2;  // hyperbolic dimension, matrices are (n+1)x(n+1)
  std::vector<Mat> gens;

  Mat eval(const Word& w) const;
};

Representation make_representation(int genus, int n, std::vector<Mat> generators);
Representation representation_from_reference(const ReferenceStructure& ref);

// Direction of deformation inside the centralizer of a loxodromic element:
// a boost along the axis plus (n >= 3) a rotation fixing the axis.
struct CentralizerParameter {
  double translation = 0.0;
  double angle = 0.0;                      // must be 0 when n == 2
  Eigen::Vector3d plane{0.0, 0.0, 1.0};    // n == 4: rotation-plane selector
};

struct WeightedComponent {
  OrientedCurve curve;
  CentralizerParameter param;
};

struct WeightedMulticurve {
  std::vector<WeightedComponent> components;
};

// True when the two cores describe the same closed geodesic of the reference
// surface (in either direction), i.e. are conjugate up to inversion.
bool curves_conjugate(const OrientedCurve& c1, const OrientedCurve& c2,
                      const ReferenceStructure& ref);

// Simplicity and pairwise disjointness/non-conjugacy of the components.
void validate_multicurve(const WeightedMulticurve& mc, const ReferenceStructure& ref);

// Infinitesimal direction X_c = translation*weight*v(p0,q0) + angle*K, built
// from the fixed points of rho(core); K is the axis-fixing rotation
// generator, odd under reversal of the curve's direction.
Mat centralizer_generator(const Representation& rho, const OrientedCurve& curve,
                          const CentralizerParameter& p);

// gamma^t(l0) = exp(t * X_c); commutes with rho(core) (checked).
Mat gamma_base(const Representation& rho, const OrientedCurve& curve,
               const CentralizerParameter& p, double t);

struct DeformOptions {
  bool validate = true;  // run validate_multicurve first
  CoveringOptions covering;
};

struct GeneratorDeformDiagnostics {
  int generator = 0;  // generator index in the presentation
  std::size_t crossing_count = 0;
  std::vector<CrossingSequence> per_component;
};

struct DeformResult {
  Representation rep;          // re-orthogonalized images
  std::vector<Mat> raw;        // raw products, for drift diagnostics
  std::vector<GeneratorDeformDiagnostics> diagnostics;
  double relator_residual = 0.0;
};

// The deformation operator: E(rho)(A) = rho(A) * gamma_k^{s_k} ... gamma_1^{s_1}
// over the crossings of the segment of A with lifts of the multicurve, first
// crossing rightmost, gamma_i = rho(A_i)^{-1} gamma_base rho(A_i).
DeformResult deform(const Representation& rho, const WeightedMulticurve& mc, double t,
                    const ReferenceStructure& ref, const DeformOptions& opts = {});

// E(rho)(A) for a single (arbitrary) word, raw product.
Mat deform_word(const Representation& rho, const WeightedMulticurve& mc, double t,
                const ReferenceStructure& ref, const Word& A, const DeformOptions& opts = {});

// Ordered product of conjugated gammas over the crossings of the segment
// [P, Q], first crossing rightmost; E(rho)(A) = rho(A) * transport(x, x.A).
Mat crossing_transport(const Representation& rho, const WeightedMulticurve& mc, double t,
                       const ReferenceStructure& ref, const Vec3& P, const Vec3& Q,
                       const DeformOptions& opts = {});

// u(A) = sum_i s_i Ad(rho(A_i)^{-1}) X_c  (derivative of t -> E_t(rho)(A) at
// t = 0, pulled back by rho(A)).
Mat infinitesimal_cocycle(const Representation& rho, const WeightedMulticurve& mc, const Word& A,
                          const ReferenceStructure& ref, const DeformOptions& opts = {});

}  // namespace qb
