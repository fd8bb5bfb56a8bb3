#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "quakebend/deform.hpp"
#include "quakebend/earthquake.hpp"

namespace qb {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;  // always residual < threshold
  std::optional<std::string> witness;  // inputs serialized on failure
};

CheckResult make_check(std::string name, double residual, double threshold,
                       std::string witness_on_fail = {});

// ---- fixtures -------------------------------------------------------------

// Block embedding SO(2,1) -> SO(n,1) acting on the (x1, x2, t) coordinates.
Representation embed_representation(const Representation& rho2, int n);
// Random element of so(n,1), entries of magnitude <= scale.
Mat random_lie(int n, std::mt19937_64& rng, double scale);
Representation conjugate_representation(const Representation& rho, const Mat& C);
// Fuchsian reference embedded into SO(n,1), bent along a1 by bend_angle
// (n >= 3), then conjugated by a random isometry: purely loxodromic and
// genuinely n-dimensional.
Representation bent_representation(const ReferenceStructure& ref, int n, double bend_angle,
                                   std::uint64_t seed);
// A second reference structure with the same marking: the reference twisted
// along a1 by the given amount (stays Fuchsian).
ReferenceStructure twisted_reference(const ReferenceStructure& ref, double twist);

// ---- individual checks ----------------------------------------------------

CheckResult check_homomorphism(const Representation& rep);

// E^s(E^t) versus E^{s+t} on the same multicurve, re-based on the deformed
// representation for the second application.
CheckResult check_flow(const Representation& rho, const WeightedMulticurve& mc, double s, double t,
                       const ReferenceStructure& ref);

// Two parameter sets on the same curves, applied in both orders; requires
// the base gammas to commute pairwise (checked; config error otherwise).
CheckResult check_commutativity(const Representation& rho, const std::vector<OrientedCurve>& curves,
                                const std::vector<CentralizerParameter>& paramsA,
                                const std::vector<CentralizerParameter>& paramsB, double t,
                                const ReferenceStructure& ref);

// Deformation with an offset basepoint equals conjugation by the explicit
// crossing product along the basepoint displacement segment.
CheckResult check_basepoint(const Representation& rho, const WeightedMulticurve& mc, double t,
                            const Eigen::Vector2d& offset, const ReferenceStructure& ref);

// BFS crossing enumeration versus the brute-force conjugator oracle;
// residual counts mismatches (coset, sign, or order).
CheckResult check_crossing_oracle(const std::vector<Word>& words,
                                  const std::vector<OrientedCurve>& curves,
                                  const ReferenceStructure& ref, int radius,
                                  const CoveringOptions& opts = {});

// Same crossing data (cosets compared as cosets, signs, order) from two
// references with the same marking.
CheckResult check_reference_independence(const std::vector<Word>& words,
                                         const std::vector<OrientedCurve>& curves,
                                         const ReferenceStructure& ref1,
                                         const ReferenceStructure& ref2);

// Cocycle identity u(AB) = Ad(rho(B)^{-1}) u(A) + u(B), and the
// finite-difference first-order test of u against t -> E_t at h and h/2.
std::vector<CheckResult> check_cocycle(const Representation& rho, const WeightedMulticurve& mc,
                                       const Word& A, const Word& B, double h,
                                       const ReferenceStructure& ref);

// Signed repelling endpoints of the crossed lifts fall on one side of the
// full geodesic through the segment, attracting endpoints on the other.
CheckResult check_side_separation(const Word& A, const OrientedCurve& c,
                                  const ReferenceStructure& ref);

// Distance between deformations at weights w and w+delta scales linearly
// under delta-halving (ratio within a factor of 2 of exact halving).
CheckResult check_weight_lipschitz(const Representation& rho, const WeightedMulticurve& mc,
                                   double delta, const ReferenceStructure& ref);

// ---- suite ----------------------------------------------------------------

struct VerifyOptions {
  int genus = 2;
  int dimension = 3;  // fixture dimension for the randomized checks
  std::uint64_t seed = 1;
  int trials = 20;                  // randomized-trial count per check
  std::vector<std::string> checks;  // names to run; empty = all
};

// Every check name verify_suite can emit, in suite order.
const std::vector<std::string>& verify_check_names();

std::vector<CheckResult> verify_suite(const VerifyOptions& opts);

}  // namespace qb
