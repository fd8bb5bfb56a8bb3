#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "quakebend/minkowski.hpp"
#include "quakebend/word.hpp"

namespace qb {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// A free homotopy class of directed simple closed curves, named by a
// cyclically reduced word, with a transverse measure weight.
struct OrientedCurve {
  Word core;
  double weight = 1.0;
};

// Discrete faithful SO+(2,1) model of the surface group, used as the fixed
// topological bookkeeper for crossing sequences.  Default construction is
// the regular 4g-gon group; explicit matrices are accepted after validation.
struct ReferenceStructure {
  SurfacePresentation pres;
  std::vector<Mat3> gens;
  Vec3 basepoint;          // hyperboloid point, default (0,0,1)
  double systole_estimate = 0.0;
  double collar = 0.0;     // arcsinh(1/sinh(systole/2))

  Mat3 eval(const Word& w) const;
  ReferenceStructure with_basepoint(const Vec3& x) const;
};

ReferenceStructure reference_structure(int genus);
ReferenceStructure reference_structure(int genus, const std::vector<Mat3>& generators,
                                       const Vec3& basepoint);

// Deterministic ladder of small basepoint offsets (tangent coordinates at the
// current basepoint) used to retry after a degeneracy rejection.
std::vector<Eigen::Vector2d> basepoint_offsets();
Vec3 offset_basepoint(const Vec3& base, const Eigen::Vector2d& offset);

// Directed geodesic (lift), stored by ideal endpoints and the oriented pole
// m = eta * (rep x att), normalized to <m,m> = 1.  A point Z lies on the
// geodesic iff <Z,m> = 0; sign of <Z,m> tells the side.
struct DirectedAxis {
  Vec3 rep;   // repelling endpoint, last coordinate 1
  Vec3 att;   // attracting endpoint
  Vec3 pole;
};
DirectedAxis directed_axis(const Mat3& M);

// One transverse intersection of the lookup segment with a lift of the
// curve.  The lift is base_lift . conjugator (deck right action); sign is
// sgn<segment start, pole> (equivalently the det convention); position in
// (0,1) along the segment orders the sequence.
struct Crossing {
  Word conjugator;
  int sign = 0;
  double position = 0.0;
};

struct EnumerationCertificate {
  std::size_t enumerated = 0;  // cosets created
  std::size_t expanded = 0;    // cosets whose neighbors were generated
  double margin = 0.0;
  // over enumerated non-crossing cosets; must stay positive
  double min_rejected_distance = std::numeric_limits<double>::infinity();
  // over pruned frontier cosets; must exceed margin
  double min_frontier_distance = std::numeric_limits<double>::infinity();
};

struct CrossingSequence {
  std::vector<Crossing> crossings;  // sorted by position
  EnumerationCertificate certificate;
};

struct CoveringOptions {
  double margin_override = 0.0;     // <= 0: segment half-length + collar + 2
  double tau_sep = tol::sep;        // degeneracy margin
  std::size_t max_cosets = 4'000'000;
};

// Lifts of c crossed by the directed segment from the basepoint to
// basepoint . A = rho0(A)^{-1} basepoint, in crossing order.  BFS over the
// cosets <core>\pi_1 keyed by lift geometry, pruned by axis distance.
CrossingSequence crossing_sequence(const Word& A, const OrientedCurve& c,
                                   const ReferenceStructure& ref, const CoveringOptions& opts = {});
// Same, for an arbitrary geodesic segment [P, Q].
CrossingSequence crossing_segment(const Vec3& P, const Vec3& Q, const OrientedCurve& c,
                                  const ReferenceStructure& ref, const CoveringOptions& opts = {});

// Geometric intersection number of the geodesic representatives: lifts of c2
// crossing one fundamental period of the axis of c1.
int intersection_number(const OrientedCurve& c1, const OrientedCurve& c2,
                        const ReferenceStructure& ref);

// Brute-force oracle: enumerate every conjugator word up to the given radius
// (no pruning, no BFS sharing), dedup lifts geometrically.  Independent code
// path kept for cross-checking crossing_sequence.
std::vector<Crossing> oracle_crossings(const Word& A, const OrientedCurve& c,
                                       const ReferenceStructure& ref, int radius,
                                       double tau_sep = tol::sep);

// Deduplicated survey of all radius-bounded lifts whose axis passes within
// keep_distance of the basepoint; reusable across many segment queries.
struct OracleLift {
  Vec3 pole;
  Word conjugator;
  double basepoint_distance = 0.0;
};
std::vector<OracleLift> oracle_lifts(const OrientedCurve& c, const ReferenceStructure& ref,
                                     int radius, double keep_distance);
std::vector<Crossing> crossings_from_lifts(const std::vector<OracleLift>& lifts, const Vec3& P,
                                           const Vec3& Q, double tau_sep = tol::sep);

// u1 and u2 name the same coset of <core> in the surface group (checked via
// the reference holonomy, tolerating core-power prefixes).
bool coset_equivalent(const Word& u1, const Word& u2, const Word& core,
                      const ReferenceStructure& ref);

// Ideal endpoints of the full geodesic through P and Q, as (behind P, beyond
// Q); used by the side-separation diagnostic.
std::pair<Vec3, Vec3> segment_ideal_endpoints(const Vec3& P, const Vec3& Q);

}  // namespace qb
