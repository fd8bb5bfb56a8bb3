#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quakebend/deform.hpp"

namespace qb {

// Fixed points on the boundary sphere S^{n-1} of loxodromic images of short
// words: a finite sample of the limit set.
struct LimitSetCloud {
  int n = 2;
  std::vector<Eigen::VectorXd> points;  // unit-sphere coordinates, R^n
  std::size_t words_examined = 0;
};

// Both fixed points of rho(w) for every nonempty reduced word |w| <= depth
// whose image is loxodromic, deduplicated at angular tolerance 1e-7, in
// discovery order (depth-first over reduced words).  Fails when the reduced
// ball exceeds the word budget (4 million).
LimitSetCloud limitset_cloud(const Representation& rho, int depth);

// Best-fit circle in R^n: plane through the centroid spanned by the top two
// principal directions, algebraic least-squares circle within it.  Deviation
// of a point is its Euclidean distance to the fitted circle.
struct CircleFit {
  bool valid = false;  // needs >= 8 points
  Eigen::VectorXd center;
  double radius = 0.0;
  double max_deviation = 0.0;
};
CircleFit fit_circle(const LimitSetCloud& cloud);

// CSV with header x1,...,xn (one leading comment line carrying the config
// hash); shortest round-trip decimal formatting.
std::string limitset_csv(const LimitSetCloud& cloud, std::uint64_t config_hash);

// n = 2: points on the unit-disk boundary.  n = 3: stereographic projection
// from the north pole (points too close to the pole are dropped).
std::string limitset_svg(const LimitSetCloud& cloud, std::uint64_t config_hash);

}  // namespace qb
