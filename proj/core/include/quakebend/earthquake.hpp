#pragma once

#include <vector>

#include "quakebend/deform.hpp"

namespace qb {

// Approximation of a measured lamination by a sequence of weighted
// multicurves: either given explicitly, or generated by repeatedly Dehn
// twisting a seed curve (weights 1/reference-length keep the total
// transverse mass bounded).
struct LaminationApproximation {
  enum class Kind { explicit_list, dehn_twist_recipe };
  Kind kind = Kind::explicit_list;

  std::vector<WeightedMulticurve> steps;  // explicit_list

  Word seed_curve;     // dehn_twist_recipe
  Word twist_curve;    // must be a generator curve a_i / b_i
  int count = 0;
};

// Image of w under the power-fold Dehn twist along the generator curve d:
// the twist along a_i sends b_i to b_i a_i^power, the twist along b_i sends
// a_i to a_i b_i^power; every other generator is fixed.  Preserves the
// relator exactly.
Word dehn_twist_word(const Word& w, const OrientedCurve& d, int power,
                     const ReferenceStructure& ref);

// Expands the approximation into validated multicurves.  Recipe step k is
// the singleton (T_d^k(seed), weight 1/length_ref, translation 1).
std::vector<WeightedMulticurve> build_sequence(const LaminationApproximation& la,
                                               const ReferenceStructure& ref);

struct StepDistance {
  int step = 0;          // compares E_step against E_{step+1}
  double distance = 0.0; // max over generators of group_distance
  bool log_branch = true;
};

enum class Verdict { converged, budget_exhausted, diverging };

struct ConvergenceReport {
  std::vector<StepDistance> distances;
  std::vector<double> relator_residuals;  // one per sequence step
  Verdict verdict = Verdict::budget_exhausted;
  Representation final;
  std::vector<WeightedMulticurve> sequence;  // the expanded steps
};

// Runs E_{l_k}(rho) for every step of the approximation -- each from the
// original rho, never composed -- and certifies the Cauchy tail empirically:
// converged needs the last distance below tol and a non-increasing final
// three steps; growth by 10x across three consecutive steps is diverging.
ConvergenceReport earthquake_limit(const Representation& rho, const LaminationApproximation& la,
                                   double tol, const ReferenceStructure& ref,
                                   const DeformOptions& opts = {});

}  // namespace qb
