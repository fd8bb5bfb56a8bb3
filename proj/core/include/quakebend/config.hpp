#pragma once

#include <string>
#include <vector>

#include "quakebend/deform.hpp"
#include "quakebend/earthquake.hpp"

namespace qb {

// Parsed run configuration (TOML).  Schema:
//
//   genus = 2                  # >= 2
//   dimension = 3              # 2, 3 or 4
//   seed = 1
//
//   [representation]
//   source = "reference"       # "reference" | "explicit" | "bent"
//   bend_angle = 0.2           # bent: bend magnitude along bend_curve
//   bend_curve = "a1"
//   conjugate = true           # bent: scramble by a random conjugation
//   matrices = [[...], ...]    # explicit: 2*genus row-major (n+1)^2 blocks
//
//   [[multicurve]]             # one block per component
//   word = "a1"
//   weight = 1.0               # > 0
//   translation = 0.5
//   angle = 0.0                # requires dimension >= 3
//   plane = [0, 0, 1]          # dimension 4: rotation-plane selector
//
//   [deform]
//   t = 1.0
//
//   [earthquake]
//   kind = "recipe"            # "recipe" | "explicit"
//   seed_curve = "a1"          # recipe
//   twist_curve = "b1"         # recipe: generator whose Dehn twist iterates
//   count = 8                  # recipe: number of steps (<= max_steps)
//   tol = 1e-6
//   [[earthquake.step]]        # explicit: each step is a multicurve
//   [[earthquake.step.component]]
//   word = "..." ...           # same keys as [[multicurve]]
//
//   [crossings]
//   word = "b1"
//   curve = "a1"
//   weight = 1.0
//   oracle_radius = 0          # > 0: cross-check against ball enumeration
//
//   [limitset]
//   depth = 6
//
//   [verify]
//   checks = ["homomorphism"]  # empty/omitted = full suite
//   trials = 20
//   dimension = 3
//
//   [covering]
//   margin = 0.0               # > 0 overrides the automatic search margin
//   max_cosets = 4000000

struct MulticurveSpec {
  std::string word;
  double weight = 1.0;
  double translation = 0.0;
  double angle = 0.0;
  std::vector<double> plane;  // empty = default selector
};

struct RepresentationSpec {
  enum class Source { reference, explicit_matrices, bent };
  Source source = Source::reference;
  double bend_angle = 0.2;
  std::string bend_curve = "a1";
  bool conjugate = true;
  std::vector<std::vector<double>> matrices;
};

struct EarthquakeConfig {
  LaminationApproximation::Kind kind = LaminationApproximation::Kind::dehn_twist_recipe;
  std::string seed_curve = "a1";
  std::string twist_curve = "b1";
  int count = 8;
  double tol = 1e-6;
  std::vector<std::vector<MulticurveSpec>> steps;  // explicit list
};

struct CrossingsConfig {
  std::string word = "b1";
  std::string curve = "a1";
  double weight = 1.0;
  int oracle_radius = 0;
};

struct LimitsetConfig {
  int depth = 6;
};

struct VerifyConfig {
  std::vector<std::string> checks;
  int trials = 20;
  int dimension = 3;
};

struct RunConfig {
  int genus = 2;
  int dimension = 2;
  std::uint64_t seed = 1;
  RepresentationSpec representation;
  std::vector<MulticurveSpec> multicurve;
  double t = 1.0;
  EarthquakeConfig earthquake;
  CrossingsConfig crossings;
  LimitsetConfig limitset;
  VerifyConfig verify;
  CoveringOptions covering;
  std::string source_text;  // verbatim input, hashed into every artifact
};

// Parses and validates; rejects unknown keys and semantic errors (weight <= 0,
// rotation angle in dimension 2, malformed words) with key/line diagnostics.
RunConfig parse_config(const std::string& text);

// Materialization of the representation / multicurve / lamination described
// by the configuration against a concrete reference structure.
Representation build_representation(const RunConfig& cfg, const ReferenceStructure& ref);
WeightedMulticurve build_multicurve(const std::vector<MulticurveSpec>& specs,
                                    const ReferenceStructure& ref, int n);
LaminationApproximation build_lamination(const RunConfig& cfg, const ReferenceStructure& ref);

}  // namespace qb
