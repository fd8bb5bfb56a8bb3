#include <algorithm>

#include "doctest.h"
#include "quakebend/errors.hpp"
#include "quakebend/verify.hpp"

using namespace qb;

TEST_SUITE("verify") {
  TEST_CASE("the check catalogue is stable") {
    const std::vector<std::string>& names = verify_check_names();
    CHECK(names.size() == 12);
    for (const char* expected :
         {"homomorphism", "flow", "commutativity-same-curve", "commutativity-disjoint",
          "basepoint", "trace-invariance", "crossing-oracle", "reference-independence",
          "cocycle-identity", "cocycle-derivative", "side-separation", "weight-lipschitz"})
      CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }

  TEST_CASE("make_check records witnesses only on failure") {
    CheckResult ok = make_check("sample", 1e-10, 1e-8, "should not appear");
    CHECK(ok.pass);
    CHECK(!ok.witness.has_value());
    CheckResult bad = make_check("sample", 1e-6, 1e-8, "inputs go here");
    CHECK(!bad.pass);
    REQUIRE(bad.witness.has_value());
    CHECK(*bad.witness == "inputs go here");
  }

  TEST_CASE("block embedding preserves the group laws") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho2 = representation_from_reference(ref);
    for (int n : {3, 4}) {
      Representation rho = embed_representation(rho2, n);
      CHECK(rho.n == n);
      CHECK((rho.eval(ref.pres.relator()) - Mat::Identity(n + 1, n + 1)).norm() < 1e-9);
      for (const Mat& g : rho.gens) {
        CHECK(is_lorentz(g));
        // the embedded block is untouched; the complement is trivial
        CHECK(g(2, 2) == 1.0);
        CHECK(g.block(2, 0, 1, 2).norm() == 0.0);
      }
    }
  }

  TEST_CASE("bent fixtures are loxodromic and leave the plane") {
    ReferenceStructure ref = reference_structure(2);
    for (int n : {3, 4}) {
      Representation rho = bent_representation(ref, n, 0.3, 42);
      CHECK(rho.n == n);
      CHECK((rho.eval(ref.pres.relator()) - Mat::Identity(n + 1, n + 1)).norm() < 1e-8);
      double off_plane = 0.0;
      for (const Mat& g : rho.gens) {
        CHECK(classify(g) == ElementType::loxodromic);
        off_plane = std::max(off_plane, g.row(2).head(2).norm());
      }
      CHECK(off_plane > 1e-3);
    }
  }

  TEST_CASE("conjugated and twisted fixtures") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho = representation_from_reference(ref);
    std::mt19937_64 rng(7);
    Mat C = exp_lie(random_lie(2, rng, 0.3));
    Representation conj = conjugate_representation(rho, C);
    CHECK((conj.eval(ref.pres.relator()) - Mat::Identity(3, 3)).norm() < 1e-8);
    for (std::size_t i = 0; i < rho.gens.size(); ++i)
      CHECK(conj.gens[i].trace() == doctest::Approx(rho.gens[i].trace()).epsilon(1e-10));

    ReferenceStructure twisted = twisted_reference(ref, 0.25);
    CHECK((twisted.eval(ref.pres.relator()) - Mat3::Identity()).norm() < 1e-8);
    double moved = 0.0;
    for (std::size_t i = 0; i < ref.gens.size(); ++i)
      moved = std::max(moved, (twisted.gens[i] - ref.gens[i]).norm());
    CHECK(moved > 1e-3);

    Mat X = random_lie(3, rng, 0.5);
    CHECK(is_lie(X));
    CHECK(X.cwiseAbs().maxCoeff() <= 0.5);
  }

  TEST_CASE("individual checks pass on healthy inputs and fail on broken ones") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho = representation_from_reference(ref);
    CHECK(check_homomorphism(rho).pass);

    Representation broken = rho;
    broken.gens[0] *= 1.0 + 1e-3;  // clearly off the group and the relator
    CheckResult res = check_homomorphism(broken);
    CHECK(!res.pass);
    CHECK(res.witness.has_value());

    WeightedMulticurve mc;
    mc.components.push_back(
        {OrientedCurve{ref.pres.parse("a1"), 0.8}, CentralizerParameter{0.9, 0.0}});
    CHECK(check_flow(rho, mc, 0.4, 0.7, ref).pass);
    CHECK(check_basepoint(rho, mc, 1.0, Eigen::Vector2d(0.11, -0.07), ref).pass);
    CHECK(check_weight_lipschitz(rho, mc, 0.05, ref).pass);
    CHECK(check_side_separation(ref.pres.parse("b1 b1"), mc.components[0].curve, ref).pass);
  }

  TEST_CASE("a fast subset of the randomized suite") {
    VerifyOptions opts;
    opts.trials = 2;
    opts.seed = 5;
    opts.checks = {"homomorphism", "flow", "trace-invariance", "side-separation"};
    std::vector<CheckResult> results = verify_suite(opts);
    REQUIRE(results.size() == 4);
    for (const CheckResult& r : results) {
      CAPTURE(r.name);
      CHECK(r.pass);
    }
  }
}
