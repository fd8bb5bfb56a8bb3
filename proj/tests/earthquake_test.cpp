#include <cmath>

#include "doctest.h"
#include "quakebend/earthquake.hpp"
#include "quakebend/errors.hpp"

using namespace qb;

namespace {

WeightedMulticurve twist_a1(const ReferenceStructure& ref, double weight) {
  WeightedMulticurve mc;
  mc.components.push_back(
      {OrientedCurve{ref.pres.parse("a1"), weight}, CentralizerParameter{1.0, 0.0}});
  return mc;
}

}  // namespace

TEST_SUITE("earthquake") {
  TEST_CASE("twist substitution on words") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};
    OrientedCurve b1{ref.pres.parse("b1"), 1.0};

    CHECK(ref.pres.format(dehn_twist_word(ref.pres.parse("b1"), a1, 2, ref)) == "b1 a1 a1");
    CHECK(ref.pres.format(dehn_twist_word(ref.pres.parse("b1"), a1, -1, ref)) == "b1 A1");
    CHECK(ref.pres.format(dehn_twist_word(ref.pres.parse("B1"), a1, 2, ref)) == "A1 A1 B1");
    CHECK(ref.pres.format(dehn_twist_word(ref.pres.parse("a1"), b1, 1, ref)) == "a1 b1");
    // the twisting curve itself and the other handle stay put
    CHECK(dehn_twist_word(ref.pres.parse("a1"), a1, 3, ref) == ref.pres.parse("a1"));
    CHECK(dehn_twist_word(ref.pres.parse("a2 b2"), a1, 3, ref) == ref.pres.parse("a2 b2"));
    // power zero is the identity substitution
    Word w = ref.pres.parse("b1 a2 B1");
    CHECK(dehn_twist_word(w, a1, 0, ref) == w);

    // substitution respects inverses: T(w^{-1}) = T(w)^{-1}
    Word tw = dehn_twist_word(w, a1, 2, ref);
    CHECK(dehn_twist_word(w.inverse(), a1, 2, ref) == tw.inverse());

    // the defining relation survives every twist exactly
    for (int k = -3; k <= 3; ++k) {
      CHECK(dehn_twist_word(ref.pres.relator(), a1, k, ref) == ref.pres.relator());
      CHECK(dehn_twist_word(ref.pres.relator(), b1, k, ref) == ref.pres.relator());
    }

    // only generator curves support the substitution form
    OrientedCurve diag{ref.pres.parse("a1 b1"), 1.0};
    CHECK_THROWS_AS((void)dehn_twist_word(w, diag, 1, ref), Error);
  }

  TEST_CASE("twist recipe produces lengthening curves with fading weights") {
    ReferenceStructure ref = reference_structure(2);
    LaminationApproximation la;
    la.kind = LaminationApproximation::Kind::dehn_twist_recipe;
    la.seed_curve = ref.pres.parse("b1");
    la.twist_curve = ref.pres.parse("a1");
    la.count = 4;

    std::vector<WeightedMulticurve> seq = build_sequence(la, ref);
    REQUIRE(seq.size() == 4);
    Representation rho = representation_from_reference(ref);
    for (std::size_t k = 0; k < seq.size(); ++k) {
      REQUIRE(seq[k].components.size() == 1);
      const WeightedComponent& comp = seq[k].components[0];
      // step k is the k-fold twist of the seed
      Word expect = ref.pres.parse("b1") * ref.pres.parse("a1").pow(static_cast<int>(k) + 1);
      CHECK(comp.curve.core == expect);
      CHECK(comp.param.translation == 1.0);
      // the weight is the reciprocal reference length
      double len = translation_length(rho.eval(comp.curve.core));
      CHECK(comp.curve.weight == doctest::Approx(1.0 / len).epsilon(1e-12));
      if (k > 0) CHECK(comp.curve.weight < seq[k - 1].components[0].curve.weight);
    }
    CHECK(seq[0].components[0].curve.weight == doctest::Approx(0.327102913).epsilon(1e-8));

    la.count = 0;
    CHECK_THROWS_AS((void)build_sequence(la, ref), Error);
  }

  TEST_CASE("a constant sequence converges immediately") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho = representation_from_reference(ref);
    LaminationApproximation la;
    la.kind = LaminationApproximation::Kind::explicit_list;
    for (int k = 0; k < 4; ++k) la.steps.push_back(twist_a1(ref, 0.4));

    ConvergenceReport rep = earthquake_limit(rho, la, 1e-4, ref);
    CHECK(rep.verdict == Verdict::converged);
    REQUIRE(rep.distances.size() == 3);
    for (const StepDistance& d : rep.distances) CHECK(d.distance < 1e-10);
    CHECK(rep.relator_residuals.size() == 4);
    for (double r : rep.relator_residuals) CHECK(r < 1e-8);
  }

  TEST_CASE("a geometrically tightening sequence is certified convergent") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho = representation_from_reference(ref);
    LaminationApproximation la;
    la.kind = LaminationApproximation::Kind::explicit_list;
    for (int k = 1; k <= 15; ++k) la.steps.push_back(twist_a1(ref, 0.3 * (1.0 - std::pow(2.0, -k))));

    ConvergenceReport rep = earthquake_limit(rho, la, 1e-4, ref);
    CHECK(rep.verdict == Verdict::converged);
    REQUIRE(rep.distances.size() == 14);
    CHECK(rep.distances.back().distance < 1e-4);
    for (std::size_t i = 1; i < rep.distances.size(); ++i)
      CHECK(rep.distances[i].distance <= rep.distances[i - 1].distance);
    // the limit deformation is the weight-0.3 twist, already almost reached
    DeformResult direct = deform(rho, twist_a1(ref, 0.3), 1.0, ref);
    double err = 0.0;
    for (std::size_t i = 0; i < direct.rep.gens.size(); ++i)
      err = std::max(err, (rep.final.gens[i] - direct.rep.gens[i]).norm());
    CHECK(err < 1e-4);
  }

  TEST_CASE("runaway weights are flagged as divergence") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho = representation_from_reference(ref);
    LaminationApproximation la;
    la.kind = LaminationApproximation::Kind::explicit_list;
    for (double w : {0.001, 0.01, 0.1, 1.0}) la.steps.push_back(twist_a1(ref, w));

    ConvergenceReport rep = earthquake_limit(rho, la, 1e-4, ref);
    CHECK(rep.verdict == Verdict::diverging);
    REQUIRE(rep.distances.size() == 3);
    CHECK(rep.distances[2].distance > 10.0 * rep.distances[0].distance);
  }

  TEST_CASE("twist recipe distances shrink like the inverse square of the step") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho = representation_from_reference(ref);
    LaminationApproximation la;
    la.kind = LaminationApproximation::Kind::dehn_twist_recipe;
    la.seed_curve = ref.pres.parse("b1");
    la.twist_curve = ref.pres.parse("a1");
    la.count = 4;

    ConvergenceReport rep = earthquake_limit(rho, la, 1e-4, ref);
    REQUIRE(rep.distances.size() == 3);
    // the tail shrinks but cannot reach 1e-4 in four steps
    CHECK(rep.verdict == Verdict::budget_exhausted);
    for (std::size_t i = 1; i < rep.distances.size(); ++i)
      CHECK(rep.distances[i].distance < rep.distances[i - 1].distance);
    CHECK(rep.distances[0].distance == doctest::Approx(0.44431876540348186).epsilon(1e-9));
    CHECK(rep.relator_residuals.size() == 4);
    CHECK(rep.sequence.size() == 4);
    // every intermediate representation satisfied the group laws
    Mat R = rep.final.eval(ref.pres.relator());
    CHECK((R - Mat::Identity(3, 3)).norm() < 1e-6);
  }

  TEST_CASE("an empty approximation is a configuration error") {
    ReferenceStructure ref = reference_structure(2);
    Representation rho = representation_from_reference(ref);
    LaminationApproximation la;
    la.kind = LaminationApproximation::Kind::explicit_list;
    CHECK_THROWS_AS((void)earthquake_limit(rho, la, 1e-4, ref), Error);
  }
}
