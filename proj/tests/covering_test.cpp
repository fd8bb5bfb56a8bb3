#include <cmath>

#include "doctest.h"
#include "quakebend/covering.hpp"
#include "quakebend/errors.hpp"
#include "quakebend/minkowski.hpp"

using namespace qb;

namespace {

double mdot(const Vec3& u, const Vec3& v) { return u(0) * v(0) + u(1) * v(1) - u(2) * v(2); }

// point of the hyperboloid on the axis of M, for degeneracy fixtures
Vec3 point_on_axis(const Mat3& M) {
  DirectedAxis ax = directed_axis(M);
  Vec3 P = ax.rep / ax.rep(2) + ax.att / ax.att(2);
  return Vec3(P / std::sqrt(-mdot(P, P)));
}

bool crossings_match(const std::vector<Crossing>& lhs, const std::vector<Crossing>& rhs,
                     const Word& core, const ReferenceStructure& ref) {
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i].sign != rhs[i].sign) return false;
    if (std::abs(lhs[i].position - rhs[i].position) > 1e-10) return false;
    if (!coset_equivalent(lhs[i].conjugator, rhs[i].conjugator, core, ref)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("covering") {
  TEST_CASE("reference structure invariants") {
    ReferenceStructure ref = reference_structure(2);
    CHECK(ref.pres.genus() == 2);
    CHECK(ref.gens.size() == 4);
    for (const Mat3& g : ref.gens) CHECK(is_lorentz(Mat(g)));
    CHECK((ref.eval(ref.pres.relator()) - Mat3::Identity()).norm() < 1e-9);
    CHECK(ref.basepoint == Vec3(0, 0, 1));
    CHECK(ref.systole_estimate == doctest::Approx(2.2567679299325638).epsilon(1e-12));
    CHECK(ref.collar == doctest::Approx(0.67122702322677674).epsilon(1e-12));
    // all four generators of the symmetric polygon share one length
    for (const Mat3& g : ref.gens)
      CHECK(translation_length(Mat(g)) == doctest::Approx(ref.systole_estimate).epsilon(1e-10));

    // eval is a homomorphism on words
    Word u = ref.pres.parse("a1 b2 A2");
    Word v = ref.pres.parse("a2 B1");
    CHECK((ref.eval(u * v) - ref.eval(u) * ref.eval(v)).norm() < 1e-12);

    ReferenceStructure moved = ref.with_basepoint(point_on_axis(ref.gens[0]));
    REQUIRE(moved.gens.size() == ref.gens.size());
    for (std::size_t i = 0; i < ref.gens.size(); ++i)
      CHECK((moved.gens[i] - ref.gens[i]).norm() == 0.0);
    CHECK(std::abs(mdot(moved.basepoint, moved.basepoint) + 1.0) < 1e-12);
  }

  TEST_CASE("explicit generator matrices are validated") {
    ReferenceStructure ref = reference_structure(2);
    // same matrices round-trip
    ReferenceStructure again = reference_structure(2, ref.gens, ref.basepoint);
    CHECK(again.systole_estimate == doctest::Approx(ref.systole_estimate));

    // breaking the relator is rejected
    std::vector<Mat3> shuffled = ref.gens;
    std::swap(shuffled[0], shuffled[1]);
    CHECK_THROWS_AS((void)reference_structure(2, shuffled, ref.basepoint), Error);

    // a matrix off the isometry group is rejected
    std::vector<Mat3> broken = ref.gens;
    broken[2] *= 1.5;
    CHECK_THROWS_AS((void)reference_structure(2, broken, ref.basepoint), Error);
  }

  TEST_CASE("directed axis of a loxodromic element") {
    ReferenceStructure ref = reference_structure(2);
    DirectedAxis ax = directed_axis(ref.gens[0]);
    CHECK(mdot(ax.pole, ax.pole) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(mdot(ax.rep, ax.pole)) < 1e-10);
    CHECK(std::abs(mdot(ax.att, ax.pole)) < 1e-10);

    auto [rep, att] = fixed_points(Mat(ref.gens[0]));
    CHECK((Vec(ax.rep) - rep.v).norm() < 1e-10);
    CHECK((Vec(ax.att) - att.v).norm() < 1e-10);

    // reversing the element swaps the endpoints and flips the pole
    DirectedAxis rev = directed_axis(Mat3(lorentz_inverse(ref.gens[0])));
    CHECK((ax.rep - rev.att).norm() < 1e-10);
    CHECK((ax.pole + rev.pole).norm() < 1e-10);
  }

  TEST_CASE("crossing sequences against the a1 curve") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};

    struct Expected {
      const char* word;
      std::vector<int> signs;
      std::vector<double> positions;
      std::vector<const char*> conjugators;
    };
    // frozen against the regular-octagon reference
    const Expected table[] = {
        {"b1", {-1}, {0.33935942622673315}, {"1"}},
        {"B1", {+1}, {0.66064057377290952}, {"1"}},
        {"a1", {}, {}, {}},
        {"a2", {}, {}, {}},
        {"b2", {}, {}, {}},
        {"b1 a1 B1", {}, {}, {}},
        {"b1 a1", {-1}, {0.37432635959502059}, {"1"}},
        {"a1 b1", {-1}, {0.25819210045735208}, {"1"}},
        {"b2 a2 b1 a1", {-1}, {0.18787688088747301}, {"1"}},
        {"b1 b1", {-1, -1}, {0.19281726086692386, 0.61550115544903261}, {"1", "b1"}},
    };
    for (const Expected& e : table) {
      CAPTURE(e.word);
      CrossingSequence seq = crossing_sequence(ref.pres.parse(e.word), a1, ref);
      REQUIRE(seq.crossings.size() == e.signs.size());
      for (std::size_t i = 0; i < e.signs.size(); ++i) {
        CHECK(seq.crossings[i].sign == e.signs[i]);
        CHECK(seq.crossings[i].position == doctest::Approx(e.positions[i]).epsilon(1e-11));
        CHECK(ref.pres.format(seq.crossings[i].conjugator) == e.conjugators[i]);
      }
      // positions come out strictly increasing
      for (std::size_t i = 1; i < seq.crossings.size(); ++i)
        CHECK(seq.crossings[i - 1].position < seq.crossings[i].position);
    }

    // the weight is transverse-measure data; it cannot move the geometry
    OrientedCurve heavy{ref.pres.parse("b1"), 2.5};
    OrientedCurve b1{ref.pres.parse("b1"), 1.0};
    CrossingSequence s1 = crossing_sequence(ref.pres.parse("a1"), b1, ref);
    CrossingSequence s2 = crossing_sequence(ref.pres.parse("a1"), heavy, ref);
    REQUIRE(s1.crossings.size() == s2.crossings.size());
    for (std::size_t i = 0; i < s1.crossings.size(); ++i)
      CHECK(s1.crossings[i].position == s2.crossings[i].position);
  }

  TEST_CASE("a word and its inverse cross at complementary positions") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};
    CrossingSequence fwd = crossing_sequence(ref.pres.parse("b1"), a1, ref);
    CrossingSequence bwd = crossing_sequence(ref.pres.parse("B1"), a1, ref);
    REQUIRE(fwd.crossings.size() == 1);
    REQUIRE(bwd.crossings.size() == 1);
    CHECK(fwd.crossings[0].position ==
          doctest::Approx(1.0 - bwd.crossings[0].position).epsilon(1e-9));
    CHECK(fwd.crossings[0].sign == -bwd.crossings[0].sign);
  }

  TEST_CASE("enumeration certificate stays on the safe side") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};
    CrossingSequence seq = crossing_sequence(ref.pres.parse("b2 a2 b1 a1"), a1, ref);
    const EnumerationCertificate& c = seq.certificate;
    CHECK(c.enumerated >= c.expanded);
    CHECK(c.enumerated > 0);
    CHECK(c.margin > 0.0);
    CHECK(c.min_rejected_distance > 0.0);
    CHECK(c.min_frontier_distance > c.margin);
  }

  TEST_CASE("a tiny coset budget is reported as such") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};
    CoveringOptions opts;
    opts.max_cosets = 4;
    try {
      (void)crossing_sequence(ref.pres.parse("b1"), a1, ref, opts);
      FAIL("expected the enumeration budget to trip");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degeneracy);
    }
  }

  TEST_CASE("breadth-first search agrees with the conjugator oracle") {
    ReferenceStructure ref = reference_structure(2);
    const char* words[] = {"b1", "B1", "b1 b1", "b1 a1", "a1 b1 A1 B1", "b2 a2 b1 a1", "a2 b2"};
    const char* curves[] = {"a1", "b1", "a2"};
    for (const char* ct : curves) {
      OrientedCurve c{ref.pres.parse(ct), 1.0};
      for (const char* wt : words) {
        CAPTURE(ct);
        CAPTURE(wt);
        Word A = ref.pres.parse(wt);
        CrossingSequence seq = crossing_sequence(A, c, ref);
        std::vector<Crossing> oracle = oracle_crossings(A, c, ref, 6);
        CHECK(crossings_match(seq.crossings, oracle, c.core, ref));
      }
    }
  }

  TEST_CASE("lift survey reproduces the direct oracle") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};
    Word A = ref.pres.parse("b1 b1");
    Vec3 Q = lorentz_inverse(ref.eval(A)) * ref.basepoint;

    double seg = std::acosh(std::max(1.0, -mdot(ref.basepoint, Q)));
    std::vector<OracleLift> lifts = oracle_lifts(a1, ref, 6, seg / 2 + ref.collar + 2);
    CHECK(!lifts.empty());
    // survey is sorted by distance and free of duplicates
    for (std::size_t i = 1; i < lifts.size(); ++i) {
      CHECK(lifts[i - 1].basepoint_distance <= lifts[i].basepoint_distance);
      CHECK((lifts[i - 1].pole - lifts[i].pole).norm() > 1e-7);
    }

    std::vector<Crossing> from_lifts = crossings_from_lifts(lifts, ref.basepoint, Q);
    std::vector<Crossing> direct = oracle_crossings(A, a1, ref, 6);
    CHECK(crossings_match(from_lifts, direct, a1.core, ref));
  }

  TEST_CASE("intersection numbers of generator curves") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};
    OrientedCurve b1{ref.pres.parse("b1"), 1.0};
    OrientedCurve a2{ref.pres.parse("a2"), 1.0};
    OrientedCurve ab{ref.pres.parse("a1 b1"), 1.0};
    CHECK(intersection_number(a1, a1, ref) == 0);
    CHECK(intersection_number(a1, b1, ref) == 1);
    CHECK(intersection_number(b1, a1, ref) == 1);
    CHECK(intersection_number(a1, a2, ref) == 0);
    CHECK(intersection_number(b1, a2, ref) == 0);
    CHECK(intersection_number(ab, a2, ref) == 0);
    CHECK(intersection_number(ab, a1, ref) == 1);
    CHECK(intersection_number(ab, b1, ref) == 1);
  }

  TEST_CASE("coset equivalence of conjugator words") {
    ReferenceStructure ref = reference_structure(2);
    Word core = ref.pres.parse("a1");
    Word u = ref.pres.parse("b1 a2");
    CHECK(coset_equivalent(u, u, core, ref));
    CHECK(coset_equivalent(core.pow(3) * u, u, core, ref));
    CHECK(coset_equivalent(core.pow(-2) * u, u, core, ref));
    CHECK(!coset_equivalent(u * core, u, core, ref));
    CHECK(!coset_equivalent(ref.pres.parse("b1"), ref.pres.parse("b2"), core, ref));
  }

  TEST_CASE("segments touching a lift are refused, not mis-signed") {
    ReferenceStructure ref = reference_structure(2);
    OrientedCurve a1{ref.pres.parse("a1"), 1.0};
    ReferenceStructure on_axis = ref.with_basepoint(point_on_axis(ref.gens[0]));
    try {
      (void)crossing_sequence(ref.pres.parse("b1"), a1, on_axis);
      FAIL("expected a degeneracy rejection");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degeneracy);
    }
    // the documented retry ladder exists for exactly this situation
    CHECK(basepoint_offsets().size() >= 3);
    Vec3 nudged = offset_basepoint(on_axis.basepoint, basepoint_offsets()[0]);
    CHECK(std::abs(mdot(nudged, nudged) + 1.0) < 1e-12);
    (void)crossing_sequence(ref.pres.parse("b1"), a1, ref.with_basepoint(nudged));
  }

  TEST_CASE("ideal endpoints of a segment's geodesic") {
    ReferenceStructure ref = reference_structure(2);
    Vec3 P = ref.basepoint;
    Vec3 Q = lorentz_inverse(ref.gens[1]) * P;
    auto [X, Y] = segment_ideal_endpoints(P, Q);
    CHECK(std::abs(mdot(X, X)) < 1e-12);
    CHECK(std::abs(mdot(Y, Y)) < 1e-12);
    CHECK(X(2) == doctest::Approx(1.0));
    CHECK(Y(2) == doctest::Approx(1.0));
    // X lies behind P, Y beyond Q: |<.,ideal>| grows with distance to it
    CHECK(std::abs(mdot(P, X)) < std::abs(mdot(Q, X)));
    CHECK(std::abs(mdot(Q, Y)) < std::abs(mdot(P, Y)));
    // all four vectors live in one 2-plane
    Eigen::Matrix<double, 3, 4> span;
    span.col(0) = X;
    span.col(1) = Y;
    span.col(2) = P;
    span.col(3) = Q;
    Eigen::JacobiSVD<Mat> svd(span);
    CHECK(svd.singularValues()(2) < 1e-10 * svd.singularValues()(0));
  }
}
