#include <string>

#include "doctest.h"
#include "quakebend/errors.hpp"
#include "quakebend/limitset.hpp"
#include "quakebend/verify.hpp"

using namespace qb;

namespace {

const ReferenceStructure& ref() {
  static ReferenceStructure r = reference_structure(2);
  return r;
}

}  // namespace

TEST_SUITE("limitset") {
  TEST_CASE("cloud growth over the reduced ball") {
    Representation rho = representation_from_reference(ref());

    LimitSetCloud c0 = limitset_cloud(rho, 0);
    CHECK(c0.points.empty());
    CHECK(c0.words_examined == 0);
    CHECK(!fit_circle(c0).valid);

    // 8 reduced words of length 1, fixed-point pairs shared between w and
    // w^-1, so 8 distinct boundary points
    LimitSetCloud c1 = limitset_cloud(rho, 1);
    CHECK(c1.n == 2);
    CHECK(c1.words_examined == 8);
    CHECK(c1.points.size() == 8);

    LimitSetCloud c2 = limitset_cloud(rho, 2);
    CHECK(c2.words_examined == 64);  // 8 + 8*7 reduced words
    CHECK(c2.points.size() == 56);

    for (const auto& p : c2.points) {
      CHECK(p.size() == 2);
      CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    // deduplication keeps points pairwise separated
    for (std::size_t i = 0; i < c1.points.size(); ++i)
      for (std::size_t j = i + 1; j < c1.points.size(); ++j)
        CHECK((c1.points[i] - c1.points[j]).norm() > 1e-7);
  }

  TEST_CASE("limit set of the reference surface lies on the unit circle") {
    Representation rho = representation_from_reference(ref());
    LimitSetCloud cloud = limitset_cloud(rho, 5);
    CHECK(cloud.points.size() > 20000);
    CircleFit fit = fit_circle(cloud);
    REQUIRE(fit.valid);
    CHECK(fit.radius == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.center.norm() < 1e-9);
    CHECK(fit.max_deviation < 1e-6);
  }

  TEST_CASE("plane embeddings stay circular, genuine bends do not") {
    Representation flat = embed_representation(representation_from_reference(ref()), 3);
    CircleFit plane_fit = fit_circle(limitset_cloud(flat, 4));
    REQUIRE(plane_fit.valid);
    CHECK(plane_fit.max_deviation < 1e-6);

    Representation bent = bent_representation(ref(), 3, 0.3, 42);
    LimitSetCloud cloud = limitset_cloud(bent, 4);
    CHECK(cloud.n == 3);
    CircleFit bent_fit = fit_circle(cloud);
    REQUIRE(bent_fit.valid);
    CHECK(bent_fit.max_deviation > 1e-3);
  }

  TEST_CASE("circle fit declines undersized samples") {
    Representation rho = representation_from_reference(ref());
    LimitSetCloud tiny = limitset_cloud(rho, 1);
    tiny.points.resize(7);
    CHECK(!fit_circle(tiny).valid);
  }

  TEST_CASE("CSV carries the hash comment, header, and one row per point") {
    Representation rho = representation_from_reference(ref());
    LimitSetCloud cloud = limitset_cloud(rho, 2);
    std::string csv = limitset_csv(cloud, 0xabcdef0123456789ULL);
    CHECK(csv.rfind("# config_hash=abcdef0123456789\nx1,x2\n", 0) == 0);
    std::size_t rows = 0;
    for (char ch : csv)
      if (ch == '\n') ++rows;
    CHECK(rows == cloud.points.size() + 2);

    LimitSetCloud c3 = limitset_cloud(embed_representation(rho, 3), 1);
    CHECK(limitset_csv(c3, 0).find("x1,x2,x3\n") != std::string::npos);
  }

  TEST_CASE("SVG rendering covers the drawable dimensions") {
    Representation rho = representation_from_reference(ref());
    LimitSetCloud cloud = limitset_cloud(rho, 2);
    std::string svg = limitset_svg(cloud, 1);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("circle") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    LimitSetCloud c3 = limitset_cloud(embed_representation(rho, 3), 2);
    CHECK(limitset_svg(c3, 1).rfind("<svg", 0) == 0);

    LimitSetCloud c4 = limitset_cloud(embed_representation(rho, 4), 1);
    try {
      (void)limitset_svg(c4, 1);
      FAIL("dimension 4 has no drawing");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
    }
  }
}
