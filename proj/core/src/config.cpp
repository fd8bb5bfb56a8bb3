#include "quakebend/config.hpp"

#include <random>
#include <sstream>

#include "quakebend/errors.hpp"
#include "quakebend/toml_min.hpp"
#include "quakebend/verify.hpp"

namespace qb {

namespace {

[[noreturn]] void semantic_fail(const std::string& where, const std::string& what) {
  fail_config("config error: " + where + ": " + what);
}

MulticurveSpec read_component(TableReader& r) {
  MulticurveSpec spec;
  spec.word = r.require_text("word");
  spec.weight = r.number("weight", 1.0);
  spec.translation = r.number("translation", 0.0);
  spec.angle = r.number("angle", 0.0);
  spec.plane = r.number_array("plane", {});
  if (spec.weight <= 0.0) semantic_fail(r.path() + ".weight", "weight must be positive");
  if (!spec.plane.empty() && spec.plane.size() != 3)
    semantic_fail(r.path() + ".plane", "plane selector needs exactly 3 numbers");
  r.finish();
  return spec;
}

void check_component_semantics(const MulticurveSpec& spec, const SurfacePresentation& pres,
                               int dimension, const std::string& where) {
  try {
    Word w = pres.parse(spec.word);
    if (w.empty()) semantic_fail(where + ".word", "empty word");
  } catch (const Error& e) {
    semantic_fail(where + ".word", e.what());
  }
  if (spec.angle != 0.0 && dimension == 2)
    semantic_fail(where + ".angle", "rotation angle requires dimension >= 3");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  TomlTable root = toml_parse(text);
  TableReader r(root, "");
  RunConfig cfg;
  cfg.source_text = text;

  cfg.genus = static_cast<int>(r.integer("genus", 2));
  if (cfg.genus < 2) semantic_fail("genus", "genus must be at least 2");
  cfg.dimension = static_cast<int>(r.integer("dimension", 2));
  if (cfg.dimension < 2 || cfg.dimension > 4)
    semantic_fail("dimension", "dimension must be 2, 3 or 4");
  cfg.seed = static_cast<std::uint64_t>(r.integer("seed", 1));

  {
    TableReader rep = r.subtable("representation");
    std::string source = rep.text("source", "reference");
    if (source == "reference")
      cfg.representation.source = RepresentationSpec::Source::reference;
    else if (source == "explicit")
      cfg.representation.source = RepresentationSpec::Source::explicit_matrices;
    else if (source == "bent")
      cfg.representation.source = RepresentationSpec::Source::bent;
    else
      semantic_fail("representation.source", "expected \"reference\", \"explicit\" or \"bent\"");
    cfg.representation.bend_angle = rep.number("bend_angle", 0.2);
    cfg.representation.bend_curve = rep.text("bend_curve", "a1");
    cfg.representation.conjugate = rep.boolean("conjugate", true);
    if (const TomlValue* mv = rep.raw("matrices")) {
      if (mv->kind != TomlValue::Kind::array)
        semantic_fail("representation.matrices", "expected an array of row-major blocks");
      for (const TomlValue& block : mv->items) {
        if (block.kind != TomlValue::Kind::array)
          semantic_fail("representation.matrices", "each matrix must be an array of numbers");
        std::vector<double> entries;
        for (const TomlValue& e : block.items) {
          if (e.kind != TomlValue::Kind::number)
            semantic_fail("representation.matrices", "matrix entries must be numbers");
          entries.push_back(e.num);
        }
        cfg.representation.matrices.push_back(std::move(entries));
      }
    }
    rep.finish();
  }

  for (TableReader& mr : r.table_array("multicurve")) cfg.multicurve.push_back(read_component(mr));

  {
    TableReader d = r.subtable("deform");
    cfg.t = d.number("t", 1.0);
    d.finish();
  }

  {
    TableReader eq = r.subtable("earthquake");
    std::string kind = eq.text("kind", "recipe");
    if (kind == "recipe")
      cfg.earthquake.kind = LaminationApproximation::Kind::dehn_twist_recipe;
    else if (kind == "explicit")
      cfg.earthquake.kind = LaminationApproximation::Kind::explicit_list;
    else
      semantic_fail("earthquake.kind", "expected \"recipe\" or \"explicit\"");
    cfg.earthquake.seed_curve = eq.text("seed_curve", "a1");
    cfg.earthquake.twist_curve = eq.text("twist_curve", "b1");
    cfg.earthquake.count = static_cast<int>(eq.integer("count", 8));
    cfg.earthquake.tol = eq.number("tol", 1e-6);
    if (cfg.earthquake.count < 0) semantic_fail("earthquake.count", "count must be >= 0");
    if (!(cfg.earthquake.tol > 0.0)) semantic_fail("earthquake.tol", "tolerance must be positive");
    for (TableReader& step : eq.table_array("step")) {
      std::vector<MulticurveSpec> comps;
      for (TableReader& comp : step.table_array("component")) comps.push_back(read_component(comp));
      if (comps.empty()) semantic_fail(step.path(), "step needs at least one component");
      step.finish();
      cfg.earthquake.steps.push_back(std::move(comps));
    }
    if (cfg.earthquake.kind == LaminationApproximation::Kind::explicit_list &&
        cfg.earthquake.steps.empty())
      semantic_fail("earthquake.step", "explicit sequence needs at least one step");
    eq.finish();
  }

  {
    TableReader cr = r.subtable("crossings");
    cfg.crossings.word = cr.text("word", "b1");
    cfg.crossings.curve = cr.text("curve", "a1");
    cfg.crossings.weight = cr.number("weight", 1.0);
    cfg.crossings.oracle_radius = static_cast<int>(cr.integer("oracle_radius", 0));
    if (cfg.crossings.weight <= 0.0)
      semantic_fail("crossings.weight", "weight must be positive");
    if (cfg.crossings.oracle_radius < 0)
      semantic_fail("crossings.oracle_radius", "radius must be >= 0");
    cr.finish();
  }

  {
    TableReader ls = r.subtable("limitset");
    cfg.limitset.depth = static_cast<int>(ls.integer("depth", 6));
    if (cfg.limitset.depth < 0) semantic_fail("limitset.depth", "depth must be >= 0");
    ls.finish();
  }

  {
    TableReader vr = r.subtable("verify");
    cfg.verify.checks = vr.text_array("checks");
    cfg.verify.trials = static_cast<int>(vr.integer("trials", 20));
    cfg.verify.dimension = static_cast<int>(vr.integer("dimension", 3));
    if (cfg.verify.trials < 1) semantic_fail("verify.trials", "trials must be >= 1");
    if (cfg.verify.dimension < 2 || cfg.verify.dimension > 4)
      semantic_fail("verify.dimension", "dimension must be 2, 3 or 4");
    vr.finish();
  }

  {
    TableReader cov = r.subtable("covering");
    cfg.covering.margin_override = cov.number("margin", 0.0);
    cfg.covering.max_cosets =
        static_cast<std::size_t>(cov.integer("max_cosets", 4'000'000));
    if (cfg.covering.margin_override < 0.0)
      semantic_fail("covering.margin", "margin must be >= 0");
    if (cfg.covering.max_cosets == 0)
      semantic_fail("covering.max_cosets", "coset budget must be positive");
    cov.finish();
  }

  r.finish();

  // Cross-field semantics that only need the presentation, not the metric.
  SurfacePresentation pres(cfg.genus);
  {
    int i = 0;
    for (const MulticurveSpec& spec : cfg.multicurve) {
      std::ostringstream os;
      os << "multicurve[" << i++ << "]";
      check_component_semantics(spec, pres, cfg.dimension, os.str());
    }
  }
  {
    int i = 0;
    for (const auto& step : cfg.earthquake.steps) {
      int j = 0;
      for (const MulticurveSpec& spec : step) {
        std::ostringstream os;
        os << "earthquake.step[" << i << "].component[" << j++ << "]";
        check_component_semantics(spec, pres, cfg.dimension, os.str());
      }
      ++i;
    }
  }
  for (const char* key : {"seed_curve", "twist_curve"}) {
    const std::string& word =
        std::string(key) == "seed_curve" ? cfg.earthquake.seed_curve : cfg.earthquake.twist_curve;
    try {
      pres.parse(word);
    } catch (const Error& e) {
      semantic_fail(std::string("earthquake.") + key, e.what());
    }
  }
  try {
    pres.parse(cfg.crossings.word);
    if (pres.parse(cfg.crossings.curve).empty())
      semantic_fail("crossings.curve", "empty word");
  } catch (const Error& e) {
    semantic_fail("crossings", e.what());
  }
  try {
    if (pres.parse(cfg.representation.bend_curve).empty())
      semantic_fail("representation.bend_curve", "empty word");
  } catch (const Error& e) {
    semantic_fail("representation.bend_curve", e.what());
  }
  if (cfg.representation.source == RepresentationSpec::Source::bent && cfg.dimension == 2 &&
      cfg.representation.bend_angle != 0.0)
    semantic_fail("representation.bend_angle", "bending requires dimension >= 3");

  return cfg;
}

Representation build_representation(const RunConfig& cfg, const ReferenceStructure& ref) {
  const int n = cfg.dimension;
  switch (cfg.representation.source) {
    case RepresentationSpec::Source::reference: {
      Representation rho2 = representation_from_reference(ref);
      return n == 2 ? rho2 : embed_representation(rho2, n);
    }
    case RepresentationSpec::Source::explicit_matrices: {
      const std::size_t count = static_cast<std::size_t>(2 * cfg.genus);
      if (cfg.representation.matrices.size() != count)
        semantic_fail("representation.matrices",
                      "expected " + std::to_string(count) + " generator matrices");
      const int d = n + 1;
      std::vector<Mat> gens;
      for (std::size_t g = 0; g < count; ++g) {
        const auto& entries = cfg.representation.matrices[g];
        if (entries.size() != static_cast<std::size_t>(d * d))
          semantic_fail("representation.matrices",
                        "matrix " + std::to_string(g) + " needs " + std::to_string(d * d) +
                            " row-major entries for dimension " + std::to_string(n));
        Mat M(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) M(i, j) = entries[static_cast<std::size_t>(i * d + j)];
        gens.push_back(M);
      }
      return make_representation(cfg.genus, n, std::move(gens));
    }
    case RepresentationSpec::Source::bent: {
      Representation rho = representation_from_reference(ref);
      if (n > 2) rho = embed_representation(rho, n);
      if (cfg.representation.bend_angle != 0.0) {
        WeightedMulticurve bend;
        WeightedComponent comp;
        comp.curve.core = ref.pres.parse(cfg.representation.bend_curve);
        comp.curve.weight = 1.0;
        comp.param.angle = cfg.representation.bend_angle;
        bend.components.push_back(comp);
        rho = deform(rho, bend, 1.0, ref).rep;
      }
      if (cfg.representation.conjugate) {
        std::mt19937_64 rng(cfg.seed);
        rho = conjugate_representation(rho, exp_lie(random_lie(n, rng, 0.3)));
      }
      return rho;
    }
  }
  fail_config("config error: representation.source: unrecognized source");
}

WeightedMulticurve build_multicurve(const std::vector<MulticurveSpec>& specs,
                                    const ReferenceStructure& ref, int n) {
  WeightedMulticurve mc;
  for (const MulticurveSpec& spec : specs) {
    WeightedComponent comp;
    comp.curve.core = ref.pres.parse(spec.word);
    comp.curve.weight = spec.weight;
    comp.param.translation = spec.translation;
    comp.param.angle = spec.angle;
    if (!spec.plane.empty())
      comp.param.plane = Eigen::Vector3d(spec.plane[0], spec.plane[1], spec.plane[2]);
    if (comp.param.angle != 0.0 && n == 2)
      fail_config("config error: rotation angle requires dimension >= 3");
    mc.components.push_back(std::move(comp));
  }
  return mc;
}

LaminationApproximation build_lamination(const RunConfig& cfg, const ReferenceStructure& ref) {
  LaminationApproximation la;
  la.kind = cfg.earthquake.kind;
  if (la.kind == LaminationApproximation::Kind::dehn_twist_recipe) {
    la.seed_curve = ref.pres.parse(cfg.earthquake.seed_curve);
    la.twist_curve = ref.pres.parse(cfg.earthquake.twist_curve);
    la.count = cfg.earthquake.count;
  } else {
    for (const auto& step : cfg.earthquake.steps)
      la.steps.push_back(build_multicurve(step, ref, cfg.dimension));
  }
  return la;
}

}  // namespace qb
