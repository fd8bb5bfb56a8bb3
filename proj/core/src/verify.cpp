#include "quakebend/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "quakebend/errors.hpp"

namespace qb {

CheckResult make_check(std::string name, double residual, double threshold,
                       std::string witness_on_fail) {
  CheckResult r;
  r.name = std::move(name);
  r.residual = residual;
  r.threshold = threshold;
  r.pass = residual < threshold;
  if (!r.pass && !witness_on_fail.empty()) r.witness = std::move(witness_on_fail);
  return r;
}

namespace {

double mdot3(const Vec3& a, const Vec3& b) { return a(0) * b(0) + a(1) * b(1) - a(2) * b(2); }

double max_gen_distance(const Representation& A, const Representation& B) {
  double out = 0.0;
  for (std::size_t i = 0; i < A.gens.size(); ++i)
    out = std::max(out, group_distance(A.gens[i], B.gens[i]).value);
  return out;
}

DeformOptions no_validate() {
  DeformOptions o;
  o.validate = false;
  return o;
}

}  // namespace

Representation embed_representation(const Representation& rho2, int n) {
  if (rho2.n != 2) fail_config("embed_representation: input must be 2-dimensional");
  if (n == 2) return rho2;
  std::array<int, 3> map{0, 1, n};
  std::vector<Mat> gens;
  gens.reserve(rho2.gens.size());
  for (const Mat& g : rho2.gens) {
    Mat e = Mat::Identity(n + 1, n + 1);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) e(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = g(r, c);
    gens.push_back(std::move(e));
  }
  return make_representation(rho2.pres.genus(), n, std::move(gens));
}

Mat random_lie(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat X = Mat::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = u(rng);
      X(i, j) = v;
      X(j, i) = -v;
    }
  for (int i = 0; i < n; ++i) {
    double v = u(rng);
    X(i, n) = v;
    X(n, i) = v;
  }
  return X;
}

Representation conjugate_representation(const Representation& rho, const Mat& C) {
  if (!is_lorentz(C, 1e-8)) fail_config("conjugate_representation: conjugator not in SO+(n,1)");
  Mat Ci = lorentz_inverse(C);
  std::vector<Mat> gens;
  gens.reserve(rho.gens.size());
  for (const Mat& g : rho.gens) gens.push_back(eta_orthonormalize(C * g * Ci));
  return make_representation(rho.pres.genus(), rho.n, std::move(gens));
}

Representation bent_representation(const ReferenceStructure& ref, int n, double bend_angle,
                                   std::uint64_t seed) {
  Representation rho = representation_from_reference(ref);
  std::mt19937_64 rng(seed);
  if (n > 2) {
    rho = embed_representation(rho, n);
    if (bend_angle != 0.0) {
      WeightedComponent comp;
      comp.curve = OrientedCurve{ref.pres.parse("a1"), 1.0};
      comp.param.angle = bend_angle;
      rho = deform(rho, WeightedMulticurve{{comp}}, 1.0, ref, no_validate()).rep;
    }
  }
  return conjugate_representation(rho, exp_lie(random_lie(n, rng, 0.3)));
}

ReferenceStructure twisted_reference(const ReferenceStructure& ref, double twist) {
  Representation rho = representation_from_reference(ref);
  WeightedComponent comp;
  comp.curve = OrientedCurve{ref.pres.parse("a1"), 1.0};
  comp.param.translation = twist;
  Representation d = deform(rho, WeightedMulticurve{{comp}}, 1.0, ref, no_validate()).rep;
  std::vector<Mat3> gens;
  gens.reserve(d.gens.size());
  for (const Mat& g : d.gens) gens.push_back(Mat3(g));
  return reference_structure(ref.pres.genus(), gens, ref.basepoint);
}

CheckResult check_homomorphism(const Representation& rep) {
  Eigen::Index d = rep.n + 1;
  double res = (rep.eval(rep.pres.relator()) - Mat::Identity(d, d)).norm();
  return make_check("homomorphism", res, tol::hom, "relator residual out of tolerance");
}

CheckResult check_flow(const Representation& rho, const WeightedMulticurve& mc, double s, double t,
                       const ReferenceStructure& ref) {
  validate_multicurve(mc, ref);
  Representation Es = deform(rho, mc, s, ref, no_validate()).rep;
  Representation Est = deform(Es, mc, t, ref, no_validate()).rep;
  Representation Esum = deform(rho, mc, s + t, ref, no_validate()).rep;
  std::ostringstream w;
  w << "flow mismatch at s=" << s << " t=" << t;
  return make_check("flow", max_gen_distance(Est, Esum), tol::hom, w.str());
}

CheckResult check_commutativity(const Representation& rho, const std::vector<OrientedCurve>& curves,
                                const std::vector<CentralizerParameter>& paramsA,
                                const std::vector<CentralizerParameter>& paramsB, double t,
                                const ReferenceStructure& ref) {
  if (curves.size() != paramsA.size() || curves.size() != paramsB.size())
    fail_config("check_commutativity: one parameter per curve required");
  WeightedMulticurve mcA, mcB;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    mcA.components.push_back(WeightedComponent{curves[i], paramsA[i]});
    mcB.components.push_back(WeightedComponent{curves[i], paramsB[i]});
  }
  validate_multicurve(mcA, ref);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    Mat gA = gamma_base(rho, curves[i], paramsA[i], t);
    Mat gB = gamma_base(rho, curves[i], paramsB[i], t);
    if ((gA * gB - gB * gA).norm() > 1e-8 * std::max(1.0, gA.norm() * gB.norm()))
      fail_config("check_commutativity: base gammas do not commute (hypothesis violated)");
  }
  Representation AB = deform(deform(rho, mcA, t, ref, no_validate()).rep, mcB, t, ref, no_validate()).rep;
  Representation BA = deform(deform(rho, mcB, t, ref, no_validate()).rep, mcA, t, ref, no_validate()).rep;
  return make_check("commutativity", max_gen_distance(AB, BA), tol::hom,
                    "order of application changed the result");
}

CheckResult check_basepoint(const Representation& rho, const WeightedMulticurve& mc, double t,
                            const Eigen::Vector2d& offset, const ReferenceStructure& ref) {
  validate_multicurve(mc, ref);
  Vec3 x0 = ref.basepoint;
  Vec3 x1 = offset_basepoint(x0, offset);
  Representation E0 = deform(rho, mc, t, ref, no_validate()).rep;
  Representation E1 = deform(rho, mc, t, ref.with_basepoint(x1), no_validate()).rep;
  // moving the basepoint conjugates by the crossing product along the way
  Mat h = crossing_transport(rho, mc, t, ref, x0, x1, no_validate());
  Mat hi = lorentz_inverse(h);
  double res = 0.0;
  for (std::size_t i = 0; i < E0.gens.size(); ++i)
    res = std::max(res, group_distance(E1.gens[i], h * E0.gens[i] * hi).value);
  std::ostringstream w;
  w << "offset (" << offset(0) << ", " << offset(1) << ") not matched by the predicted conjugator";
  return make_check("basepoint", res, tol::hom, w.str());
}

CheckResult check_crossing_oracle(const std::vector<Word>& words,
                                  const std::vector<OrientedCurve>& curves,
                                  const ReferenceStructure& ref, int radius,
                                  const CoveringOptions& opts) {
  int mismatches = 0;
  std::string witness;
  for (const OrientedCurve& c : curves)
    for (const Word& A : words) {
      std::vector<Crossing> bfs = crossing_sequence(A, c, ref, opts).crossings;
      std::vector<Crossing> orc = oracle_crossings(A, c, ref, radius, opts.tau_sep);
      std::size_t m = std::min(bfs.size(), orc.size());
      int local = static_cast<int>(std::max(bfs.size(), orc.size()) - m);
      for (std::size_t k = 0; k < m; ++k) {
        bool ok = bfs[k].sign == orc[k].sign &&
                  std::abs(bfs[k].position - orc[k].position) <= 1e-9 &&
                  coset_equivalent(bfs[k].conjugator, orc[k].conjugator, c.core, ref);
        if (!ok) ++local;
      }
      if (local > 0 && witness.empty()) {
        std::ostringstream w;
        w << "word " << ref.pres.format(A) << " against " << ref.pres.format(c.core) << ": "
          << bfs.size() << " enumerated vs " << orc.size() << " brute-force";
        witness = w.str();
      }
      mismatches += local;
    }
  return make_check("crossing-oracle", mismatches, 0.5, witness);
}

CheckResult check_reference_independence(const std::vector<Word>& words,
                                         const std::vector<OrientedCurve>& curves,
                                         const ReferenceStructure& ref1,
                                         const ReferenceStructure& ref2) {
  int mismatches = 0;
  std::string witness;
  for (const OrientedCurve& c : curves)
    for (const Word& A : words) {
      std::vector<Crossing> s1 = crossing_sequence(A, c, ref1).crossings;
      std::vector<Crossing> s2 = crossing_sequence(A, c, ref2).crossings;
      std::size_t m = std::min(s1.size(), s2.size());
      int local = static_cast<int>(std::max(s1.size(), s2.size()) - m);
      for (std::size_t k = 0; k < m; ++k) {
        bool ok = s1[k].sign == s2[k].sign &&
                  coset_equivalent(s1[k].conjugator, s2[k].conjugator, c.core, ref1);
        if (!ok) ++local;
      }
      if (local > 0 && witness.empty())
        witness = "crossing data changed between references on " + ref1.pres.format(A);
      mismatches += local;
    }
  return make_check("reference-independence", mismatches, 0.5, witness);
}

std::vector<CheckResult> check_cocycle(const Representation& rho, const WeightedMulticurve& mc,
                                       const Word& A, const Word& B, double h,
                                       const ReferenceStructure& ref) {
  validate_multicurve(mc, ref);
  DeformOptions nv = no_validate();
  Mat uA = infinitesimal_cocycle(rho, mc, A, ref, nv);
  Mat uB = infinitesimal_cocycle(rho, mc, B, ref, nv);
  Mat uAB = infinitesimal_cocycle(rho, mc, A * B, ref, nv);
  Mat rB = rho.eval(B);
  Mat transported = lorentz_inverse(rB) * uA * rB;
  // crossing conjugators enter the cocycle as Ad(rho(u)^{-1}), so the terms
  // grow like |rho(u)|^2; measure the identity relative to that scale
  double scale = std::max(1.0, transported.norm() + uB.norm());
  double r1 = (uAB - (transported + uB)).norm() / scale;

  auto finite_difference = [&](double hh) {
    Mat E = deform_word(rho, mc, hh, ref, A, nv);
    return Mat(log_group(lorentz_inverse(rho.eval(A)) * E) / hh);
  };
  double e1 = (finite_difference(h) - uA).norm();
  double e2 = (finite_difference(h / 2) - uA).norm();
  // the deformed word product carries evaluation noise delta ~ 1e-11..1e-10,
  // and log(.)/h amplifies it to delta/h ~ 1e-7..1e-6, which DOUBLES under
  // h-halving instead of halving; once e1 is that small the ratio test is
  // unresolvable.  A genuinely wrong derivative leaves e1 of order |u_wrong -
  // u| >~ 1e-1, so a floor of 1e-6 * |u| keeps five orders of separation.
  double floor = 1e-6 * std::max(1.0, uA.norm());
  double r2 = (e1 <= floor) ? 0.0 : std::abs(e2 / e1 - 0.5);

  std::vector<CheckResult> out;
  out.push_back(make_check("cocycle-identity", r1, 1e-9,
                           "u(AB) != Ad(rho(B)^{-1}) u(A) + u(B) on " + ref.pres.format(A * B)));
  std::ostringstream w;
  w << "finite-difference errors " << e1 << " -> " << e2 << " under h-halving";
  out.push_back(make_check("cocycle-derivative", r2, 0.1, w.str()));
  return out;
}

CheckResult check_side_separation(const Word& A, const OrientedCurve& c,
                                  const ReferenceStructure& ref) {
  CrossingSequence seq = crossing_sequence(A, c, ref);
  if (seq.crossings.empty()) return make_check("side-separation", 0.0, 0.5);
  Vec3 P = ref.basepoint;
  Vec3 Q = Vec3(lorentz_inverse(Mat(ref.eval(A))) * P);
  auto [behind, beyond] = segment_ideal_endpoints(P, Q);
  Vec3 m = Vec3(behind.cross(beyond));
  m(2) = -m(2);  // apply eta
  m /= std::sqrt(mdot3(m, m));

  DirectedAxis base = directed_axis(ref.eval(c.core));
  int violations = 0;
  for (const Crossing& cr : seq.crossings) {
    Mat3 gi = Mat3(lorentz_inverse(Mat(ref.eval(cr.conjugator))));
    Vec3 rep_u = gi * base.rep;
    Vec3 att_u = gi * base.att;
    const Vec3& signed_rep = cr.sign > 0 ? rep_u : att_u;
    const Vec3& signed_att = cr.sign > 0 ? att_u : rep_u;
    if (!(mdot3(signed_rep, m) < 0.0 && mdot3(signed_att, m) > 0.0)) ++violations;
  }
  return make_check("side-separation", violations, 0.5,
                    "signed endpoints not separated by the segment geodesic on " +
                        ref.pres.format(A));
}

CheckResult check_weight_lipschitz(const Representation& rho, const WeightedMulticurve& mc,
                                   double delta, const ReferenceStructure& ref) {
  validate_multicurve(mc, ref);
  auto shifted = [&](double d) {
    WeightedMulticurve out = mc;
    for (WeightedComponent& comp : out.components) comp.curve.weight += d;
    return out;
  };
  Representation E = deform(rho, mc, 1.0, ref, no_validate()).rep;
  double d1 = max_gen_distance(E, deform(rho, shifted(delta), 1.0, ref, no_validate()).rep);
  double d2 = max_gen_distance(E, deform(rho, shifted(delta / 2), 1.0, ref, no_validate()).rep);
  double res;
  if (d1 < 1e-14 && d2 < 1e-14)
    res = 0.0;
  else if (d2 < 1e-14)
    res = std::numeric_limits<double>::infinity();
  else
    res = std::abs(std::log2(d1 / d2) - 1.0);
  std::ostringstream w;
  w << "distances " << d1 << " vs " << d2 << " under delta-halving (delta=" << delta << ")";
  return make_check("weight-lipschitz", res, 1.0, w.str());
}

// ---- suite ------------------------------------------------------------------

namespace {

struct SuiteFixture {
  ReferenceStructure ref;
  SurfacePresentation pres;
  std::vector<Word> singles;                    // a1 b1 a2 b2
  std::vector<std::pair<Word, Word>> disjoint;  // cross-handle pairs
};

SuiteFixture make_fixture(int genus) {
  SuiteFixture f{reference_structure(genus), SurfacePresentation(genus), {}, {}};
  f.singles = {f.pres.parse("a1"), f.pres.parse("b1"), f.pres.parse("a2"), f.pres.parse("b2")};
  f.disjoint = {{f.singles[0], f.singles[2]},
                {f.singles[1], f.singles[3]},
                {f.singles[0], f.singles[3]},
                {f.singles[1], f.singles[2]}};
  return f;
}

// Random single- or two-component multicurve from the known-simple table;
// rotations only where the commutation hypothesis is guaranteed (any curve
// for n = 3, the bending curve a1 for n = 4).
WeightedMulticurve random_multicurve(const SuiteFixture& f, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(-2.0, 2.0);
  std::uniform_real_distribution<double> wgt(0.3, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto component = [&](const Word& w) {
    WeightedComponent comp;
    comp.curve = OrientedCurve{w, wgt(rng)};
    comp.param.translation = mag(rng);
    bool rotatable = n == 3 || (n == 4 && w == f.singles[0]);
    if (rotatable) {
      comp.param.angle = mag(rng);
      if (n == 4) {
        Eigen::Vector3d p(unit(rng), unit(rng), unit(rng));
        if (p.norm() < 1e-3) p = Eigen::Vector3d(0, 0, 1);
        comp.param.plane = p.normalized();
      }
    }
    return comp;
  };
  std::uniform_int_distribution<int> pick(0, 7);
  int k = pick(rng);
  WeightedMulticurve mc;
  if (k < 4) {
    mc.components.push_back(component(f.singles[static_cast<std::size_t>(k)]));
  } else {
    const auto& [c1, c2] = f.disjoint[static_cast<std::size_t>(k - 4)];
    mc.components.push_back(component(c1));
    mc.components.push_back(component(c2));
  }
  return mc;
}

std::vector<Word> short_words(const SurfacePresentation& pres, int max_len) {
  std::vector<Word> out;
  std::vector<std::int8_t> letters;
  for (int i = 0; i < pres.generator_count(); ++i) {
    letters.push_back(static_cast<std::int8_t>(i + 1));
    letters.push_back(static_cast<std::int8_t>(-(i + 1)));
  }
  std::vector<std::vector<std::int8_t>> frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::int8_t>> next;
    for (const auto& w : frontier)
      for (std::int8_t l : letters) {
        if (!w.empty() && w.back() == -l) continue;
        auto e = w;
        e.push_back(l);
        out.push_back(Word::from_code(e));
        next.push_back(std::move(e));
      }
    frontier = std::move(next);
  }
  return out;
}

bool selected(const VerifyOptions& opts, const std::string& name) {
  if (opts.checks.empty()) return true;
  return std::find(opts.checks.begin(), opts.checks.end(), name) != opts.checks.end();
}

CheckResult worst(std::vector<CheckResult> trials) {
  CheckResult out = trials.front();
  for (const CheckResult& r : trials)
    if (r.residual > out.residual) out = r;
  return out;
}

}  // namespace

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names{
      "homomorphism",           "flow",
      "commutativity-same-curve", "commutativity-disjoint",
      "basepoint",              "trace-invariance",
      "crossing-oracle",        "reference-independence",
      "cocycle-identity",       "cocycle-derivative",
      "side-separation",        "weight-lipschitz"};
  return names;
}

std::vector<CheckResult> verify_suite(const VerifyOptions& opts) {
  SuiteFixture f = make_fixture(opts.genus);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int trials = std::max(1, opts.trials);
  std::vector<CheckResult> out;

  std::array<int, 3> dims{2, 3, 4};
  auto trial_dim = [&](int k) { return dims[static_cast<std::size_t>(k % 3)]; };

  if (selected(opts, "homomorphism")) {
    std::vector<CheckResult> rs;
    for (int k = 0; k < trials; ++k) {
      int n = trial_dim(k);
      Representation rho = bent_representation(f.ref, n, 0.2, opts.seed + static_cast<std::uint64_t>(k));
      WeightedMulticurve mc = random_multicurve(f, n, rng);
      DeformResult r = deform(rho, mc, 1.0, f.ref, no_validate());
      std::ostringstream w;
      w << "trial " << k << " (n=" << n << ")";
      rs.push_back(make_check("homomorphism", r.relator_residual, tol::hom, w.str()));
    }
    out.push_back(worst(std::move(rs)));
  }

  if (selected(opts, "flow")) {
    Representation rho = bent_representation(f.ref, opts.dimension, 0.2, opts.seed + 101);
    WeightedComponent comp;
    comp.curve = OrientedCurve{f.singles[0], 1.0};
    comp.param.translation = 0.7;
    if (opts.dimension >= 3) comp.param.angle = 0.4;
    WeightedMulticurve mc{{comp}};
    std::vector<CheckResult> rs;
    for (double s : {-0.5, 0.3, 1.1})
      for (double t : {-0.5, 0.3, 1.1}) rs.push_back(check_flow(rho, mc, s, t, f.ref));
    out.push_back(worst(std::move(rs)));
  }

  if (selected(opts, "commutativity-same-curve")) {
    std::vector<CheckResult> rs;
    for (int k = 0; k < trials; ++k) {
      Representation rho = bent_representation(f.ref, 3, 0.15, opts.seed + 200 + static_cast<std::uint64_t>(k));
      std::vector<OrientedCurve> curves{OrientedCurve{f.singles[0], 1.0}};
      CentralizerParameter twist, bend;
      twist.translation = unit(rng);
      bend.angle = unit(rng);
      CheckResult r = check_commutativity(rho, curves, {twist}, {bend}, 1.0, f.ref);
      r.name = "commutativity-same-curve";
      rs.push_back(std::move(r));
    }
    out.push_back(worst(std::move(rs)));
  }

  if (selected(opts, "commutativity-disjoint")) {
    std::vector<CheckResult> rs;
    for (int k = 0; k < trials; ++k) {
      int n = trial_dim(k);
      Representation rho = bent_representation(f.ref, n, 0.15, opts.seed + 300 + static_cast<std::uint64_t>(k));
      std::vector<OrientedCurve> curves{OrientedCurve{f.singles[0], 1.0},
                                        OrientedCurve{f.singles[2], 1.0}};
      CentralizerParameter tw1, tw2;
      tw1.translation = unit(rng);
      tw2.translation = unit(rng);
      CheckResult r = check_commutativity(rho, curves, {tw1, CentralizerParameter{}},
                                          {CentralizerParameter{}, tw2}, 1.0, f.ref);
      r.name = "commutativity-disjoint";
      rs.push_back(std::move(r));
    }
    out.push_back(worst(std::move(rs)));
  }

  if (selected(opts, "basepoint")) {
    std::vector<CheckResult> rs;
    for (int k = 0; k < trials; ++k) {
      int n = trial_dim(k);
      Representation rho = bent_representation(f.ref, n, 0.2, opts.seed + 400 + static_cast<std::uint64_t>(k));
      WeightedMulticurve mc = random_multicurve(f, n, rng);
      Eigen::Vector2d offset(0.4 * unit(rng), 0.4 * unit(rng));
      rs.push_back(check_basepoint(rho, mc, 1.0, offset, f.ref));
    }
    out.push_back(worst(std::move(rs)));
  }

  if (selected(opts, "trace-invariance")) {
    std::vector<CheckResult> rs;
    for (int k = 0; k < trials; ++k) {
      int n = trial_dim(k);
      Representation rho = bent_representation(f.ref, n, 0.2, opts.seed + 500 + static_cast<std::uint64_t>(k));
      WeightedMulticurve mc = random_multicurve(f, n, rng);
      Representation E = deform(rho, mc, 1.0, f.ref, no_validate()).rep;
      double res = 0.0;
      for (const WeightedComponent& comp : mc.components)
        for (int p = 1; p <= 5; ++p) {
          Word cp = comp.curve.core.pow(p);
          res = std::max(res, std::abs(E.eval(cp).trace() - rho.eval(cp).trace()));
        }
      std::ostringstream w;
      w << "trace drift on twisted curve, trial " << k;
      rs.push_back(make_check("trace-invariance", res, tol::hom, w.str()));
    }
    out.push_back(worst(std::move(rs)));
  }

  if (selected(opts, "crossing-oracle")) {
    std::vector<OrientedCurve> curves{OrientedCurve{f.singles[0], 1.0},
                                      OrientedCurve{f.singles[1], 1.0},
                                      OrientedCurve{f.singles[2], 1.0}};
    std::vector<Word> words = short_words(f.pres, 2);
    words.push_back(f.pres.parse("b1 a1"));
    words.push_back(f.pres.parse("a1 b1 A1 B1"));
    words.push_back(f.pres.parse("b2 a2 b1 a1"));
    out.push_back(check_crossing_oracle(words, curves, f.ref, 7));
  }

  if (selected(opts, "reference-independence")) {
    ReferenceStructure ref2 = twisted_reference(f.ref, 0.2);
    std::vector<OrientedCurve> curves{OrientedCurve{f.singles[0], 1.0},
                                      OrientedCurve{f.singles[1], 1.0},
                                      OrientedCurve{f.singles[2], 1.0}};
    std::vector<Word> words = short_words(f.pres, 2);
    words.push_back(f.pres.parse("b1 a1 b2"));
    out.push_back(check_reference_independence(words, curves, f.ref, ref2));
  }

  if (selected(opts, "cocycle-identity") || selected(opts, "cocycle-derivative")) {
    std::vector<CheckResult> id, dv;
    std::vector<Word> pool = short_words(f.pres, 2);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int k = 0; k < trials; ++k) {
      int n = trial_dim(k);
      Representation rho = bent_representation(f.ref, n, 0.2, opts.seed + 600 + static_cast<std::uint64_t>(k));
      WeightedMulticurve mc = random_multicurve(f, n, rng);
      Word A = pool[pick(rng)];
      Word B = pool[pick(rng)];
      if (A.empty() || B.empty() || (A * B).empty()) continue;
      std::vector<CheckResult> pair = check_cocycle(rho, mc, A, B, 1e-4, f.ref);
      id.push_back(pair[0]);
      dv.push_back(pair[1]);
    }
    if (selected(opts, "cocycle-identity") && !id.empty()) out.push_back(worst(std::move(id)));
    if (selected(opts, "cocycle-derivative") && !dv.empty()) out.push_back(worst(std::move(dv)));
  }

  if (selected(opts, "side-separation")) {
    std::vector<CheckResult> rs;
    std::vector<Word> words = short_words(f.pres, 3);
    for (const Word& A : words)
      for (const Word& curve : {f.singles[0], f.singles[1], f.singles[2]})
        rs.push_back(check_side_separation(A, OrientedCurve{curve, 1.0}, f.ref));
    out.push_back(worst(std::move(rs)));
  }

  if (selected(opts, "weight-lipschitz")) {
    std::vector<CheckResult> rs;
    for (int k = 0; k < trials; ++k) {
      int n = trial_dim(k);
      Representation rho = bent_representation(f.ref, n, 0.2, opts.seed + 700 + static_cast<std::uint64_t>(k));
      WeightedMulticurve mc = random_multicurve(f, n, rng);
      rs.push_back(check_weight_lipschitz(rho, mc, 0.05, f.ref));
    }
    out.push_back(worst(std::move(rs)));
  }

  return out;
}

}  // namespace qb
