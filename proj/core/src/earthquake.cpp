#include "quakebend/earthquake.hpp"

#include <algorithm>
#include <cmath>

#include "quakebend/errors.hpp"

namespace qb {

Word dehn_twist_word(const Word& w, const OrientedCurve& d, int power,
                     const ReferenceStructure& ref) {
  if (d.core.size() != 1) fail_config("dehn_twist_word: twisting curve must be a generator curve");
  auto [idx, sign] = d.core.letter(0);
  if (sign < 0) fail_config("dehn_twist_word: twisting curve must be a positive generator");
  if (idx >= ref.pres.generator_count()) fail_config("dehn_twist_word: curve outside presentation");
  if (!ref.pres.contains(w)) fail_config("dehn_twist_word: word outside presentation");
  if (power == 0) return w;

  // the only generator meeting a_i (resp. b_i) once is its handle partner
  bool is_a = idx % 2 == 0;
  int partner = is_a ? idx + 1 : idx - 1;
  Word image = Word::generator(partner) * d.core.pow(power);

  std::vector<std::int8_t> out;
  for (int i = 0; i < w.size(); ++i) {
    auto [gi, gs] = w.letter(i);
    if (gi != partner) {
      out.push_back(static_cast<std::int8_t>(gs * (gi + 1)));
      continue;
    }
    const Word& rep = gs > 0 ? image : image.inverse();
    for (std::int8_t c : rep.code()) out.push_back(c);
  }
  return Word::from_code(std::move(out));
}

std::vector<WeightedMulticurve> build_sequence(const LaminationApproximation& la,
                                               const ReferenceStructure& ref) {
  std::vector<WeightedMulticurve> seq;
  if (la.kind == LaminationApproximation::Kind::explicit_list) {
    seq = la.steps;
  } else {
    if (la.count <= 0) fail_config("twist recipe needs a positive step count");
    if (!ref.pres.contains(la.seed_curve) || la.seed_curve.empty())
      fail_config("twist recipe: invalid seed curve");
    OrientedCurve d{la.twist_curve, 1.0};
    for (int k = 1; k <= la.count; ++k) {
      Word curve = dehn_twist_word(la.seed_curve, d, k, ref);
      double len = translation_length(Mat(ref.eval(curve)));
      if (len <= 0) fail_degenerate("twist recipe produced a non-loxodromic curve");
      WeightedComponent comp;
      comp.curve = OrientedCurve{curve, 1.0 / len};
      comp.param.translation = 1.0;
      seq.push_back(WeightedMulticurve{{comp}});
    }
  }
  if (seq.empty()) fail_config("lamination approximation expands to an empty sequence");
  for (const WeightedMulticurve& mc : seq) validate_multicurve(mc, ref);
  return seq;
}

ConvergenceReport earthquake_limit(const Representation& rho, const LaminationApproximation& la,
                                   double tol, const ReferenceStructure& ref,
                                   const DeformOptions& opts) {
  if (!(tol > 0)) fail_config("earthquake tolerance must be positive");
  ConvergenceReport report;
  report.sequence = build_sequence(la, ref);

  DeformOptions step_opts = opts;
  step_opts.validate = false;  // build_sequence validated every step
  std::vector<Representation> reps;
  reps.reserve(report.sequence.size());
  for (const WeightedMulticurve& mc : report.sequence) {
    DeformResult r = deform(rho, mc, 1.0, ref, step_opts);
    report.relator_residuals.push_back(r.relator_residual);
    reps.push_back(std::move(r.rep));
  }

  for (std::size_t k = 0; k + 1 < reps.size(); ++k) {
    StepDistance sd;
    sd.step = static_cast<int>(k);
    for (int g = 0; g < rho.pres.generator_count(); ++g) {
      GroupDistance gd = group_distance(reps[k].gens[static_cast<std::size_t>(g)],
                                        reps[k + 1].gens[static_cast<std::size_t>(g)]);
      sd.distance = std::max(sd.distance, gd.value);
      sd.log_branch = sd.log_branch && gd.log_branch;
    }
    report.distances.push_back(sd);
  }

  const auto& d = report.distances;
  bool diverging = false;
  for (std::size_t k = 0; k + 2 < d.size(); ++k)
    if (d[k].distance > 0 && d[k + 2].distance > 10.0 * d[k].distance) diverging = true;

  bool tail_ok = !d.empty() && d.back().distance < tol;
  std::size_t lo = d.size() > 3 ? d.size() - 3 : 0;
  for (std::size_t k = lo; tail_ok && k + 1 < d.size(); ++k)
    if (d[k + 1].distance > d[k].distance) tail_ok = false;

  if (diverging)
    report.verdict = Verdict::diverging;
  else if (tail_ok)
    report.verdict = Verdict::converged;
  else
    report.verdict = Verdict::budget_exhausted;
  report.final = std::move(reps.back());
  return report;
}

}  // namespace qb
