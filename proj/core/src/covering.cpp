#include "quakebend/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "quakebend/errors.hpp"

namespace qb {

namespace {

double mdot3(const Vec3& a, const Vec3& b) { return a(0) * b(0) + a(1) * b(1) - a(2) * b(2); }

Vec3 eta3(const Vec3& v) { return Vec3(v(0), v(1), -v(2)); }

Mat3 inv3(const Mat3& M) {
  Mat3 out = M.transpose();
  out.row(2) *= -1.0;
  out.col(2) *= -1.0;
  return out;
}

Vec3 normalize_point(Vec3 P) {
  double q = -mdot3(P, P);
  // For translates far from the basepoint the Minkowski square is a
  // difference of numbers of order |P|^2 and carries absolute cancellation
  // error ~eps*|P|^2.  When the measured deviation from 1 is below that
  // noise, dividing by sqrt(q) would corrupt the coordinates instead of
  // removing drift, so leave the point alone; only reject it when q is
  // negative beyond what cancellation can explain.
  double noise = 64.0 * std::numeric_limits<double>::epsilon() * P.squaredNorm();
  if (P(2) <= 0 || q <= -noise) fail_config("expected a point of the upper hyperboloid sheet");
  if (q <= 0 || std::abs(q - 1.0) <= noise) return P;
  return P / std::sqrt(q);
}

// ---- regular 4g-gon construction, done in long double -------------------

using LMat = Eigen::Matrix<long double, 3, 3>;
using LVec = Eigen::Matrix<long double, 3, 1>;

long double lmdot(const LVec& a, const LVec& b) {
  return a(0) * b(0) + a(1) * b(1) - a(2) * b(2);
}

LMat linv(const LMat& M) {
  LMat out = M.transpose();
  out.row(2) *= -1.0L;
  out.col(2) *= -1.0L;
  return out;
}

// Columns [u, eta*(P x u), P]: positively oriented Lorentz frame at P with
// first axis pointing toward Q.
LMat lframe(const LVec& P, const LVec& Q) {
  LVec u = Q + lmdot(Q, P) * P;
  u /= std::sqrt(lmdot(u, u));
  LVec w = P.cross(u);
  w(2) = -w(2);
  LMat F;
  F.col(0) = u;
  F.col(1) = w;
  F.col(2) = P;
  return F;
}

// Unique orientation-preserving isometry with P -> P2, Q -> Q2 (congruent
// point pairs).
LMat lpair(const LVec& P, const LVec& Q, const LVec& P2, const LVec& Q2) {
  return lframe(P2, Q2) * linv(lframe(P, Q));
}

}  // namespace

Mat3 ReferenceStructure::eval(const Word& w) const {
  Mat3 out = Mat3::Identity();
  for (int i = 0; i < w.size(); ++i) {
    auto [idx, sign] = w.letter(i);
    if (idx >= static_cast<int>(gens.size())) fail_config("word outside the presentation");
    out *= sign > 0 ? gens[static_cast<std::size_t>(idx)]
                    : inv3(gens[static_cast<std::size_t>(idx)]);
  }
  if (w.size() > 32) {
    Mat fixed = eta_orthonormalize(Mat(out));
    out = fixed;
  }
  return out;
}

ReferenceStructure ReferenceStructure::with_basepoint(const Vec3& x) const {
  ReferenceStructure out = *this;
  out.basepoint = normalize_point(x);
  return out;
}

ReferenceStructure reference_structure(int genus) {
  SurfacePresentation pres(genus);
  int N = 4 * genus;
  long double R = std::acosh(1.0L / std::pow(std::tan(static_cast<long double>(M_PI) / N), 2.0L));
  std::vector<LVec> V(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    long double th = 2.0L * static_cast<long double>(M_PI) * k / N;
    V[static_cast<std::size_t>(k)] =
        LVec(std::sinh(R) * std::cos(th), std::sinh(R) * std::sin(th), std::cosh(R));
  }
  auto vx = [&](int k) { return V[static_cast<std::size_t>(((k % N) + N) % N)]; };

  // Edges E_k = [V_k, V_{k+1}] read the relator a1 b1 a1^{-1} b1^{-1} a2 ...
  // around the polygon.  a pairs E_{4i+2} -> E_{4i} reversing the boundary
  // orientation; b is the inverse of the matching pairing one step over.
  std::vector<Mat3> gens(static_cast<std::size_t>(2 * genus));
  for (int i = 0; i < genus; ++i) {
    LMat a = lpair(vx(4 * i + 2), vx(4 * i + 3), vx(4 * i + 1), vx(4 * i));
    LMat b = linv(lpair(vx(4 * i + 3), vx(4 * i + 4), vx(4 * i + 2), vx(4 * i + 1)));
    gens[static_cast<std::size_t>(2 * i)] = a.cast<double>();
    gens[static_cast<std::size_t>(2 * i + 1)] = b.cast<double>();
  }
  return reference_structure(genus, gens, Vec3(0, 0, 1));
}

ReferenceStructure reference_structure(int genus, const std::vector<Mat3>& generators,
                                       const Vec3& basepoint) {
  SurfacePresentation pres(genus);
  if (static_cast<int>(generators.size()) != 2 * genus)
    fail_config("reference_structure: expected 2*genus generator matrices");
  ReferenceStructure ref{pres, {}, normalize_point(basepoint), 0.0, 0.0};
  ref.gens.reserve(generators.size());
  double systole = std::numeric_limits<double>::infinity();
  for (const Mat3& g : generators) {
    Mat fixed = eta_orthonormalize(Mat(g));
    if (!is_lorentz(fixed)) fail_config("reference_structure: generator not in SO+(2,1)");
    if (classify(fixed) != ElementType::loxodromic)
      fail_config("reference_structure: generator is not loxodromic");
    systole = std::min(systole, translation_length(fixed));
    ref.gens.push_back(Mat3(fixed));
  }
  Mat3 rel = ref.eval(pres.relator());
  if ((rel - Mat3::Identity()).norm() > tol::hom)
    fail_config("reference_structure: relator is not satisfied");
  ref.systole_estimate = systole;
  ref.collar = std::asinh(1.0 / std::sinh(systole / 2.0));
  return ref;
}

std::vector<Eigen::Vector2d> basepoint_offsets() {
  return {{0.0131, 0.0071},   {-0.0173, 0.0113}, {0.0217, -0.0151}, {-0.0263, -0.0197},
          {0.0311, 0.0239},   {-0.0359, 0.0293}, {0.0409, -0.0347}, {-0.0457, -0.0401}};
}

Vec3 offset_basepoint(const Vec3& base, const Eigen::Vector2d& offset) {
  Vec3 P = normalize_point(base);
  Vec3 raw(offset(0), offset(1), 0.0);
  Vec3 T = raw + mdot3(raw, P) * P;  // tangent component at P
  double r2 = mdot3(T, T);
  if (r2 <= 1e-30) return P;
  double r = std::sqrt(r2);
  return std::cosh(r) * P + std::sinh(r) / r * T;
}

DirectedAxis directed_axis(const Mat3& M) {
  auto [rep, att] = fixed_points(Mat(M));
  DirectedAxis ax;
  ax.rep = Vec3(rep.v);
  ax.att = Vec3(att.v);
  Vec3 m = eta3(ax.rep.cross(ax.att));
  double q = mdot3(m, m);
  if (q <= 0) fail_degenerate("directed_axis: degenerate pole");
  ax.pole = m / std::sqrt(q);
  return ax;
}

namespace {

// ---- segment bookkeeping --------------------------------------------------

struct Segment {
  Vec3 P, Q;   // hyperboloid points
  Vec3 U;      // unit tangent at P toward Q
  double len = 0.0;
};

Segment make_segment(const Vec3& Praw, const Vec3& Qraw) {
  Segment s;
  s.P = normalize_point(Praw);
  s.Q = normalize_point(Qraw);
  double c = -mdot3(s.P, s.Q);
  s.len = std::acosh(std::max(1.0, c));
  if (s.len > 1e-12) {
    Vec3 w = s.Q + mdot3(s.Q, s.P) * s.P;
    s.U = w / std::sqrt(mdot3(w, w));
  } else {
    s.U = Vec3::Zero();
  }
  return s;
}

struct PoleHit {
  bool crossing = false;
  int sign = 0;
  double position = 0.0;  // in (0,1) when crossing
  double distance = 0.0;  // segment-to-line distance otherwise
};

// Crossing/distance of the segment against the geodesic with unit pole m.
PoleHit hit_pole(const Segment& seg, const Vec3& m, double tau_sep) {
  PoleHit h;
  double f0 = mdot3(seg.P, m);
  double f1 = mdot3(seg.Q, m);
  if (std::abs(f0) <= tau_sep || std::abs(f1) <= tau_sep)
    fail_degenerate("segment endpoint lies on a lift of the curve");
  if (f0 * f1 < 0.0) {
    double b = mdot3(seg.U, m);
    double x = -f0 / b;
    x = std::clamp(x, -1.0 + 1e-16, 1.0 - 1e-16);
    h.crossing = true;
    h.sign = f0 > 0 ? +1 : -1;
    h.position = std::atanh(x) / seg.len;
    return h;
  }
  double best = std::min(std::abs(f0), std::abs(f1));
  if (seg.len > 1e-12) {
    double b = mdot3(seg.U, m);
    if (std::abs(b) < std::abs(f0)) {
      double t0 = std::atanh(-b / f0);
      if (t0 > 0.0 && t0 < seg.len) best = std::min(best, std::sqrt(f0 * f0 - b * b));
    }
  }
  if (best <= tau_sep) fail_degenerate("segment tangent to a lift of the curve");
  h.distance = std::asinh(best);
  return h;
}

// ---- geometric dedup of lifts --------------------------------------------
// Key on asinh of the pole components: relative gaps between distinct lifts
// stay O(1) there while floating-point duplicates stay far below cell size.

class LiftIndex {
 public:
  // returns (id, created)
  std::pair<int, bool> find_or_insert(const Vec3& m) {
    std::array<long long, 3> cell;
    for (int i = 0; i < 3; ++i) cell[static_cast<std::size_t>(i)] = llround(std::asinh(m(i)) / kCell);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(key(cell[0] + dx, cell[1] + dy, cell[2] + dz));
          if (it == cells_.end()) continue;
          for (int id : it->second)
            if (same(poles_[static_cast<std::size_t>(id)], m)) return {id, false};
        }
    int id = static_cast<int>(poles_.size());
    poles_.push_back(m);
    cells_[key(cell[0], cell[1], cell[2])].push_back(id);
    return {id, true};
  }

  // Identity tolerance sits between the two scales at play: products along
  // deep enumeration paths drift the pole of one geometric lift by up to
  // ~1e-6 (error amplified by e^{generator length} per multiply), while
  // poles of distinct lifts differ by O(collar) >= 0.1.
  static bool same(const Vec3& a, const Vec3& b) {
    double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    return (a - b).cwiseAbs().maxCoeff() <= 1e-5 * scale;
  }

 private:
  static constexpr double kCell = 1e-4;
  static std::uint64_t key(long long x, long long y, long long z) {
    std::uint64_t h = 1469598103934665603ull;
    for (long long v : {x, y, z}) {
      std::uint64_t u = static_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) {
        h ^= (u >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    }
    return h;
  }
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
  std::vector<Vec3> poles_;
};

// ---- BFS over cosets ------------------------------------------------------

struct BfsParams {
  double margin = 0.0;
  double tau_sep = tol::sep;
  std::size_t max_cosets = 0;
  std::vector<Vec3> excluded;  // poles reported as no-ops (self lifts)
};

struct CosetRec {
  Vec3 pole;
  Word rep;
  int depth = 0;
  PoleHit hit;
  bool excluded = false;
  bool expanded = false;
};

struct BfsOutcome {
  std::vector<Crossing> crossings;
  EnumerationCertificate cert;
};

BfsOutcome bfs_crossings(const Segment& seg, const OrientedCurve& curve,
                         const ReferenceStructure& ref, const BfsParams& par) {
  Mat3 core = ref.eval(curve.core);
  if (classify(Mat(core)) != ElementType::loxodromic)
    fail_config("curve core must be loxodromic in the reference structure");
  DirectedAxis base = directed_axis(core);

  int ng = ref.pres.generator_count();
  std::vector<Mat3> step(static_cast<std::size_t>(2 * ng));
  std::vector<std::int8_t> letter(static_cast<std::size_t>(2 * ng));
  for (int i = 0; i < ng; ++i) {
    // child coset u*s has pole rho(s)^{-1} * pole(u)
    step[static_cast<std::size_t>(2 * i)] = inv3(ref.gens[static_cast<std::size_t>(i)]);
    letter[static_cast<std::size_t>(2 * i)] = static_cast<std::int8_t>(i + 1);
    step[static_cast<std::size_t>(2 * i + 1)] = ref.gens[static_cast<std::size_t>(i)];
    letter[static_cast<std::size_t>(2 * i + 1)] = static_cast<std::int8_t>(-(i + 1));
  }

  LiftIndex index;
  std::vector<CosetRec> recs;
  auto is_excluded = [&](const Vec3& m) {
    for (const Vec3& e : par.excluded)
      if (LiftIndex::same(m, e) || LiftIndex::same(m, Vec3(-e))) return true;
    return false;
  };

  auto [id0, created0] = index.find_or_insert(base.pole);
  (void)created0;
  recs.push_back(CosetRec{base.pole, Word(), 0, {}, is_excluded(base.pole), false});
  std::vector<int> current{id0};

  BfsOutcome out;
  out.cert.margin = par.margin;
  int depth = 0;
  while (!current.empty()) {
    // evaluate this layer
    for (int id : current) {
      CosetRec& r = recs[static_cast<std::size_t>(id)];
      if (r.excluded) {
        r.hit.crossing = false;
        r.hit.distance = 0.0;
        continue;
      }
      r.hit = hit_pole(seg, r.pole, par.tau_sep);
      if (!r.hit.crossing)
        out.cert.min_rejected_distance = std::min(out.cert.min_rejected_distance, r.hit.distance);
    }
    // expand within the margin
    std::vector<int> next;
    for (int id : current) {
      CosetRec& r = recs[static_cast<std::size_t>(id)];
      double dist = r.hit.crossing ? 0.0 : r.hit.distance;
      if (dist > par.margin) {
        out.cert.min_frontier_distance = std::min(out.cert.min_frontier_distance, dist);
        continue;
      }
      r.expanded = true;
      out.cert.expanded++;
      // push_back below may reallocate recs; keep copies of the parent fields
      const Vec3 parent_pole = r.pole;
      const Word parent_rep = r.rep;
      for (std::size_t s = 0; s < step.size(); ++s) {
        Vec3 child = step[s] * parent_pole;
        auto [cid, created] = index.find_or_insert(child);
        Word crep = parent_rep * Word::generator(std::abs(letter[s]) - 1, letter[s] > 0 ? +1 : -1);
        if (created) {
          if (recs.size() >= par.max_cosets)
            fail_degenerate("coset enumeration exceeded its budget; margin too large?");
          recs.push_back(CosetRec{child, std::move(crep), depth + 1, {}, is_excluded(child), false});
          next.push_back(cid);
        } else {
          CosetRec& c = recs[static_cast<std::size_t>(cid)];
          if (c.depth == depth + 1 && !c.expanded && crep < c.rep) c.rep = std::move(crep);
        }
      }
    }
    current = std::move(next);
    ++depth;
  }

  out.cert.enumerated = recs.size();
  for (const CosetRec& r : recs)
    if (r.hit.crossing && !r.excluded)
      out.crossings.push_back(Crossing{r.rep, r.hit.sign, r.hit.position});
  std::sort(out.crossings.begin(), out.crossings.end(), [](const Crossing& a, const Crossing& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.conjugator < b.conjugator;
  });
  return out;
}

double auto_margin(const Segment& seg, const ReferenceStructure& ref) {
  return seg.len / 2.0 + ref.collar + 2.0;
}

void check_curve(const OrientedCurve& c, const ReferenceStructure& ref) {
  if (c.core.empty()) fail_config("curve core must be nonempty");
  if (!ref.pres.contains(c.core)) fail_config("curve core outside the presentation");
  if (c.core.cyclic_reduce().core != c.core)
    fail_config("curve core must be cyclically reduced");
  if (!(c.weight > 0.0)) fail_config("curve weight must be positive");
}

}  // namespace

CrossingSequence crossing_segment(const Vec3& P, const Vec3& Q, const OrientedCurve& c,
                                  const ReferenceStructure& ref, const CoveringOptions& opts) {
  check_curve(c, ref);
  Segment seg = make_segment(P, Q);
  CrossingSequence out;
  if (seg.len <= 1e-12) return out;  // trivial deck action
  BfsParams par;
  par.margin = opts.margin_override > 0 ? opts.margin_override : auto_margin(seg, ref);
  par.tau_sep = opts.tau_sep;
  par.max_cosets = opts.max_cosets;
  BfsOutcome res = bfs_crossings(seg, c, ref, par);
  out.crossings = std::move(res.crossings);
  out.certificate = res.cert;
  return out;
}

CrossingSequence crossing_sequence(const Word& A, const OrientedCurve& c,
                                   const ReferenceStructure& ref, const CoveringOptions& opts) {
  if (!ref.pres.contains(A)) fail_config("element word outside the presentation");
  Vec3 end = inv3(ref.eval(A)) * ref.basepoint;  // basepoint . A
  return crossing_segment(ref.basepoint, end, c, ref, opts);
}

int intersection_number(const OrientedCurve& c1, const OrientedCurve& c2,
                        const ReferenceStructure& ref) {
  check_curve(c1, ref);
  check_curve(c2, ref);
  Mat3 M1 = ref.eval(c1.core);
  if (classify(Mat(M1)) != ElementType::loxodromic)
    fail_config("curve core must be loxodromic in the reference structure");
  DirectedAxis ax = directed_axis(M1);

  // period start: axis point nearest the basepoint, with a deterministic
  // shift ladder to escape tangency degeneracies
  double r = std::log(std::max(1e-300, mdot3(ax.rep, ref.basepoint) / mdot3(ax.att, ref.basepoint)));
  double denom = std::sqrt(-2.0 * mdot3(ax.rep, ax.att));
  for (int attempt = 0; attempt < 8; ++attempt) {
    double s = r / 2.0 + 0.37 * attempt;
    Vec3 Z0 = (std::exp(-s) * ax.rep + std::exp(s) * ax.att) / denom;
    Vec3 Z1 = M1 * Z0;
    try {
      CoveringOptions opts;
      Segment seg = make_segment(Z0, Z1);
      BfsParams par;
      par.margin = auto_margin(seg, ref);
      par.tau_sep = tol::sep;
      par.max_cosets = opts.max_cosets;
      par.excluded.push_back(ax.pole);
      BfsOutcome res = bfs_crossings(seg, c2, ref, par);
      int count = 0;
      for (const Crossing& cr : res.crossings)
        if (cr.position >= 0.0 && cr.position < 1.0) ++count;
      return count;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degeneracy || attempt == 7) throw;
    }
  }
  fail_degenerate("intersection_number: no non-degenerate period start found");
}

std::vector<Crossing> crossings_from_lifts(const std::vector<OracleLift>& lifts, const Vec3& P,
                                           const Vec3& Q, double tau_sep) {
  Segment seg = make_segment(P, Q);
  std::vector<Crossing> out;
  if (seg.len <= 1e-12) return out;
  for (const OracleLift& l : lifts) {
    PoleHit h = hit_pole(seg, l.pole, tau_sep);
    if (h.crossing) out.push_back(Crossing{l.conjugator, h.sign, h.position});
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.conjugator < b.conjugator;
  });
  return out;
}

namespace {

// Enumerate every reduced conjugator word up to the radius by prepending
// letters (so the pole transforms incrementally), handing each lift to sink.
template <typename Sink>
void enumerate_conjugators(const ReferenceStructure& ref, const Vec3& base_pole, int radius,
                           Sink&& sink) {
  int ng = ref.pres.generator_count();
  std::vector<Mat3> mats(static_cast<std::size_t>(2 * ng));
  std::vector<std::int8_t> letter(static_cast<std::size_t>(2 * ng));
  for (int i = 0; i < ng; ++i) {
    // v' = s * v transforms the pole rho(v) m0 by rho(s); conjugator is v^{-1}
    mats[static_cast<std::size_t>(2 * i)] = ref.gens[static_cast<std::size_t>(i)];
    letter[static_cast<std::size_t>(2 * i)] = static_cast<std::int8_t>(i + 1);
    mats[static_cast<std::size_t>(2 * i + 1)] = inv3(ref.gens[static_cast<std::size_t>(i)]);
    letter[static_cast<std::size_t>(2 * i + 1)] = static_cast<std::int8_t>(-(i + 1));
  }
  std::vector<std::int8_t> stackword;
  auto rec = [&](auto&& self, const Vec3& pole, int depth) -> void {
    sink(pole, stackword);
    if (depth == radius) return;
    for (std::size_t s = 0; s < mats.size(); ++s) {
      if (!stackword.empty() && stackword.back() == -letter[s]) continue;  // stay reduced
      stackword.push_back(letter[s]);
      self(self, Vec3(mats[s] * pole), depth + 1);
      stackword.pop_back();
    }
  };
  rec(rec, base_pole, 0);
}

Word conjugator_from_prefix(const std::vector<std::int8_t>& prefix_letters) {
  // prefix holds v read left-to-right with letters prepended, i.e. the word
  // v = l_k ... l_1 as stored; the conjugator is v^{-1}
  std::vector<std::int8_t> code;
  code.reserve(prefix_letters.size());
  for (std::int8_t c : prefix_letters) code.push_back(static_cast<std::int8_t>(-c));
  return Word::from_code(std::move(code));
}

}  // namespace

std::vector<Crossing> oracle_crossings(const Word& A, const OrientedCurve& c,
                                       const ReferenceStructure& ref, int radius, double tau_sep) {
  check_curve(c, ref);
  Vec3 end = inv3(ref.eval(A)) * ref.basepoint;
  Segment seg = make_segment(ref.basepoint, end);
  std::vector<Crossing> out;
  if (seg.len <= 1e-12) return out;
  DirectedAxis base = directed_axis(ref.eval(c.core));

  LiftIndex index;
  std::vector<Crossing> hits;
  std::vector<int> ids;
  enumerate_conjugators(ref, base.pole, radius, [&](const Vec3& pole, const auto& prefix) {
    PoleHit h = hit_pole(seg, pole, tau_sep);
    if (!h.crossing) return;
    auto [id, created] = index.find_or_insert(pole);
    Word conj = conjugator_from_prefix(prefix);
    if (created) {
      hits.push_back(Crossing{std::move(conj), h.sign, h.position});
      ids.push_back(id);
    } else {
      // a shorter spelling also means a shorter matrix product behind the
      // pole, so refresh the recorded crossing from this cleaner visit
      for (std::size_t k = 0; k < ids.size(); ++k)
        if (ids[k] == id && conj < hits[k].conjugator)
          hits[k] = Crossing{std::move(conj), h.sign, h.position};
    }
  });
  std::sort(hits.begin(), hits.end(), [](const Crossing& a, const Crossing& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.conjugator < b.conjugator;
  });
  return hits;
}

std::vector<OracleLift> oracle_lifts(const OrientedCurve& c, const ReferenceStructure& ref,
                                     int radius, double keep_distance) {
  check_curve(c, ref);
  DirectedAxis base = directed_axis(ref.eval(c.core));
  LiftIndex index;
  std::vector<OracleLift> lifts;
  std::vector<int> ids;
  enumerate_conjugators(ref, base.pole, radius, [&](const Vec3& pole, const auto& prefix) {
    double dist = std::asinh(std::abs(mdot3(ref.basepoint, pole)));
    if (dist > keep_distance) return;
    auto [id, created] = index.find_or_insert(pole);
    Word conj = conjugator_from_prefix(prefix);
    if (created) {
      lifts.push_back(OracleLift{pole, std::move(conj), dist});
      ids.push_back(id);
    } else {
      // refresh the pole and distance too: the shorter spelling carries less
      // accumulated rounding in its matrix product
      for (std::size_t k = 0; k < ids.size(); ++k)
        if (ids[k] == id && conj < lifts[k].conjugator)
          lifts[k] = OracleLift{pole, std::move(conj), dist};
    }
  });
  std::sort(lifts.begin(), lifts.end(), [](const OracleLift& a, const OracleLift& b) {
    if (a.basepoint_distance != b.basepoint_distance)
      return a.basepoint_distance < b.basepoint_distance;
    return a.conjugator < b.conjugator;
  });
  return lifts;
}

bool coset_equivalent(const Word& u1, const Word& u2, const Word& core,
                      const ReferenceStructure& ref) {
  Word w = u1 * u2.inverse();
  Mat3 M = ref.eval(w);
  if ((M - Mat3::Identity()).norm() <= 1e-7) return true;
  double lw = translation_length(Mat(M));
  double lc = translation_length(Mat(ref.eval(core)));
  if (lc <= 0) fail_config("coset_equivalent: core is not loxodromic");
  double ratio = lw / lc;
  int k = static_cast<int>(std::lround(ratio));
  if (k == 0 || std::abs(ratio - k) > 1e-6) return false;
  for (int sk : {k, -k}) {
    Mat3 C = ref.eval(core.pow(sk));
    if ((M - C).norm() <= 1e-6 * std::max(1.0, C.norm())) return true;
  }
  return false;
}

std::pair<Vec3, Vec3> segment_ideal_endpoints(const Vec3& P, const Vec3& Q) {
  Segment seg = make_segment(P, Q);
  if (seg.len <= 1e-12) fail_degenerate("segment_ideal_endpoints: zero-length segment");
  Vec3 fwd = seg.P + seg.U;
  Vec3 back = seg.P - seg.U;
  return {back / back(2), fwd / fwd(2)};
}

}  // namespace qb
