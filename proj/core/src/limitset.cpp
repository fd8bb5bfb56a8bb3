#include "quakebend/limitset.hpp"

#include <cmath>
#include <unordered_map>

#include <Eigen/SVD>

#include "quakebend/errors.hpp"
#include "quakebend/report.hpp"

namespace qb {

namespace {

constexpr double kAngularTol = 1e-7;
constexpr std::size_t kWordBudget = 4'000'000;

// Grid dedup at the angular tolerance: cell size = tolerance, so any earlier
// point within tolerance (max-norm) sits in one of the 3^n neighbor cells.
class SphereIndex {
 public:
  explicit SphereIndex(int dim) : n_(dim) {}

  bool insert(const Eigen::VectorXd& p) {
    std::vector<long long> base(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) base[static_cast<std::size_t>(i)] = llround(p[i] / kAngularTol);
    int combos = 1;
    for (int i = 0; i < n_; ++i) combos *= 3;
    std::vector<long long> cell(static_cast<std::size_t>(n_));
    for (int c = 0; c < combos; ++c) {
      int t = c;
      for (int i = 0; i < n_; ++i) {
        cell[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + t % 3 - 1;
        t /= 3;
      }
      auto it = cells_.find(key(cell));
      if (it == cells_.end()) continue;
      for (int idx : it->second)
        if ((points_[static_cast<std::size_t>(idx)] - p).cwiseAbs().maxCoeff() <= kAngularTol)
          return false;
    }
    points_.push_back(p);
    cells_[key(base)].push_back(static_cast<int>(points_.size()) - 1);
    return true;
  }

 private:
  static std::uint64_t key(const std::vector<long long>& cell) {
    std::uint64_t h = 1469598103934665603ull;
    for (long long c : cell) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return h;
  }

  int n_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
  std::vector<Eigen::VectorXd> points_;
};

struct CloudBuilder {
  const std::vector<Mat>* images = nullptr;  // 4g letter images, codes interleaved
  SphereIndex* index = nullptr;
  LimitSetCloud* cloud = nullptr;

  const Mat& image(int code) const {
    int g = std::abs(code) - 1;
    return (*images)[static_cast<std::size_t>(2 * g + (code < 0 ? 1 : 0))];
  }

  void take(const Mat& M) const {
    if (classify(M) != ElementType::loxodromic) return;
    auto [rep, att] = fixed_points(M);
    for (const BoundaryPoint& bp : {rep, att}) {
      Eigen::VectorXd s = bp.sphere();
      if (index->insert(s)) cloud->points.push_back(s);
    }
  }

  void dfs(int letters_left, int last_code, const Mat& M, int gens) {
    for (int g = 1; g <= gens; ++g) {
      for (int code : {g, -g}) {
        if (code == -last_code) continue;
        if (++cloud->words_examined > kWordBudget)
          fail_config("limitset depth too large: reduced-word budget of 4000000 exceeded");
        Mat M2 = M * image(code);
        take(M2);
        if (letters_left > 1) dfs(letters_left - 1, code, M2, gens);
      }
    }
  }
};

}  // namespace

LimitSetCloud limitset_cloud(const Representation& rho, int depth) {
  if (depth < 0) fail_config("limitset depth must be >= 0");
  LimitSetCloud cloud;
  cloud.n = rho.n;
  if (depth == 0) return cloud;

  const int gens = rho.pres.generator_count();
  std::vector<Mat> images;
  for (int g = 0; g < gens; ++g) {
    images.push_back(rho.gens[static_cast<std::size_t>(g)]);
    images.push_back(lorentz_inverse(rho.gens[static_cast<std::size_t>(g)]));
  }

  SphereIndex index(rho.n);
  CloudBuilder builder{&images, &index, &cloud};
  Mat id = Mat::Identity(rho.n + 1, rho.n + 1);
  builder.dfs(depth, 0, id, gens);
  return cloud;
}

CircleFit fit_circle(const LimitSetCloud& cloud) {
  CircleFit fit;
  const std::size_t m = cloud.points.size();
  if (m < 8) return fit;
  const int n = cloud.n;

  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
  for (const auto& p : cloud.points) centroid += p;
  centroid /= static_cast<double>(m);

  Eigen::MatrixXd D(static_cast<Eigen::Index>(m), n);
  for (std::size_t i = 0; i < m; ++i) D.row(static_cast<Eigen::Index>(i)) = (cloud.points[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinV);
  Eigen::VectorXd e1 = svd.matrixV().col(0);
  Eigen::VectorXd e2 = svd.matrixV().col(1);

  // Algebraic circle fit in plane coordinates (u, v):
  // minimize || 2u a + 2v b + d - (u^2 + v^2) ||.
  Eigen::MatrixXd A(static_cast<Eigen::Index>(m), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd q = cloud.points[i] - centroid;
    double u = e1.dot(q), v = e2.dot(q);
    A(static_cast<Eigen::Index>(i), 0) = 2 * u;
    A(static_cast<Eigen::Index>(i), 1) = 2 * v;
    A(static_cast<Eigen::Index>(i), 2) = 1.0;
    rhs[static_cast<Eigen::Index>(i)] = u * u + v * v;
  }
  Eigen::Vector3d sol = (A.transpose() * A).ldlt().solve(A.transpose() * rhs);
  const double ca = sol[0], cb = sol[1];
  const double r2 = sol[2] + ca * ca + cb * cb;
  fit.radius = r2 > 0 ? std::sqrt(r2) : 0.0;
  fit.center = centroid + ca * e1 + cb * e2;
  fit.valid = true;

  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd q = cloud.points[i] - fit.center;
    double u = e1.dot(q), v = e2.dot(q);
    Eigen::VectorXd off = q - u * e1 - v * e2;
    double in_plane = std::hypot(u, v) - fit.radius;
    double dev = std::sqrt(in_plane * in_plane + off.squaredNorm());
    worst = std::max(worst, dev);
  }
  fit.max_deviation = worst;
  return fit;
}

std::string limitset_csv(const LimitSetCloud& cloud, std::uint64_t config_hash) {
  std::string out = "# config_hash=" + hash_hex(config_hash) + "\n";
  for (int i = 0; i < cloud.n; ++i) {
    if (i) out.push_back(',');
    out += "x" + std::to_string(i + 1);
  }
  out.push_back('\n');
  for (const auto& p : cloud.points) {
    for (int i = 0; i < cloud.n; ++i) {
      if (i) out.push_back(',');
      out += format_double(p[i]);
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

void svg_open(std::string& out, std::uint64_t config_hash, double half_extent) {
  std::string he = format_double(half_extent);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"-";
  out += he + " -" + he + " " + format_double(2 * half_extent) + " " +
         format_double(2 * half_extent) + "\">\n";
  out += "<!-- config_hash=" + hash_hex(config_hash) + " -->\n";
  out += "<rect x=\"-" + he + "\" y=\"-" + he + "\" width=\"" + format_double(2 * half_extent) +
         "\" height=\"" + format_double(2 * half_extent) + "\" fill=\"white\"/>\n";
}

void svg_point(std::string& out, double x, double y, double r) {
  out += "<circle cx=\"" + format_double(x) + "\" cy=\"" + format_double(-y) + "\" r=\"" +
         format_double(r) + "\" fill=\"black\"/>\n";
}

}  // namespace

std::string limitset_svg(const LimitSetCloud& cloud, std::uint64_t config_hash) {
  if (cloud.n != 2 && cloud.n != 3)
    fail_config("limitset plot available for dimensions 2 and 3 only");
  std::string out;
  if (cloud.n == 2) {
    svg_open(out, config_hash, 1.1);
    out += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#bbbbbb\" "
           "stroke-width=\"0.004\"/>\n";
    for (const auto& p : cloud.points) svg_point(out, p[0], p[1], 0.008);
  } else {
    // Stereographic projection from the north pole (0, 0, 1).
    std::vector<std::pair<double, double>> proj;
    double extent = 1.0;
    for (const auto& p : cloud.points) {
      double denom = 1.0 - p[2];
      if (denom < 0.02) continue;  // too near the pole
      double x = p[0] / denom, y = p[1] / denom;
      proj.emplace_back(x, y);
      extent = std::max({extent, std::abs(x), std::abs(y)});
    }
    svg_open(out, config_hash, 1.1 * extent);
    // image of the equator, for scale
    out += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"" +
           format_double(0.004 * extent) + "\"/>\n";
    for (const auto& [x, y] : proj) svg_point(out, x, y, 0.008 * extent);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace qb
