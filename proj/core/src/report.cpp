#include "quakebend/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "quakebend/errors.hpp"

namespace qb {

std::uint64_t fnv1a_hash(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_matrix(const Mat& M) {
  std::string out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out.push_back(' ');
      out += format_double(M(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_config("cannot open output file: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  os.flush();
  if (!os) fail_config("failed writing output file: " + path);
}

}  // namespace qb
