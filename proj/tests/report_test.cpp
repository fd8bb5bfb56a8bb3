#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "quakebend/errors.hpp"
#include "quakebend/report.hpp"

using namespace qb;

TEST_SUITE("report") {
  TEST_CASE("fnv1a matches the published test vectors") {
    CHECK(fnv1a_hash("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a_hash("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a_hash("foobar") == 0x85944171f73967e8ULL);
    // sensitive to every byte
    CHECK(fnv1a_hash("ab") != fnv1a_hash("ba"));
  }

  TEST_CASE("hash rendering is fixed-width lowercase hex") {
    CHECK(hash_hex(0xcbf29ce484222325ULL) == "cbf29ce484222325");
    CHECK(hash_hex(0x1ULL) == "0000000000000001");
    CHECK(hash_hex(0) == "0000000000000000");
    CHECK(hash_hex(fnv1a_hash("")).size() == 16);
  }

  TEST_CASE("format_double is the shortest round-tripping decimal") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.25) == "-2.25");
    CHECK(format_double(0.1) == "0.1");
    // values with no short decimal representation still round-trip exactly
    for (double x : {1.0 / 3.0, 2.2567679299325638, 0.33935942622673315,
                     4.4391180580327835e-10, -1e308, 3.14159e-7}) {
      std::string s = format_double(x);
      CHECK(std::strtod(s.c_str(), nullptr) == x);
      // shortest form: the fraction part never carries padding zeros
      std::string mantissa = s.substr(0, s.find('e'));
      CHECK(mantissa.back() != '0');
    }
  }

  TEST_CASE("format_matrix emits one space-separated row per line") {
    Mat M(2, 3);
    M << 1, 2.5, 3,
        -4, 0, 6;
    CHECK(format_matrix(M) == "1 2.5 3\n-4 0 6\n");
  }

  TEST_CASE("write_file writes whole files and reports unwritable paths") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "qb_report_test";
    fs::create_directories(dir);
    fs::path target = dir / "out.txt";

    write_file(target.string(), "line1\nline2\n");
    std::ifstream in(target);
    std::string body((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(body == "line1\nline2\n");

    // overwrite, not append
    write_file(target.string(), "x");
    std::ifstream in2(target);
    std::string body2((std::istreambuf_iterator<char>(in2)),
                      std::istreambuf_iterator<char>());
    CHECK(body2 == "x");

    try {
      write_file((dir / "no_such_dir" / "f.txt").string(), "x");
      FAIL("expected an error for a missing parent directory");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
    }
    fs::remove_all(dir);
  }
}
