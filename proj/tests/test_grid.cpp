#include "doctest.h"

#include "rzlab/grid.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace rzlab;

namespace {

Field field1(int n, double R, std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return Field(GridSpec(1, n, R), v);
}

}  // namespace

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(GridSpec(1, 3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(0, 4, 1.0), std::invalid_argument);
  const GridSpec g(3, 8, 2.0);
  CHECK(g.size() == 512);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.cell_volume() == doctest::Approx(0.125));
}

TEST_CASE("flat index round trip, axis 0 slowest") {
  const GridSpec g(3, 4, 1.0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto idx = g.multi_index(i);
    CHECK(g.flat_index(idx) == i);
  }
  const std::vector<int> idx{1, 0, 0};
  CHECK(g.flat_index(idx) == 16);
  CHECK(g.point(16)[0] == doctest::Approx(-0.5));
}

TEST_CASE("nearest wraps periodically") {
  const GridSpec g(1, 8, 4.0);
  Point x(1);
  x << 0.9;
  CHECK(g.point(g.nearest(x))[0] == doctest::Approx(1.0));
  x << 3.9;  // closer to -4 under wrap
  CHECK(g.point(g.nearest(x))[0] == doctest::Approx(-4.0));
}

TEST_CASE("sample examples") {
  const GridSpec g1(1, 4, 1.0);
  const Field one = sample(g1, [](const Point&) { return 1.0; });
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(one[i] == 1.0);

  const Field x = sample(g1, [](const Point& p) { return p[0]; });
  CHECK(x[0] == doctest::Approx(-1.0));
  CHECK(x[1] == doctest::Approx(-0.5));
  CHECK(x[2] == doctest::Approx(0.0));
  CHECK(x[3] == doctest::Approx(0.5));

  const GridSpec g2(2, 4, 2.0);
  const Field r2 = sample(g2, [](const Point& p) { return p.squaredNorm(); });
  CHECK(r2[0] == doctest::Approx(8.0));
}

TEST_CASE("sample rejects non-finite values and names the point") {
  const GridSpec g(1, 4, 1.0);
  try {
    (void)sample(g, [](const Point& p) { return 1.0 / p[0]; });
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("(0)") != std::string::npos);
  }
}

TEST_CASE("field invariants") {
  const GridSpec g(1, 4, 1.0);
  CHECK_THROWS_AS(Field(g, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(4);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Field(g, bad), std::invalid_argument);
  CHECK_THROWS_AS(Field::zeros(g) + Field::zeros(GridSpec(1, 4, 2.0)), std::invalid_argument);
}

TEST_CASE("lp_norm examples (n = 2 cases zero-padded to n = 4, h = 1)") {
  const Field f = field1(4, 2.0, {3.0, 4.0, 0.0, 0.0});
  CHECK(lp_norm(f, 2.0) == doctest::Approx(5.0));
  CHECK(lp_norm(f, 1.0) == doctest::Approx(7.0));
  const Region first = [](const Point& x) { return x[0] < -1.5; };
  CHECK(lp_norm(f, 2.0, first) == doctest::Approx(3.0));
  const Region none = [](const Point&) { return false; };
  CHECK(lp_norm(f, 2.0, none) == 0.0);
  CHECK(count_in_region(f.grid(), none) == 0);
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("weak_l1 examples (n = 2 cases zero-padded to n = 4, h = 1)") {
  CHECK(weak_l1(field1(4, 2.0, {3.0, 1.0, 0.0, 0.0})) == doctest::Approx(3.0));
  CHECK(weak_l1(field1(4, 2.0, {0.0, 0.0, 0.0, 0.0})) == 0.0);
  CHECK(weak_l1(field1(4, 2.0, {2.0, 2.0, 2.0, 2.0})) == doctest::Approx(8.0));
}

TEST_CASE("weak_l1 never exceeds the L1 norm") {
  const GridSpec g(2, 8, 1.0);
  const Field f = sample(g, [](const Point& x) { return std::sin(3.0 * x[0]) * std::exp(x[1]); });
  CHECK(weak_l1(f) <= lp_norm(f, 1.0) + 1e-12);
}

TEST_CASE("RZF1 round trip") {
  const GridSpec g(2, 4, 1.5);
  const Field f = sample(g, [](const Point& x) { return x[0] - 2.0 * x[1]; });
  const auto bytes = encode_field(f);
  CHECK(bytes.size() == 4 + 4 + 4 + 8 + 16 * 8);
  const Field back = decode_field(bytes);
  CHECK(back.grid() == g);
  CHECK(back.values() == f.values());

  const auto path = std::filesystem::temp_directory_path() / "rzlab_test_roundtrip.rzf";
  write_field(path, f);
  CHECK(read_field(path).values() == f.values());
  std::filesystem::remove(path);
}

TEST_CASE("RZF1 rejects malformed input") {
  const GridSpec g(1, 4, 1.0);
  auto bytes = encode_field(Field::zeros(g));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_field(bad_magic), FormatError);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_field(truncated), FormatError);
  CHECK_THROWS_AS(read_field("/nonexistent/dir/missing.rzf"), std::runtime_error);
}

TEST_CASE("dense cap") {
  CHECK_NOTHROW(require_dense(GridSpec(2, 64, 1.0)));
  CHECK_THROWS_AS(require_dense(GridSpec(3, 32, 1.0)), DenseCapExceeded);
}
