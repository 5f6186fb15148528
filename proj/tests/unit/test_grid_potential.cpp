#include <doctest.h>

#include <sstream>

#include "gibbslab/grid_potential.hpp"

using namespace gibbslab;

TEST_CASE("bilinear interpolation reproduces affine data exactly") {
  // f(x, y) = 1 + 2x - y on [0,1] x [0,2], step 0.5.
  std::vector<double> v;
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j <= 4; ++j) v.push_back(1.0 + 2.0 * 0.5 * i - 0.5 * j);
  }
  TabulatedGrid t({0.0, 0.0}, {1.0, 2.0}, 0.5, v);
  CHECK(t.shape() == std::vector<std::size_t>{3, 5});
  CHECK(t(Point{0.3, 1.7}) == doctest::Approx(1.0 + 0.6 - 1.7));
  CHECK(t(Point{1.0, 2.0}) == doctest::Approx(1.0 + 2.0 - 2.0));
  CHECK(t(Point{1.1, 0.0}) == kInf);
}

TEST_CASE("infinite corners propagate only where they carry weight") {
  TabulatedGrid t({0.0}, {2.0}, 1.0, {0.0, 1.0, kInf});
  CHECK(t(Point{0.5}) == doctest::Approx(0.5));
  CHECK(t(Point{1.0}) == doctest::Approx(1.0));
  CHECK(t(Point{1.5}) == kInf);
}

TEST_CASE("csv and binary round trips") {
  TabulatedGrid t({-1.0}, {1.0}, 0.5, {3.0, 1.0, 0.0, 1.0, kInf});
  std::stringstream csv;
  t.write_csv(csv);
  const auto a = TabulatedGrid::read_csv(csv);
  std::stringstream bin;
  t.write_binary(bin);
  const auto b = TabulatedGrid::read_binary(bin);
  for (double x : {-1.0, -0.3, 0.2, 0.7, 1.0}) {
    CHECK(a(Point{x}) == t(Point{x}));
    CHECK(b(Point{x}) == t(Point{x}));
  }
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS_AS(TabulatedGrid({0.0}, {1.0}, 0.3, {0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(TabulatedGrid({0.0}, {1.0}, 0.5, {0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(TabulatedGrid({0.0}, {1.0}, 0.5, {0.0, -kInf, 1.0}), InvalidArgument);
  std::stringstream bad("d,1\nlo,0\nhi,1\nstep,0.5\nvalues\n1,2,x\n");
  CHECK_THROWS_AS(TabulatedGrid::read_csv(bad), InvalidArgument);
}

TEST_CASE("tabulated kernel and pair potentials") {
  TabulatedGrid k({-2.0}, {2.0}, 1.0, {4.0, 1.0, 0.0, 1.0, 4.0});
  const auto w = potentials::tabulated_kernel(k);
  CHECK(w(Point{1.5}, Point{0.5}) == doctest::Approx(1.0));
  CHECK(w(Point{0.0}, Point{3.0}) == kInf);
  TabulatedGrid p({0.0, 0.0}, {1.0, 1.0}, 1.0, {0.0, 1.0, 2.0, 3.0});
  const auto wp = potentials::tabulated_pair(p);
  CHECK(wp(Point{1.0}, Point{0.0}) == doctest::Approx(2.0));
  CHECK(wp(Point{0.5}, Point{0.5}) == doctest::Approx(1.5));
}
