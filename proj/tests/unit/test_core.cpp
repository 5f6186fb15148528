#include <doctest.h>

#include <atomic>
#include <set>

#include "gibbslab/core.hpp"
#include "gibbslab/detail/min_cost_flow.hpp"
#include "gibbslab/detail/parallel.hpp"
#include "gibbslab/detail/simplex.hpp"
#include "gibbslab/random.hpp"

using namespace gibbslab;

TEST_CASE("compensated sum recovers cancelled small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("compensated sum keeps +inf and rejects inf - inf") {
  CompensatedSum s;
  s.add(1.0);
  s.add(kInf);
  s.add(2.0);
  CHECK(s.value() == kInf);
  CHECK_THROWS_AS(s.add(-kInf), NumericalError);
  CompensatedSum t;
  CHECK_THROWS_AS(t.add(std::nan("")), NumericalError);
}

TEST_CASE("scaled uses 0 * inf = 0") {
  CHECK(scaled(0.0, kInf, "x") == 0.0);
  CHECK(scaled(2.0, kInf, "x") == kInf);
  CHECK(scaled(2.0, 3.0, "x") == 6.0);
  CHECK_THROWS_AS(scaled(-1.0, kInf, "x"), NumericalError);
}

TEST_CASE("log-sum-exp is stable and ignores -inf") {
  LogSumExp l;
  CHECK(l.value() == -kInf);
  l.add(1000.0);
  l.add(1000.0);
  l.add(-kInf);
  CHECK(l.value() == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("checked_value names the point") {
  const Point x{1.0, 2.0};
  CHECK(checked_value(kInf, "V", x) == kInf);
  try {
    checked_value(std::nan(""), "V", x);
    FAIL("expected throw");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("derived seeds are deterministic and distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(42, s));
  CHECK(seen.size() == 100);
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  Rng a = make_rng(5, 1), b = make_rng(5, 1);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
  Rng r = make_rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(r);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("parallel_for visits every index once for any worker count") {
  for (unsigned threads : {1u, 2u, 7u}) {
    std::vector<std::atomic<int>> hits(50);
    detail::parallel_for(50, threads, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(detail::parallel_for(10, 3, [](std::size_t i) {
                    if (i == 4) throw InvalidArgument("boom");
                  }),
                  InvalidArgument);
}

TEST_CASE("simplex solves a small LP") {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3  -> x=3, y=1, value 11
  detail::LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {3.0, 2.0};
  lp.rows = {{{1.0, 1.0}, detail::Relation::kLessEqual, 4.0},
             {{1.0, 3.0}, detail::Relation::kLessEqual, 6.0},
             {{1.0, 0.0}, detail::Relation::kLessEqual, 3.0}};
  const auto s = detail::solve_lp(lp);
  REQUIRE(s.status == detail::LpStatus::kOptimal);
  CHECK(s.value == doctest::Approx(11.0));
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("simplex reports infeasible and unbounded problems") {
  detail::LinearProgram inf;
  inf.num_vars = 1;
  inf.objective = {1.0};
  inf.rows = {{{1.0}, detail::Relation::kLessEqual, 1.0}, {{1.0}, detail::Relation::kGreaterEqual, 2.0}};
  CHECK(detail::solve_lp(inf).status == detail::LpStatus::kInfeasible);
  detail::LinearProgram unb;
  unb.num_vars = 1;
  unb.objective = {1.0};
  unb.rows = {{{-1.0}, detail::Relation::kLessEqual, 1.0}};
  CHECK(detail::solve_lp(unb).status == detail::LpStatus::kUnbounded);
}

TEST_CASE("min-cost flow routes supply along cheapest paths") {
  // 0 -> 2 direct costs 5, via 1 costs 1 + 1.
  detail::MinCostFlow f(3);
  f.add_edge(0, 2, 5.0);
  f.add_edge(0, 1, 1.0);
  f.add_edge(1, 2, 1.0);
  f.set_supply(0, 0.7);
  f.set_supply(2, -0.7);
  CHECK(f.solve() == doctest::Approx(1.4));
}
