#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bumpauction/bounds.hpp"
#include "bumpauction/types.hpp"

namespace {

using namespace bump;

int sign_of(double value) { return value > 0.0 ? 1 : (value < 0.0 ? -1 : 0); }

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("closed forms agree with the solver") {
  for (double alpha = 0.05; alpha <= 0.601; alpha += 0.05) {
    for (int n : {2, 3, 4}) {
      const SolveResult solved = solve_c_n(alpha, n);
      REQUIRE_MESSAGE(solved.root.has_value(), "alpha=", alpha, " n=", n);
      const double closed = n == 2   ? closed_form_c2(alpha)
                            : n == 3 ? closed_form_c3(alpha)
                                     : closed_form_c4(alpha);
      CHECK_MESSAGE(std::abs(*solved.root - closed) <= 1e-8,
                    "alpha=", alpha, " n=", n, " root=", *solved.root,
                    " closed=", closed);
    }
  }
}

TEST_CASE("the recursion satisfies its partial sum identity") {
  std::mt19937_64 rng(121);
  std::uniform_real_distribution<double> ratio(0.05, 0.95);
  std::uniform_real_distribution<double> strength(0.02, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = ratio(rng);
    const double alpha = strength(rng);
    const auto seq = recursion_sequence(c, alpha, 12);
    REQUIRE(seq.size() == 12);
    double partial = 0.0;
    for (std::size_t k = 1; k < seq.size(); ++k) {
      // c*a_{k+1} telescopes to a_k minus alpha times the prefix sum.
      const double lhs = c * seq[k];
      const double rhs = seq[k - 1] - alpha * partial;
      const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
      partial += seq[k - 1];
    }
  }
}

TEST_CASE("the residual keeps the raw sign at small depths") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> ratio(0.05, 0.95);
  std::uniform_real_distribution<double> strength(0.02, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = ratio(rng);
    const double alpha = strength(rng);
    const int n = 2 + static_cast<int>(rng() % 24);
    const auto seq = recursion_sequence(c, alpha, n);
    const double raw = seq[n - 1] - (1.0 + alpha) * seq[n - 2];
    if (std::abs(raw) < 1e-12) continue;
    CHECK(sign_of(residual(c, alpha, n)) == sign_of(raw));
  }
}

TEST_CASE("rescaling keeps deep residuals finite where the raw recursion blows up") {
  // Growth per step is roughly (1+c)/c, so c = 0.005 overflows a double well
  // before 144 terms (inf, then inf - inf = NaN) while the renormalized
  // residual stays finite.
  CHECK_FALSE(std::isfinite(recursion_sequence(0.005, 0.25, 144).back()));
  CHECK(std::isfinite(residual(0.005, 0.25, 144)));
  for (double c = 0.01; c < 1.0; c += 0.02)
    CHECK(std::isfinite(residual(c, 0.25, 144)));
}

TEST_CASE("the root sits on a sign change") {
  const SolveResult solved = solve_c_n(0.3, 8);
  REQUIRE(solved.root.has_value());
  REQUIRE_FALSE(solved.brackets.empty());
  CHECK(solved.brackets.front().first <= *solved.root);
  CHECK(*solved.root <= solved.brackets.front().second);
  const double lo = residual(*solved.root - 1e-6, 0.3, 8);
  const double hi = residual(*solved.root + 1e-6, 0.3, 8);
  CHECK(sign_of(lo) * sign_of(hi) <= 0);
}

TEST_CASE("roots decrease with depth toward the limit") {
  const double alpha = 0.25;
  const double limit = limit_c(alpha);
  double previous = 1.0;
  double deepest = 1.0;
  for (int n : default_n_list()) {
    const SolveResult solved = solve_c_n(alpha, n);
    REQUIRE(solved.root.has_value());
    CHECK(*solved.root < previous + 1e-12);
    CHECK(*solved.root >= limit - 1e-3);
    previous = *solved.root;
    deepest = *solved.root;
  }
  CHECK(deepest - limit < 1e-3);
  CHECK(deepest > limit - 1e-9);
  CHECK(closed_form_c2(alpha) > closed_form_c3(alpha));
  CHECK(closed_form_c3(alpha) > closed_form_c4(alpha));
}

TEST_CASE("the guaranteed share peaks at the gamma floor") {
  for (double alpha = 0.05; alpha <= 0.601; alpha += 0.05) {
    const double floor_gamma = gamma_floor(alpha);
    CHECK(floor_gamma >= alpha + std::sqrt(alpha * alpha + alpha) - 1e-12);
    CHECK(floor_gamma >= alpha / (1.0 - alpha) - 1e-12);
    const double at_floor = efficiency_share(floor_gamma, alpha);
    CHECK(std::abs(lower_bound_value(alpha) - limit_c(alpha)) <= 1e-9);
    CHECK(std::abs(at_floor - lower_bound_value(alpha)) <= 1e-12);
    for (double stretch : {1.01, 1.1, 1.5})
      CHECK(efficiency_share(floor_gamma * stretch, alpha) < at_floor);
  }
}

TEST_CASE("curve points are deterministic and well formed") {
  const std::vector<int> depths{2, 3, 5};
  const auto first = lower_bound_curve(0.1, 0.3, 5, depths);
  const auto second = lower_bound_curve(0.1, 0.3, 5, depths);
  REQUIRE(first.size() == 5);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].alpha == second[i].alpha);
    CHECK(first[i].c3 == second[i].c3);
    CHECK(first[i].cn_min == second[i].cn_min);
    CHECK(first[i].n_argmin == second[i].n_argmin);
    CHECK(first[i].lower_bound == second[i].lower_bound);
    CHECK(first[i].limit == second[i].limit);
  }
  CHECK(first.front().alpha == 0.1);
  CHECK(first.back().alpha == doctest::Approx(0.3).epsilon(1e-12));

  const std::string csv = render_curve(first, true);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "alpha,c3,cn_min,n_argmin,lower_bound,limit");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(rows == 5);

  const std::string table = render_curve(first, false);
  CHECK(table.find("lower_bound") != std::string::npos);
}

TEST_CASE("bad solver inputs are rejected") {
  CHECK_THROWS_AS(recursion_sequence(0.0, 0.25, 5), ValidationError);
  CHECK_THROWS_AS(recursion_sequence(0.5, -0.1, 5), ValidationError);
  CHECK_THROWS_AS(recursion_sequence(0.5, 0.25, 1), ValidationError);
  CHECK_THROWS_AS(solve_c_n(0.25, 3, {1e-9, 5}), ValidationError);
  CHECK_THROWS_AS(solve_c_n(0.25, 3, {-1.0, 1000}), ValidationError);
  CHECK_THROWS_AS(gamma_floor(1.5), ValidationError);
  CHECK_THROWS_AS(lower_bound_curve(0.3, 0.1, 5, {2, 3}), ValidationError);
  CHECK_THROWS_AS(lower_bound_curve(0.1, 0.3, 5, {}), ValidationError);
}

}  // TEST_SUITE
