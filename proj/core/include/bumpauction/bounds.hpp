#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bump {

// a_1 = 1, a_2 = 1/c, then c*a_{k+1} = (1+c)*a_k - (1+alpha)*a_{k-1}.
// Raw values; they overflow for large n, use residual() for sign work.
std::vector<double> recursion_sequence(double c, double alpha, int n);

// a_n - (1+alpha)*a_{n-1} up to a positive factor: the trailing pair is
// rescaled whenever it grows or shrinks past 1e±150, which preserves the sign
// and the zero set for n in the hundreds.
double residual(double c, double alpha, int n);

struct SolveOptions {
  double tol = 1e-9;
  int grid = 10000;
};

struct SolveResult {
  std::optional<double> root;  // smallest root in (0,1)
  std::vector<std::pair<double, double>> brackets;  // every sign-change cell
};

// Smallest c in (0,1) with residual(c, alpha, n) = 0: grid scan for sign
// changes, then bisection to tol on the leftmost bracket.
SolveResult solve_c_n(double alpha, int n, const SolveOptions& options = {});

double closed_form_c2(double alpha);  // 1/(1+a)
double closed_form_c3(double alpha);  // 1/(1+2a)
double closed_form_c4(double alpha);  // 2/(1+3a+sqrt((1+5a)(1+a)))

// Limit of the root family as n grows: 2a+1-2*sqrt(a(a+1)).
double limit_c(double alpha);

// Smallest admissible gamma: max(a+sqrt(a^2+a), a/(1-a)), alpha in (0,1).
double gamma_floor(double alpha);

// Guaranteed effective-efficiency share at a given gamma: (1-(a/g))/(1+g).
double efficiency_share(double gamma, double alpha);

// Best guaranteed share over admissible gamma: efficiency_share at the floor.
double lower_bound_value(double alpha);

struct CurvePoint {
  double alpha = 0.0;
  double c3 = 0.0;       // solver root for n=3
  double cn_min = 0.0;   // smallest root across the n list
  int n_argmin = 0;
  double lower_bound = 0.0;
  double limit = 0.0;
};

const std::vector<int>& default_n_list();  // Fibonacci up to 144

std::vector<CurvePoint> lower_bound_curve(double alpha_min, double alpha_max,
                                          int points,
                                          const std::vector<int>& n_list,
                                          const SolveOptions& options = {});

// One line per point; csv emits a header row, otherwise aligned columns.
std::string render_curve(const std::vector<CurvePoint>& points, bool csv);

}  // namespace bump
