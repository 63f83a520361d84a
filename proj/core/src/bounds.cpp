#include "bumpauction/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "bumpauction/types.hpp"

namespace bump {
namespace {

void check_recursion_args(double c, double alpha, int n) {
  if (!std::isfinite(c) || c <= 0.0)
    throw ValidationError("recursion ratio c must be positive");
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw ValidationError("alpha must be a finite positive number");
  if (n < 2) throw ValidationError("recursion depth n must be at least 2");
}

}  // namespace

std::vector<double> recursion_sequence(double c, double alpha, int n) {
  check_recursion_args(c, alpha, n);
  std::vector<double> sequence{1.0, 1.0 / c};
  for (int k = 2; k < n; ++k) {
    const double next =
        ((1.0 + c) * sequence[k - 1] - (1.0 + alpha) * sequence[k - 2]) / c;
    sequence.push_back(next);
  }
  return sequence;
}

double residual(double c, double alpha, int n) {
  check_recursion_args(c, alpha, n);
  double prev = 1.0;
  double cur = 1.0 / c;
  for (int k = 2; k < n; ++k) {
    const double next = ((1.0 + c) * cur - (1.0 + alpha) * prev) / c;
    prev = cur;
    cur = next;
    const double magnitude = std::max(std::fabs(prev), std::fabs(cur));
    if (magnitude > 1e150 || (magnitude > 0.0 && magnitude < 1e-150)) {
      prev /= magnitude;
      cur /= magnitude;
    }
  }
  return cur - (1.0 + alpha) * prev;
}

SolveResult solve_c_n(double alpha, int n, const SolveOptions& options) {
  if (options.tol <= 0.0) throw ValidationError("tolerance must be positive");
  if (options.grid < 10) throw ValidationError("grid must have at least 10 cells");
  check_recursion_args(0.5, alpha, n);

  SolveResult result;
  const double step = 1.0 / options.grid;
  double left = step;
  double f_left = residual(left, alpha, n);
  for (int i = 1; i + 1 < options.grid; ++i) {
    const double right = (i + 1) * step;
    const double f_right = residual(right, alpha, n);
    if (f_left == 0.0) {
      result.brackets.emplace_back(left, left);
      if (!result.root) result.root = left;
    } else if (f_left * f_right < 0.0) {
      result.brackets.emplace_back(left, right);
      if (!result.root) {
        double lo = left, hi = right, f_lo = f_left;
        while (hi - lo > options.tol) {
          const double mid = lo + (hi - lo) / 2.0;
          const double f_mid = residual(mid, alpha, n);
          if (f_mid == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
          } else {
            hi = mid;
          }
        }
        result.root = lo + (hi - lo) / 2.0;
      }
    }
    left = right;
    f_left = f_right;
  }
  if (f_left == 0.0) {
    result.brackets.emplace_back(left, left);
    if (!result.root) result.root = left;
  }
  return result;
}

double closed_form_c2(double alpha) { return 1.0 / (1.0 + alpha); }

double closed_form_c3(double alpha) { return 1.0 / (1.0 + 2.0 * alpha); }

double closed_form_c4(double alpha) {
  return 2.0 /
         (1.0 + 3.0 * alpha + std::sqrt((1.0 + 5.0 * alpha) * (1.0 + alpha)));
}

double limit_c(double alpha) {
  return 2.0 * alpha + 1.0 - 2.0 * std::sqrt(alpha * (alpha + 1.0));
}

double gamma_floor(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0)
    throw ValidationError("gamma floor needs alpha in (0,1)");
  return std::max(alpha + std::sqrt(alpha * alpha + alpha), alpha / (1.0 - alpha));
}

double efficiency_share(double gamma, double alpha) {
  if (!std::isfinite(gamma) || gamma <= 0.0)
    throw ValidationError("gamma must be a finite positive number");
  return (1.0 - alpha / gamma) / (1.0 + gamma);
}

double lower_bound_value(double alpha) {
  return efficiency_share(gamma_floor(alpha), alpha);
}

const std::vector<int>& default_n_list() {
  static const std::vector<int> list{2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
  return list;
}

std::vector<CurvePoint> lower_bound_curve(double alpha_min, double alpha_max,
                                          int points,
                                          const std::vector<int>& n_list,
                                          const SolveOptions& options) {
  if (points < 1) throw ValidationError("curve needs at least one point");
  if (alpha_max < alpha_min) throw ValidationError("alpha range is inverted");
  if (n_list.empty()) throw ValidationError("n list must be non-empty");

  std::vector<CurvePoint> curve;
  const double step =
      points > 1 ? (alpha_max - alpha_min) / (points - 1) : 0.0;
  for (int p = 0; p < points; ++p) {
    const double alpha = alpha_min + step * p;
    CurvePoint point;
    point.alpha = alpha;
    const auto c3 = solve_c_n(alpha, 3, options);
    if (!c3.root) throw InvariantError("no root found for n=3");
    point.c3 = *c3.root;
    bool have = false;
    for (int n : n_list) {
      const auto solved = solve_c_n(alpha, n, options);
      if (!solved.root) continue;
      if (!have || *solved.root < point.cn_min) {
        have = true;
        point.cn_min = *solved.root;
        point.n_argmin = n;
      }
    }
    if (!have) throw InvariantError("no root found across the n list");
    point.lower_bound = lower_bound_value(alpha);
    point.limit = limit_c(alpha);
    curve.push_back(point);
  }
  return curve;
}

std::string render_curve(const std::vector<CurvePoint>& points, bool csv) {
  std::ostringstream out;
  if (csv) {
    out << "alpha,c3,cn_min,n_argmin,lower_bound,limit\n";
    for (const auto& point : points)
      out << format_number(point.alpha) << ',' << format_number(point.c3) << ','
          << format_number(point.cn_min) << ',' << point.n_argmin << ','
          << format_number(point.lower_bound) << ',' << format_number(point.limit)
          << '\n';
    return out.str();
  }
  out << std::left << std::setw(10) << "alpha" << std::setw(18) << "c3"
      << std::setw(18) << "cn_min" << std::setw(10) << "n_argmin"
      << std::setw(18) << "lower_bound" << "limit\n";
  for (const auto& point : points)
    out << std::left << std::setw(10) << format_number(point.alpha)
        << std::setw(18) << format_number(point.c3) << std::setw(18)
        << format_number(point.cn_min) << std::setw(10) << point.n_argmin
        << std::setw(18) << format_number(point.lower_bound)
        << format_number(point.limit) << '\n';
  return out.str();
}

}  // namespace bump
