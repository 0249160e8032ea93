// Independent reference computations shared by the unit and acceptance suites.
// Nothing here calls into the library's solvers.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Golden-section minimization of a unimodal f on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 400 && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (a == b) return 0.0;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Radial derivative of the log-barrier-plus-quadratic regularizer, written
/// out from the two-case closed form independently of the library.
inline double radial_deriv(double k, double V, double alpha, double G, double quad, double x) {
  const double F = std::log(x / alpha + 1.0);
  const double lp = (G * std::sqrt(F) <= std::sqrt(V)) ? 2.0 * k * std::sqrt(V * F) : k * G * F + k * V / G;
  return lp + quad * x;
}

/// Same derivative from its defining minimization over eta in (0, 1/G]:
/// k * min_eta (F/eta + eta V), evaluated by golden section in log eta.
inline double radial_deriv_by_min(double k, double V, double alpha, double G, double quad, double x) {
  const double F = std::log(x / alpha + 1.0);
  if (F == 0.0) return quad * x;
  auto obj = [&](double le) {
    const double eta = std::exp(le);
    return F / eta + eta * V;
  };
  const double le = golden_min(obj, -60.0, -std::log(G), 1e-15);
  return k * obj(le) + quad * x;
}

/// sum_t ||u_t - u_{t-1}|| on coordinate vectors.
inline double path_length(const std::vector<std::vector<double>>& pts) {
  double total = 0.0;
  for (std::size_t t = 1; t < pts.size(); ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts[t].size(); ++i) s += (pts[t][i] - pts[t - 1][i]) * (pts[t][i] - pts[t - 1][i]);
    total += std::sqrt(s);
  }
  return total;
}

}  // namespace oracle

namespace oracle {

using Integrator = std::function<double(const std::function<double(double)>&, double, double)>;

inline double simpson_integrator(const std::function<double(double)>& f, double a, double b) {
  return simpson(f, a, b, 400);
}

/// argmin over x in [0, cap] of -s x + int_0^x R'(v) dv, by golden section.
/// A coarse pass locates the minimizer; the refining pass measures the
/// objective relative to the coarse point so round-off stays small.
inline double radial_argmin(const std::function<double(double)>& deriv, double s, double cap,
                            const Integrator& integrate = simpson_integrator) {
  if (s == 0.0) return 0.0;
  double hi = 1.0;
  while (deriv(hi) < s && hi < cap) hi *= 2.0;
  hi = std::min(hi, cap);
  auto from = [&](double x0) {
    return [&, x0](double x) {
      const double sign = x >= x0 ? 1.0 : -1.0;
      const double lo = std::min(x, x0), up = std::max(x, x0);
      return sign * integrate([&](double v) { return deriv(v) - s; }, lo, up);
    };
  };
  const double coarse = golden_min(from(0.0), 0.0, hi, 1e-9);
  // Widen the refining window until the minimizer sits inside it.
  double width = 0.05 * coarse + 1e-12;
  for (int attempt = 0;; ++attempt) {
    const double lo = std::max(0.0, coarse - width), up = std::min(hi, coarse + width);
    const double x = golden_min(from(coarse), lo, up, 1e-15);
    const double margin = 1e-3 * (up - lo);
    const bool interior = (x - lo > margin || lo == 0.0) && (up - x > margin || up == hi);
    if (interior || attempt == 30) return x;
    width *= 2.0;
  }
}

}  // namespace oracle
