#pragma once

/// \file
/// Polynomial sup-norms on planar compacts and the Bernstein growth bound
/// |P(z)| <= ||P||_K exp(deg P * g(z, infinity)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "holext/capacity.hpp"
#include "holext/polynomial.hpp"
#include "holext/set_model.hpp"

namespace holext {

struct SupNorm {
  double value = 0.0;
  /// Upper bound on how far the pre-refinement sample maximum can sit below
  /// the true sup: max|p'| on an enclosing disk times half the sample spacing.
  double density_error = 0.0;
};

namespace detail {

inline double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({fc, fd, f(a), f(b)});
}

/// Max of |p(curve(t))| over t in [0, 1]: dense sampling, then golden-section
/// refinement of every discrete local maximum.
inline double curve_max(const Polynomial1D& p, const std::function<Complex(double)>& curve,
                        std::size_t samples, bool periodic) {
  const std::size_t count = samples;
  const double step = periodic ? 1.0 / static_cast<double>(count)
                               : 1.0 / static_cast<double>(count - 1);
  std::vector<double> vals(count);
  for (std::size_t k = 0; k < count; ++k) vals[k] = std::abs(p(curve(step * static_cast<double>(k))));
  double best = *std::max_element(vals.begin(), vals.end());
  auto f = [&](double t) { return std::abs(p(curve(t))); };
  for (std::size_t k = 0; k < count; ++k) {
    const bool has_left = periodic || k > 0;
    const bool has_right = periodic || k + 1 < count;
    const double left = has_left ? vals[(k + count - 1) % count] : -1.0;
    const double right = has_right ? vals[(k + 1) % count] : -1.0;
    if (vals[k] < left || vals[k] < right) continue;
    const double t = step * static_cast<double>(k);
    const double lo = has_left ? t - step : t;
    const double hi = has_right ? t + step : t;
    if (hi > lo) best = std::max(best, golden_max(f, lo, hi));
  }
  return best;
}

inline double max_abs_on_circle_bound(const Polynomial1D& p, double radius) {
  double s = 0.0;
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) s = s * radius + std::abs(c[k]);
  return s;
}

inline double enclosing_radius(const CompactSet& set) {
  const auto box = bounding_box(set);
  return std::max({std::abs(Complex(box.re_lo, box.im_lo)), std::abs(Complex(box.re_lo, box.im_hi)),
                   std::abs(Complex(box.re_hi, box.im_lo)), std::abs(Complex(box.re_hi, box.im_hi))});
}

}  // namespace detail

inline SupNorm sup_norm_detailed(const Polynomial1D& p, const CompactSet& set) {
  SupNorm out;
  if (p.is_zero()) return out;
  if (*p.degree() == 0) {
    out.value = std::abs(p.coefficient(0));
    return out;
  }
  const std::size_t samples =
      std::max<std::size_t>(set.boundary_samples(), 64 * (*p.degree() + 1));
  double spacing = 0.0;
  std::function<double(const CompactSet&)> visit = [&](const CompactSet& s) -> double {
    return std::visit(
        detail::overloaded{
            [&](const Disk& d) {
              spacing = std::max(spacing, 2.0 * std::numbers::pi * d.radius /
                                              static_cast<double>(samples));
              return detail::curve_max(
                  p,
                  [&](double t) { return d.center + std::polar(d.radius, 2.0 * std::numbers::pi * t); },
                  samples, true);
            },
            [&](const Segment& g) {
              spacing = std::max(spacing, std::abs(g.b - g.a) / static_cast<double>(samples - 1));
              return detail::curve_max(p, [&](double t) { return g.a + t * (g.b - g.a); },
                                       samples, false);
            },
            [&](const PointCloud& c) {
              double best = 0.0;
              for (const auto& z : c.points) best = std::max(best, std::abs(p(z)));
              return best;
            },
            [&](const SetUnion& u) {
              double best = 0.0;
              for (const auto& part : u.parts) best = std::max(best, visit(part));
              return best;
            }},
        s.shape());
  };
  out.value = visit(set);
  const double deriv_bound =
      detail::max_abs_on_circle_bound(p.derivative(), detail::enclosing_radius(set));
  out.density_error = 0.5 * spacing * deriv_bound;
  return out;
}

/// Sampled sup-norm of |p| on the set (boundary circle for disks). A lower
/// bound on the true sup-norm; see SupNorm::density_error.
inline double sup_norm(const Polynomial1D& p, const CompactSet& set) {
  return sup_norm_detailed(p, set).value;
}

inline double bernstein_bound(const Polynomial1D& p, double sup, const GreenEvaluator& green,
                              Complex z) {
  if (p.is_zero()) return 0.0;
  const double g = green(z);
  return sup * std::exp(static_cast<double>(*p.degree()) * g);
}

/// ||p||_K * exp(deg p * g(z)). Throws GreenUndefinedPolarSet for polar K.
inline double bernstein_bound(const Polynomial1D& p, const CompactSet& set, Complex z) {
  const auto green = green_function(set);
  return bernstein_bound(p, sup_norm(p, set), green, z);
}

struct BernsteinEntry {
  Complex z;
  double abs_p = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  ///< |p(z)| / bound
  bool pass = false;
};

struct BernsteinReport {
  double sup_norm = 0.0;
  std::size_t degree = 0;
  double slack = 0.0;
  bool analytic_green = false;
  std::vector<BernsteinEntry> entries;
  std::size_t violations = 0;

  bool all_pass() const { return violations == 0; }
};

/// Checks |p(z)| <= bound * (1 + slack) at each test point. The slack absorbs
/// the Green function's discretization error: expm1(deg * err) + 1e-9, which
/// is exactly 1e-9 for analytic backings.
inline BernsteinReport verify_bernstein(const Polynomial1D& p, const CompactSet& set,
                                        const std::vector<Complex>& test_points,
                                        const GreenOptions& opts = {}) {
  const auto green = green_function(set, GreenMethod::Auto, opts);
  BernsteinReport report;
  report.sup_norm = sup_norm(p, set);
  report.degree = p.degree().value_or(0);
  report.analytic_green = green.analytic();
  report.slack = std::expm1(static_cast<double>(report.degree) * green.error_estimate()) + 1e-9;
  report.entries.reserve(test_points.size());
  for (const auto& z : test_points) {
    BernsteinEntry e;
    e.z = z;
    e.abs_p = std::abs(p(z));
    e.bound = bernstein_bound(p, report.sup_norm, green, z);
    e.ratio = e.bound > 0.0 ? e.abs_p / e.bound : (e.abs_p == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    e.pass = e.abs_p <= e.bound * (1.0 + report.slack);
    if (!e.pass) ++report.violations;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace holext
