#pragma once

/// \file
/// Logarithmic capacity of planar compacts via Fekete/Leja configurations,
/// and the Green function of the unbounded complementary component.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "holext/errors.hpp"
#include "holext/set_model.hpp"

namespace holext {

/// Capacity values below this are treated as zero (polar set).
inline constexpr double kPolarThreshold = 1e-4;
inline constexpr std::size_t kDefaultCapacityPoints = 128;

struct FeketeOptions {
  bool refine = true;          ///< run pairwise-exchange refinement after Leja
  std::size_t max_sweeps = 200;
};

struct FeketeResult {
  std::vector<Complex> points;
  double log_vdm = 0.0;  ///< sum over i<j of log|z_i - z_j|
  /// (k, d_k) for k = 2..n, ascending in k. Non-increasing in d_k.
  std::vector<std::pair<std::size_t, double>> diameter_sequence;
  bool degenerate = false;  ///< fewer than n distinct candidates were available
  std::size_t sweeps = 0;

  double diameter() const {
    return diameter_sequence.empty() ? 0.0 : diameter_sequence.back().second;
  }
};

namespace detail {

inline double log_distance(Complex a, Complex b) { return 0.5 * std::log(std::norm(a - b)); }

/// Exact duplicates removed, first occurrence order kept.
inline std::vector<Complex> distinct_points(const std::vector<Complex>& pts) {
  std::set<std::pair<double, double>> seen;
  std::vector<Complex> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (seen.emplace(p.real(), p.imag()).second) out.push_back(p);
  }
  return out;
}

inline double log_vandermonde(const std::vector<Complex>& pts) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) sum += log_distance(pts[i], pts[j]);
  return sum;
}

inline double diameter_from_log_vdm(double log_vdm, std::size_t k) {
  const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
  return std::exp(log_vdm / pairs);
}

/// Builds d_k for k = 2..n by repeatedly deleting the point with the smallest
/// log-distance sum. Deleting a below-average point guarantees d_{k-1} >= d_k.
inline std::vector<std::pair<std::size_t, double>> removal_sequence(
    const std::vector<Complex>& pts, double log_vdm) {
  const std::size_t n = pts.size();
  std::vector<std::pair<std::size_t, double>> seq;
  if (n < 2) return seq;
  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sums[i] += log_distance(pts[i], pts[j]);
  std::vector<char> alive(n, 1);
  std::vector<double> d(n + 1, 0.0);
  d[n] = diameter_from_log_vdm(log_vdm, n);
  double lv = log_vdm;
  for (std::size_t k = n; k > 2; --k) {
    std::size_t worst = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i] && (worst == n || sums[i] < sums[worst])) worst = i;
    }
    lv -= sums[worst];
    alive[worst] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i]) sums[i] -= log_distance(pts[i], pts[worst]);
    }
    d[k - 1] = diameter_from_log_vdm(lv, k - 1);
  }
  for (std::size_t k = 2; k <= n; ++k) seq.emplace_back(k, d[k]);
  return seq;
}

}  // namespace detail

/// Greedy Leja selection of n points from `candidates` followed by
/// single-point exchange refinement until no swap increases log_vdm.
inline FeketeResult fekete_from_candidates(const std::vector<Complex>& candidates,
                                           std::size_t n, const FeketeOptions& opts = {}) {
  require(n >= 2, "fekete: n must be >= 2");
  const auto cand = detail::distinct_points(candidates);
  FeketeResult result;
  if (cand.size() < n) {
    result.degenerate = true;
    result.points = cand;
    result.log_vdm = detail::log_vandermonde(cand);
    result.diameter_sequence = detail::removal_sequence(cand, result.log_vdm);
    return result;
  }

  const std::size_t m = cand.size();
  std::vector<double> score(m, 0.0);  // sum of log-distances to chosen points
  std::vector<char> chosen(m, 0);
  std::vector<std::size_t> picked;
  picked.reserve(n);

  auto add = [&](std::size_t idx) {
    chosen[idx] = 1;
    picked.push_back(idx);
    for (std::size_t c = 0; c < m; ++c) {
      if (c != idx) score[c] += detail::log_distance(cand[c], cand[idx]);
    }
  };

  std::size_t first = 0;
  for (std::size_t c = 1; c < m; ++c) {
    if (std::abs(cand[c]) > std::abs(cand[first])) first = c;
  }
  add(first);
  while (picked.size() < n) {
    std::size_t best = m;
    for (std::size_t c = 0; c < m; ++c) {
      if (!chosen[c] && (best == m || score[c] > score[best])) best = c;
    }
    add(best);
  }

  if (opts.refine) {
    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      // Rebuild scores each sweep so swap updates do not accumulate drift.
      std::fill(score.begin(), score.end(), 0.0);
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t idx : picked)
          if (c != idx) score[c] += detail::log_distance(cand[c], cand[idx]);

      bool improved = false;
      for (auto& slot : picked) {
        const std::size_t old = slot;
        const double current = score[old];
        const double tol = 1e-12 * std::max(1.0, std::abs(current));
        std::size_t best = old;
        double best_value = current;
        for (std::size_t c = 0; c < m; ++c) {
          if (chosen[c]) continue;
          const double v = score[c] - detail::log_distance(cand[c], cand[old]);
          if (v > best_value + tol) {
            best = c;
            best_value = v;
          }
        }
        if (best == old) continue;
        for (std::size_t c = 0; c < m; ++c) {
          if (c != old) score[c] -= detail::log_distance(cand[c], cand[old]);
          if (c != best) score[c] += detail::log_distance(cand[c], cand[best]);
        }
        chosen[old] = 0;
        chosen[best] = 1;
        slot = best;
        improved = true;
      }
      result.sweeps = sweep + 1;
      if (!improved) break;
    }
  }

  result.points.reserve(n);
  for (std::size_t idx : picked) result.points.push_back(cand[idx]);
  result.log_vdm = detail::log_vandermonde(result.points);
  result.diameter_sequence = detail::removal_sequence(result.points, result.log_vdm);
  return result;
}

inline FeketeResult fekete_points(const CompactSet& set, std::size_t n,
                                  std::size_t candidates, const FeketeOptions& opts = {}) {
  require(candidates >= n, "fekete: candidates must be >= n");
  return fekete_from_candidates(discretize(set, candidates), n, opts);
}

struct CapacityEstimate {
  double value = 0.0;
  std::size_t n_used = 0;
  double error_indicator = 0.0;  ///< |d_{n/2} - d_n|
  double robin_constant = std::numeric_limits<double>::infinity();
  bool degenerate = false;
  std::vector<std::pair<std::size_t, double>> diameter_sequence;

  bool polar(double eps = kPolarThreshold) const { return degenerate || value < eps; }
};

inline CapacityEstimate capacity_from_fekete(const FeketeResult& fk, std::size_t n) {
  CapacityEstimate est;
  est.n_used = n;
  est.diameter_sequence = fk.diameter_sequence;
  // Fewer than n distinct points: finite at this resolution, hence polar.
  if (fk.degenerate || fk.points.size() < 2) {
    est.degenerate = true;
    return est;
  }
  est.value = fk.diameter();
  const std::size_t half = std::max<std::size_t>(2, n / 2);
  for (const auto& [k, d] : fk.diameter_sequence) {
    if (k == half) est.error_indicator = std::abs(d - est.value);
  }
  est.robin_constant = -std::log(est.value);
  return est;
}

/// Capacity estimate d_n from n Fekete points over the set's default
/// candidate discretization.
inline CapacityEstimate capacity(const CompactSet& set,
                                 std::size_t n = kDefaultCapacityPoints,
                                 const FeketeOptions& opts = {}) {
  require(n >= 8, "capacity: n must be >= 8");
  const auto candidates = discretize(set, std::max(set.boundary_samples(), n));
  return capacity_from_fekete(fekete_from_candidates(candidates, n, opts), n);
}

enum class GreenMethod { Auto, Analytic, Fekete };

struct AnalyticDiskGreen {
  Complex center;
  double radius;
};

struct AnalyticSegmentGreen {
  Complex a;
  Complex b;
};

/// Discrete equilibrium potential of Fekete points, normalized so that its
/// maximum over probe points of the set is zero.
struct FeketePotentialGreen {
  std::vector<Complex> points;
  double level = 0.0;           ///< max over probes of (1/n) sum log|s - z_i|
  double capacity = 0.0;        ///< transfinite diameter d_n of `points`
  double error_estimate = 0.0;  ///< max(0, log d_n - level)
};

struct GreenValue {
  double value = 0.0;
  double clamped = 0.0;  ///< magnitude of the negative part removed by clamping
};

/// g(z, infinity) for the unbounded component of the complement of a compact.
class GreenEvaluator {
 public:
  using Backing = std::variant<AnalyticDiskGreen, AnalyticSegmentGreen, FeketePotentialGreen>;

  GreenEvaluator() : backing_(AnalyticDiskGreen{Complex{}, 1.0}) {}
  explicit GreenEvaluator(Backing backing) : backing_(std::move(backing)) {}

  const Backing& backing() const noexcept { return backing_; }
  bool analytic() const noexcept { return !std::holds_alternative<FeketePotentialGreen>(backing_); }

  /// Unclamped value; may dip below zero near or inside the set.
  double raw(Complex z) const {
    return std::visit(
        detail::overloaded{
            [&](const AnalyticDiskGreen& d) {
              return std::log(std::abs(z - d.center) / d.radius);
            },
            [&](const AnalyticSegmentGreen& s) {
              const Complex w = (2.0 * z - (s.a + s.b)) / (s.b - s.a);
              // Product of principal roots keeps the branch with |.| >= 1
              // everywhere off [-1, 1].
              const Complex root = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
              return std::log(std::abs(w + root));
            },
            [&](const FeketePotentialGreen& f) {
              double sum = 0.0;
              for (const auto& p : f.points) sum += detail::log_distance(z, p);
              return sum / static_cast<double>(f.points.size()) - f.level;
            }},
        backing_);
  }

  GreenValue evaluate(Complex z) const {
    const double r = raw(z);
    if (std::isnan(r) || r >= 0.0) return {std::isnan(r) ? 0.0 : r, 0.0};
    return {0.0, std::isfinite(r) ? -r : std::numeric_limits<double>::infinity()};
  }

  double operator()(Complex z) const { return evaluate(z).value; }

  /// lim (g(z) - log|z|) as |z| -> infinity.
  double robin_constant() const {
    return std::visit(detail::overloaded{
                          [](const AnalyticDiskGreen& d) { return -std::log(d.radius); },
                          [](const AnalyticSegmentGreen& s) {
                            return -std::log(std::abs(s.b - s.a) / 4.0);
                          },
                          [](const FeketePotentialGreen& f) { return -f.level; }},
                      backing_);
  }

  /// Heuristic bound on |g_computed - g_true| away from the set; zero for
  /// analytic backings.
  double error_estimate() const {
    if (const auto* f = std::get_if<FeketePotentialGreen>(&backing_)) return f->error_estimate;
    return 0.0;
  }

 private:
  Backing backing_;
};

struct GreenOptions {
  std::size_t fekete_n = kDefaultCapacityPoints;
  double polar_threshold = kPolarThreshold;
  FeketeOptions fekete{};
};

inline GreenEvaluator fekete_green(const CompactSet& set, const GreenOptions& opts = {}) {
  const auto candidates = discretize(set, std::max(set.boundary_samples(), opts.fekete_n));
  const auto fk = fekete_from_candidates(candidates, opts.fekete_n, opts.fekete);
  const auto est = capacity_from_fekete(fk, opts.fekete_n);
  if (est.polar(opts.polar_threshold)) {
    fail(ErrorCode::GreenUndefinedPolarSet,
         "capacity estimate " + std::to_string(est.value) + " is below the polar threshold");
  }

  // Probes: the candidate grid plus midpoints between each Fekete point and
  // its nearest neighbour, so clouds with few extra points still get probed
  // between the selected nodes.
  std::vector<Complex> probes = candidates;
  for (std::size_t i = 0; i < fk.points.size(); ++i) {
    std::size_t nearest = i;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < fk.points.size(); ++j) {
      if (j == i) continue;
      const double d = std::norm(fk.points[i] - fk.points[j]);
      if (d < best) {
        best = d;
        nearest = j;
      }
    }
    probes.push_back(0.5 * (fk.points[i] + fk.points[nearest]));
  }

  const double inv_n = 1.0 / static_cast<double>(fk.points.size());
  double level = -std::numeric_limits<double>::infinity();
  for (const auto& s : probes) {
    double sum = 0.0;
    for (const auto& p : fk.points) sum += detail::log_distance(s, p);
    const double u = sum * inv_n;
    if (std::isfinite(u)) level = std::max(level, u);
  }
  if (!std::isfinite(level)) level = std::log(est.value);

  FeketePotentialGreen backing;
  backing.points = fk.points;
  backing.level = level;
  backing.capacity = est.value;
  backing.error_estimate = std::max(0.0, std::log(est.value) - level);
  return GreenEvaluator(std::move(backing));
}

inline GreenEvaluator green_function(const CompactSet& set, GreenMethod method = GreenMethod::Auto,
                                     const GreenOptions& opts = {}) {
  const bool analytic_shape = set.is<Disk>() || set.is<Segment>();
  if (method == GreenMethod::Analytic) {
    require(analytic_shape, "analytic Green function is only available for disks and segments");
  }
  if (method == GreenMethod::Fekete || !analytic_shape) return fekete_green(set, opts);
  if (set.is<Disk>()) {
    const auto& d = set.as<Disk>();
    return GreenEvaluator(AnalyticDiskGreen{d.center, d.radius});
  }
  const auto& s = set.as<Segment>();
  return GreenEvaluator(AnalyticSegmentGreen{s.a, s.b});
}

/// -log cap(K); closed form for disks and segments, Fekete estimate
/// otherwise. +infinity for polar sets.
inline double robin_constant(const CompactSet& set, std::size_t n = kDefaultCapacityPoints) {
  if (set.is<Disk>()) return -std::log(set.as<Disk>().radius);
  if (set.is<Segment>()) {
    const auto& s = set.as<Segment>();
    return -std::log(std::abs(s.b - s.a) / 4.0);
  }
  const auto est = capacity(set, n);
  if (est.polar()) return std::numeric_limits<double>::infinity();
  return est.robin_constant;
}

}  // namespace holext
