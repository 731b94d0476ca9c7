#pragma once

/// \file
/// From finite data about a series f(z1, z2) = sum_n P_n(z2) z1^n and a set
/// of convergence samples in the z2-plane, build an ExtensionCertificate: a
/// domain |z1| < C2 / (1 + |z2|)^C1 on which the series converges with an
/// explicit geometric tail, plus an evaluator that honours that tail.
///
/// Pipeline: fit degree growth -> radius profile R(z2) -> smallest non-polar
/// stratum {R >= 1/i} -> doubling search for a non-polar sublevel set of
/// max_n |P_n| rho0^{-|n|} (the witness compact) -> Green function of the
/// witness -> growth constant gammaC -> C2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holext/bernstein.hpp"
#include "holext/capacity.hpp"
#include "holext/errors.hpp"
#include "holext/polynomial.hpp"
#include "holext/set_model.hpp"

namespace holext {

struct MultiIndex {
  std::vector<unsigned> entries;

  std::size_t norm() const {
    std::size_t s = 0;
    for (auto e : entries) s += e;
    return s;
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.entries < b.entries; }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries == b.entries; }
};

/// All multi-indices in N^k with the given norm, lexicographically descending.
inline std::vector<MultiIndex> indices_of_norm(std::size_t k, std::size_t norm) {
  require(k >= 1, "multi-index dimension must be >= 1");
  std::vector<MultiIndex> out;
  std::vector<unsigned> cur(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == k) {
      cur[pos] = static_cast<unsigned>(left);
      out.push_back({cur});
      return;
    }
    for (std::size_t v = left + 1; v-- > 0;) {
      cur[pos] = static_cast<unsigned>(v);
      rec(pos + 1, left - v);
    }
  };
  rec(0, norm);
  return out;
}

/// Number of multi-indices in N^k of norm j: binomial(j + k - 1, k - 1).
inline double indices_count(std::size_t k, std::size_t j) {
  double c = 1.0;
  for (std::size_t i = 1; i < k; ++i)
    c = c * static_cast<double>(j + i) / static_cast<double>(i);
  return c;
}

inline std::complex<double> monomial_value(const MultiIndex& n, const std::vector<Complex>& z) {
  Complex v{1.0};
  for (std::size_t j = 0; j < n.entries.size(); ++j) v *= ipow(z[j], n.entries[j]);
  return v;
}

/// The family (P_n) for |n| <= max_norm, given by a pure provider.
template <class T>
struct BasicPolynomialSequence {
  std::size_t k = 1;
  std::size_t max_norm = 0;
  std::function<BasicPolynomial<T>(const MultiIndex&)> provider;
  std::optional<double> declared_C0;
  std::optional<double> declared_C1;

  BasicPolynomial<T> operator()(const MultiIndex& n) const {
    require(n.entries.size() == k, "multi-index has wrong dimension");
    require(n.norm() <= max_norm, "multi-index norm exceeds max_norm");
    return provider(n);
  }
  BasicPolynomial<T> at(std::size_t n) const {
    require(k == 1, "at(n) needs k == 1");
    return (*this)(MultiIndex{{static_cast<unsigned>(n)}});
  }
};

using PolynomialSequence = BasicPolynomialSequence<Complex>;

template <class T>
BasicPolynomialSequence<T> tabulated_sequence(
    std::size_t k, std::size_t max_norm, std::map<MultiIndex, BasicPolynomial<T>> table) {
  auto shared = std::make_shared<const std::map<MultiIndex, BasicPolynomial<T>>>(std::move(table));
  BasicPolynomialSequence<T> seq;
  seq.k = k;
  seq.max_norm = max_norm;
  seq.provider = [shared](const MultiIndex& n) {
    auto it = shared->find(n);
    return it == shared->end() ? BasicPolynomial<T>{} : it->second;
  };
  return seq;
}

/// P_n = (lambda z2)^n, i.e. f = 1 / (1 - lambda z1 z2).
inline PolynomialSequence geometric_sequence(Complex lambda, std::size_t max_norm) {
  PolynomialSequence seq;
  seq.max_norm = max_norm;
  seq.provider = [lambda](const MultiIndex& n) {
    const std::size_t d = n.norm();
    return Polynomial1D::monomial(d, ipow(lambda, d));
  };
  return seq;
}

/// P_n = c for every n.
inline PolynomialSequence constant_sequence(Complex c, std::size_t max_norm) {
  PolynomialSequence seq;
  seq.max_norm = max_norm;
  seq.provider = [c](const MultiIndex&) { return Polynomial1D::constant(c); };
  return seq;
}

/// P_n = 1 + z + ... + z^floor(sqrt n): unit coefficients, sublinear degree.
inline PolynomialSequence sqrt_degree_sequence(std::size_t max_norm) {
  PolynomialSequence seq;
  seq.max_norm = max_norm;
  seq.provider = [](const MultiIndex& n) {
    const auto d = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n.norm()))));
    return Polynomial1D(std::vector<Complex>(d + 1, Complex{1.0}));
  };
  return seq;
}

/// Every (index, polynomial) pair with norm <= max_norm, in norm order.
template <class T>
std::vector<std::pair<MultiIndex, BasicPolynomial<T>>> materialize(
    const BasicPolynomialSequence<T>& seq) {
  std::vector<std::pair<MultiIndex, BasicPolynomial<T>>> out;
  for (std::size_t j = 0; j <= seq.max_norm; ++j)
    for (auto& n : indices_of_norm(seq.k, j)) {
      auto p = seq(n);
      out.emplace_back(std::move(n), std::move(p));
    }
  return out;
}

struct DegreeGrowth {
  double C0 = 0.0;
  double C1 = 0.0;
};

namespace detail {

inline std::string index_string(const MultiIndex& n) {
  std::string s = "(";
  for (std::size_t j = 0; j < n.entries.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(n.entries[j]);
  }
  return s + ")";
}

inline bool within_growth(std::size_t degree, std::size_t norm, double c0, double c1) {
  return static_cast<double>(degree) <= c0 + c1 * static_cast<double>(norm) + 1e-9;
}

}  // namespace detail

/// Constants with deg P_n <= C0 + C1 |n| on all available indices.
/// Declared constants are validated. Otherwise C0 is anchored at deg P_0 and
/// C1 is the least slope that covers every remaining index. If only one
/// constant is declared the other one is fitted around it.
template <class T>
DegreeGrowth fit_degree_growth(const BasicPolynomialSequence<T>& seq) {
  require(seq.max_norm >= 1, "fit_degree_growth: need at least two available indices");
  std::vector<std::pair<MultiIndex, std::size_t>> data;
  for (const auto& [n, p] : materialize(seq)) {
    if (auto d = p.degree()) data.emplace_back(n, *d);
  }
  if (seq.declared_C0 && seq.declared_C1) {
    const double c0 = *seq.declared_C0, c1 = *seq.declared_C1;
    require(c0 >= 0.0 && c1 >= 0.0, "declared growth constants must be >= 0");
    for (const auto& [n, d] : data) {
      if (!detail::within_growth(d, n.norm(), c0, c1)) {
        fail(ErrorCode::DegreeGrowthViolated,
             "deg P_n = " + std::to_string(d) + " exceeds C0 + C1 |n| at n = " +
                 detail::index_string(n));
      }
    }
    return {c0, c1};
  }
  DegreeGrowth fit;
  if (seq.declared_C1) {
    fit.C1 = *seq.declared_C1;
    for (const auto& [n, d] : data)
      fit.C0 = std::max(fit.C0, static_cast<double>(d) - fit.C1 * static_cast<double>(n.norm()));
    return fit;
  }
  if (seq.declared_C0) {
    fit.C0 = *seq.declared_C0;
  } else {
    for (const auto& [n, d] : data)
      if (n.norm() == 0) fit.C0 = std::max(fit.C0, static_cast<double>(d));
  }
  for (const auto& [n, d] : data) {
    if (n.norm() == 0) {
      if (static_cast<double>(d) > fit.C0 + 1e-9) {
        fail(ErrorCode::DegreeGrowthViolated, "deg P_0 exceeds declared C0");
      }
      continue;
    }
    fit.C1 = std::max(fit.C1, (static_cast<double>(d) - fit.C0) / static_cast<double>(n.norm()));
  }
  return fit;
}

/// Least tail slope once the head |n| <= tail_start is absorbed into the
/// intercept: returns (intercept, slope).
template <class T>
DegreeGrowth tail_degree_growth(const BasicPolynomialSequence<T>& seq, std::size_t tail_start) {
  DegreeGrowth out;
  std::vector<std::pair<std::size_t, std::size_t>> data;
  for (const auto& [n, p] : materialize(seq))
    if (auto d = p.degree()) data.emplace_back(n.norm(), *d);
  for (const auto& [norm, d] : data)
    if (norm <= tail_start) out.C0 = std::max(out.C0, static_cast<double>(d));
  for (const auto& [norm, d] : data)
    if (norm > tail_start)
      out.C1 = std::max(out.C1, (static_cast<double>(d) - out.C0) / static_cast<double>(norm));
  return out;
}

struct RadiusSample {
  Complex z2;
  double radius = 0.0;  ///< +infinity when every tail coefficient vanishes
};

struct RadiusProfile {
  std::vector<RadiusSample> samples;
};

/// R(z2) ~ 1 / max over the tail window of |P_n(z2)|^{1/|n|}.
inline RadiusProfile radius_profile(const PolynomialSequence& seq,
                                    const std::vector<Complex>& samples, std::size_t window) {
  if (window == 0) fail(ErrorCode::WindowEmpty, "tail window is empty");
  require(window <= seq.max_norm, "window must be <= max_norm");
  const std::size_t lo = seq.max_norm - window + 1;
  std::vector<std::pair<std::size_t, Polynomial1D>> tail;
  for (std::size_t j = lo; j <= seq.max_norm; ++j)
    for (const auto& n : indices_of_norm(seq.k, j)) tail.emplace_back(j, seq(n));

  RadiusProfile profile;
  profile.samples.reserve(samples.size());
  for (const auto& z : samples) {
    require_finite(z, "sample point");
    double worst = -std::numeric_limits<double>::infinity();  // max log|P_n|/|n|
    for (const auto& [norm, p] : tail) {
      const double a = std::abs(p(z));
      if (a == 0.0) continue;
      worst = std::max(worst, std::log(a) / static_cast<double>(norm));
    }
    profile.samples.push_back({z, std::isfinite(worst) ? std::exp(-worst)
                                                       : std::numeric_limits<double>::infinity()});
  }
  return profile;
}

struct CapacityTest {
  std::size_t points = kDefaultCapacityPoints;
  double eps = kPolarThreshold;

  double operator()(const std::vector<Complex>& cloud) const {
    if (cloud.size() < points) return 0.0;
    const auto est = capacity(CompactSet::cloud(cloud), points);
    return est.degenerate ? 0.0 : est.value;
  }
};

struct Stratum {
  std::size_t index = 0;  ///< i with K_i = {R >= 1/i}
  CompactSet set = CompactSet::cloud({Complex{}});
  double capacity = 0.0;
};

/// Smallest i <= i_max whose stratum {z2 : R(z2) >= 1/i} is non-polar.
inline Stratum stratify_and_find_nonpolar(const RadiusProfile& profile, std::size_t i_max,
                                          const CapacityTest& test = {}) {
  require(!profile.samples.empty(), "radius profile is empty");
  require(i_max >= 1, "i_max must be >= 1");
  // K_i only changes at i = ceil(1/R) for some sample, so test those.
  std::vector<std::size_t> entry;
  for (const auto& s : profile.samples) {
    if (!(s.radius > 0.0)) continue;
    double need = std::isinf(s.radius) ? 1.0 : std::ceil(1.0 / s.radius);
    if (need > static_cast<double>(i_max)) continue;
    auto i = std::max<std::size_t>(1, static_cast<std::size_t>(need));
    while (i > 1 && s.radius >= 1.0 / static_cast<double>(i - 1)) --i;
    while (s.radius < 1.0 / static_cast<double>(i)) ++i;
    if (i <= i_max) entry.push_back(i);
  }
  std::sort(entry.begin(), entry.end());
  entry.erase(std::unique(entry.begin(), entry.end()), entry.end());
  for (std::size_t i : entry) {
    std::vector<Complex> pts;
    for (const auto& s : profile.samples)
      if (s.radius >= 1.0 / static_cast<double>(i)) pts.push_back(s.z2);
    const double cap = test(pts);
    if (cap > test.eps) return {i, CompactSet::cloud(std::move(pts)), cap};
  }
  fail(ErrorCode::AllStrataPolar,
       "no stratum R >= 1/i with i <= " + std::to_string(i_max) + " has positive capacity");
}

struct UniformStratum {
  CompactSet set = CompactSet::cloud({Complex{}});  ///< witness compact C
  double rho1 = 1.0;
  double M0 = 1.0;
  unsigned log2_level = 0;  ///< C = {phi <= 2^log2_level}
  double capacity = 0.0;
};

/// Doubling search p = 1, 2, 4, ... for a non-polar sublevel set
/// {phi <= p} of phi(z2) = max_n |P_n(z2)| rho0^{-|n|}, then the tight
/// constants with |P_n| <= M0 rho1^{|n|} on it.
inline UniformStratum uniform_bound_compact(const PolynomialSequence& seq,
                                            const CompactSet& stratum, double rho0,
                                            const CapacityTest& test = {}) {
  require(rho0 > 0.0 && std::isfinite(rho0), "rho0 must be positive");
  const auto terms = materialize(seq);
  const auto pts = discretize(stratum);
  std::vector<double> log_phi(pts.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t s = 0; s < pts.size(); ++s)
    for (const auto& [n, p] : terms) {
      const double a = std::abs(p(pts[s]));
      if (a > 0.0)
        log_phi[s] = std::max(log_phi[s], std::log(a) - static_cast<double>(n.norm()) * std::log(rho0));
    }

  std::size_t last_count = 0;
  for (unsigned level = 0; level <= 64; ++level) {
    const double bound = static_cast<double>(level) * std::numbers::ln2 + 1e-12;
    std::vector<Complex> sub;
    for (std::size_t s = 0; s < pts.size(); ++s)
      if (log_phi[s] <= bound) sub.push_back(pts[s]);
    if (sub.empty() || sub.size() == last_count) continue;
    last_count = sub.size();
    const double cap = test(sub);
    if (!(cap > test.eps)) continue;

    UniformStratum out;
    out.log2_level = level;
    out.capacity = cap;
    double log_rho1 = -std::numeric_limits<double>::infinity();
    for (const auto& z : sub)
      for (const auto& [n, p] : terms) {
        const double a = std::abs(p(z));
        if (n.norm() == 0) {
          out.M0 = std::max(out.M0, a);
        } else if (a > 0.0) {
          log_rho1 = std::max(log_rho1, std::log(a) / static_cast<double>(n.norm()));
        }
      }
    out.rho1 = std::isfinite(log_rho1) ? std::exp(log_rho1) : 1.0;
    out.set = CompactSet::cloud(std::move(sub));
    return out;
  }
  fail(ErrorCode::NoUniformStratum, "no sublevel set phi <= 2^p (p <= 64) has positive capacity");
}

/// M0 rho1^{|n|} exp((C0 + C1 |n|) g(z2)).
inline double global_bound(double M0, double rho1, const DegreeGrowth& growth,
                           const GreenEvaluator& green, Complex z2, std::size_t norm) {
  const double g = green(z2);
  const auto nn = static_cast<double>(norm);
  return M0 * std::pow(rho1, nn) * std::exp((growth.C0 + growth.C1 * nn) * g);
}

enum class DomainKind { Linear, Uniform };

struct ExtensionConfig {
  std::size_t window = 0;  ///< 0 selects max_norm / 2
  std::size_t i_max = 100;
  double theta = 0.5;  ///< rho0 = i / theta
  double eps_cap = kPolarThreshold;
  std::size_t capacity_points = kDefaultCapacityPoints;
  double z2_max = 1e3;
  std::size_t gamma_radii = 256;
  std::size_t gamma_angles = 128;
  double sublinear_tol = 0.05;
};

struct ExtensionCertificate {
  DomainKind kind = DomainKind::Linear;
  double rho0 = 1.0;
  double rho1 = 1.0;
  double M0 = 1.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double gammaC = 0.0;  ///< includes the Green error allowance
  double C2 = 1.0;
  double exponent = 0.0;
  std::size_t k = 1;
  std::size_t N_used = 0;
  std::size_t stratum_index = 1;
  unsigned stratum_log2_level = 0;
  double witness_capacity = 0.0;
  std::vector<Complex> witness;
  GreenEvaluator green;
  double green_error = 0.0;
  ExtensionConfig config;

  /// The certified bound uses exponent C1 on (1 + |z2|); flags when that
  /// differs from the first-power shape.
  bool exponent_differs_from_one() const { return kind == DomainKind::Linear && exponent != 1.0; }

  /// g(z2) plus the allowance for discretization error of the witness Green
  /// function; every certified bound is built from this value.
  double certified_green(Complex z2) const { return green(z2) + green_error; }

  /// Radius r(z2) of the certified disk in z1 (max-norm for k > 1); zero
  /// outside the z2-range of a uniform certificate.
  double radius(Complex z2) const {
    if (kind == DomainKind::Uniform) return std::abs(z2) <= config.z2_max ? C2 : 0.0;
    return C2 / std::pow(1.0 + std::abs(z2), exponent);
  }

  /// Geometric ratio rho1 e^{C1 g(z2)} |z1|.
  double ratio(double z1_norm, Complex z2) const {
    return rho1 * std::exp(C1 * certified_green(z2)) * z1_norm;
  }
};

namespace detail {

template <class F>
auto run_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

/// sup of g(z) - log(1 + |z|) (linear) or of g(z) (uniform) over a
/// radial-angular grid up to z2_max, the witness points, and, for the linear
/// form, the limit at infinity.
inline double growth_constant(const GreenEvaluator& green, const std::vector<Complex>& witness,
                              const ExtensionConfig& cfg, DomainKind kind) {
  auto f = [&](Complex z) {
    const double g = green(z);
    return kind == DomainKind::Linear ? g - std::log1p(std::abs(z)) : g;
  };
  double best = f(Complex{});
  for (const auto& w : witness)
    if (std::abs(w) <= cfg.z2_max) best = std::max(best, f(w));
  const double r_min = std::min(1e-3, cfg.z2_max);
  for (std::size_t i = 0; i < cfg.gamma_radii; ++i) {
    const double t = cfg.gamma_radii == 1 ? 1.0
                                          : static_cast<double>(i) / static_cast<double>(cfg.gamma_radii - 1);
    const double r = r_min * std::pow(cfg.z2_max / r_min, t);
    for (std::size_t a = 0; a < cfg.gamma_angles; ++a) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(a) /
                           static_cast<double>(cfg.gamma_angles);
      best = std::max(best, f(std::polar(r, theta)));
    }
  }
  if (kind == DomainKind::Linear) best = std::max(best, green.robin_constant());
  return best;
}

inline ExtensionCertificate certify_common(const PolynomialSequence& seq,
                                           const std::vector<Complex>& samples,
                                           const ExtensionConfig& cfg, DegreeGrowth growth,
                                           DomainKind kind) {
  require(!samples.empty(), "no convergence samples supplied");
  require(cfg.theta > 0.0 && cfg.theta < 1.0, "theta must be in (0, 1)");
  require(cfg.z2_max > 0.0, "z2_max must be > 0");
  const std::size_t window = cfg.window == 0 ? std::max<std::size_t>(1, seq.max_norm / 2) : cfg.window;
  const CapacityTest test{cfg.capacity_points, cfg.eps_cap};

  const auto profile = run_stage("radius_profile", [&] { return radius_profile(seq, samples, window); });
  const auto stratum = run_stage("stratify", [&] { return stratify_and_find_nonpolar(profile, cfg.i_max, test); });
  const double rho0 = static_cast<double>(stratum.index) / cfg.theta;
  const auto uniform = run_stage("uniform_bound", [&] { return uniform_bound_compact(seq, stratum.set, rho0, test); });

  GreenOptions gopts;
  gopts.fekete_n = cfg.capacity_points;
  gopts.polar_threshold = cfg.eps_cap;
  const auto green = run_stage("green", [&] { return green_function(uniform.set, GreenMethod::Auto, gopts); });

  ExtensionCertificate cert;
  cert.kind = kind;
  cert.rho0 = rho0;
  cert.rho1 = uniform.rho1;
  cert.M0 = uniform.M0;
  cert.C0 = growth.C0;
  cert.C1 = growth.C1;
  cert.k = seq.k;
  cert.N_used = seq.max_norm;
  cert.stratum_index = stratum.index;
  cert.stratum_log2_level = uniform.log2_level;
  cert.witness_capacity = uniform.capacity;
  cert.witness = uniform.set.as<PointCloud>().points;
  cert.green = green;
  cert.green_error = green.error_estimate();
  cert.config = cfg;
  cert.config.window = window;
  cert.gammaC = growth_constant(green, cert.witness, cfg, kind) + cert.green_error;
  cert.C2 = 1.0 / (cert.rho1 * std::exp(cert.C1 * cert.gammaC));
  cert.exponent = kind == DomainKind::Linear ? cert.C1 : 0.0;
  return cert;
}

}  // namespace detail

/// Certificate for the domain |z1| < C2 / (1 + |z2|)^C1.
inline ExtensionCertificate certify_extension(const PolynomialSequence& seq,
                                              const std::vector<Complex>& samples,
                                              const ExtensionConfig& cfg = {}) {
  const auto growth = detail::run_stage("fit_degree_growth", [&] { return fit_degree_growth(seq); });
  return detail::certify_common(seq, samples, cfg, growth, DomainKind::Linear);
}

/// Certificate with a z2-independent radius for sublinear degree growth.
/// The residual tail slope eps (least slope past |n| = N/2 once the head is
/// absorbed into C0) must be below sublinear_tol and no larger than the slope
/// past N/4. The radius C2 = e^{-eps gammaC} / rho1 holds for |z2| <= z2_max.
inline ExtensionCertificate certify_uniform(const PolynomialSequence& seq,
                                            const std::vector<Complex>& samples,
                                            const ExtensionConfig& cfg = {}) {
  const auto growth = detail::run_stage("sublinear", [&] {
    require(seq.max_norm >= 4, "certify_uniform needs max_norm >= 4");
    const auto half = tail_degree_growth(seq, seq.max_norm / 2);
    const auto quarter = tail_degree_growth(seq, seq.max_norm / 4);
    if (!(half.C1 < cfg.sublinear_tol) || half.C1 > quarter.C1 + 1e-12) {
      fail(ErrorCode::NotSublinear, "tail degree slope " + std::to_string(half.C1) +
                                        " past |n| = " + std::to_string(seq.max_norm / 2) +
                                        " is not below " + std::to_string(cfg.sublinear_tol));
    }
    return half;
  });
  return detail::certify_common(seq, samples, cfg, growth, DomainKind::Uniform);
}

struct EvaluationResult {
  Complex value;
  double tail_bound = 0.0;
  std::size_t terms_used = 0;  ///< highest norm N included in the partial sum
  double ratio = 0.0;          ///< certified geometric ratio q
};

namespace detail {

/// sum_{j > N} count(j) q^j, exact for k = 1 and bounded by a geometric
/// remainder once the term ratio q (j + k) / (j + 1) drops below (1 + q) / 2.
inline double tail_sum(std::size_t k, double q, std::size_t N) {
  if (q == 0.0) return 0.0;
  if (k == 1) return std::pow(q, static_cast<double>(N + 1)) / (1.0 - q);
  double sum = 0.0;
  for (std::size_t j = N + 1;; ++j) {
    const double term = indices_count(k, j) * std::pow(q, static_cast<double>(j));
    const double next_ratio = q * static_cast<double>(j + k) / static_cast<double>(j + 1);
    if (next_ratio <= 0.5 * (1.0 + q)) return sum + term / (1.0 - next_ratio);
    sum += term;
  }
}

}  // namespace detail

/// Partial sum of f(z1, z2) with the smallest N whose certified tail is <= tol.
inline EvaluationResult evaluate(const ExtensionCertificate& cert, const PolynomialSequence& seq,
                                 const std::vector<Complex>& z1, Complex z2, double tol) {
  require(tol > 0.0, "tol must be > 0");
  require(z1.size() == cert.k && seq.k == cert.k, "z1 dimension does not match the certificate");
  require_finite(z2, "z2");
  double z1_norm = 0.0;
  for (const auto& c : z1) z1_norm = std::max(z1_norm, std::abs(require_finite(c, "z1")));

  const double r = cert.radius(z2);
  const double q = cert.ratio(z1_norm, z2);
  if (!(z1_norm < r) || !(q < 1.0)) {
    fail(ErrorCode::OutsideCertifiedDomain,
         "|z1| = " + std::to_string(z1_norm) + " is not inside the certified radius " +
             std::to_string(r) + " at |z2| = " + std::to_string(std::abs(z2)));
  }
  const double prefactor = cert.M0 * std::exp(cert.C0 * cert.certified_green(z2));
  const std::size_t n_max = std::min(seq.max_norm, cert.N_used);

  EvaluationResult out;
  out.ratio = q;
  std::optional<std::size_t> chosen;
  for (std::size_t N = 0; N <= n_max; ++N) {
    const double tail = prefactor * detail::tail_sum(cert.k, q, N);
    if (tail <= tol) {
      chosen = N;
      out.tail_bound = tail;
      break;
    }
  }
  if (!chosen) {
    fail(ErrorCode::InsufficientData,
         "tail bound at N = " + std::to_string(n_max) + " is " +
             std::to_string(prefactor * detail::tail_sum(cert.k, q, n_max)) + " > tol");
  }
  out.terms_used = *chosen;
  Complex sum{};
  for (std::size_t j = 0; j <= *chosen; ++j)
    for (const auto& n : indices_of_norm(cert.k, j)) sum += seq(n)(z2) * monomial_value(n, z1);
  out.value = sum;
  return out;
}

/// Cauchy product (fg)_n = sum_{a + b = n} P_a Q_b for |n| <= N.
template <class T>
BasicPolynomialSequence<T> ring_multiply(const BasicPolynomialSequence<T>& f,
                                         const BasicPolynomialSequence<T>& g, std::size_t N) {
  require(f.k == g.k, "ring_multiply: factors must share k");
  require(f.max_norm >= N && g.max_norm >= N, "ring_multiply: insufficient max_norm on a factor");
  std::map<MultiIndex, BasicPolynomial<T>> table;
  for (std::size_t j = 0; j <= N; ++j) {
    for (const auto& n : indices_of_norm(f.k, j)) {
      BasicPolynomial<T> acc;
      // a ranges over the box 0 <= a <= n componentwise.
      std::vector<unsigned> a(f.k, 0);
      while (true) {
        MultiIndex ia{a}, ib{n.entries};
        for (std::size_t c = 0; c < f.k; ++c) ib.entries[c] -= a[c];
        acc = acc + f(ia) * g(ib);
        std::size_t c = 0;
        while (c < f.k && a[c] == n.entries[c]) a[c++] = 0;
        if (c == f.k) break;
        ++a[c];
      }
      table.emplace(n, std::move(acc));
    }
  }
  return tabulated_sequence<T>(f.k, N, std::move(table));
}

}  // namespace holext
