#pragma once

/// \file
/// Gamma-projection and Gamma-capacity of sets in C^m (m <= 3).
///
/// The projection C^m -> C^{m-1} keeps the points whose fiber in the last
/// coordinate has positive capacity; the composition down to C^1 is followed
/// by a planar capacity estimate, and the supremum over unitary images is
/// replaced by a maximum over seeded Haar samples (identity always first).

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "holext/capacity.hpp"
#include "holext/errors.hpp"
#include "holext/set_model.hpp"

namespace holext {

inline constexpr std::size_t kMaxGammaDimension = 3;

/// Sampling resolution for fibers and the final projected plane.
struct GammaGrid {
  std::size_t fiber_resolution = 64;      ///< grid points per real axis in a fiber
  std::size_t projected_resolution = 32;  ///< grid points per real axis in C^1
  std::size_t fiber_points = 32;          ///< Leja points used to test a fiber
  std::size_t capacity_points = 128;      ///< Fekete points for the final capacity
  double fiber_threshold = kPolarThreshold;
};

struct UnitarySample {
  Eigen::MatrixXcd matrix;
  std::uint64_t seed = 0;  ///< derived per-index seed; 0 marks the identity
  std::size_t index = 0;
};

struct GammaCapResult {
  double value = 0.0;
  UnitarySample best_unitary;
  std::vector<std::pair<std::uint64_t, double>> per_unitary;  ///< (seed, capacity)
  double fiber_threshold = kPolarThreshold;
  GammaGrid grid;
  std::size_t dimension = 1;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Standard normal via Box-Muller on mt19937_64 output; both are fully
/// specified, so draws are identical across standard libraries.
class PortableNormal {
 public:
  explicit PortableNormal(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count <= 1 || lo == hi) return {0.5 * (lo + hi)};
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k)
    v[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  v.back() = hi;
  return v;
}

/// resolution^2 grid points over the box; a degenerate axis hands its share
/// of the budget to the other one so thin sets still get resolution^2 samples.
inline std::vector<Complex> box_grid(const CoordinateBox& box, std::size_t resolution) {
  const bool flat_re = box.re_lo == box.re_hi;
  const bool flat_im = box.im_lo == box.im_hi;
  const std::size_t re_count = flat_re ? 1 : (flat_im ? resolution * resolution : resolution);
  const std::size_t im_count = flat_im ? 1 : (flat_re ? resolution * resolution : resolution);
  const auto re = linspace(box.re_lo, box.re_hi, re_count);
  const auto im = linspace(box.im_lo, box.im_hi, im_count);
  std::vector<Complex> out;
  out.reserve(re.size() * im.size());
  for (double y : im)
    for (double x : re) out.emplace_back(x, y);
  return out;
}

inline void require_bounded(const SetPredicate& pred) {
  for (const auto& b : pred.bounding_box) {
    if (!b.finite()) fail(ErrorCode::UnboundedSet, "bounding box is not finite");
  }
  require(pred.bounding_box.size() == pred.dimension, "bounding box size must equal dimension");
}

/// Capacity of a finite sample; fewer than n distinct points counts as polar.
inline double cloud_capacity(const std::vector<Complex>& pts, std::size_t n, bool refine) {
  if (pts.size() < n) return 0.0;
  FeketeOptions opts;
  opts.refine = refine;
  const auto est = capacity_from_fekete(fekete_from_candidates(pts, n, opts), n);
  return est.degenerate ? 0.0 : est.value;
}

}  // namespace detail

inline UnitarySample identity_unitary(std::size_t m) {
  return {Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)), 0, 0};
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal folded back into Q. Index 0 is the identity.
inline UnitarySample haar_unitary(std::size_t m, std::uint64_t seed, std::size_t index) {
  if (index == 0) return identity_unitary(m);
  const std::uint64_t derived = detail::splitmix64(seed ^ detail::splitmix64(index));
  detail::PortableNormal normal(derived);
  const auto dim = static_cast<Eigen::Index>(m);
  Eigen::MatrixXcd z(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double re = normal();
      const double im = normal();
      z(r, c) = std::complex<double>(re, im) / std::numbers::sqrt2;
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto d = rmat(k, k);
    const auto phase = std::abs(d) > 0.0 ? d / std::abs(d) : std::complex<double>(1.0);
    q.col(k) *= phase;
  }
  return {q, derived, index};
}

/// A * K for an invertible matrix A. Membership pulls points back through
/// A^{-1}; the bounding box is the image of K's box under |A| entrywise.
inline SetPredicate linear_image_predicate(const Eigen::MatrixXcd& a, const SetPredicate& pred) {
  detail::require_bounded(pred);
  const auto m = static_cast<Eigen::Index>(pred.dimension);
  require(a.rows() == m && a.cols() == m, "linear image: matrix size must match dimension");
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  require(lu.isInvertible(), "linear image: matrix must be invertible");
  const Eigen::MatrixXcd inverse = lu.inverse();

  SetPredicate out;
  out.dimension = pred.dimension;
  for (Eigen::Index j = 0; j < m; ++j) {
    Complex center{};
    double half_re = 0.0, half_im = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& b = pred.bounding_box[static_cast<std::size_t>(k)];
      const Complex c(0.5 * (b.re_lo + b.re_hi), 0.5 * (b.im_lo + b.im_hi));
      const double wr = 0.5 * (b.re_hi - b.re_lo);
      const double wi = 0.5 * (b.im_hi - b.im_lo);
      const Complex ajk = a(j, k);
      center += ajk * c;
      half_re += std::abs(ajk.real()) * wr + std::abs(ajk.imag()) * wi;
      half_im += std::abs(ajk.imag()) * wr + std::abs(ajk.real()) * wi;
    }
    out.bounding_box.push_back({center.real() - half_re, center.real() + half_re,
                                center.imag() - half_im, center.imag() + half_im});
  }
  out.membership = [inverse, pred](std::span<const Complex> z) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(z.size()));
    for (std::size_t j = 0; j < z.size(); ++j) v(static_cast<Eigen::Index>(j)) = z[j];
    const Eigen::VectorXcd back = inverse * v;
    std::vector<Complex> pt(back.data(), back.data() + back.size());
    return pred.contains(pt);
  };
  if (pred.planar && pred.dimension == 1) out.planar = transform(*pred.planar, a(0, 0));
  return out;
}

/// Gamma-projection onto the first m-1 coordinates: z is kept iff the
/// sampled fiber {w : (z, w) in K} has capacity above the fiber threshold.
inline SetPredicate gamma_project(const SetPredicate& pred, const GammaGrid& grid = {}) {
  require(pred.dimension >= 2, "gamma_project: dimension must be >= 2");
  detail::require_bounded(pred);
  const std::size_t m = pred.dimension;
  const auto fiber_grid = detail::box_grid(pred.bounding_box[m - 1], grid.fiber_resolution);

  SetPredicate out;
  out.dimension = m - 1;
  out.bounding_box.assign(pred.bounding_box.begin(), pred.bounding_box.end() - 1);
  out.membership = [pred, fiber_grid, grid](std::span<const Complex> z) {
    std::vector<Complex> point(z.begin(), z.end());
    point.push_back({});
    std::vector<Complex> fiber;
    for (const auto& w : fiber_grid) {
      point.back() = w;
      if (pred.contains(point)) fiber.push_back(w);
    }
    return detail::cloud_capacity(fiber, grid.fiber_points, false) > grid.fiber_threshold;
  };
  return out;
}

/// Gamma_m^1 (K) as a planar set: projections applied last coordinate first,
/// then the remaining planar predicate sampled on the projected grid.
/// Planar predicates that carry an exact shape return that shape.
inline std::optional<CompactSet> project_to_plane(const SetPredicate& pred,
                                                  const GammaGrid& grid = {}) {
  detail::require_bounded(pred);
  if (pred.dimension == 1 && pred.planar) return *pred.planar;
  SetPredicate current = pred;
  while (current.dimension > 1) current = gamma_project(current, grid);
  std::vector<Complex> kept;
  for (const auto& z : detail::box_grid(current.bounding_box[0], grid.projected_resolution)) {
    const Complex pt[1] = {z};
    if (current.contains(pt)) kept.push_back(z);
  }
  if (kept.empty()) return std::nullopt;
  return CompactSet::cloud(std::move(kept));
}

inline double projected_capacity(const std::optional<CompactSet>& plane, const GammaGrid& grid) {
  if (!plane) return 0.0;
  if (plane->is<PointCloud>())
    return detail::cloud_capacity(plane->as<PointCloud>().points, grid.capacity_points, true);
  const auto est = capacity(*plane, grid.capacity_points);
  return est.degenerate ? 0.0 : est.value;
}

/// Seeded lower-bound estimate of sup over unitaries A of cap(Gamma_m^1(A K)).
inline GammaCapResult gamma_cap(const SetPredicate& pred, std::size_t unitary_count,
                                std::uint64_t seed, const GammaGrid& grid = {}) {
  require(pred.dimension >= 1, "gamma_cap: dimension must be >= 1");
  if (pred.dimension > kMaxGammaDimension) {
    fail(ErrorCode::DimensionTooLarge,
         "gamma_cap supports m <= " + std::to_string(kMaxGammaDimension));
  }
  require(unitary_count >= 1, "gamma_cap: unitary_count must be >= 1");
  detail::require_bounded(pred);

  GammaCapResult result;
  result.dimension = pred.dimension;
  result.fiber_threshold = grid.fiber_threshold;
  result.grid = grid;
  result.seed = seed;
  result.value = -1.0;
  for (std::size_t u = 0; u < unitary_count; ++u) {
    auto unitary = haar_unitary(pred.dimension, seed, u);
    const SetPredicate image = u == 0 ? pred : linear_image_predicate(unitary.matrix, pred);
    const double cap = projected_capacity(project_to_plane(image, grid), grid);
    result.per_unitary.emplace_back(unitary.seed, cap);
    if (cap > result.value) {
      result.value = cap;
      result.best_unitary = std::move(unitary);
    }
  }
  return result;
}

/// Planar witness Gamma_m^1(A_best K) on which the extension pipeline runs.
inline std::pair<CompactSet, UnitarySample> reduce_to_m1(const SetPredicate& pred,
                                                         const GammaCapResult& result) {
  if (result.value <= result.fiber_threshold) {
    fail(ErrorCode::GammaPolar, "Gamma-capacity estimate " + std::to_string(result.value) +
                                    " does not exceed the polar threshold");
  }
  const auto& unitary = result.best_unitary;
  const SetPredicate image =
      unitary.index == 0 ? pred : linear_image_predicate(unitary.matrix, pred);
  auto plane = project_to_plane(image, result.grid);
  if (!plane) fail(ErrorCode::GammaPolar, "projection is empty");
  return {std::move(*plane), unitary};
}

}  // namespace holext
