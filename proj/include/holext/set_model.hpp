#pragma once

/// \file
/// Compact sets in the complex plane, their deterministic discretization,
/// and membership predicates for sets in C^m.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "holext/errors.hpp"

namespace holext {

using Complex = std::complex<double>;
using ComplexPoint = Complex;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline Complex require_finite(Complex z, const char* what) {
  require(is_finite(z), std::string(what) + " must be finite");
  return z;
}

inline constexpr std::size_t kDefaultBoundarySamples = 4096;

struct Disk {
  Complex center;
  double radius;
};

struct Segment {
  Complex a;
  Complex b;
};

struct PointCloud {
  std::vector<Complex> points;
};

class CompactSet;

struct SetUnion {
  std::vector<CompactSet> parts;
};

/// A compact subset of the complex plane: closed disk, segment, finite point
/// cloud, or a finite union of those. Construction validates the shape.
class CompactSet {
 public:
  using Shape = std::variant<Disk, Segment, PointCloud, SetUnion>;

  static CompactSet disk(Complex center, double radius,
                         std::size_t samples = kDefaultBoundarySamples) {
    require_finite(center, "disk center");
    require(std::isfinite(radius) && radius > 0.0, "disk radius must be > 0");
    return CompactSet(Disk{center, radius}, samples);
  }

  static CompactSet segment(Complex a, Complex b,
                            std::size_t samples = kDefaultBoundarySamples) {
    require_finite(a, "segment endpoint");
    require_finite(b, "segment endpoint");
    require(a != b, "segment endpoints must be distinct");
    return CompactSet(Segment{a, b}, samples);
  }

  static CompactSet cloud(std::vector<Complex> points,
                          std::size_t samples = kDefaultBoundarySamples) {
    require(!points.empty(), "point cloud must be nonempty");
    for (const auto& p : points) require_finite(p, "cloud point");
    return CompactSet(PointCloud{std::move(points)}, samples);
  }

  static CompactSet union_of(std::vector<CompactSet> parts,
                             std::size_t samples = kDefaultBoundarySamples) {
    require(!parts.empty(), "union must have at least one part");
    return CompactSet(SetUnion{std::move(parts)}, samples);
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t boundary_samples() const noexcept { return boundary_samples_; }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(shape_);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(shape_);
  }

 private:
  CompactSet(Shape shape, std::size_t samples)
      : shape_(std::move(shape)), boundary_samples_(samples) {
    require(samples >= 2, "boundary_samples must be >= 2");
  }

  Shape shape_;
  std::size_t boundary_samples_;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double segment_distance(Complex a, Complex b, Complex z) {
  const Complex d = b - a;
  double t = std::real((z - a) * std::conj(d)) / std::norm(d);
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

}  // namespace detail

/// Deterministic sample of `count` points of the set. Disks are sampled on
/// their boundary circle at uniform angles starting from angle 0; segments at
/// uniform parameters including both endpoints; clouds are returned whole.
/// Unions split the budget evenly across parts.
inline std::vector<Complex> discretize(const CompactSet& set, std::size_t count) {
  require(count >= 2, "discretize: count must be >= 2");
  return std::visit(
      detail::overloaded{
          [&](const Disk& d) {
            std::vector<Complex> out(count);
            for (std::size_t k = 0; k < count; ++k) {
              const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                                   static_cast<double>(count);
              out[k] = d.center + std::polar(d.radius, theta);
            }
            return out;
          },
          [&](const Segment& s) {
            std::vector<Complex> out(count);
            for (std::size_t k = 0; k < count; ++k) {
              const double t = static_cast<double>(k) / static_cast<double>(count - 1);
              out[k] = s.a + t * (s.b - s.a);
            }
            out.back() = s.b;
            return out;
          },
          [&](const PointCloud& c) { return c.points; },
          [&](const SetUnion& u) {
            const std::size_t per = std::max<std::size_t>(
                2, (count + u.parts.size() - 1) / u.parts.size());
            std::vector<Complex> out;
            for (const auto& part : u.parts) {
              auto pts = discretize(part, per);
              out.insert(out.end(), pts.begin(), pts.end());
            }
            return out;
          }},
      set.shape());
}

inline std::vector<Complex> discretize(const CompactSet& set) {
  return discretize(set, set.boundary_samples());
}

/// Euclidean distance from `z` to the set (disks are filled).
inline double distance_to(const CompactSet& set, Complex z) {
  return std::visit(
      detail::overloaded{
          [&](const Disk& d) { return std::max(0.0, std::abs(z - d.center) - d.radius); },
          [&](const Segment& s) { return detail::segment_distance(s.a, s.b, z); },
          [&](const PointCloud& c) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : c.points) best = std::min(best, std::abs(z - p));
            return best;
          },
          [&](const SetUnion& u) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& part : u.parts) best = std::min(best, distance_to(part, z));
            return best;
          }},
      set.shape());
}

/// Image of the set under z -> scale * z + shift.
inline CompactSet transform(const CompactSet& set, Complex scale, Complex shift = {}) {
  require(scale != Complex{}, "transform: scale must be nonzero");
  const std::size_t samples = set.boundary_samples();
  return std::visit(
      detail::overloaded{
          [&](const Disk& d) {
            return CompactSet::disk(scale * d.center + shift, std::abs(scale) * d.radius,
                                    samples);
          },
          [&](const Segment& s) {
            return CompactSet::segment(scale * s.a + shift, scale * s.b + shift, samples);
          },
          [&](const PointCloud& c) {
            std::vector<Complex> pts;
            pts.reserve(c.points.size());
            for (const auto& p : c.points) pts.push_back(scale * p + shift);
            return CompactSet::cloud(std::move(pts), samples);
          },
          [&](const SetUnion& u) {
            std::vector<CompactSet> parts;
            for (const auto& part : u.parts) parts.push_back(transform(part, scale, shift));
            return CompactSet::union_of(std::move(parts), samples);
          }},
      set.shape());
}

/// Points of the set's discretization whose score is <= threshold, as a
/// point cloud. std::nullopt marks an empty sublevel set.
template <class Score>
std::optional<CompactSet> sublevel_subset(const CompactSet& set, Score&& score,
                                          double threshold) {
  std::vector<Complex> kept;
  for (const auto& z : discretize(set)) {
    if (score(z) <= threshold) kept.push_back(z);
  }
  if (kept.empty()) return std::nullopt;
  return CompactSet::cloud(std::move(kept), set.boundary_samples());
}

/// Axis-aligned box for one complex coordinate.
struct CoordinateBox {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;

  bool finite() const {
    return std::isfinite(re_lo) && std::isfinite(re_hi) && std::isfinite(im_lo) &&
           std::isfinite(im_hi);
  }
  bool contains(Complex z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo &&
           z.imag() <= im_hi;
  }
};

/// Membership test for a set K in C^m together with a bounding box.
/// `planar` is set for m = 1 predicates built from a CompactSet so that
/// capacity can be computed from the exact shape instead of a grid.
struct SetPredicate {
  std::size_t dimension = 1;
  std::vector<CoordinateBox> bounding_box;
  std::function<bool(std::span<const Complex>)> membership;
  std::optional<CompactSet> planar;

  bool contains(std::span<const Complex> z) const {
    if (z.size() != dimension) return false;
    for (std::size_t j = 0; j < dimension; ++j) {
      if (!bounding_box[j].contains(z[j])) return false;
    }
    return membership(z);
  }
};

/// Bounding box of a planar set, inflated by `pad`.
inline CoordinateBox bounding_box(const CompactSet& set, double pad = 0.0) {
  CoordinateBox box{std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
  auto absorb = [&](Complex z, double r) {
    box.re_lo = std::min(box.re_lo, z.real() - r);
    box.re_hi = std::max(box.re_hi, z.real() + r);
    box.im_lo = std::min(box.im_lo, z.imag() - r);
    box.im_hi = std::max(box.im_hi, z.imag() + r);
  };
  std::function<void(const CompactSet&)> walk = [&](const CompactSet& s) {
    std::visit(detail::overloaded{
                   [&](const Disk& d) { absorb(d.center, d.radius + pad); },
                   [&](const Segment& g) {
                     absorb(g.a, pad);
                     absorb(g.b, pad);
                   },
                   [&](const PointCloud& c) {
                     for (const auto& p : c.points) absorb(p, pad);
                   },
                   [&](const SetUnion& u) {
                     for (const auto& part : u.parts) walk(part);
                   }},
               s.shape());
  };
  walk(set);
  return box;
}

/// Planar membership with disks filled and thin shapes thickened by
/// `thickness` (points within that distance count as members).
inline bool planar_contains(const CompactSet& set, Complex z, double thickness) {
  return distance_to(set, z) <= thickness;
}

inline SetPredicate predicate_from_compact(const CompactSet& set, double thickness = 0.0) {
  require(thickness >= 0.0, "thickness must be >= 0");
  SetPredicate pred;
  pred.dimension = 1;
  pred.bounding_box = {bounding_box(set, thickness)};
  pred.membership = [set, thickness](std::span<const Complex> z) {
    return planar_contains(set, z[0], thickness);
  };
  pred.planar = set;
  return pred;
}

/// Product K_1 x ... x K_m of planar sets.
inline SetPredicate product_predicate(std::vector<CompactSet> factors, double thickness = 0.0) {
  require(!factors.empty(), "product needs at least one factor");
  require(thickness >= 0.0, "thickness must be >= 0");
  if (factors.size() == 1) return predicate_from_compact(factors.front(), thickness);
  SetPredicate pred;
  pred.dimension = factors.size();
  for (const auto& f : factors) pred.bounding_box.push_back(bounding_box(f, thickness));
  pred.membership = [factors = std::move(factors), thickness](std::span<const Complex> z) {
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (!planar_contains(factors[j], z[j], thickness)) return false;
    }
    return true;
  };
  return pred;
}

/// Closed Euclidean ball in C^m.
inline SetPredicate ball_predicate(std::vector<Complex> center, double radius) {
  require(!center.empty(), "ball center must have at least one coordinate");
  require(std::isfinite(radius) && radius > 0.0, "ball radius must be > 0");
  SetPredicate pred;
  pred.dimension = center.size();
  for (const auto& c : center) {
    require_finite(c, "ball center");
    pred.bounding_box.push_back(
        {c.real() - radius, c.real() + radius, c.imag() - radius, c.imag() + radius});
  }
  if (pred.dimension == 1) pred.planar = CompactSet::disk(center.front(), radius);
  pred.membership = [center = std::move(center), radius](std::span<const Complex> z) {
    double sum = 0.0;
    for (std::size_t j = 0; j < center.size(); ++j) sum += std::norm(z[j] - center[j]);
    return sum <= radius * radius;
  };
  return pred;
}

/// Slab {z : |<normal, z> - offset| <= thickness} intersected with the
/// polydisk box |Re z_j|, |Im z_j| <= extent. With thickness ~ 0 this is a
/// bounded piece of a complex hyperplane (a complex line when m = 2).
inline SetPredicate hyperplane_predicate(std::vector<Complex> normal, Complex offset,
                                         double thickness, double extent) {
  require(!normal.empty(), "hyperplane normal must have at least one coordinate");
  require(thickness >= 0.0, "thickness must be >= 0");
  require(extent > 0.0, "extent must be > 0");
  SetPredicate pred;
  pred.dimension = normal.size();
  pred.bounding_box.assign(normal.size(), {-extent, extent, -extent, extent});
  pred.membership = [normal = std::move(normal), offset,
                     thickness](std::span<const Complex> z) {
    Complex dot{};
    for (std::size_t j = 0; j < normal.size(); ++j) dot += normal[j] * z[j];
    return std::abs(dot - offset) <= thickness;
  };
  return pred;
}

inline SetPredicate intersection_predicate(std::vector<SetPredicate> parts) {
  require(!parts.empty(), "intersection needs at least one part");
  SetPredicate pred;
  pred.dimension = parts.front().dimension;
  pred.bounding_box = parts.front().bounding_box;
  for (const auto& p : parts) {
    require(p.dimension == pred.dimension, "intersection parts must share dimension");
    for (std::size_t j = 0; j < pred.dimension; ++j) {
      auto& b = pred.bounding_box[j];
      const auto& o = p.bounding_box[j];
      b.re_lo = std::max(b.re_lo, o.re_lo);
      b.re_hi = std::min(b.re_hi, o.re_hi);
      b.im_lo = std::max(b.im_lo, o.im_lo);
      b.im_hi = std::min(b.im_hi, o.im_hi);
    }
  }
  pred.membership = [parts = std::move(parts)](std::span<const Complex> z) {
    return std::all_of(parts.begin(), parts.end(),
                       [&](const SetPredicate& p) { return p.contains(z); });
  };
  return pred;
}

inline SetPredicate union_predicate(std::vector<SetPredicate> parts) {
  require(!parts.empty(), "union needs at least one part");
  SetPredicate pred;
  pred.dimension = parts.front().dimension;
  pred.bounding_box = parts.front().bounding_box;
  for (const auto& p : parts) {
    require(p.dimension == pred.dimension, "union parts must share dimension");
    for (std::size_t j = 0; j < pred.dimension; ++j) {
      auto& b = pred.bounding_box[j];
      const auto& o = p.bounding_box[j];
      b.re_lo = std::min(b.re_lo, o.re_lo);
      b.re_hi = std::max(b.re_hi, o.re_hi);
      b.im_lo = std::min(b.im_lo, o.im_lo);
      b.im_hi = std::max(b.im_hi, o.im_hi);
    }
  }
  pred.membership = [parts = std::move(parts)](std::span<const Complex> z) {
    return std::any_of(parts.begin(), parts.end(),
                       [&](const SetPredicate& p) { return p.contains(z); });
  };
  return pred;
}

}  // namespace holext
