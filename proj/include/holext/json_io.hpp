#pragma once

/// \file
/// JSON encodings for sets, predicates, polynomials, sequences, extension
/// configuration and results. Complex numbers are [re, im] pairs (a bare
/// number is read as a real value). Non-finite reals are written as null
/// next to a "<key>_nonfinite" marker holding "inf", "-inf" or "nan".

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "holext/bernstein.hpp"
#include "holext/capacity.hpp"
#include "holext/errors.hpp"
#include "holext/gamma_capacity.hpp"
#include "holext/polynomial.hpp"
#include "holext/series_extension.hpp"
#include "holext/set_model.hpp"

namespace holext::io {

using json = nlohmann::json;

namespace detail {

inline void write_value(std::string& out, const json& j, int indent, int depth);

inline void newline(std::string& out, int indent, int depth) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

/// %.17g, with ".0" appended when the text would otherwise read back as an
/// integer.
inline std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

inline void write_value(std::string& out, const json& j, int indent, int depth) {
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(out, indent, depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write_value(out, it.value(), indent, depth + 1);
      }
      newline(out, indent, depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short arrays of scalars stay on one line; [re, im] pairs are common.
      bool flat = j.size() <= 4;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(out, indent, depth + 1);
        write_value(out, e, indent, depth + 1);
      }
      if (!flat) newline(out, indent, depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Serialize with every float at 17 significant digits so values round-trip
/// exactly. Object keys come out sorted, so equal documents give equal bytes.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::write_value(out, j, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

inline void put_real(json& j, const std::string& key, double v) {
  if (std::isfinite(v)) {
    j[key] = v;
    return;
  }
  j[key] = nullptr;
  j[key + "_nonfinite"] = std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline double get_real(const json& j, const std::string& key) {
  require(j.contains(key), "missing field \"" + key + "\"");
  const auto& v = j.at(key);
  if (v.is_null()) {
    const auto marker = j.value(key + "_nonfinite", std::string{});
    if (marker == "inf") return std::numeric_limits<double>::infinity();
    if (marker == "-inf") return -std::numeric_limits<double>::infinity();
    if (marker == "nan") return std::numeric_limits<double>::quiet_NaN();
    fail(ErrorCode::InvalidArgument, "field \"" + key + "\" is null");
  }
  require(v.is_number(), "field \"" + key + "\" must be a number");
  return v.get<double>();
}

inline double get_real_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? get_real(j, key) : fallback;
}

inline std::size_t get_count(const json& j, const std::string& key) {
  require(j.contains(key), "missing field \"" + key + "\"");
  const auto& v = j.at(key);
  require(v.is_number_integer() && v.get<long long>() >= 0,
          "field \"" + key + "\" must be a nonnegative integer");
  return v.get<std::size_t>();
}

inline std::size_t get_count_or(const json& j, const std::string& key, std::size_t fallback) {
  return j.contains(key) ? get_count(j, key) : fallback;
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex numbers are [re, im] pairs of numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json points_to_json(const std::vector<Complex>& pts) {
  json a = json::array();
  for (const auto& z : pts) a.push_back(complex_to_json(z));
  return a;
}

inline std::vector<Complex> points_from_json(const json& j) {
  require(j.is_array(), "point list must be an array");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

// ---------------------------------------------------------------- sets

inline json to_json(const CompactSet& set) {
  json j = std::visit(
      holext::detail::overloaded{
          [](const Disk& d) {
            return json{{"shape", "disk"}, {"center", complex_to_json(d.center)}, {"radius", d.radius}};
          },
          [](const Segment& s) {
            return json{{"shape", "segment"}, {"a", complex_to_json(s.a)}, {"b", complex_to_json(s.b)}};
          },
          [](const PointCloud& c) { return json{{"shape", "cloud"}, {"points", points_to_json(c.points)}}; },
          [](const SetUnion& u) {
            json parts = json::array();
            for (const auto& p : u.parts) parts.push_back(to_json(p));
            return json{{"shape", "union"}, {"parts", parts}};
          }},
      set.shape());
  if (set.boundary_samples() != kDefaultBoundarySamples) j["samples"] = set.boundary_samples();
  return j;
}

inline bool is_set_json(const json& j) {
  if (!j.is_object() || !j.contains("shape") || !j["shape"].is_string()) return false;
  const auto shape = j["shape"].get<std::string>();
  if (shape == "disk" || shape == "segment" || shape == "cloud") return true;
  if (shape != "union" || !j.contains("parts") || !j["parts"].is_array()) return false;
  for (const auto& p : j["parts"])
    if (!is_set_json(p)) return false;
  return true;
}

inline CompactSet set_from_json(const json& j) {
  require(j.is_object(), "set must be a JSON object");
  require(j.contains("shape") && j["shape"].is_string(), "set needs a string field \"shape\"");
  const auto shape = j["shape"].get<std::string>();
  const std::size_t samples = get_count_or(j, "samples", kDefaultBoundarySamples);
  if (shape == "disk") return CompactSet::disk(complex_from_json(j.at("center")), get_real(j, "radius"), samples);
  if (shape == "segment")
    return CompactSet::segment(complex_from_json(j.at("a")), complex_from_json(j.at("b")), samples);
  if (shape == "cloud") {
    require(j.contains("points"), "cloud needs \"points\"");
    return CompactSet::cloud(points_from_json(j["points"]), samples);
  }
  if (shape == "union") {
    require(j.contains("parts") && j["parts"].is_array(), "union needs an array \"parts\"");
    std::vector<CompactSet> parts;
    for (const auto& p : j["parts"]) parts.push_back(set_from_json(p));
    return CompactSet::union_of(std::move(parts), samples);
  }
  fail(ErrorCode::InvalidArgument, "unknown set shape \"" + shape + "\"");
}

/// Shapes: every planar set shape (taken as a subset of C), "planar"
/// {set, thickness}, "product" {factors, thickness}, "ball" {center, radius},
/// "hyperplane" {normal, offset, thickness, extent}, "linear_image"
/// {matrix, of}, "intersection" and "union" {parts}.
inline SetPredicate predicate_from_json(const json& j) {
  if (is_set_json(j)) return predicate_from_compact(set_from_json(j), get_real_or(j, "thickness", 0.0));
  require(j.is_object() && j.contains("shape") && j["shape"].is_string(),
          "predicate needs a string field \"shape\"");
  const auto shape = j["shape"].get<std::string>();
  if (shape == "planar") return predicate_from_compact(set_from_json(j.at("set")), get_real_or(j, "thickness", 0.0));
  if (shape == "product") {
    require(j.contains("factors") && j["factors"].is_array(), "product needs an array \"factors\"");
    std::vector<CompactSet> factors;
    for (const auto& f : j["factors"]) factors.push_back(set_from_json(f));
    return product_predicate(std::move(factors), get_real_or(j, "thickness", 0.0));
  }
  if (shape == "ball") return ball_predicate(points_from_json(j.at("center")), get_real(j, "radius"));
  if (shape == "hyperplane") {
    return hyperplane_predicate(points_from_json(j.at("normal")),
                                j.contains("offset") ? complex_from_json(j["offset"]) : Complex{},
                                get_real_or(j, "thickness", 1e-9), get_real_or(j, "extent", 1.0));
  }
  if (shape == "linear_image") {
    const auto& rows = j.at("matrix");
    require(rows.is_array() && !rows.empty(), "linear_image needs a square \"matrix\"");
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd a(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto row = points_from_json(rows[static_cast<std::size_t>(r)]);
      require(static_cast<Eigen::Index>(row.size()) == m, "linear_image matrix must be square");
      for (Eigen::Index c = 0; c < m; ++c) a(r, c) = row[static_cast<std::size_t>(c)];
    }
    return linear_image_predicate(a, predicate_from_json(j.at("of")));
  }
  if (shape == "intersection" || shape == "union") {
    require(j.contains("parts") && j["parts"].is_array(), shape + " needs an array \"parts\"");
    std::vector<SetPredicate> parts;
    for (const auto& p : j["parts"]) parts.push_back(predicate_from_json(p));
    return shape == "union" ? union_predicate(std::move(parts)) : intersection_predicate(std::move(parts));
  }
  fail(ErrorCode::InvalidArgument, "unknown predicate shape \"" + shape + "\"");
}

/// Samples are an array of points, an object with "points", or any set
/// (discretized at its sample count).
inline std::vector<Complex> samples_from_json(const json& j) {
  if (j.is_array()) return points_from_json(j);
  if (is_set_json(j)) return discretize(set_from_json(j));
  require(j.is_object() && j.contains("points"), "samples must be a point array, {\"points\": ...} or a set");
  return points_from_json(j["points"]);
}

// ---------------------------------------------------------- polynomials

inline json to_json(const Polynomial1D& p) {
  return json{{"coefficients", points_to_json(p.coefficients())}};
}

/// {"coefficients": [...]} in ascending degree, or the bare array.
inline Polynomial1D polynomial_from_json(const json& j) {
  if (j.is_array()) return Polynomial1D(points_from_json(j));
  require(j.is_object() && j.contains("coefficients"), "polynomial needs \"coefficients\"");
  return Polynomial1D(points_from_json(j["coefficients"]));
}

// ------------------------------------------------------------ sequences

/// Families: "geometric" {lambda}, "constant" {c}, "sqrt_degree", or
/// "table" {k, terms: [{n, coefficients}]} with unlisted indices zero.
/// Every family takes "max_norm" and optional "declared_C0"/"declared_C1".
inline PolynomialSequence sequence_from_json(const json& j) {
  require(j.is_object(), "sequence must be a JSON object");
  require(j.contains("family") && j["family"].is_string(), "sequence needs a string field \"family\"");
  const auto family = j["family"].get<std::string>();
  const std::size_t max_norm = get_count(j, "max_norm");
  const std::size_t k = get_count_or(j, "k", 1);
  require(k >= 1, "sequence k must be >= 1");
  PolynomialSequence seq;
  if (family == "geometric") {
    seq = geometric_sequence(j.contains("lambda") ? complex_from_json(j["lambda"]) : Complex(1.0), max_norm);
  } else if (family == "constant") {
    seq = constant_sequence(j.contains("c") ? complex_from_json(j["c"]) : Complex(1.0), max_norm);
  } else if (family == "sqrt_degree") {
    seq = sqrt_degree_sequence(max_norm);
  } else if (family == "table") {
    require(j.contains("terms") && j["terms"].is_array(), "table sequence needs an array \"terms\"");
    std::map<MultiIndex, Polynomial1D> table;
    for (const auto& t : j["terms"]) {
      require(t.is_object() && t.contains("n"), "table term needs \"n\"");
      MultiIndex n;
      if (t["n"].is_number_integer()) {
        n.entries = {t["n"].get<unsigned>()};
      } else {
        n.entries = t["n"].get<std::vector<unsigned>>();
      }
      require(n.entries.size() == k, "table index has wrong dimension");
      require(n.norm() <= max_norm, "table index norm exceeds max_norm");
      require(!table.count(n), "table index listed twice");
      table.emplace(std::move(n), polynomial_from_json(t.contains("coefficients") ? t["coefficients"] : t.at("p")));
    }
    seq = tabulated_sequence<Complex>(k, max_norm, std::move(table));
  } else {
    fail(ErrorCode::InvalidArgument, "unknown sequence family \"" + family + "\"");
  }
  seq.k = k;
  if (j.contains("declared_C0")) seq.declared_C0 = get_real(j, "declared_C0");
  if (j.contains("declared_C1")) seq.declared_C1 = get_real(j, "declared_C1");
  return seq;
}

// --------------------------------------------------------------- config

inline json to_json(const ExtensionConfig& c) {
  json j;
  j["window"] = c.window;
  j["i_max"] = c.i_max;
  j["theta"] = c.theta;
  j["eps_cap"] = c.eps_cap;
  j["capacity_points"] = c.capacity_points;
  j["z2_max"] = c.z2_max;
  j["gamma_radii"] = c.gamma_radii;
  j["gamma_angles"] = c.gamma_angles;
  j["sublinear_tol"] = c.sublinear_tol;
  return j;
}

inline ExtensionConfig config_from_json(const json& j) {
  require(j.is_object(), "config must be a JSON object");
  ExtensionConfig c;
  c.window = get_count_or(j, "window", c.window);
  c.i_max = get_count_or(j, "i_max", c.i_max);
  c.theta = get_real_or(j, "theta", c.theta);
  c.eps_cap = get_real_or(j, "eps_cap", c.eps_cap);
  c.capacity_points = get_count_or(j, "capacity_points", c.capacity_points);
  c.z2_max = get_real_or(j, "z2_max", c.z2_max);
  c.gamma_radii = get_count_or(j, "gamma_radii", c.gamma_radii);
  c.gamma_angles = get_count_or(j, "gamma_angles", c.gamma_angles);
  c.sublinear_tol = get_real_or(j, "sublinear_tol", c.sublinear_tol);
  require(c.capacity_points >= 8, "capacity_points must be >= 8");
  require(c.gamma_radii >= 1 && c.gamma_angles >= 1, "gamma grid must be nonempty");
  return c;
}

// ---------------------------------------------------------------- green

inline json to_json(const GreenEvaluator& g) {
  return std::visit(
      holext::detail::overloaded{
          [](const AnalyticDiskGreen& d) {
            return json{{"backing", "analytic_disk"}, {"center", complex_to_json(d.center)}, {"radius", d.radius}};
          },
          [](const AnalyticSegmentGreen& s) {
            return json{{"backing", "analytic_segment"}, {"a", complex_to_json(s.a)}, {"b", complex_to_json(s.b)}};
          },
          [](const FeketePotentialGreen& f) {
            return json{{"backing", "fekete"},
                        {"points", points_to_json(f.points)},
                        {"level", f.level},
                        {"capacity", f.capacity},
                        {"error_estimate", f.error_estimate}};
          }},
      g.backing());
}

inline GreenEvaluator green_from_json(const json& j) {
  require(j.is_object() && j.contains("backing"), "green function needs \"backing\"");
  const auto kind = j["backing"].get<std::string>();
  if (kind == "analytic_disk") {
    const double r = get_real(j, "radius");
    require(r > 0.0, "disk radius must be > 0");
    return GreenEvaluator(AnalyticDiskGreen{complex_from_json(j.at("center")), r});
  }
  if (kind == "analytic_segment") {
    const Complex a = complex_from_json(j.at("a")), b = complex_from_json(j.at("b"));
    require(a != b, "segment endpoints must be distinct");
    return GreenEvaluator(AnalyticSegmentGreen{a, b});
  }
  if (kind == "fekete") {
    FeketePotentialGreen f;
    f.points = points_from_json(j.at("points"));
    require(f.points.size() >= 2, "fekete backing needs at least two points");
    f.level = get_real(j, "level");
    f.capacity = get_real(j, "capacity");
    f.error_estimate = get_real(j, "error_estimate");
    return GreenEvaluator(std::move(f));
  }
  fail(ErrorCode::InvalidArgument, "unknown green backing \"" + kind + "\"");
}

// ---------------------------------------------------------- certificate

inline json to_json(const ExtensionCertificate& c) {
  json j;
  j["kind"] = c.kind == DomainKind::Linear ? "linear" : "uniform";
  put_real(j, "rho0", c.rho0);
  put_real(j, "rho1", c.rho1);
  put_real(j, "M0", c.M0);
  put_real(j, "C0", c.C0);
  put_real(j, "C1", c.C1);
  put_real(j, "gammaC", c.gammaC);
  put_real(j, "C2", c.C2);
  put_real(j, "exponent", c.exponent);
  j["exponent_differs_from_one"] = c.exponent_differs_from_one();
  j["k"] = c.k;
  j["N_used"] = c.N_used;
  j["stratum_index"] = c.stratum_index;
  j["stratum_log2_level"] = c.stratum_log2_level;
  put_real(j, "witness_capacity", c.witness_capacity);
  j["witness"] = json{{"shape", "cloud"}, {"points", points_to_json(c.witness)}};
  j["green"] = to_json(c.green);
  put_real(j, "green_error", c.green_error);
  j["thresholds"] = to_json(c.config);
  if (c.kind == DomainKind::Uniform) j["valid_for_abs_z2_at_most"] = c.config.z2_max;
  return j;
}

inline ExtensionCertificate certificate_from_json(const json& j) {
  require(j.is_object(), "certificate must be a JSON object");
  ExtensionCertificate c;
  const auto kind = j.value("kind", std::string("linear"));
  require(kind == "linear" || kind == "uniform", "certificate kind must be linear or uniform");
  c.kind = kind == "linear" ? DomainKind::Linear : DomainKind::Uniform;
  c.rho0 = get_real(j, "rho0");
  c.rho1 = get_real(j, "rho1");
  c.M0 = get_real(j, "M0");
  c.C0 = get_real(j, "C0");
  c.C1 = get_real(j, "C1");
  c.gammaC = get_real(j, "gammaC");
  c.C2 = get_real(j, "C2");
  c.exponent = get_real(j, "exponent");
  c.k = get_count(j, "k");
  c.N_used = get_count(j, "N_used");
  c.stratum_index = get_count_or(j, "stratum_index", 1);
  c.stratum_log2_level = static_cast<unsigned>(get_count_or(j, "stratum_log2_level", 0));
  c.witness_capacity = get_real_or(j, "witness_capacity", 0.0);
  if (j.contains("witness")) c.witness = set_from_json(j["witness"]).as<PointCloud>().points;
  c.green = green_from_json(j.at("green"));
  c.green_error = get_real(j, "green_error");
  if (j.contains("thresholds")) c.config = config_from_json(j["thresholds"]);
  require(c.rho1 > 0.0 && c.C2 > 0.0 && c.M0 >= 1.0 && c.k >= 1, "certificate constants out of range");
  return c;
}

// -------------------------------------------------------------- results

inline json to_json(const CapacityEstimate& e, double polar_eps = kPolarThreshold) {
  json j;
  put_real(j, "value", e.value);
  j["n_used"] = e.n_used;
  put_real(j, "error_indicator", e.error_indicator);
  put_real(j, "robin_constant", e.robin_constant);
  j["degenerate"] = e.degenerate;
  j["polar"] = e.polar(polar_eps);
  json seq = json::array();
  for (const auto& [k, d] : e.diameter_sequence) seq.push_back(json::array({k, d}));
  j["diameter_sequence"] = seq;  // [k, d_k] pairs
  return j;
}

inline json to_json(const GammaCapResult& r) {
  json j;
  put_real(j, "value", r.value);
  j["dimension"] = r.dimension;
  j["seed"] = r.seed;
  j["fiber_threshold"] = r.fiber_threshold;
  j["grid"] = json{{"fiber_resolution", r.grid.fiber_resolution},
                   {"projected_resolution", r.grid.projected_resolution},
                   {"fiber_points", r.grid.fiber_points},
                   {"capacity_points", r.grid.capacity_points}};
  json rows = json::array();
  for (Eigen::Index row = 0; row < r.best_unitary.matrix.rows(); ++row) {
    json cols = json::array();
    for (Eigen::Index col = 0; col < r.best_unitary.matrix.cols(); ++col)
      cols.push_back(complex_to_json(r.best_unitary.matrix(row, col)));
    rows.push_back(cols);
  }
  j["best_unitary"] = json{{"index", r.best_unitary.index}, {"seed", r.best_unitary.seed}, {"matrix", rows}};
  json per = json::array();
  for (const auto& [seed, cap] : r.per_unitary) per.push_back(json{{"seed", seed}, {"capacity", cap}});
  j["per_unitary"] = per;
  return j;
}

inline json to_json(const BernsteinReport& r) {
  json j;
  put_real(j, "sup_norm", r.sup_norm);
  j["degree"] = r.degree;
  put_real(j, "slack", r.slack);
  j["analytic_green"] = r.analytic_green;
  j["violations"] = r.violations;
  j["all_pass"] = r.all_pass();
  json entries = json::array();
  for (const auto& e : r.entries) {
    json row;
    row["z"] = complex_to_json(e.z);
    put_real(row, "abs_p", e.abs_p);
    put_real(row, "bound", e.bound);
    put_real(row, "ratio", e.ratio);
    row["pass"] = e.pass;
    entries.push_back(row);
  }
  j["entries"] = entries;
  return j;
}

inline json to_json(const EvaluationResult& r) {
  json j;
  j["value"] = complex_to_json(r.value);
  put_real(j, "tail_bound", r.tail_bound);
  j["terms_used"] = r.terms_used;
  put_real(j, "ratio", r.ratio);
  return j;
}

}  // namespace holext::io
