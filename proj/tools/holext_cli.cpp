/// holext command-line front end. Every command writes a JSON document with
/// a "manifest" (command, input digest, seed, tool version, thresholds) next
/// to its result; identical manifests give byte-identical output.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "holext/json_io.hpp"

namespace {

using holext::Complex;
using holext::io::json;
namespace io = holext::io;
namespace fs = std::filesystem;

constexpr int kExitInput = 2;
constexpr int kExitPipeline = 3;

#ifndef HOLEXT_VERSION
#define HOLEXT_VERSION "0.0.0"
#endif

/// Unreadable files and malformed text inputs.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + what + ": " + e.what());
  }
}

/// SHA-256 over the labelled input contents in the order given.
class Digest {
 public:
  Digest() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
  ~Digest() { EVP_MD_CTX_free(ctx_); }
  Digest(const Digest&) = delete;
  Digest& operator=(const Digest&) = delete;

  void add(const std::string& label, const std::string& bytes) {
    update(label);
    update(std::string(1, '\0'));
    update(bytes);
    update(std::string(1, '\0'));
  }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }

 private:
  void update(const std::string& s) { EVP_DigestUpdate(ctx_, s.data(), s.size()); }
  EVP_MD_CTX* ctx_;
};

/// Inputs read for a command, hashed as they are loaded.
class Inputs {
 public:
  json load_json(const std::string& label, const std::string& path) {
    const auto text = read_file(path);
    digest_.add(label, text);
    return parse_json(text, path);
  }
  std::string load_text(const std::string& label, const std::string& path) {
    auto text = read_file(path);
    digest_.add(label, text);
    return text;
  }
  void add_value(const std::string& label, const std::string& value) { digest_.add(label, value); }
  std::string digest() { return digest_.hex(); }

 private:
  Digest digest_;
};

json manifest(const std::string& command, Inputs& inputs, std::uint64_t seed, json thresholds) {
  return json{{"command", command},
              {"input_digest", inputs.digest()},
              {"seed", seed},
              {"tool_version", HOLEXT_VERSION},
              {"thresholds", std::move(thresholds)}};
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view s, const std::string& what) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw InputError("cannot parse number '" + std::string(s) + "' in " + what);
  return v;
}

/// "re,im" or "re".
Complex parse_complex(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_real(text, what), 0.0};
  return {parse_real(std::string_view(text).substr(0, comma), what),
          parse_real(std::string_view(text).substr(comma + 1), what)};
}

/// One point per line as "re,im" (or "re"); blank lines, '#' comments and a
/// non-numeric header line are skipped.
std::vector<Complex> parse_points_csv(const std::string& text, const std::string& what) {
  std::vector<Complex> pts;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    if (first) {
      first = false;
      const char c = line[start];
      if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')) continue;
    }
    pts.push_back(parse_complex(line, what));
  }
  if (pts.empty()) throw InputError("no points in " + what);
  return pts;
}

std::string sibling(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

void emit(const std::string& out, const json& doc) {
  const auto text = io::dump(doc);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

// ------------------------------------------------------------- commands

struct CommonOptions {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t n = holext::kDefaultCapacityPoints;
};

int cmd_cap(const CommonOptions& opt, const std::string& set_path, const std::string& csv_path) {
  Inputs inputs;
  const auto set = io::set_from_json(inputs.load_json("set", set_path));
  const auto est = holext::capacity(set, opt.n);
  json doc;
  doc["manifest"] = manifest("cap", inputs, opt.seed,
                             json{{"n", opt.n},
                                  {"candidates", std::max(set.boundary_samples(), opt.n)},
                                  {"polar_threshold", holext::kPolarThreshold}});
  doc["result"] = io::to_json(est);
  emit(opt.out, doc);

  const std::string csv = !csv_path.empty() ? csv_path : (opt.out.empty() ? "" : sibling(opt.out, ".dn.csv"));
  if (!csv.empty()) {
    std::string text = "k,d_k\n";
    for (const auto& [k, d] : est.diameter_sequence) text += std::to_string(k) + "," + format_real(d) + "\n";
    write_file(csv, text);
  }
  return 0;
}

holext::GreenMethod parse_method(const std::string& m) {
  if (m == "auto") return holext::GreenMethod::Auto;
  if (m == "analytic") return holext::GreenMethod::Analytic;
  if (m == "fekete") return holext::GreenMethod::Fekete;
  throw InputError("unknown --method '" + m + "'");
}

int cmd_green(const CommonOptions& opt, const std::string& set_path, const std::string& points_path,
              const std::string& method) {
  Inputs inputs;
  const auto set = io::set_from_json(inputs.load_json("set", set_path));
  const auto pts = parse_points_csv(inputs.load_text("points", points_path), points_path);
  holext::GreenOptions gopts;
  gopts.fekete_n = opt.n;
  const auto green = holext::green_function(set, parse_method(method), gopts);

  std::string csv = "re,im,g\n";
  for (const auto& z : pts)
    csv += format_real(z.real()) + "," + format_real(z.imag()) + "," + format_real(green(z)) + "\n";
  json doc;
  doc["manifest"] = manifest("green", inputs, opt.seed,
                             json{{"method", method},
                                  {"fekete_n", opt.n},
                                  {"polar_threshold", gopts.polar_threshold}});
  doc["green"] = io::to_json(green);
  doc["robin_constant"] = green.robin_constant();
  doc["error_estimate"] = green.error_estimate();
  if (opt.out.empty()) {
    std::cout << csv;
    std::cerr << io::dump(doc["manifest"], -1) << "\n";
  } else {
    write_file(opt.out, csv);
    write_file(sibling(opt.out, ".manifest.json"), io::dump(doc));
  }
  return 0;
}

int cmd_bernstein(const CommonOptions& opt, const std::string& poly_path, const std::string& set_path,
                  const std::string& points_path) {
  Inputs inputs;
  const auto poly = io::polynomial_from_json(inputs.load_json("poly", poly_path));
  const auto set = io::set_from_json(inputs.load_json("set", set_path));
  const auto pts = parse_points_csv(inputs.load_text("points", points_path), points_path);
  holext::GreenOptions gopts;
  gopts.fekete_n = opt.n;
  const auto report = holext::verify_bernstein(poly, set, pts, gopts);
  json doc;
  doc["manifest"] = manifest("bernstein", inputs, opt.seed,
                             json{{"fekete_n", opt.n}, {"polar_threshold", gopts.polar_threshold}});
  doc["result"] = io::to_json(report);
  emit(opt.out, doc);
  return 0;
}

int cmd_gammacap(const CommonOptions& opt, const std::string& set_path, std::size_t unitaries,
                 const holext::GammaGrid& grid) {
  Inputs inputs;
  const auto pred = io::predicate_from_json(inputs.load_json("set", set_path));
  const auto result = holext::gamma_cap(pred, unitaries, opt.seed, grid);
  json doc;
  doc["manifest"] = manifest("gammacap", inputs, opt.seed,
                             json{{"unitaries", unitaries},
                                  {"fiber_resolution", grid.fiber_resolution},
                                  {"projected_resolution", grid.projected_resolution},
                                  {"fiber_points", grid.fiber_points},
                                  {"capacity_points", grid.capacity_points},
                                  {"fiber_threshold", grid.fiber_threshold}});
  doc["result"] = io::to_json(result);
  emit(opt.out, doc);
  return 0;
}

struct ExtendOptions {
  std::string seq_path;
  std::string samples_path;
  std::string config_path;
  std::string domain = "linear";
  std::optional<double> z2_max;
  bool n_given = false;
  std::string csv_path;
};

int cmd_extend(const CommonOptions& opt, const ExtendOptions& ext) {
  Inputs inputs;
  const auto seq = io::sequence_from_json(inputs.load_json("seq", ext.seq_path));
  const auto samples = io::samples_from_json(inputs.load_json("samples", ext.samples_path));
  holext::ExtensionConfig cfg;
  std::string domain = ext.domain;
  if (!ext.config_path.empty()) {
    const auto cj = inputs.load_json("config", ext.config_path);
    cfg = io::config_from_json(cj);
    if (cj.contains("domain") && domain == "linear") domain = cj["domain"].get<std::string>();
  }
  if (ext.z2_max) cfg.z2_max = *ext.z2_max;
  if (ext.n_given) cfg.capacity_points = opt.n;
  if (domain != "linear" && domain != "uniform") throw InputError("--domain must be linear or uniform");

  const auto cert = domain == "uniform" ? holext::certify_uniform(seq, samples, cfg)
                                        : holext::certify_extension(seq, samples, cfg);
  auto thresholds = io::to_json(cert.config);
  thresholds["domain"] = domain;
  json doc;
  doc["manifest"] = manifest("extend", inputs, opt.seed, thresholds);
  doc["certificate"] = io::to_json(cert);
  emit(opt.out, doc);

  const std::string csv = !ext.csv_path.empty() ? ext.csv_path
                                                : (opt.out.empty() ? "" : sibling(opt.out, ".boundary.csv"));
  if (!csv.empty()) {
    // r(|z2|) on a log grid from 1e-3 to z2_max.
    std::string text = "abs_z2,radius\n";
    const std::size_t rows = 200;
    const double lo = std::min(1e-3, cert.config.z2_max);
    for (std::size_t i = 0; i < rows; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(rows - 1);
      const double r = lo * std::pow(cert.config.z2_max / lo, t);
      text += format_real(r) + "," + format_real(cert.radius(Complex(r, 0.0))) + "\n";
    }
    write_file(csv, text);
  }
  return 0;
}

int cmd_eval(const CommonOptions& opt, const std::string& cert_path, const std::string& seq_path,
             const std::vector<std::string>& z1_text, const std::string& z2_text, double tol) {
  Inputs inputs;
  const auto cj = inputs.load_json("cert", cert_path);
  const auto cert = io::certificate_from_json(cj.contains("certificate") ? cj["certificate"] : cj);
  const auto seq = io::sequence_from_json(inputs.load_json("seq", seq_path));
  std::vector<Complex> z1;
  for (const auto& t : z1_text) z1.push_back(parse_complex(t, "--z1"));
  const Complex z2 = parse_complex(z2_text, "--z2");
  const auto res = holext::evaluate(cert, seq, z1, z2, tol);
  json doc;
  doc["manifest"] = manifest("eval", inputs, opt.seed,
                             json{{"tol", tol}, {"z1", io::points_to_json(z1)}, {"z2", io::complex_to_json(z2)}});
  doc["result"] = io::to_json(res);
  emit(opt.out, doc);
  return 0;
}

void report_error(const holext::Error& e) {
  std::cerr << "holext: " << e.what();
  if (!e.stage().empty()) std::cerr << " [stage " << e.stage() << "]";
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical potential theory and certified holomorphic extension"};
  app.set_version_flag("--version", std::string(HOLEXT_VERSION));
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Output file (stdout when omitted)");
    sub->add_option("--seed", common.seed, "Seed recorded in the manifest and used for sampling");
    sub->add_option("--n", common.n, "Number of Fekete points")->check(CLI::Range(8, 100000));
  };

  std::string set_path, points_path, poly_path, csv_path, method = "auto";
  auto* cap = app.add_subcommand("cap", "Logarithmic capacity of a planar set");
  cap->add_option("--set", set_path, "Set JSON")->required();
  cap->add_option("--csv", csv_path, "d_k sequence CSV (default <out>.dn.csv)");
  add_common(cap);

  auto* green = app.add_subcommand("green", "Green function values at points");
  green->add_option("--set", set_path, "Set JSON")->required();
  green->add_option("--points", points_path, "Points CSV (re,im per line)")->required();
  green->add_option("--method", method, "auto, analytic or fekete");
  add_common(green);

  auto* bern = app.add_subcommand("bernstein", "Check the Bernstein growth bound");
  bern->add_option("--poly", poly_path, "Polynomial JSON")->required();
  bern->add_option("--set", set_path, "Set JSON")->required();
  bern->add_option("--points", points_path, "Test points CSV")->required();
  add_common(bern);

  std::size_t unitaries = 1;
  holext::GammaGrid grid;
  auto* gcap = app.add_subcommand("gammacap", "Gamma-capacity of a set in C^m (m <= 3)");
  gcap->add_option("--set", set_path, "Predicate JSON")->required();
  gcap->add_option("--unitaries", unitaries, "Number of unitaries (identity included)")->check(CLI::PositiveNumber);
  gcap->add_option("--fiber-res", grid.fiber_resolution, "Fiber grid points per real axis")->check(CLI::PositiveNumber);
  gcap->add_option("--proj-res", grid.projected_resolution, "Projected grid points per real axis")->check(CLI::PositiveNumber);
  add_common(gcap);

  ExtendOptions ext;
  double z2_max = 0.0;
  auto* extend = app.add_subcommand("extend", "Certify a domain of convergence for a series");
  extend->add_option("--seq", ext.seq_path, "Sequence JSON")->required();
  extend->add_option("--samples", ext.samples_path, "Convergence samples JSON")->required();
  extend->add_option("--config", ext.config_path, "Configuration JSON");
  extend->add_option("--domain", ext.domain, "linear or uniform");
  auto* z2_opt = extend->add_option("--z2-max", z2_max, "Largest |z2| in the growth grid")->check(CLI::PositiveNumber);
  extend->add_option("--csv", ext.csv_path, "Boundary CSV (default <out>.boundary.csv)");
  add_common(extend);

  std::string cert_path, z2_text;
  std::vector<std::string> z1_text;
  double tol = 1e-10;
  auto* eval = app.add_subcommand("eval", "Evaluate a certified series");
  eval->add_option("--cert", cert_path, "Certificate JSON from extend")->required();
  eval->add_option("--seq", ext.seq_path, "Sequence JSON")->required();
  eval->add_option("--z1", z1_text, "z1 coordinate as re,im (repeat for k > 1)")->required();
  eval->add_option("--z2", z2_text, "z2 as re,im")->required();
  eval->add_option("--tol", tol, "Tail tolerance")->check(CLI::PositiveNumber);
  add_common(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    ext.n_given = extend->count("--n") > 0;
    if (*z2_opt) ext.z2_max = z2_max;
    if (*cap) return cmd_cap(common, set_path, csv_path);
    if (*green) return cmd_green(common, set_path, points_path, method);
    if (*bern) return cmd_bernstein(common, poly_path, set_path, points_path);
    if (*gcap) {
      grid.capacity_points = common.n;
      return cmd_gammacap(common, set_path, unitaries, grid);
    }
    if (*extend) return cmd_extend(common, ext);
    if (*eval) return cmd_eval(common, cert_path, ext.seq_path, z1_text, z2_text, tol);
  } catch (const holext::Error& e) {
    report_error(e);
    return e.code() == holext::ErrorCode::InvalidArgument ? kExitInput : kExitPipeline;
  } catch (const InputError& e) {
    std::cerr << "holext: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "holext: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "holext: failure: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitInput;
}
