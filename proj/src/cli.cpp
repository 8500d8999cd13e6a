#include "gdd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdd/bench.hpp"
#include "gdd/error.hpp"
#include "gdd/gdd.hpp"
#include "json_out.hpp"

namespace gdd::cli {

namespace {

using json = nlohmann::json;

enum class Format { Plain, Csv, Json };

struct Options {
  double a1 = 0, b1 = 0, a2 = 0, b2 = 0, theta = 0;
  std::string method = "cf-de";
  double eps = 1e-12;
  std::string format = "plain";
  std::vector<double> xs;
  double lo = -3.0, hi = 4.0;
  int n = 1000;
  double tol = 1e-13;
  int runs = 3;
  int realizations = 1;
  std::vector<std::string> methods{"cf-de", "conv-de"};
  std::vector<double> eps_list{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14, 1e-15};
};

// Thrown for bad input caught after CLI11 parsing (unknown method names etc.).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Format format_of(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  return Format::Plain;
}

void add_params(CLI::App* cmd, Options& o) {
  cmd->add_option("--a1", o.a1, "shape of the positive gamma component")->required();
  cmd->add_option("--b1", o.b1, "rate of the positive gamma component")->required();
  cmd->add_option("--a2", o.a2, "shape of the negative gamma component")->required();
  cmd->add_option("--b2", o.b2, "rate of the negative gamma component")->required();
  cmd->add_option("--theta", o.theta, "location shift")->capture_default_str();
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"plain", "csv", "json"}))
      ->capture_default_str();
}

void add_method(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "evaluation method, e.g. cf-de, closed-u, cdf:cdf-integral-de")
      ->capture_default_str();
  cmd->add_option("--eps", o.eps, "requested relative error")->capture_default_str();
}

void add_grid(CLI::App* cmd, Options& o) {
  cmd->add_option("--lo", o.lo, "grid start")->capture_default_str();
  cmd->add_option("--hi", o.hi, "grid end")->capture_default_str();
  cmd->add_option("--n", o.n, "number of grid points, endpoints included")->capture_default_str();
}

void add_timing(CLI::App* cmd, Options& o) {
  cmd->add_option("--runs", o.runs, "timed runs")->capture_default_str();
  cmd->add_option("--realizations", o.realizations, "grid sweeps per timed run")->capture_default_str();
}

json params_json(const GDDParams& p) {
  return json{{"alpha1", p.alpha1()}, {"beta1", p.beta1()}, {"alpha2", p.alpha2()}, {"beta2", p.beta2()},
              {"theta", p.theta()}};
}

// pdf/cdf take a bare method name (cdf also accepts the "cdf:" prefix);
// grid and bench use the prefixed form to pick the quantity.
bench::Method method_for(const std::string& name, std::optional<bench::Quantity> q) {
  std::optional<bench::Method> m;
  if (q == bench::Quantity::Pdf) {
    if (auto pm = parse_pdf_method(name)) m = *pm;
  } else if (q == bench::Quantity::Cdf) {
    const std::string bare = name.rfind("cdf:", 0) == 0 ? name.substr(4) : name;
    if (auto cm = parse_cdf_method(bare)) m = *cm;
  } else {
    m = bench::parse_method(name);
  }
  if (!m) throw UsageError("unknown method '" + name + "'");
  return *m;
}

double evaluate(const GDDParams& p, double x, const bench::Method& m, double eps) {
  if (const auto* pm = std::get_if<PdfMethod>(&m)) return pdf(p, x, *pm, eps).value;
  return cdf(p, x, std::get<CdfMethod>(m), eps).value;
}

void print_table(std::ostream& out, Format f, const GDDParams& p, const bench::Method& m, double eps,
                 const std::vector<double>& xs, const std::vector<double>& vs, bool values_only) {
  const std::string col = bench::quantity_of(m) == bench::Quantity::Pdf ? "pdf" : "cdf";
  switch (f) {
    case Format::Plain:
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (values_only) out << num(vs[i]) << "\n";
        else out << num(xs[i]) << " " << num(vs[i]) << "\n";
      }
      break;
    case Format::Csv:
      out << "x," << col << "," << col << "_inf\n";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const bool inf = std::isinf(vs[i]);
        out << num(xs[i]) << "," << (inf ? "" : num(vs[i])) << "," << (inf ? 1 : 0) << "\n";
      }
      break;
    case Format::Json: {
      json pts = json::array();
      for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back(json{{"x", xs[i]}, {"value", vs[i]}});
      json j{{"quantity", col}, {"method", bench::method_name(m)}, {"eps_r", eps}, {"params", params_json(p)},
             {"points", pts}};
      out << detail::dump17(j) << "\n";
      break;
    }
  }
}

void print_records(std::ostream& out, Format f, const std::vector<bench::BenchRecord>& rs) {
  switch (f) {
    case Format::Plain:
      for (const auto& r : rs) {
        out << bench::method_name(r.spec.method) << " eps_r=" << num(r.spec.eps_r)
            << " max_abs_error=" << num(r.max_abs_error) << " mean_runtime_s=" << num(r.mean_runtime_s)
            << " runtime_sd_s=" << num(r.runtime_sd_s) << " acceleration=" << num(r.acceleration_vs_baseline);
        if (!r.error.empty()) out << " error=\"" << r.error << "\"";
        out << "\n";
      }
      break;
    case Format::Csv:
      out << bench::csv_header() << "\n";
      for (const auto& r : rs) out << bench::to_csv_row(r) << "\n";
      break;
    case Format::Json:
      out << (rs.size() == 1 ? bench::to_json(rs.front()) : bench::to_json(rs)) << "\n";
      break;
  }
}

int report_failures(const std::vector<bench::BenchRecord>& rs, std::ostream& err) {
  int code = 0;
  for (const auto& r : rs) {
    if (!r.error.empty()) {
      err << "error: " << bench::method_name(r.spec.method) << " at eps_r=" << num(r.spec.eps_r) << ": " << r.error
          << "\n";
      code = 2;
    }
  }
  return code;
}

bool is_validation(ErrorCode c) {
  return c == ErrorCode::InvalidArgument || c == ErrorCode::DomainError || c == ErrorCode::InvalidFrequency;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gamma difference distribution: densities, distribution functions, statistics and benchmarks", "gdd"};
  app.require_subcommand(1, 1);

  auto* pdf_cmd = app.add_subcommand("pdf", "density at one or more points");
  auto* cdf_cmd = app.add_subcommand("cdf", "distribution function at one or more points");
  auto* stats_cmd = app.add_subcommand("stats", "mean, variance, skewness, kurtosis, mode and six-sigma interval");
  auto* mode_cmd = app.add_subcommand("mode", "mode of the density");
  auto* bench_cmd = app.add_subcommand("bench", "time one method against the reference");
  auto* sweep_cmd = app.add_subcommand("sweep", "accuracy and runtime over a range of eps_r");
  auto* grid_cmd = app.add_subcommand("grid", "tabulate pdf or cdf on a uniform grid");

  for (auto* c : {pdf_cmd, cdf_cmd, stats_cmd, mode_cmd, bench_cmd, sweep_cmd, grid_cmd}) add_params(c, o);
  for (auto* c : {pdf_cmd, cdf_cmd, bench_cmd, grid_cmd}) add_method(c, o);
  for (auto* c : {bench_cmd, sweep_cmd, grid_cmd}) add_grid(c, o);
  for (auto* c : {bench_cmd, sweep_cmd}) add_timing(c, o);
  pdf_cmd->add_option("--x", o.xs, "evaluation points")->required();
  cdf_cmd->add_option("--x", o.xs, "evaluation points")->required();
  mode_cmd->add_option("--tol", o.tol, "tolerance on the mode")->capture_default_str();
  sweep_cmd->add_option("--methods", o.methods, "methods to sweep")->capture_default_str();
  sweep_cmd->add_option("--eps-list", o.eps_list, "eps_r values, loose to tight")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  const Format fmt = format_of(o.format);
  try {
    const GDDParams p(o.a1, o.b1, o.a2, o.b2, o.theta);

    if (pdf_cmd->parsed() || cdf_cmd->parsed()) {
      const auto q = pdf_cmd->parsed() ? bench::Quantity::Pdf : bench::Quantity::Cdf;
      const bench::Method m = method_for(o.method, q);
      quad::require_eps_r(o.eps);
      std::vector<double> vs;
      for (double x : o.xs) vs.push_back(evaluate(p, x, m, o.eps));
      print_table(out, fmt, p, m, o.eps, o.xs, vs, true);
      return 0;
    }

    if (grid_cmd->parsed()) {
      const bench::Method m = method_for(o.method, std::nullopt);
      quad::require_eps_r(o.eps);
      const bench::Grid g{o.lo, o.hi, o.n};
      const std::vector<double> xs = g.points();
      std::vector<double> vs;
      for (double x : xs) vs.push_back(evaluate(p, x, m, o.eps));
      print_table(out, fmt, p, m, o.eps, xs, vs, false);
      return 0;
    }

    if (mode_cmd->parsed()) {
      const double md = mode(p, o.tol);
      if (fmt == Format::Json) out << detail::dump17(json{{"mode", md}}) << "\n";
      else if (fmt == Format::Csv) out << "statistic,value\nmode," << num(md) << "\n";
      else out << num(md) << "\n";
      return 0;
    }

    if (stats_cmd->parsed()) {
      const Moments m = moments(p);
      const auto [lo, hi] = six_sigma_interval(p);
      const std::vector<std::pair<std::string, double>> rows{
          {"mean", m.mean}, {"variance", m.variance},   {"skewness", m.skewness},     {"kurtosis", m.kurtosis},
          {"mode", mode(p)}, {"six_sigma_lo", lo}, {"six_sigma_hi", hi}};
      if (fmt == Format::Json) {
        json j = json::object();
        for (const auto& [k, v] : rows) j[k] = v;
        out << detail::dump17(j) << "\n";
      } else if (fmt == Format::Csv) {
        out << "statistic,value\n";
        for (const auto& [k, v] : rows) out << k << "," << num(v) << "\n";
      } else {
        for (const auto& [k, v] : rows) out << k << " " << num(v) << "\n";
      }
      return 0;
    }

    if (bench_cmd->parsed()) {
      const bench::Method m = method_for(o.method, std::nullopt);
      const bench::ExperimentSpec spec{p, bench::Grid{o.lo, o.hi, o.n}, m, o.eps, o.runs, o.realizations};
      spec.validate();
      const auto ref = bench::cached_reference(p, spec.grid, bench::quantity_of(m));
      const std::vector<bench::BenchRecord> rs{bench::run_experiment(spec, ref)};
      print_records(out, fmt, rs);
      return report_failures(rs, err);
    }

    if (sweep_cmd->parsed()) {
      std::vector<bench::Method> ms;
      for (const auto& name : o.methods) {
        const auto m = bench::parse_method(name);
        if (!m) throw UsageError("unknown method '" + name + "'");
        ms.push_back(*m);
      }
      for (double e : o.eps_list) quad::require_eps_r(e);
      if (o.runs < 1 || o.realizations < 1) throw UsageError("--runs and --realizations must be at least 1");
      const bench::Grid g{o.lo, o.hi, o.n};
      g.validate();
      const auto rs = bench::sweep_eps(p, g, ms, o.eps_list, o.runs, o.realizations);
      print_records(out, fmt, rs);
      return report_failures(rs, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_validation(e.code()) ? 1 : 2;
  }
  return 1;
}

}  // namespace gdd::cli
