#include "gdd/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "conv.hpp"
#include "json_out.hpp"
#include "gdd/error.hpp"

namespace gdd::bench {

namespace {

using json = nlohmann::json;
constexpr int kCacheVersion = 1;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Oracle density: long double convolution integral, reflected for z < 0.
double oracle_pdf(const GDDParams& p, double x) {
  const double z = x - p.theta();
  if (z == 0.0) return pdf_at_location(p);
  const GDDParams q = z > 0 ? p : reflect(p);
  using LD = long double;
  const auto r = detail::conv_pdf_positive<LD>(q.alpha1(), q.beta1(), q.alpha2(), q.beta2(), std::abs(LD(z)),
                                               LD(1e-19), 16);
  return static_cast<double>(r.value);
}

struct Timing {
  double mean = 0.0, sd = 0.0, evals_per_point = 0.0;
  std::vector<double> values;
};

quad::QuadResult evaluate(const ExperimentSpec& s, double x) {
  return std::visit(
      [&](auto m) {
        if constexpr (std::is_same_v<decltype(m), PdfMethod>) {
          return pdf(s.params, x, m, s.eps_r);
        } else {
          return cdf(s.params, x, m, s.eps_r);
        }
      },
      s.method);
}

Timing time_method(const ExperimentSpec& s) {
  const std::vector<double> xs = s.grid.points();
  Timing t;
  t.values.assign(xs.size(), 0.0);
  std::vector<double> per_run;
  std::int64_t evals = 0;
  for (int run = 0; run < s.runs; ++run) {
    const auto start = std::chrono::steady_clock::now();
    for (int rep = 0; rep < s.realizations_per_run; ++rep) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const quad::QuadResult r = evaluate(s, xs[i]);
        t.values[i] = r.value;
        if (run == 0 && rep == 0) evals += r.n_evals;
      }
    }
    const auto stop = std::chrono::steady_clock::now();
    per_run.push_back(std::chrono::duration<double>(stop - start).count() / s.realizations_per_run);
  }
  double sum = 0.0;
  for (double v : per_run) sum += v;
  t.mean = sum / per_run.size();
  double ss = 0.0;
  for (double v : per_run) ss += (v - t.mean) * (v - t.mean);
  t.sd = per_run.size() > 1 ? std::sqrt(ss / (per_run.size() - 1)) : 0.0;
  t.evals_per_point = static_cast<double>(evals) / xs.size();
  return t;
}

json spec_json(const ExperimentSpec& s) {
  return json{{"params",
               {{"alpha1", s.params.alpha1()},
                {"beta1", s.params.beta1()},
                {"alpha2", s.params.alpha2()},
                {"beta2", s.params.beta2()},
                {"theta", s.params.theta()}}},
              {"grid", {{"lo", s.grid.lo}, {"hi", s.grid.hi}, {"n_points", s.grid.n_points}, {"endpoints", "included"}}},
              {"method", method_name(s.method)},
              {"eps_r", s.eps_r},
              {"runs", s.runs},
              {"realizations_per_run", s.realizations_per_run}};
}

json record_json(const BenchRecord& r) {
  json j{{"spec", spec_json(r.spec)},
         {"mean_runtime_s", r.mean_runtime_s},
         {"runtime_sd_s", r.runtime_sd_s},
         {"max_abs_error", r.max_abs_error},
         {"acceleration", r.acceleration_vs_baseline},
         {"mean_evals_per_point", r.mean_evals_per_point}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

double Grid::at(int i) const {
  if (i == n_points - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
}

std::vector<double> Grid::points() const {
  validate();
  std::vector<double> xs(n_points);
  for (int i = 0; i < n_points; ++i) xs[i] = at(i);
  return xs;
}

void Grid::validate() const {
  if (n_points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::InvalidArgument, "grid needs finite lo < hi");
  }
}

Quantity quantity_of(const Method& m) {
  return std::holds_alternative<PdfMethod>(m) ? Quantity::Pdf : Quantity::Cdf;
}

std::string method_name(const Method& m) {
  if (const auto* pm = std::get_if<PdfMethod>(&m)) return std::string(cli_name(*pm));
  return "cdf:" + std::string(cli_name(std::get<CdfMethod>(m)));
}

std::optional<Method> parse_method(const std::string& s) {
  if (s.rfind("cdf:", 0) == 0) {
    if (auto c = parse_cdf_method(s.substr(4))) return Method{*c};
    return std::nullopt;
  }
  if (auto p = parse_pdf_method(s)) return Method{*p};
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  grid.validate();
  quad::require_eps_r(eps_r);
  if (runs < 1 || realizations_per_run < 1) {
    throw Error(ErrorCode::InvalidArgument, "runs and realizations_per_run must be at least 1");
  }
}

Reference build_reference(const GDDParams& p, const Grid& g, Quantity q) {
  Reference ref;
  ref.quantity = q;
  ref.x = g.points();
  ref.value.resize(ref.x.size());
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    const double x = ref.x[i];
    double a = 0.0, b = 0.0;
    bool agree = false;
    if (q == Quantity::Pdf) {
      a = oracle_pdf(p, x);
      b = pdf(p, x, PdfMethod::ClosedU, 1e-16).value;
      agree = (x == p.theta()) || std::abs(a - b) <= 1e-13 * std::abs(a);
    } else {
      a = cdf(p, x, CdfMethod::CdfIntegralDE, 1e-15).value;
      b = cdf(p, x, CdfMethod::CfDE, 1e-15).value;
      agree = std::abs(a - b) <= 1e-13;
    }
    if (agree) {
      ref.value[i] = a;
    } else {
      ref.value[i] = std::numeric_limits<double>::quiet_NaN();
      ref.excluded.push_back(static_cast<int>(i));
    }
  }
  if (ref.excluded.size() * 1000 > ref.x.size()) {
    throw Error(ErrorCode::ReferenceDisagreement, std::to_string(ref.excluded.size()) + " of " +
                                                      std::to_string(ref.x.size()) +
                                                      " reference points failed the two-route cross-check");
  }
  return ref;
}

std::string reference_key(const GDDParams& p, const Grid& g, Quantity q) {
  std::ostringstream os;
  os << "v" << kCacheVersion << (q == Quantity::Pdf ? "|pdf" : "|cdf") << "|a1=" << num(p.alpha1())
     << "|b1=" << num(p.beta1()) << "|a2=" << num(p.alpha2()) << "|b2=" << num(p.beta2())
     << "|theta=" << num(p.theta()) << "|lo=" << num(g.lo) << "|hi=" << num(g.hi) << "|n=" << g.n_points;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return std::string(hex) + " " + os.str();
}

std::filesystem::path reference_cache_dir() {
  if (const char* env = std::getenv("GDD_REFERENCE_CACHE"); env && *env) return env;
  return std::filesystem::temp_directory_path() / "gdd-reference-cache";
}

void write_reference(const std::filesystem::path& file, const GDDParams& p, const Grid& g, const Reference& r) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write reference cache " + file.string());
  out << "# " << reference_key(p, g, r.quantity) << "\n";
  for (std::size_t i = 0; i < r.x.size(); ++i) out << num(r.x[i]) << "," << num(r.value[i]) << "\n";
}

std::optional<Reference> read_reference(const std::filesystem::path& file, const GDDParams& p, const Grid& g,
                                        Quantity q) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != "# " + reference_key(p, g, q)) return std::nullopt;
  Reference r;
  r.quantity = q;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) return std::nullopt;
    r.x.push_back(std::strtod(line.c_str(), nullptr));
    r.value.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
    if (std::isnan(r.value.back())) r.excluded.push_back(static_cast<int>(r.value.size() - 1));
  }
  if (static_cast<int>(r.x.size()) != g.n_points) return std::nullopt;
  return r;
}

Reference cached_reference(const GDDParams& p, const Grid& g, Quantity q) {
  const std::string key = reference_key(p, g, q);
  const std::filesystem::path dir = reference_cache_dir();
  const std::filesystem::path file = dir / ("ref-" + key.substr(0, 16) + ".csv");
  if (auto hit = read_reference(file, p, g, q)) return *hit;
  Reference r = build_reference(p, g, q);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec) {
    // Write to a temporary name first so concurrent readers never see a partial file.
    const std::filesystem::path tmp = file.string() + ".tmp" + std::to_string(fnv1a(file.string()) ^ std::hash<std::thread::id>{}(std::this_thread::get_id()));
    try {
      write_reference(tmp, p, g, r);
      std::filesystem::rename(tmp, file, ec);
    } catch (const Error&) {
    }
  }
  return r;
}

BenchRecord run_experiment(const ExperimentSpec& spec, const Reference& ref, std::optional<double> baseline_runtime_s) {
  spec.validate();
  if (ref.x.size() != static_cast<std::size_t>(spec.grid.n_points) || ref.quantity != quantity_of(spec.method)) {
    throw Error(ErrorCode::InvalidArgument, "reference does not cover the experiment grid");
  }
  BenchRecord rec;
  rec.spec = spec;
  try {
    const Timing t = time_method(spec);
    rec.mean_runtime_s = t.mean;
    rec.runtime_sd_s = t.sd;
    rec.mean_evals_per_point = t.evals_per_point;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      if (std::isnan(ref.value[i])) continue;
      const double e = std::isinf(ref.value[i]) && t.values[i] == ref.value[i] ? 0.0 : std::abs(t.values[i] - ref.value[i]);
      rec.max_abs_error = std::max(rec.max_abs_error, e);
    }
    double baseline = 0.0;
    if (baseline_runtime_s) {
      baseline = *baseline_runtime_s;
    } else {
      ExperimentSpec b = spec;
      b.method = quantity_of(spec.method) == Quantity::Pdf ? Method{PdfMethod::CfTrapezoid} : Method{CdfMethod::CfTrapezoid};
      b.eps_r = 1e-4;
      baseline = time_method(b).mean;
    }
    rec.acceleration_vs_baseline = rec.mean_runtime_s > 0 ? baseline / rec.mean_runtime_s : 0.0;
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

std::vector<BenchRecord> sweep_eps(const GDDParams& p, const Grid& g, const std::vector<Method>& methods,
                                   const std::vector<double>& eps_list, int runs, int realizations_per_run) {
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "eps list must be sorted from loose to tight");
    }
  }
  std::optional<Reference> pdf_ref, cdf_ref;
  std::optional<double> pdf_base, cdf_base;
  std::vector<BenchRecord> out;
  for (const Method& m : methods) {
    const Quantity q = quantity_of(m);
    auto& ref = q == Quantity::Pdf ? pdf_ref : cdf_ref;
    auto& base = q == Quantity::Pdf ? pdf_base : cdf_base;
    if (!ref) ref = cached_reference(p, g, q);
    if (!base) {
      ExperimentSpec b{p, g, q == Quantity::Pdf ? Method{PdfMethod::CfTrapezoid} : Method{CdfMethod::CfTrapezoid},
                       1e-4, runs, realizations_per_run};
      base = time_method(b).mean;
    }
    for (double eps : eps_list) {
      ExperimentSpec s{p, g, m, eps, runs, realizations_per_run};
      out.push_back(run_experiment(s, *ref, base));
    }
  }
  return out;
}

std::string csv_header() {
  return "method,eps_r,n_points,runs,mean_runtime_s,runtime_sd_s,max_abs_error,acceleration";
}

std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream os;
  os << method_name(r.spec.method) << "," << num(r.spec.eps_r) << "," << r.spec.grid.n_points << ","
     << r.spec.runs << "," << num(r.mean_runtime_s) << "," << num(r.runtime_sd_s) << "," << num(r.max_abs_error)
     << "," << num(r.acceleration_vs_baseline);
  return os.str();
}

std::string to_json(const BenchRecord& r) { return detail::dump17(record_json(r)); }

std::string to_json(const std::vector<BenchRecord>& rs) {
  json arr = json::array();
  for (const auto& r : rs) arr.push_back(record_json(r));
  return detail::dump17(arr);
}

BenchRecord record_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const json& s = j.at("spec");
    const json& pp = s.at("params");
    const json& g = s.at("grid");
    const auto method = parse_method(s.at("method").get<std::string>());
    if (!method) throw Error(ErrorCode::InvalidArgument, "unknown method in record");
    BenchRecord r;
    r.spec = ExperimentSpec{GDDParams(pp.at("alpha1").get<double>(), pp.at("beta1").get<double>(),
                                      pp.at("alpha2").get<double>(), pp.at("beta2").get<double>(),
                                      pp.at("theta").get<double>()),
                            Grid{g.at("lo").get<double>(), g.at("hi").get<double>(), g.at("n_points").get<int>()},
                            *method,
                            s.at("eps_r").get<double>(),
                            s.at("runs").get<int>(),
                            s.at("realizations_per_run").get<int>()};
    r.mean_runtime_s = j.at("mean_runtime_s").get<double>();
    r.runtime_sd_s = j.at("runtime_sd_s").get<double>();
    r.max_abs_error = j.at("max_abs_error").get<double>();
    r.acceleration_vs_baseline = j.at("acceleration").get<double>();
    r.mean_evals_per_point = j.value("mean_evals_per_point", 0.0);
    r.error = j.value("error", std::string());
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed bench record: ") + e.what());
  }
}

}  // namespace gdd::bench
