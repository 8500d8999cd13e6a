#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gdd/gdd.hpp"

namespace gdd::bench {

/// n points on [lo, hi], both endpoints included.
struct Grid {
  double lo = -3.0;
  double hi = 4.0;
  int n_points = 1000;

  double at(int i) const;
  std::vector<double> points() const;
  void validate() const;
};

enum class Quantity { Pdf, Cdf };

using Method = std::variant<PdfMethod, CdfMethod>;

Quantity quantity_of(const Method& m);
std::string method_name(const Method& m);  // "cf-de", "cdf:cf-de", ...
std::optional<Method> parse_method(const std::string& s);

struct ExperimentSpec {
  GDDParams params{0.5, 1.0, 8.5, 93.0};
  Grid grid;
  Method method = PdfMethod::CfDE;
  double eps_r = 1e-12;
  int runs = 3;
  int realizations_per_run = 1;

  void validate() const;
};

struct BenchRecord {
  ExperimentSpec spec;
  double mean_runtime_s = 0.0;    // per realization (one sweep of the grid)
  double runtime_sd_s = 0.0;
  double max_abs_error = 0.0;
  double acceleration_vs_baseline = 0.0;
  double mean_evals_per_point = 0.0;
  std::string error;  // non-empty when the experiment was aborted
};

struct Reference {
  Quantity quantity = Quantity::Pdf;
  std::vector<double> x;
  std::vector<double> value;  // NaN where the two oracle routes disagreed
  std::vector<int> excluded;
};

/// Two independent routes per point: for the density a long double
/// convolution integral checked against the U closed form; for the cdf the
/// cdf integral checked against CF inversion. Points where they disagree by
/// more than 1e-13 (relative) are excluded; more than 0.1% excluded throws.
Reference build_reference(const GDDParams& p, const Grid& g, Quantity q = Quantity::Pdf);

/// Same, through the on-disk cache. The directory is $GDD_REFERENCE_CACHE if
/// set, otherwise a folder under the system temp directory.
Reference cached_reference(const GDDParams& p, const Grid& g, Quantity q = Quantity::Pdf);
std::filesystem::path reference_cache_dir();
std::string reference_key(const GDDParams& p, const Grid& g, Quantity q);
void write_reference(const std::filesystem::path& file, const GDDParams& p, const Grid& g, const Reference& r);
std::optional<Reference> read_reference(const std::filesystem::path& file, const GDDParams& p, const Grid& g,
                                        Quantity q);

/// Evaluate the method over the grid, timing `runs` blocks of
/// `realizations_per_run` sweeps. The baseline is CfTrapezoid at 1e-4 on the
/// same grid unless a runtime is supplied.
BenchRecord run_experiment(const ExperimentSpec& spec, const Reference& ref,
                           std::optional<double> baseline_runtime_s = std::nullopt);

/// One record per (method, eps) with eps_list sorted from loose to tight.
std::vector<BenchRecord> sweep_eps(const GDDParams& p, const Grid& g, const std::vector<Method>& methods,
                                   const std::vector<double>& eps_list, int runs = 3,
                                   int realizations_per_run = 1);

std::string csv_header();
std::string to_csv_row(const BenchRecord& r);
std::string to_json(const BenchRecord& r);
std::string to_json(const std::vector<BenchRecord>& rs);
BenchRecord record_from_json(const std::string& text);

}  // namespace gdd::bench
