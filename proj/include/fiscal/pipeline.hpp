#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiscal/bp.hpp"
#include "fiscal/series.hpp"
#include "fiscal/shocks.hpp"
#include "fiscal/svr.hpp"
#include "fiscal/unit_root.hpp"
#include "fiscal/var.hpp"

namespace fiscal {

enum class ShockEngine { Vecm, Svr };
enum class DepVar { Growth, Cycle };

struct PipelineConfig {
  std::string path_r;         // government revenue (GRECP)
  std::string path_g;         // government spending (GCEC)
  std::string path_y;         // real private GNP (GNPC96)
  std::string path_tb3;       // 3-month T-bill rate (TB3MS)
  std::string path_m;         // selected monetary aggregate
  std::string path_deflator;  // optional implicit price deflator
  std::string money_label = "MZM";  // one aggregate per run
  int base_year = 2005;
  int lag_order = 4;
  double a1 = 2.0;
  ShockEngine engine = ShockEngine::Vecm;
  DepVar dep_var = DepVar::Growth;
  AsymmetrySpec spec = AsymmetrySpec::Contemporaneous;
  double hp_lambda = 1600.0;
  std::uint64_t seed = 42;
  std::string out_dir = "run";
  HyperSearch svr_search;

  void validate() const;
  // Flat key=value file; later flags override these values.
  static PipelineConfig from_file(const std::string& path);
  void apply_key(const std::string& key, const std::string& value);
  std::map<std::string, std::string> snapshot() const;
};

struct UnitRootRow {
  std::string variable;
  UnitRootReport adf_level, kpss_level, ers_level;
  UnitRootReport adf_diff, kpss_diff, ers_diff;
  Integration decision = Integration::Inconclusive;
};

struct ResultBundle {
  std::vector<UnitRootRow> unit_root;
  JohansenReport johansen;
  ShockBundle shocks;
  std::optional<StructuralShocks> structural;  // vecm engine only
  std::optional<double> svr_cv_mse;            // svr engine only
  AsymmetryResult asymmetry;
  Quarter sample_start{}, sample_end{};
};

struct RunManifest {
  std::map<std::string, std::string> config;
  std::string sample_range;
  std::string engine_diagnostics;
  std::map<std::string, std::string> input_hashes;
  std::map<std::string, std::string> output_hashes;
  std::string failed_at;  // empty on success

  void save(const std::string& path) const;
};

struct RunOutput {
  RunManifest manifest;
  ResultBundle results;
};

// Loads the five inputs, applies the deflator when configured, logs the
// real aggregates and aligns everything. Order: r, g, y, tb3, m.
std::vector<QuarterlySeries> load_and_transform(const PipelineConfig& cfg,
                                                RunManifest* manifest = nullptr);

// Executes ingest -> transforms -> unit-root -> Johansen -> engine ->
// identification -> Cover split -> asymmetry regression -> battery, and
// persists intermediates, tables and the manifest under cfg.out_dir.
RunOutput run_pipeline(const PipelineConfig& cfg);

enum class TableKind { UnitRoot, Cointegration, Contemporaneous, Lagged };

// Renders a result table as aligned text and CSV; files land next to the
// run's other artifacts. Returns the text rendering.
std::string emit_table(const ResultBundle& bundle, TableKind kind, const std::string& out_base);

// Low-level coefficient table renderer (stars at 10/5/1%).
std::string render_coef_table(const std::vector<std::string>& names,
                              const std::vector<double>& coefs, const std::vector<double>& pvals,
                              const std::vector<BatteryRow>& battery, const std::string& title,
                              std::string* csv_out = nullptr);

std::string significance_stars(double p);

// Rebuilds enough of a stored results.json to re-render its tables.
ResultBundle load_results_json(const std::string& path);

// FNV-1a content hash of a file, as hex; used for manifest determinism.
std::string hash_file(const std::string& path);

}  // namespace fiscal
