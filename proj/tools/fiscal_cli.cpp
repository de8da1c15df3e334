#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fiscal/csv.hpp"
#include "fiscal/errors.hpp"
#include "fiscal/pipeline.hpp"
#include "fiscal/synth.hpp"

namespace {

using fiscal::PipelineConfig;

struct ConfigCli {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;

  // Shared flag surface: every pipeline subcommand accepts the config file
  // plus flags mirroring the config keys; flags win over the file.
  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "flat key=value config file");
    auto opt = [this, cmd](const std::string& flag, const std::string& key,
                           const std::string& help) {
      cmd->add_option_function<std::string>(
          flag, [this, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
    };
    opt("--r", "r", "revenue series CSV (GRECP)");
    opt("--g", "g", "spending series CSV (GCEC)");
    opt("--y", "y", "real private GNP CSV (GNPC96)");
    opt("--tb3", "tb3", "3-month T-bill CSV (TB3MS)");
    opt("--m", "m", "monetary aggregate CSV");
    opt("--deflator", "deflator", "optional price deflator CSV");
    opt("--money-label", "money_label", "label for the monetary aggregate (MZM, DivisiaMZM, ...)");
    opt("--base-year", "base_year", "deflator base year");
    opt("--lag-order", "lag_order", "VAR lag order p");
    opt("--a1", "a1", "output elasticity of net revenue");
    opt("--engine", "engine", "shock engine: vecm | svr");
    opt("--dep-var", "dep_var", "dependent variable: growth | cycle");
    opt("--spec", "spec", "asymmetry spec: contemporaneous | four_lag");
    opt("--hp-lambda", "hp_lambda", "HP filter smoothing parameter");
    opt("--seed", "seed", "run seed");
    opt("--out-dir", "out_dir", "per-run output directory");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg =
        config_file.empty() ? PipelineConfig{} : PipelineConfig::from_file(config_file);
    for (const auto& [key, value] : overrides) cfg.apply_key(key, value);
    return cfg;
  }
};

void print_series_summary(const fiscal::QuarterlySeries& s) {
  std::printf("%-12s %s..%s  (%zu obs)\n", s.name().c_str(), s.start().str().c_str(),
              s.end().str().c_str(), s.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiscal shock extraction and asymmetry testing pipeline"};
  app.require_subcommand(1);

  ConfigCli ingest_cfg, ur_cfg, coint_cfg, shocks_cfg, asym_cfg;

  auto* ingest = app.add_subcommand("ingest", "load, deflate and align the input series");
  ingest_cfg.attach(ingest);

  auto* unit_root = app.add_subcommand("unit-root", "run the ADF/KPSS/ERS battery");
  ur_cfg.attach(unit_root);

  auto* cointegrate = app.add_subcommand("cointegrate", "Johansen trace/max-eigenvalue tests");
  coint_cfg.attach(cointegrate);

  auto* extract = app.add_subcommand("extract-shocks", "extract and sign-split fiscal shocks");
  shocks_cfg.attach(extract);

  auto* asymmetry = app.add_subcommand("asymmetry", "full pipeline through the F-test battery");
  asym_cfg.attach(asymmetry);

  auto* report = app.add_subcommand("report", "re-render tables from a stored run");
  std::string report_dir = "run";
  std::string report_table = "all";
  report->add_option("--out-dir", report_dir, "run directory holding results.json");
  report->add_option("--table", report_table,
                     "unit_root | cointegration | contemporaneous | lagged | all");

  auto* synth = app.add_subcommand("synth", "generate the synthetic validation dataset");
  std::string synth_dir = "synth";
  std::uint64_t synth_seed = 42;
  int synth_T = 240;
  synth->add_option("--out-dir", synth_dir, "directory for the generated CSVs");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--T", synth_T, "sample length in quarters");

  try {
    app.parse(argc, argv);

    if (*ingest) {
      PipelineConfig cfg = ingest_cfg.resolve();
      cfg.validate();
      auto aligned = fiscal::load_and_transform(cfg);
      std::printf("aligned sample %s..%s\n", aligned[0].start().str().c_str(),
                  aligned[0].end().str().c_str());
      for (const auto& s : aligned) print_series_summary(s);
    } else if (*unit_root || *cointegrate || *extract || *asymmetry) {
      const ConfigCli& cli = *unit_root ? ur_cfg
                             : *cointegrate ? coint_cfg
                             : *extract ? shocks_cfg
                                        : asym_cfg;
      PipelineConfig cfg = cli.resolve();
      fiscal::RunOutput out = fiscal::run_pipeline(cfg);
      if (*unit_root) {
        std::cout << fiscal::emit_table(out.results, fiscal::TableKind::UnitRoot,
                                        cfg.out_dir + "/table_unit_root");
      } else if (*cointegrate) {
        std::cout << fiscal::emit_table(out.results, fiscal::TableKind::Cointegration,
                                        cfg.out_dir + "/table_cointegration");
      } else if (*extract) {
        std::printf("shock source: %s\n", out.results.shocks.source.c_str());
        for (const auto* s : {&out.results.shocks.sgp, &out.results.shocks.sgn,
                              &out.results.shocks.srp, &out.results.shocks.srn})
          print_series_summary(*s);
        std::printf("series written under %s/series\n", cfg.out_dir.c_str());
      } else {
        const bool lagged = cfg.spec == fiscal::AsymmetrySpec::FourLag;
        std::cout << fiscal::emit_table(
            out.results, lagged ? fiscal::TableKind::Lagged : fiscal::TableKind::Contemporaneous,
            cfg.out_dir + (lagged ? "/table_lagged" : "/table_contemporaneous"));
      }
    } else if (*report) {
      fiscal::ResultBundle bundle = fiscal::load_results_json(report_dir + "/results.json");
      auto render = [&](fiscal::TableKind kind, const std::string& base) {
        std::cout << fiscal::emit_table(bundle, kind, report_dir + "/" + base) << "\n";
      };
      const bool lagged = bundle.asymmetry.spec == fiscal::AsymmetrySpec::FourLag;
      if (report_table == "unit_root") render(fiscal::TableKind::UnitRoot, "table_unit_root");
      else if (report_table == "cointegration")
        render(fiscal::TableKind::Cointegration, "table_cointegration");
      else if (report_table == "contemporaneous")
        render(fiscal::TableKind::Contemporaneous, "table_contemporaneous");
      else if (report_table == "lagged") render(fiscal::TableKind::Lagged, "table_lagged");
      else if (report_table == "all") {
        render(fiscal::TableKind::UnitRoot, "table_unit_root");
        render(fiscal::TableKind::Cointegration, "table_cointegration");
        render(lagged ? fiscal::TableKind::Lagged : fiscal::TableKind::Contemporaneous,
               lagged ? "table_lagged" : "table_contemporaneous");
      } else {
        throw fiscal::ConfigError("report: unknown table kind '" + report_table + "'");
      }
    } else if (*synth) {
      fiscal::DgpParams params;
      params.T = synth_T;
      fiscal::generate_synthetic(synth_dir, params, synth_seed);
      std::printf("synthetic dataset written to %s (T=%d, seed=%llu)\n", synth_dir.c_str(),
                  synth_T, static_cast<unsigned long long>(synth_seed));
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const fiscal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const fiscal::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const fiscal::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
