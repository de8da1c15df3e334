#include "fiscal/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fiscal/csv.hpp"
#include "fiscal/errors.hpp"

namespace fiscal {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string integration_str(Integration i) {
  switch (i) {
    case Integration::I0: return "I(0)";
    case Integration::I1: return "I(1)";
    case Integration::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

json unit_root_json(const UnitRootReport& r) {
  json j;
  j["statistic"] = r.statistic;
  j["lags"] = r.lags_used;
  if (r.p_value_interp) j["p_approx"] = *r.p_value_interp;
  j["reject_10"] = r.decision_at.at(0.10);
  j["reject_05"] = r.decision_at.at(0.05);
  j["reject_01"] = r.decision_at.at(0.01);
  return j;
}

}  // namespace

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("hash_file: cannot open " + path);
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

void PipelineConfig::validate() const {
  if (lag_order < 1) throw ConfigError("config: lag_order must be >= 1");
  if (hp_lambda < 0.0) throw ConfigError("config: hp_lambda must be nonnegative");
  if (path_r.empty() || path_g.empty() || path_y.empty() || path_tb3.empty() || path_m.empty())
    throw ConfigError("config: data paths r, g, y, tb3 and m are all required");
}

void PipelineConfig::apply_key(const std::string& key, const std::string& value) {
  try {
    if (key == "r") path_r = value;
    else if (key == "g") path_g = value;
    else if (key == "y") path_y = value;
    else if (key == "tb3") path_tb3 = value;
    else if (key == "m") path_m = value;
    else if (key == "deflator") path_deflator = value;
    else if (key == "money_label") money_label = value;
    else if (key == "base_year") base_year = std::stoi(value);
    else if (key == "lag_order") lag_order = std::stoi(value);
    else if (key == "a1") a1 = std::stod(value);
    else if (key == "hp_lambda") hp_lambda = std::stod(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "out_dir") out_dir = value;
    else if (key == "engine") {
      if (value == "vecm") engine = ShockEngine::Vecm;
      else if (value == "svr") engine = ShockEngine::Svr;
      else throw ConfigError("config: engine must be vecm or svr");
    } else if (key == "dep_var") {
      if (value == "growth") dep_var = DepVar::Growth;
      else if (value == "cycle") dep_var = DepVar::Cycle;
      else throw ConfigError("config: dep_var must be growth or cycle");
    } else if (key == "spec") {
      if (value == "contemporaneous") spec = AsymmetrySpec::Contemporaneous;
      else if (value == "four_lag") spec = AsymmetrySpec::FourLag;
      else throw ConfigError("config: spec must be contemporaneous or four_lag");
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config: bad value '" + value + "' for key '" + key + "'");
  }
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  PipelineConfig cfg;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t\r\n") + 1);
    if (key.empty()) continue;
    if (eq == std::string::npos)
      throw ConfigError(path + ": expected key=value at line " + std::to_string(row));
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r\n") + 1);
    cfg.apply_key(key, value);
  }
  return cfg;
}

std::map<std::string, std::string> PipelineConfig::snapshot() const {
  std::map<std::string, std::string> s;
  s["r"] = path_r;
  s["g"] = path_g;
  s["y"] = path_y;
  s["tb3"] = path_tb3;
  s["m"] = path_m;
  s["deflator"] = path_deflator;
  s["money_label"] = money_label;
  s["base_year"] = std::to_string(base_year);
  s["lag_order"] = std::to_string(lag_order);
  s["a1"] = std::to_string(a1);
  s["engine"] = engine == ShockEngine::Vecm ? "vecm" : "svr";
  s["dep_var"] = dep_var == DepVar::Growth ? "growth" : "cycle";
  s["spec"] = spec == AsymmetrySpec::Contemporaneous ? "contemporaneous" : "four_lag";
  s["hp_lambda"] = std::to_string(hp_lambda);
  s["seed"] = std::to_string(seed);
  s["out_dir"] = out_dir;
  return s;
}

void RunManifest::save(const std::string& path) const {
  json j;
  j["config"] = config;
  j["sample_range"] = sample_range;
  j["engine_diagnostics"] = engine_diagnostics;
  j["input_hashes"] = input_hashes;
  j["output_hashes"] = output_hashes;
  if (!failed_at.empty()) j["failed_at"] = failed_at;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

namespace {

void write_results_json(const ResultBundle& b, const PipelineConfig& cfg,
                        const std::string& path) {
  json j;
  j["sample_start"] = b.sample_start.str();
  j["sample_end"] = b.sample_end.str();
  json ur = json::array();
  for (const auto& row : b.unit_root) {
    json r;
    r["variable"] = row.variable;
    r["adf_level"] = unit_root_json(row.adf_level);
    r["kpss_level"] = unit_root_json(row.kpss_level);
    r["ers_level"] = unit_root_json(row.ers_level);
    r["adf_diff"] = unit_root_json(row.adf_diff);
    r["kpss_diff"] = unit_root_json(row.kpss_diff);
    r["ers_diff"] = unit_root_json(row.ers_diff);
    r["decision"] = integration_str(row.decision);
    ur.push_back(r);
  }
  j["unit_root"] = ur;

  json jo;
  jo["eigenvalues"] = b.johansen.eigenvalues;
  jo["trace"] = b.johansen.trace_stats;
  jo["maxeig"] = b.johansen.maxeig_stats;
  jo["selected_rank"] = b.johansen.selected_rank;
  json tr5 = json::array(), mr5 = json::array(), tp = json::array(), mp = json::array();
  for (std::size_t r = 0; r < b.johansen.trace_stats.size(); ++r) {
    tr5.push_back(b.johansen.trace_reject[r].at(0.05));
    mr5.push_back(b.johansen.maxeig_reject[r].at(0.05));
    if (b.johansen.trace_p_approx[r]) tp.push_back(*b.johansen.trace_p_approx[r]); else tp.push_back(nullptr);
    if (b.johansen.maxeig_p_approx[r]) mp.push_back(*b.johansen.maxeig_p_approx[r]); else mp.push_back(nullptr);
  }
  jo["trace_reject_05"] = tr5;
  jo["maxeig_reject_05"] = mr5;
  jo["trace_p"] = tp;
  jo["maxeig_p"] = mp;
  jo["jb_joint_p"] = b.johansen.jarque_bera_joint_p;
  jo["lm_serial_p"] = b.johansen.lm_serial_p;
  jo["exogenous_adjustment_applied"] = b.johansen.exogenous_adjustment_applied;
  j["johansen"] = jo;

  if (b.structural) {
    j["identification"] = {{"b2", b.structural->b2},   {"b2_se", b.structural->b2_se},
                           {"c1", b.structural->c1},   {"c1_se", b.structural->c1_se},
                           {"c2", b.structural->c2},   {"c2_se", b.structural->c2_se},
                           {"a1", cfg.a1}};
  }
  if (b.svr_cv_mse) j["svr_cv_mse"] = *b.svr_cv_mse;

  json fit;
  fit["names"] = b.asymmetry.fit.names;
  fit["coefficients"] =
      std::vector<double>(b.asymmetry.fit.coefficients.data(),
                          b.asymmetry.fit.coefficients.data() + b.asymmetry.fit.coefficients.size());
  fit["p_values"] = std::vector<double>(
      b.asymmetry.fit.p_values.data(), b.asymmetry.fit.p_values.data() + b.asymmetry.fit.p_values.size());
  fit["nobs"] = b.asymmetry.fit.nobs;
  fit["spec"] = b.asymmetry.spec == AsymmetrySpec::Contemporaneous ? "contemporaneous" : "four_lag";
  json battery = json::array();
  for (const auto& row : b.asymmetry.battery) {
    battery.push_back({{"hypothesis", row.hypothesis},
                       {"f", row.f_stat},
                       {"df1", row.df1},
                       {"df2", row.df2},
                       {"p", row.p_value}});
  }
  fit["battery"] = battery;
  j["asymmetry"] = fit;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write results file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

std::string render_coef_table(const std::vector<std::string>& names,
                              const std::vector<double>& coefs, const std::vector<double>& pvals,
                              const std::vector<BatteryRow>& battery, const std::string& title,
                              std::string* csv_out) {
  std::ostringstream txt, csv;
  txt << title << "\n";
  txt << "----------------------------------------------\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %-4s\n", "Variable", "Coef.", "p-value", "");
  txt << buf;
  csv << "variable,coefficient,p_value,stars\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string stars = significance_stars(pvals[i]);
    std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %-4s\n", names[i].c_str(),
                  fmt3(coefs[i]).c_str(), fmt3(pvals[i]).c_str(), stars.c_str());
    txt << buf;
    csv << names[i] << "," << fmt3(coefs[i]) << "," << fmt3(pvals[i]) << "," << stars << "\n";
  }
  if (!battery.empty()) {
    txt << "F-Tests\n";
    for (const auto& row : battery) {
      const std::string stars = significance_stars(row.p_value);
      std::snprintf(buf, sizeof(buf), "%-22s %10s %10s %-4s\n", row.hypothesis.c_str(),
                    fmt3(row.f_stat).c_str(), fmt3(row.p_value).c_str(), stars.c_str());
      txt << buf;
      csv << "F:" << row.hypothesis << "," << fmt3(row.f_stat) << "," << fmt3(row.p_value) << ","
          << stars << "\n";
    }
  }
  if (csv_out) *csv_out = csv.str();
  return txt.str();
}

std::string emit_table(const ResultBundle& bundle, TableKind kind, const std::string& out_base) {
  std::ostringstream txt, csv;
  char buf[256];
  switch (kind) {
    case TableKind::UnitRoot: {
      if (bundle.unit_root.empty()) throw ConfigError("emit_table: no unit-root results stored");
      txt << "Unit Root Tests (intercept and trend)\n";
      csv << "variable,adf_level,adf_diff,kpss_level,kpss_diff,ers_level,ers_diff,decision\n";
      std::snprintf(buf, sizeof(buf), "%-10s %9s %9s %9s %9s %9s %9s  %s\n", "Variable",
                    "ADF lvl", "ADF dif", "KPSS lvl", "KPSS dif", "ERS lvl", "ERS dif",
                    "Decision");
      txt << buf;
      for (const auto& r : bundle.unit_root) {
        std::snprintf(buf, sizeof(buf), "%-10s %9s %9s %9s %9s %9s %9s  %s\n",
                      r.variable.c_str(), fmt3(r.adf_level.statistic).c_str(),
                      fmt3(r.adf_diff.statistic).c_str(), fmt3(r.kpss_level.statistic).c_str(),
                      fmt3(r.kpss_diff.statistic).c_str(), fmt3(r.ers_level.statistic).c_str(),
                      fmt3(r.ers_diff.statistic).c_str(), integration_str(r.decision).c_str());
        txt << buf;
        csv << r.variable << "," << fmt3(r.adf_level.statistic) << ","
            << fmt3(r.adf_diff.statistic) << "," << fmt3(r.kpss_level.statistic) << ","
            << fmt3(r.kpss_diff.statistic) << "," << fmt3(r.ers_level.statistic) << ","
            << fmt3(r.ers_diff.statistic) << "," << integration_str(r.decision) << "\n";
      }
      break;
    }
    case TableKind::Cointegration: {
      if (bundle.johansen.trace_stats.empty())
        throw ConfigError("emit_table: no cointegration results stored");
      txt << "Johansen Cointegration Tests (asymptotic critical values;\n"
             "exogenous-variable adjustment not applied)\n";
      csv << "rank,trace,trace_p,maxeig,maxeig_p\n";
      std::snprintf(buf, sizeof(buf), "%-8s %10s %9s %10s %9s\n", "Null", "Trace", "p", "MaxEig",
                    "p");
      txt << buf;
      const auto& jr = bundle.johansen;
      for (std::size_t r = 0; r < jr.trace_stats.size(); ++r) {
        const std::string label = "r<=" + std::to_string(r);
        const std::string tp = jr.trace_p_approx[r] ? fmt3(*jr.trace_p_approx[r]) : "-";
        const std::string mp = jr.maxeig_p_approx[r] ? fmt3(*jr.maxeig_p_approx[r]) : "-";
        std::snprintf(buf, sizeof(buf), "%-8s %10s %8s%-3s %10s %8s%-3s\n", label.c_str(),
                      fmt3(jr.trace_stats[r]).c_str(), tp.c_str(),
                      jr.trace_reject[r].at(0.05) ? "**" : "", fmt3(jr.maxeig_stats[r]).c_str(),
                      mp.c_str(), jr.maxeig_reject[r].at(0.05) ? "**" : "");
        txt << buf;
        csv << r << "," << fmt3(jr.trace_stats[r]) << "," << tp << ","
            << fmt3(jr.maxeig_stats[r]) << "," << mp << "\n";
      }
      txt << "Selected rank: " << jr.selected_rank << "\n";
      txt << "Normality J-B joint p: " << fmt3(jr.jarque_bera_joint_p)
          << "   Serial correlation LM p: " << fmt3(jr.lm_serial_p) << "\n";
      break;
    }
    case TableKind::Contemporaneous:
    case TableKind::Lagged: {
      const bool want_lagged = kind == TableKind::Lagged;
      const bool have_lagged = bundle.asymmetry.spec == AsymmetrySpec::FourLag;
      if (bundle.asymmetry.fit.names.empty() || want_lagged != have_lagged)
        throw ConfigError("emit_table: no stored results for requested table kind");
      const auto& fit = bundle.asymmetry.fit;
      std::string csv_s;
      const std::string title =
          want_lagged ? "Fiscal Policy Shocks on Real Private GNP (four lags)"
                      : "Fiscal Policy Shocks on Real Private GNP (contemporaneous)";
      txt << render_coef_table(fit.names,
                               std::vector<double>(fit.coefficients.data(),
                                                   fit.coefficients.data() + fit.coefficients.size()),
                               std::vector<double>(fit.p_values.data(),
                                                   fit.p_values.data() + fit.p_values.size()),
                               bundle.asymmetry.battery, title, &csv_s);
      csv << csv_s;
      break;
    }
  }

  std::ofstream t(out_base + ".txt");
  std::ofstream c(out_base + ".csv");
  if (!t || !c) throw DataError("emit_table: cannot write " + out_base);
  t << txt.str();
  c << csv.str();
  return txt.str();
}

std::vector<QuarterlySeries> load_and_transform(const PipelineConfig& cfg, RunManifest* manifest) {
  QuarterlySeries r = load_fred_csv(cfg.path_r);
  QuarterlySeries g = load_fred_csv(cfg.path_g);
  QuarterlySeries y = load_fred_csv(cfg.path_y);
  QuarterlySeries tb3 = load_fred_csv(cfg.path_tb3);
  QuarterlySeries m = load_fred_csv(cfg.path_m);
  if (manifest) {
    manifest->input_hashes[cfg.path_r] = hash_file(cfg.path_r);
    manifest->input_hashes[cfg.path_g] = hash_file(cfg.path_g);
    manifest->input_hashes[cfg.path_y] = hash_file(cfg.path_y);
    manifest->input_hashes[cfg.path_tb3] = hash_file(cfg.path_tb3);
    manifest->input_hashes[cfg.path_m] = hash_file(cfg.path_m);
  }
  if (!cfg.path_deflator.empty()) {
    const QuarterlySeries defl = load_fred_csv(cfg.path_deflator);
    if (manifest) manifest->input_hashes[cfg.path_deflator] = hash_file(cfg.path_deflator);
    auto pair_with = [&](const QuarterlySeries& s) {
      auto both = align({s, defl});
      return deflate(both[0], both[1], cfg.base_year);
    };
    r = pair_with(r);
    g = pair_with(g);
    m = pair_with(m);
  }
  r = transform_log(r).renamed("r");
  g = transform_log(g).renamed("g");
  y = transform_log(y).renamed("y");
  m = transform_log(m).renamed(cfg.money_label);
  tb3 = tb3.renamed("TB3");
  return align({r, g, y, tb3, m});
}

ResultBundle load_results_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open results file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError(std::string("results file is not valid JSON: ") + e.what());
  }

  ResultBundle b;
  b.sample_start = Quarter::parse(j.at("sample_start").get<std::string>());
  b.sample_end = Quarter::parse(j.at("sample_end").get<std::string>());

  auto report_from = [](const json& r) {
    UnitRootReport rep;
    rep.statistic = r.at("statistic").get<double>();
    rep.lags_used = r.at("lags").get<int>();
    rep.decision_at[0.10] = r.at("reject_10").get<bool>();
    rep.decision_at[0.05] = r.at("reject_05").get<bool>();
    rep.decision_at[0.01] = r.at("reject_01").get<bool>();
    if (r.contains("p_approx")) rep.p_value_interp = r.at("p_approx").get<double>();
    return rep;
  };
  for (const auto& r : j.at("unit_root")) {
    UnitRootRow row;
    row.variable = r.at("variable").get<std::string>();
    row.adf_level = report_from(r.at("adf_level"));
    row.kpss_level = report_from(r.at("kpss_level"));
    row.ers_level = report_from(r.at("ers_level"));
    row.adf_diff = report_from(r.at("adf_diff"));
    row.kpss_diff = report_from(r.at("kpss_diff"));
    row.ers_diff = report_from(r.at("ers_diff"));
    const std::string d = r.at("decision").get<std::string>();
    row.decision = d == "I(0)" ? Integration::I0
                               : d == "I(1)" ? Integration::I1 : Integration::Inconclusive;
    b.unit_root.push_back(row);
  }

  const json& jo = j.at("johansen");
  b.johansen.eigenvalues = jo.at("eigenvalues").get<std::vector<double>>();
  b.johansen.trace_stats = jo.at("trace").get<std::vector<double>>();
  b.johansen.maxeig_stats = jo.at("maxeig").get<std::vector<double>>();
  b.johansen.selected_rank = jo.at("selected_rank").get<int>();
  b.johansen.jarque_bera_joint_p = jo.at("jb_joint_p").get<double>();
  b.johansen.lm_serial_p = jo.at("lm_serial_p").get<double>();
  for (std::size_t r = 0; r < b.johansen.trace_stats.size(); ++r) {
    b.johansen.trace_reject.push_back({{0.05, jo.at("trace_reject_05")[r].get<bool>()}});
    b.johansen.maxeig_reject.push_back({{0.05, jo.at("maxeig_reject_05")[r].get<bool>()}});
    const json& tp = jo.at("trace_p")[r];
    const json& mp = jo.at("maxeig_p")[r];
    b.johansen.trace_p_approx.push_back(tp.is_null() ? std::optional<double>{}
                                                     : std::optional<double>{tp.get<double>()});
    b.johansen.maxeig_p_approx.push_back(mp.is_null() ? std::optional<double>{}
                                                      : std::optional<double>{mp.get<double>()});
  }

  const json& fit = j.at("asymmetry");
  b.asymmetry.fit.names = fit.at("names").get<std::vector<std::string>>();
  const auto coefs = fit.at("coefficients").get<std::vector<double>>();
  const auto pvals = fit.at("p_values").get<std::vector<double>>();
  b.asymmetry.fit.coefficients =
      Eigen::Map<const Eigen::VectorXd>(coefs.data(), static_cast<Eigen::Index>(coefs.size()));
  b.asymmetry.fit.p_values =
      Eigen::Map<const Eigen::VectorXd>(pvals.data(), static_cast<Eigen::Index>(pvals.size()));
  b.asymmetry.fit.nobs = fit.at("nobs").get<int>();
  b.asymmetry.spec = fit.at("spec").get<std::string>() == "four_lag"
                         ? AsymmetrySpec::FourLag
                         : AsymmetrySpec::Contemporaneous;
  for (const auto& row : fit.at("battery")) {
    BatteryRow br;
    br.hypothesis = row.at("hypothesis").get<std::string>();
    br.f_stat = row.at("f").get<double>();
    br.df1 = row.at("df1").get<int>();
    br.df2 = row.at("df2").get<int>();
    br.p_value = row.at("p").get<double>();
    b.asymmetry.battery.push_back(br);
  }
  return b;
}

RunOutput run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  fs::create_directories(cfg.out_dir + "/series");

  RunOutput out;
  RunManifest& manifest = out.manifest;
  manifest.config = cfg.snapshot();

  std::string stage = "ingest";
  // Save a failed-at marker, then rethrow under the original category so
  // the CLI exit code still reflects the root cause.
  auto fail = [&](const std::exception& e) {
    manifest.failed_at = stage;
    manifest.save(cfg.out_dir + "/manifest.json");
    const std::string msg = "pipeline failed at stage '" + stage + "': " + e.what();
    if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(msg);
    if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(msg);
    throw DataError(msg);
  };

  try {
    // --- ingest + transform ---
    auto aligned = load_and_transform(cfg, &manifest);
    stage = "transform";
    const QuarterlySeries r = aligned[0];
    const QuarterlySeries g = aligned[1];
    const QuarterlySeries y = aligned[2];
    const QuarterlySeries tb3 = aligned[3];
    const QuarterlySeries m = aligned[4];
    out.results.sample_start = r.start();
    out.results.sample_end = r.end();

    // --- unit-root classification ---
    stage = "unit-root";
    for (const auto& s : aligned) {
      UnitRootRow row;
      row.variable = s.name();
      const int T = static_cast<int>(s.size());
      const int max_lags = static_cast<int>(std::floor(12.0 * std::pow(T / 100.0, 0.25)));
      const QuarterlySeries d = transform_diff(s, 1);
      row.adf_level = adf_test(s, max_lags, LagSelection::Aic);
      row.kpss_level = kpss_test(s);
      row.ers_level = ers_test(s);
      row.adf_diff = adf_test(d, max_lags, LagSelection::Aic);
      row.kpss_diff = kpss_test(d);
      row.ers_diff = ers_test(d);
      row.decision = classify_from_reports(row.adf_level, row.kpss_level, row.ers_level,
                                           row.adf_diff, row.kpss_diff, row.ers_diff);
      out.results.unit_root.push_back(row);
    }

    // --- cointegration ---
    stage = "cointegration";
    const std::vector<QuarterlySeries> endo = {r, g, y};
    const std::vector<QuarterlySeries> exog = {tb3, m};
    out.results.johansen = johansen_test(endo, cfg.lag_order, exog);
    const Eigen::VectorXd beta = out.results.johansen.beta_vectors.col(0);

    // --- shock extraction ---
    stage = "shock-extraction";
    std::string source_tag;
    std::optional<QuarterlySeries> spending_shock, revenue_shock;
    std::ostringstream diag;
    if (cfg.engine == ShockEngine::Vecm) {
      const VecmFit vecm = vecm_estimate(endo, cfg.lag_order, exog, beta);
      const QuarterlySeries u_r = vecm.equations[0].residual_series("u_r");
      const QuarterlySeries u_g = vecm.equations[1].residual_series("u_g");
      const QuarterlySeries u_y = vecm.equations[2].residual_series("u_y");
      BpRestrictions restr;
      restr.a1 = cfg.a1;
      out.results.structural = identify_structural(u_r, u_g, u_y, restr);
      spending_shock = out.results.structural->eps_G;
      revenue_shock = out.results.structural->eps_T;
      source_tag = cfg.money_label.find("ivisia") != std::string::npos ? "vecm-divisia"
                                                                       : "vecm-mzm";
      diag << "vecm lag_order=" << cfg.lag_order << " b2=" << out.results.structural->b2
           << " c1=" << out.results.structural->c1 << " c2=" << out.results.structural->c2;
      write_fred_csv(u_r, cfg.out_dir + "/series/u_r.csv");
      write_fred_csv(u_g, cfg.out_dir + "/series/u_g.csv");
      write_fred_csv(u_y, cfg.out_dir + "/series/u_y.csv");
    } else {
      const VecmDesign design = build_vecm_design(endo, cfg.lag_order, exog, beta);
      // Revenue equation first, then spending; the SVR bias replaces the
      // intercept, so the design matrix is used as-is.
      SvrShockResult rev = extract_svr_shocks(design.dependents[0], design.X, cfg.svr_search);
      SvrShockResult spe = extract_svr_shocks(design.dependents[1], design.X, cfg.svr_search);
      revenue_shock = rev.residuals.renamed("svr_rev_shock");
      spending_shock = spe.residuals.renamed("svr_spend_shock");
      out.results.svr_cv_mse = 0.5 * (rev.cv_mse + spe.cv_mse);
      source_tag = "svr";
      diag << "svr cv_mse_rev=" << rev.cv_mse << " cv_mse_spend=" << spe.cv_mse
           << " sv_rev=" << rev.model.support_vectors.size()
           << " sv_spend=" << spe.model.support_vectors.size();
      rev.model.save(cfg.out_dir + "/svr_model_revenue.json");
      spe.model.save(cfg.out_dir + "/svr_model_spending.json");
    }
    manifest.engine_diagnostics = diag.str();

    // --- cover split ---
    stage = "cover-split";
    out.results.shocks = ShockBundle::from_shocks(*spending_shock, *revenue_shock, source_tag);

    // --- dependent variable ---
    stage = "dependent-variable";
    QuarterlySeries dep = transform_diff(y, 1).renamed("d(y)");
    if (cfg.dep_var == DepVar::Cycle) {
      auto [trend, cycle] = hp_filter(y, cfg.hp_lambda);
      dep = cycle.renamed("y_cycle");
    }

    // --- asymmetry regression ---
    stage = "asymmetry";
    out.results.asymmetry = asymmetry_regression(dep, tb3, m, out.results.shocks, cfg.spec);
    hypothesis_battery(out.results.asymmetry);

    // --- emit ---
    stage = "emit";
    write_fred_csv(out.results.shocks.sgp, cfg.out_dir + "/series/SGP.csv");
    write_fred_csv(out.results.shocks.sgn, cfg.out_dir + "/series/SGN.csv");
    write_fred_csv(out.results.shocks.srp, cfg.out_dir + "/series/SRP.csv");
    write_fred_csv(out.results.shocks.srn, cfg.out_dir + "/series/SRN.csv");
    write_fred_csv(dep, cfg.out_dir + "/series/dependent.csv");
    write_results_json(out.results, cfg, cfg.out_dir + "/results.json");
    emit_table(out.results, TableKind::UnitRoot, cfg.out_dir + "/table_unit_root");
    emit_table(out.results, TableKind::Cointegration, cfg.out_dir + "/table_cointegration");
    const TableKind asym_kind = cfg.spec == AsymmetrySpec::Contemporaneous
                                    ? TableKind::Contemporaneous
                                    : TableKind::Lagged;
    const std::string asym_base = cfg.out_dir + (cfg.spec == AsymmetrySpec::Contemporaneous
                                                     ? "/table_contemporaneous"
                                                     : "/table_lagged");
    emit_table(out.results, asym_kind, asym_base);

    manifest.sample_range = out.results.sample_start.str() + ".." + out.results.sample_end.str();
    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
      if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
        manifest.output_hashes[entry.path().filename().string()] =
            hash_file(entry.path().string());
    }
    for (const auto& entry : fs::directory_iterator(cfg.out_dir + "/series"))
      manifest.output_hashes["series/" + entry.path().filename().string()] =
          hash_file(entry.path().string());
    manifest.save(cfg.out_dir + "/manifest.json");
  } catch (const std::exception& e) {
    fail(e);
  }
  return out;
}

}  // namespace fiscal
