// Command-line front end: run the full pipeline, audit a schedule, fit a
// correlation table to the local polytope, or sweep one config field.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gravbell/errors.hpp"
#include "gravbell/harness.hpp"
#include "gravbell/version.hpp"

namespace {

using gravbell::ConfigError;
using ordered_json = nlohmann::ordered_json;
namespace harness = gravbell::harness;

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 1;
constexpr int kExitInsufficientData = 2;
constexpr int kExitInternal = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Write-then-rename so a partial report is never observable at the
// target path.
void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file '" + tmp.string() + "'");
    out << content;
    if (!out) throw ConfigError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

void deliver(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    write_atomic(out_path, content);
}

std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> model;
  std::optional<std::int64_t> trials;
  int workers = 1;
};

harness::RunConfig load_run_config(const CommonOpts& opts) {
  harness::RunConfig cfg = opts.config_path.empty()
                               ? harness::RunConfig::defaults()
                               : harness::RunConfig::from_json_file(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.model) cfg.model = harness::model_from_string(*opts.model);
  if (opts.trials) cfg.trials = *opts.trials;
  cfg.validate();
  return cfg;
}

int cmd_run(const CommonOpts& opts) {
  const harness::RunConfig cfg = load_run_config(opts);
  const harness::ReportFormat format = harness::parse_format(opts.format);
  const harness::ExperimentReport report = harness::run_experiment(cfg, opts.workers);
  deliver(harness::emit_report(report, format), opts.out_path);
  return kExitOk;
}

int cmd_audit(const CommonOpts& opts) {
  if (opts.format != "json") throw ConfigError("audit supports --format json only");
  const harness::RunConfig cfg = load_run_config(opts);
  std::vector<harness::AuditKind> kinds = cfg.audits;
  if (kinds.empty())
    kinds = {harness::AuditKind::locality, harness::AuditKind::collapse_locality,
             harness::AuditKind::freedom_of_choice};

  ordered_json out;
  out["tool"] = {{"name", gravbell::kToolName}, {"version", gravbell::kToolVersion}};
  ordered_json audits = ordered_json::array();
  bool all_pass = true;
  for (const harness::AuditKind kind : kinds) {
    gravbell::causal::AuditReport report;
    switch (kind) {
      case harness::AuditKind::locality:
        report = gravbell::causal::audit_locality(cfg.schedule);
        break;
      case harness::AuditKind::collapse_locality:
        report = gravbell::causal::audit_collapse_locality(cfg.schedule);
        break;
      case harness::AuditKind::freedom_of_choice:
        report = gravbell::causal::audit_freedom_of_choice(cfg.schedule);
        break;
    }
    all_pass = all_pass && report.status == gravbell::causal::AuditStatus::pass;
    ordered_json aj{{"audit", report.audit},
                    {"status", gravbell::causal::to_string(report.status)},
                    {"failures", report.failures}};
    if (report.slack)
      aj["slack"] = *report.slack;
    else
      aj["slack"] = nullptr;
    aj["note"] = report.note;
    audits.push_back(std::move(aj));
  }
  out["audits"] = audits;
  out["all_pass"] = all_pass;
  deliver(out.dump(2) + "\n", opts.out_path);
  return kExitOk;
}

int cmd_lhv_fit(const CommonOpts& opts) {
  if (opts.format != "json") throw ConfigError("lhv-fit supports --format json only");
  if (opts.config_path.empty())
    throw ConfigError("lhv-fit requires --config <correlation table json>");
  ordered_json j;
  try {
    j = ordered_json::parse(slurp(opts.config_path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("table file is not valid JSON: ") + e.what());
  }
  const auto& e = j.contains("e") ? j.at("e") : j;
  gravbell::lhv::CorrelationTable table;
  for (std::size_t p = 0; p < 4; ++p) {
    const std::string key = gravbell::bell::kPairLabels[p];
    if (!e.contains(key)) throw ConfigError("table file is missing entry '" + key + "'");
    table.e[p] = e.at(key).get<double>();
  }
  table.validate();

  const gravbell::lhv::FitResult fit = gravbell::lhv::best_fit(table);
  const gravbell::lhv::CorrelationTable achieved = gravbell::lhv::table_of(fit.mixture);

  ordered_json out;
  out["tool"] = {{"name", gravbell::kToolName}, {"version", gravbell::kToolVersion}};
  out["residual"] = fit.residual;
  out["weights"] = fit.mixture.weights;
  ordered_json fitted = ordered_json::object();
  for (std::size_t p = 0; p < 4; ++p)
    fitted[gravbell::bell::kPairLabels[p]] = achieved.e[p];
  out["fitted_table"] = fitted;
  out["fitted_chsh"] = achieved.chsh();
  out["target_chsh"] = table.chsh();
  deliver(out.dump(2) + "\n", opts.out_path);
  return kExitOk;
}

struct SweepSpec {
  std::string field;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
};

SweepSpec parse_sweep_spec(const std::string& config_path) {
  ordered_json j;
  try {
    j = ordered_json::parse(slurp(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.contains("sweep"))
    throw ConfigError("sweep requires a \"sweep\" block in the config");
  const auto& s = j.at("sweep");
  SweepSpec spec;
  spec.field = s.at("field").get<std::string>();
  spec.from = s.at("from").get<double>();
  spec.to = s.at("to").get<double>();
  spec.steps = s.at("steps").get<int>();
  if (spec.steps < 1) throw ConfigError("sweep.steps must be at least 1");
  return spec;
}

void apply_sweep_value(harness::RunConfig& cfg, const std::string& field, double v) {
  if (field == "transfer.depolarizing_probability") {
    cfg.transfer_config.mode = gravbell::transfer::Mode::depolarizing;
    cfg.transfer_config.depolarizing_probability_side1 = v;
    cfg.transfer_config.depolarizing_probability_side2 = v;
  } else if (field == "transfer.depolarizing_probability_side1") {
    cfg.transfer_config.mode = gravbell::transfer::Mode::depolarizing;
    cfg.transfer_config.depolarizing_probability_side1 = v;
  } else if (field == "transfer.depolarizing_probability_side2") {
    cfg.transfer_config.mode = gravbell::transfer::Mode::depolarizing;
    cfg.transfer_config.depolarizing_probability_side2 = v;
  } else if (field == "bmv.dephasing_rate_hz") {
    cfg.bmv_config.dephasing_rate_hz = v;
  } else if (field == "bmv.fall_time_s") {
    cfg.bmv_config.fall_time_s = v;
    cfg.tune_fall_time = false;
  } else {
    throw ConfigError("unsupported sweep field '" + field + "'");
  }
}

int cmd_sweep(const CommonOpts& opts) {
  if (opts.config_path.empty())
    throw ConfigError("sweep requires --config with a \"sweep\" block");
  const SweepSpec spec = parse_sweep_spec(opts.config_path);
  const harness::RunConfig base = load_run_config(opts);

  std::string csv =
      "field,value,exact_abs_s_value,stage1_singlet_fidelity,stage2_singlet_fidelity,"
      "stage2_negativity\n";
  for (int i = 0; i < spec.steps; ++i) {
    const double v = spec.steps == 1
                         ? spec.from
                         : spec.from + (spec.to - spec.from) * i / (spec.steps - 1);
    harness::RunConfig cfg = base;
    apply_sweep_value(cfg, spec.field, v);
    cfg.validate();
    const harness::ExactRun run = harness::run_exact(cfg);
    csv += spec.field + "," + sig12(v) + "," + sig12(std::abs(run.exact_s_value)) +
           "," + sig12(run.stage1.singlet_fidelity) + "," +
           sig12(run.stage2.singlet_fidelity) + "," + sig12(run.stage2.negativity) +
           "\n";
  }
  deliver(csv, opts.out_path);
  return kExitOk;
}

int exit_code_for(const harness::ErrorKind kind) {
  switch (kind) {
    case harness::ErrorKind::invalid_config: return kExitInvalidConfig;
    case harness::ErrorKind::insufficient_data: return kExitInsufficientData;
    case harness::ErrorKind::internal: return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analysis toolkit for gravitationally induced "
               "entanglement certified by a spacelike-separated CHSH test"};
  app.set_version_flag("--version", std::string(gravbell::kToolVersion));
  app.require_subcommand(1);

  CommonOpts opts;
  const auto add_common = [&opts](CLI::App* sub, bool with_run_flags) {
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--out", opts.out_path, "Output path (stdout when omitted)");
    sub->add_option("--format", opts.format, "json or csv-summary");
    if (with_run_flags) {
      sub->add_option("--seed", opts.seed, "Override config seed");
      sub->add_option("--model", opts.model, "quantum | local_lhv | setting_aware_lhv");
      sub->add_option("--trials", opts.trials, "Override trial count");
      sub->add_option("--workers", opts.workers, "Trial workers (default 1)")
          ->check(CLI::PositiveNumber);
    }
  };

  CLI::App* run = app.add_subcommand("run", "Run the full three-stage pipeline");
  add_common(run, true);
  CLI::App* audit = app.add_subcommand("audit", "Audit the configured schedule only");
  add_common(audit, false);
  CLI::App* fit = app.add_subcommand(
      "lhv-fit", "Minimax-fit a correlation table to the local polytope");
  add_common(fit, false);
  CLI::App* sweep = app.add_subcommand("sweep", "Grid over one config field, CSV output");
  add_common(sweep, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (run->parsed()) return cmd_run(opts);
    if (audit->parsed()) return cmd_audit(opts);
    if (fit->parsed()) return cmd_lhv_fit(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    return kExitInvalidConfig;
  } catch (const harness::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind);
  } catch (const gravbell::InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficientData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
