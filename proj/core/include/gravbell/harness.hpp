#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gravbell/bell.hpp"
#include "gravbell/bmv.hpp"
#include "gravbell/causal.hpp"
#include "gravbell/interaction.hpp"
#include "gravbell/lhv.hpp"
#include "gravbell/transfer.hpp"

namespace gravbell::harness {

enum class Model { quantum, local_lhv, setting_aware_lhv };
enum class AuditKind { locality, collapse_locality, freedom_of_choice };

std::string to_string(Model m);
Model model_from_string(const std::string& s);
std::string to_string(AuditKind k);
AuditKind audit_from_string(const std::string& s);

/// Full description of one experiment run. Everything that affects the
/// results lives here; runtime execution details (worker count, output
/// path) deliberately do not, so reports depend only on (config, seed).
struct RunConfig {
  bmv::BmvConfig bmv_config;
  bool tune_fall_time = false;
  transfer::TransferConfig transfer_config;
  std::optional<bell::SettingsQuad> settings;  // nullopt = optimize
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  Model model = Model::quantum;
  double detection_prob = 1.0;
  std::string wing1_target = "photon_1";
  std::string wing2_target = "photon_2";
  InteractionDeclaration interactions = InteractionDeclaration::standard();
  causal::ExperimentSchedule schedule;
  std::vector<AuditKind> audits;
  double singlet_fidelity_threshold = 0.99;
  double significance = 1e-6;

  void validate() const;

  /// Tuned demo configuration: singlet-producing geometry, ideal
  /// transfer, optimized settings, all three audits on the canonical
  /// spacelike schedule.
  static RunConfig defaults();

  /// Wings at x = -/+10, measurements at t = 5, choices at t = 4.9,
  /// source at the origin, records co-located with the measurements.
  static causal::ExperimentSchedule canonical_schedule();

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);

  /// Normalized full-field serialization; two configs with equal
  /// effective content produce identical text.
  std::string to_canonical_json() const;
  /// fnv1a64 hex digest of to_canonical_json(), recorded in reports.
  std::string digest() const;
};

enum class Verdict {
  quantum_consistent_local_excluded,
  local_not_excluded,
  conditions_violated,
  audits_failed,
};

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct StageOneSummary {
  double entangling_phase = 0.0;
  double singlet_fidelity = 0.0;
  double witness_value = 0.0;
  double negativity = 0.0;
  double fall_time_s = 0.0;
};

struct StageTwoSummary {
  double singlet_fidelity = 0.0;
  double negativity = 0.0;
};

struct StageThreeSummary {
  bell::SettingsQuad settings;
  std::int64_t trials = 0;
  double detection_prob = 1.0;
  double detection_rate = 0.0;
  double exact_s_value = 0.0;          // analytic CHSH of the sampled model
  double exact_quantum_s_value = 0.0;  // analytic CHSH of the photon state
  bell::ChshEstimate estimate;
  std::string p_value_method;
};

struct ExperimentReport {
  std::string tool_name;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string model;
  StageOneSummary stage1;
  StageTwoSummary stage2;
  StageThreeSummary stage3;
  std::vector<CheckResult> condition_checks;
  std::vector<causal::AuditReport> audit_results;
  double singlet_fidelity_threshold = 0.99;
  double significance = 1e-6;
  Verdict verdict = Verdict::local_not_excluded;
};

/// Condition 4: wing i's measurement is wired to photon i's qubit.
CheckResult check_condition_4(const RunConfig& cfg);

/// Verdict lattice: conditions_violated dominates audits_failed
/// dominates local_not_excluded dominates the exclusion claim. A
/// requested audit that is not applicable blocks the exclusion claim;
/// the report never asserts more than it checked.
Verdict derive_verdict(const std::vector<CheckResult>& conditions,
                       const std::vector<causal::AuditReport>& audits,
                       double stage2_singlet_fidelity, double fidelity_threshold,
                       double p_value_local, double significance);

/// Trial-free evaluation (stages 1-2 plus the analytic CHSH value),
/// used by parameter sweeps.
struct ExactRun {
  StageOneSummary stage1;
  StageTwoSummary stage2;
  bell::SettingsQuad settings;
  double exact_s_value = 0.0;
};
ExactRun run_exact(const RunConfig& cfg);

/// The full pipeline: entangling drop, transfer, (optional) setting
/// optimization, Monte Carlo trials under the configured outcome model,
/// condition checks, causal audits and verdict. Identical (config,
/// seed) produce identical reports for any worker count.
ExperimentReport run_experiment(const RunConfig& cfg, int workers = 1);

enum class ReportFormat { json, csv_summary };
ReportFormat parse_format(const std::string& s);  // throws ConfigError

/// JSON: the full structured report (keys documented in the README),
/// byte-deterministic. CSV summary: one row per setting pair plus one
/// summary row, numbers with 12 significant digits.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

ExperimentReport parse_report_json(const std::string& text);
bool reports_equal(const ExperimentReport& x, const ExperimentReport& y);

enum class ErrorKind { invalid_config, insufficient_data, internal };

/// Component error re-thrown with its pipeline stage attached.
struct StageError : std::runtime_error {
  StageError(std::string stage_name, ErrorKind error_kind, const std::string& msg)
      : std::runtime_error(stage_name + ": " + msg),
        stage(std::move(stage_name)),
        kind(error_kind) {}
  std::string stage;
  ErrorKind kind;
};

}  // namespace gravbell::harness
