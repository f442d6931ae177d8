#include <cmath>
#include <numbers>

#include <doctest.h>

#include "gravbell/errors.hpp"
#include "gravbell/harness.hpp"
#include "test_support.hpp"

using namespace gravbell;
using harness::AuditKind;
using harness::Model;
using harness::RunConfig;
using harness::Verdict;

namespace {

RunConfig small_run(Model model) {
  RunConfig cfg = RunConfig::defaults();
  cfg.trials = 40'000;
  cfg.seed = 2024;
  cfg.model = model;
  return cfg;
}

causal::ExperimentSchedule timelike_schedule() {
  causal::ExperimentSchedule s = RunConfig::canonical_schedule();
  s.events[causal::EventLabel::measure_2] = {30.0, 10.0};
  return s;
}

}  // namespace

TEST_CASE("condition 4") {
  RunConfig cfg = RunConfig::defaults();
  CHECK(harness::check_condition_4(cfg).passed);

  SUBCASE("crossed wiring fails") {
    cfg.wing1_target = "photon_2";
    cfg.wing2_target = "photon_1";
    const CheckResult r = harness::check_condition_4(cfg);
    CHECK_FALSE(r.passed);
    CHECK(r.failures.size() == 2);
  }
  SUBCASE("measuring a spin degree of freedom fails") {
    cfg.wing1_target = "particle_1";
    const CheckResult r = harness::check_condition_4(cfg);
    CHECK_FALSE(r.passed);
    CHECK(r.failures[0].find("non-photon") != std::string::npos);
  }
}

TEST_CASE("run_experiment under the three models") {
  SUBCASE("quantum model excludes local explanations") {
    const auto report = harness::run_experiment(small_run(Model::quantum));
    CHECK(report.verdict == Verdict::quantum_consistent_local_excluded);
    CHECK(report.stage1.singlet_fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.stage2.singlet_fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(report.stage3.exact_s_value) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
    CHECK(std::abs(std::abs(report.stage3.estimate.s_value) - 2.0 * std::sqrt(2.0)) <
          3.0 * report.stage3.estimate.standard_error);
    for (const auto& c : report.condition_checks) CHECK(c.passed);
    for (const auto& a : report.audit_results)
      CHECK(a.status == causal::AuditStatus::pass);
  }
  SUBCASE("best-fit local adversary cannot exceed the bound") {
    const auto report = harness::run_experiment(small_run(Model::local_lhv));
    CHECK(report.verdict == Verdict::local_not_excluded);
    CHECK(std::abs(report.stage3.exact_s_value) <= 2.0 + 1e-9);
    CHECK(std::abs(report.stage3.estimate.s_value) <=
          2.0 + 3.0 * report.stage3.estimate.standard_error);
  }
  SUBCASE("setting-aware sampler fakes the violation but fails the audit") {
    RunConfig cfg = small_run(Model::setting_aware_lhv);
    cfg.schedule = timelike_schedule();
    const auto report = harness::run_experiment(cfg);
    CHECK(report.verdict == Verdict::audits_failed);
    CHECK(std::abs(std::abs(report.stage3.estimate.s_value) - 2.0 * std::sqrt(2.0)) <
          3.0 * report.stage3.estimate.standard_error);
  }
  SUBCASE("violated condition dominates the verdict") {
    RunConfig cfg = small_run(Model::quantum);
    cfg.interactions.couplings.push_back(
        {"particle_1", "particle_2", CouplingKind::electromagnetic, 1});
    const auto report = harness::run_experiment(cfg);
    CHECK(report.verdict == Verdict::conditions_violated);
  }
  SUBCASE("low fidelity blocks the exclusion claim") {
    RunConfig cfg = small_run(Model::quantum);
    cfg.bmv_config.dephasing_rate_hz = 0.2;  // strong decoherence during the drop
    const auto report = harness::run_experiment(cfg);
    CHECK(report.stage2.singlet_fidelity < cfg.singlet_fidelity_threshold);
    CHECK(report.verdict == Verdict::local_not_excluded);
  }
}

TEST_CASE("verdict is re-derivable from the report fields") {
  for (const Model model : {Model::quantum, Model::local_lhv, Model::setting_aware_lhv}) {
    RunConfig cfg = small_run(model);
    cfg.trials = 10'000;
    if (model == Model::setting_aware_lhv) cfg.schedule = timelike_schedule();
    const auto report = harness::run_experiment(cfg);
    CHECK(harness::derive_verdict(report.condition_checks, report.audit_results,
                                  report.stage2.singlet_fidelity,
                                  report.singlet_fidelity_threshold,
                                  report.stage3.estimate.p_value_local,
                                  report.significance) == report.verdict);
  }
}

TEST_CASE("determinism across workers and repeats") {
  RunConfig cfg = small_run(Model::quantum);
  cfg.trials = 30'000;
  const std::string reference =
      harness::emit_report(harness::run_experiment(cfg, 1), harness::ReportFormat::json);
  for (const int workers : {1, 2, 8}) {
    const std::string other =
        harness::emit_report(harness::run_experiment(cfg, workers),
                             harness::ReportFormat::json);
    CHECK(other == reference);
  }
}

TEST_CASE("report serialization") {
  RunConfig cfg = small_run(Model::quantum);
  cfg.trials = 5'000;
  cfg.detection_prob = 0.75;
  const auto report = harness::run_experiment(cfg);

  SUBCASE("json round trip is exact") {
    const std::string text = harness::emit_report(report, harness::ReportFormat::json);
    const auto back = harness::parse_report_json(text);
    CHECK(harness::reports_equal(report, back));
    CHECK(harness::emit_report(back, harness::ReportFormat::json) == text);
  }
  SUBCASE("csv summary has exactly 5 data rows") {
    const std::string csv =
        harness::emit_report(report, harness::ReportFormat::csv_summary);
    int rows = 0;
    for (const char c : csv) rows += c == '\n' ? 1 : 0;
    CHECK(rows == 6);  // header + 4 pairs + summary
    CHECK(csv.find("summary,") != std::string::npos);
    CHECK(csv.find("a_bprime") != std::string::npos);
  }
  SUBCASE("detection rate is reported") {
    CHECK(report.stage3.detection_rate ==
          doctest::Approx(0.75).epsilon(0.02));
  }
  SUBCASE("unsupported format is rejected") {
    CHECK_THROWS_AS(harness::parse_format("yaml"), ConfigError);
  }
}

TEST_CASE("config parsing") {
  SUBCASE("round trip through canonical json") {
    const RunConfig cfg = RunConfig::defaults();
    const RunConfig back = RunConfig::from_json_text(cfg.to_canonical_json());
    CHECK(back.to_canonical_json() == cfg.to_canonical_json());
    CHECK(back.digest() == cfg.digest());
  }
  SUBCASE("explicit settings quad") {
    const std::string text = R"({
      "settings": {"a": 0.0, "a_prime": 1.5707963267948966,
                   "b": 0.7853981633974483, "b_prime": 2.356194490192345},
      "trials": 1000, "seed": 5, "model": "local_lhv"
    })";
    const RunConfig cfg = RunConfig::from_json_text(text);
    REQUIRE(cfg.settings.has_value());
    CHECK(cfg.settings->b.angle == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    CHECK(cfg.model == Model::local_lhv);
    CHECK(cfg.trials == 1000);
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"trails": 10})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"bmv": {"mass_kg": 1}})"), ConfigError);
  }
  SUBCASE("invalid physics rejected") {
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"bmv": {"mass1_kg": -1}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"detection_prob": 1.5})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"trials": 0})"), ConfigError);
  }
  SUBCASE("malformed json rejected") {
    CHECK_THROWS_AS(RunConfig::from_json_text("not json"), ConfigError);
  }
}

TEST_CASE("error propagation carries the stage") {
  SUBCASE("insufficient data at stage 3") {
    RunConfig cfg = small_run(Model::quantum);
    cfg.trials = 50;
    cfg.detection_prob = 0.0;
    try {
      harness::run_experiment(cfg);
      FAIL("expected StageError");
    } catch (const harness::StageError& e) {
      CHECK(e.stage == "stage3_bell");
      CHECK(e.kind == harness::ErrorKind::insufficient_data);
    }
  }
  SUBCASE("symmetric geometry cannot be tuned") {
    RunConfig cfg = small_run(Model::quantum);
    cfg.bmv_config.branch_distance_m = {250e-6, 250e-6, 250e-6, 250e-6};
    try {
      harness::run_experiment(cfg);
      FAIL("expected StageError");
    } catch (const harness::StageError& e) {
      CHECK(e.stage == "stage1_bmv");
      CHECK(e.kind == harness::ErrorKind::invalid_config);
    }
  }
}

TEST_CASE("exact sweep helper matches the depolarizing law") {
  RunConfig cfg = RunConfig::defaults();
  cfg.settings = bell::SettingsQuad{{0.0},
                                    {std::numbers::pi / 2.0},
                                    {std::numbers::pi / 4.0},
                                    {3.0 * std::numbers::pi / 4.0}};
  cfg.transfer_config.mode = transfer::Mode::depolarizing;
  double previous = 10.0;
  for (int i = 0; i < 10; ++i) {
    const double p = i / 9.0;
    cfg.transfer_config.depolarizing_probability_side1 = p;
    cfg.transfer_config.depolarizing_probability_side2 = p;
    const auto exact = harness::run_exact(cfg);
    const double s = std::abs(exact.exact_s_value);
    CHECK(s == doctest::Approx(2.0 * std::sqrt(2.0) * (1.0 - p) * (1.0 - p)).epsilon(1e-9));
    CHECK(s <= previous + 1e-12);
    previous = s;
  }
}
