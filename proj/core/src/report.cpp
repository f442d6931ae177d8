#include <cstdio>
#include <string>

#include <json.hpp>

#include "gravbell/errors.hpp"
#include "gravbell/harness.hpp"

namespace gravbell::harness {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ordered_json check_to_json(const CheckResult& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"failures", c.failures}};
}

CheckResult check_from_json(const ordered_json& j) {
  CheckResult c;
  c.name = j.at("name").get<std::string>();
  c.passed = j.at("passed").get<bool>();
  c.failures = j.at("failures").get<std::vector<std::string>>();
  return c;
}

ordered_json audit_to_json(const causal::AuditReport& a) {
  ordered_json j{{"audit", a.audit},
                 {"status", causal::to_string(a.status)},
                 {"failures", a.failures}};
  if (a.slack)
    j["slack"] = *a.slack;
  else
    j["slack"] = nullptr;
  j["note"] = a.note;
  return j;
}

causal::AuditStatus audit_status_from_string(const std::string& s) {
  if (s == "pass") return causal::AuditStatus::pass;
  if (s == "fail") return causal::AuditStatus::fail;
  if (s == "not_applicable") return causal::AuditStatus::not_applicable;
  throw ConfigError("unknown audit status '" + s + "'");
}

causal::AuditReport audit_from_json(const ordered_json& j) {
  causal::AuditReport a;
  a.audit = j.at("audit").get<std::string>();
  a.status = audit_status_from_string(j.at("status").get<std::string>());
  a.failures = j.at("failures").get<std::vector<std::string>>();
  if (!j.at("slack").is_null()) a.slack = j.at("slack").get<double>();
  a.note = j.at("note").get<std::string>();
  return a;
}

ordered_json settings_to_json(const bell::SettingsQuad& q) {
  return {{"a", q.a.angle},
          {"a_prime", q.a_prime.angle},
          {"b", q.b.angle},
          {"b_prime", q.b_prime.angle}};
}

bell::SettingsQuad settings_from_json(const ordered_json& j) {
  bell::SettingsQuad q;
  q.a.angle = j.at("a").get<double>();
  q.a_prime.angle = j.at("a_prime").get<double>();
  q.b.angle = j.at("b").get<double>();
  q.b_prime.angle = j.at("b_prime").get<double>();
  return q;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv-summary") return ReportFormat::csv_summary;
  throw ConfigError("unsupported report format '" + s + "' (json, csv-summary)");
}

std::string emit_report(const ExperimentReport& r, ReportFormat format) {
  if (format == ReportFormat::csv_summary) {
    std::string out = "row,pair,count,mean_product,stderr,s_value,p_value_local,verdict\n";
    for (std::size_t p = 0; p < 4; ++p) {
      out += "pair,";
      out += bell::kPairLabels[p];
      out += "," + std::to_string(r.stage3.estimate.per_pair_counts[p]);
      out += "," + sig12(r.stage3.estimate.per_pair_mean[p]);
      out += "," + sig12(r.stage3.estimate.per_pair_stderr[p]);
      out += ",,,\n";
    }
    out += "summary,,,,," + sig12(r.stage3.estimate.s_value) + "," +
           sig12(r.stage3.estimate.p_value_local) + "," +
           csv_escape(to_string(r.verdict)) + "\n";
    return out;
  }

  ordered_json j;
  j["tool"] = {{"name", r.tool_name}, {"version", r.tool_version}};
  j["provenance"] = {{"seed", r.seed}, {"config_digest", r.config_digest},
                     {"model", r.model}};
  j["stage1"] = {{"entangling_phase_rad", r.stage1.entangling_phase},
                 {"singlet_fidelity", r.stage1.singlet_fidelity},
                 {"witness_value", r.stage1.witness_value},
                 {"negativity", r.stage1.negativity},
                 {"fall_time_s", r.stage1.fall_time_s}};
  j["stage2"] = {{"singlet_fidelity", r.stage2.singlet_fidelity},
                 {"negativity", r.stage2.negativity}};
  ordered_json pairs = ordered_json::array();
  for (std::size_t p = 0; p < 4; ++p)
    pairs.push_back({{"pair", bell::kPairLabels[p]},
                     {"count", r.stage3.estimate.per_pair_counts[p]},
                     {"mean_product", r.stage3.estimate.per_pair_mean[p]},
                     {"stderr", r.stage3.estimate.per_pair_stderr[p]}});
  j["stage3"] = {
      {"settings", settings_to_json(r.stage3.settings)},
      {"trials", r.stage3.trials},
      {"detection_prob", r.stage3.detection_prob},
      {"detection_rate", r.stage3.detection_rate},
      {"exact_s_value", r.stage3.exact_s_value},
      {"exact_quantum_s_value", r.stage3.exact_quantum_s_value},
      {"estimate",
       {{"s_value", r.stage3.estimate.s_value},
        {"standard_error", r.stage3.estimate.standard_error},
        {"p_value_local", r.stage3.estimate.p_value_local},
        {"p_value_method", r.stage3.p_value_method},
        {"detected_count", r.stage3.estimate.detected_count},
        {"total_count", r.stage3.estimate.total_count},
        {"pairs", pairs}}},
  };
  ordered_json conditions = ordered_json::array();
  for (const auto& c : r.condition_checks) conditions.push_back(check_to_json(c));
  j["conditions"] = conditions;
  ordered_json audits = ordered_json::array();
  for (const auto& a : r.audit_results) audits.push_back(audit_to_json(a));
  j["audits"] = audits;
  j["thresholds"] = {{"singlet_fidelity_threshold", r.singlet_fidelity_threshold},
                     {"significance", r.significance}};
  j["verdict"] = to_string(r.verdict);
  return j.dump(2) + "\n";
}

ExperimentReport parse_report_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  ExperimentReport r;
  r.tool_name = j.at("tool").at("name").get<std::string>();
  r.tool_version = j.at("tool").at("version").get<std::string>();
  r.seed = j.at("provenance").at("seed").get<std::uint64_t>();
  r.config_digest = j.at("provenance").at("config_digest").get<std::string>();
  r.model = j.at("provenance").at("model").get<std::string>();
  const auto& s1 = j.at("stage1");
  r.stage1 = StageOneSummary{s1.at("entangling_phase_rad").get<double>(),
                             s1.at("singlet_fidelity").get<double>(),
                             s1.at("witness_value").get<double>(),
                             s1.at("negativity").get<double>(),
                             s1.at("fall_time_s").get<double>()};
  const auto& s2 = j.at("stage2");
  r.stage2 = StageTwoSummary{s2.at("singlet_fidelity").get<double>(),
                             s2.at("negativity").get<double>()};
  const auto& s3 = j.at("stage3");
  r.stage3.settings = settings_from_json(s3.at("settings"));
  r.stage3.trials = s3.at("trials").get<std::int64_t>();
  r.stage3.detection_prob = s3.at("detection_prob").get<double>();
  r.stage3.detection_rate = s3.at("detection_rate").get<double>();
  r.stage3.exact_s_value = s3.at("exact_s_value").get<double>();
  r.stage3.exact_quantum_s_value = s3.at("exact_quantum_s_value").get<double>();
  const auto& est = s3.at("estimate");
  r.stage3.estimate.s_value = est.at("s_value").get<double>();
  r.stage3.estimate.standard_error = est.at("standard_error").get<double>();
  r.stage3.estimate.p_value_local = est.at("p_value_local").get<double>();
  r.stage3.p_value_method = est.at("p_value_method").get<std::string>();
  r.stage3.estimate.detected_count = est.at("detected_count").get<std::int64_t>();
  r.stage3.estimate.total_count = est.at("total_count").get<std::int64_t>();
  const auto& pairs = est.at("pairs");
  if (pairs.size() != 4) throw ConfigError("report: expected 4 setting pairs");
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& pj = pairs.at(p);
    if (pj.at("pair").get<std::string>() != bell::kPairLabels[p])
      throw ConfigError("report: unexpected pair ordering");
    r.stage3.estimate.per_pair_counts[p] = pj.at("count").get<std::int64_t>();
    r.stage3.estimate.per_pair_mean[p] = pj.at("mean_product").get<double>();
    r.stage3.estimate.per_pair_stderr[p] = pj.at("stderr").get<double>();
  }
  for (const auto& c : j.at("conditions")) r.condition_checks.push_back(check_from_json(c));
  for (const auto& a : j.at("audits")) r.audit_results.push_back(audit_from_json(a));
  r.singlet_fidelity_threshold =
      j.at("thresholds").at("singlet_fidelity_threshold").get<double>();
  r.significance = j.at("thresholds").at("significance").get<double>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  return r;
}

bool reports_equal(const ExperimentReport& x, const ExperimentReport& y) {
  const auto est_equal = [](const bell::ChshEstimate& a, const bell::ChshEstimate& b) {
    return a.s_value == b.s_value && a.standard_error == b.standard_error &&
           a.per_pair_counts == b.per_pair_counts &&
           a.p_value_local == b.p_value_local && a.per_pair_mean == b.per_pair_mean &&
           a.per_pair_stderr == b.per_pair_stderr &&
           a.detected_count == b.detected_count && a.total_count == b.total_count;
  };
  const auto quad_equal = [](const bell::SettingsQuad& a, const bell::SettingsQuad& b) {
    return a.a.angle == b.a.angle && a.a_prime.angle == b.a_prime.angle &&
           a.b.angle == b.b.angle && a.b_prime.angle == b.b_prime.angle;
  };
  const auto checks_equal = [](const std::vector<CheckResult>& a,
                               const std::vector<CheckResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].name != b[i].name || a[i].passed != b[i].passed ||
          a[i].failures != b[i].failures)
        return false;
    return true;
  };
  const auto audits_equal = [](const std::vector<causal::AuditReport>& a,
                               const std::vector<causal::AuditReport>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].audit != b[i].audit || a[i].status != b[i].status ||
          a[i].failures != b[i].failures || a[i].slack != b[i].slack ||
          a[i].note != b[i].note)
        return false;
    return true;
  };
  return x.tool_name == y.tool_name && x.tool_version == y.tool_version &&
         x.seed == y.seed && x.config_digest == y.config_digest &&
         x.model == y.model &&
         x.stage1.entangling_phase == y.stage1.entangling_phase &&
         x.stage1.singlet_fidelity == y.stage1.singlet_fidelity &&
         x.stage1.witness_value == y.stage1.witness_value &&
         x.stage1.negativity == y.stage1.negativity &&
         x.stage1.fall_time_s == y.stage1.fall_time_s &&
         x.stage2.singlet_fidelity == y.stage2.singlet_fidelity &&
         x.stage2.negativity == y.stage2.negativity &&
         quad_equal(x.stage3.settings, y.stage3.settings) &&
         x.stage3.trials == y.stage3.trials &&
         x.stage3.detection_prob == y.stage3.detection_prob &&
         x.stage3.detection_rate == y.stage3.detection_rate &&
         x.stage3.exact_s_value == y.stage3.exact_s_value &&
         x.stage3.exact_quantum_s_value == y.stage3.exact_quantum_s_value &&
         est_equal(x.stage3.estimate, y.stage3.estimate) &&
         x.stage3.p_value_method == y.stage3.p_value_method &&
         checks_equal(x.condition_checks, y.condition_checks) &&
         audits_equal(x.audit_results, y.audit_results) &&
         x.singlet_fidelity_threshold == y.singlet_fidelity_threshold &&
         x.significance == y.significance && x.verdict == y.verdict;
}

}  // namespace gravbell::harness
