#include "gravbell/causal.hpp"

#include <cmath>

#include "gravbell/errors.hpp"

namespace gravbell::causal {

std::string to_string(EventLabel label) {
  switch (label) {
    case EventLabel::source: return "source";
    case EventLabel::choice_1: return "choice_1";
    case EventLabel::choice_2: return "choice_2";
    case EventLabel::measure_1: return "measure_1";
    case EventLabel::measure_2: return "measure_2";
    case EventLabel::record_1: return "record_1";
    case EventLabel::record_2: return "record_2";
  }
  return "unknown";
}

std::string to_string(IntervalClass c) {
  switch (c) {
    case IntervalClass::spacelike: return "spacelike";
    case IntervalClass::timelike: return "timelike";
    case IntervalClass::lightlike: return "lightlike";
  }
  return "unknown";
}

std::string to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "pass";
    case AuditStatus::fail: return "fail";
    case AuditStatus::not_applicable: return "not_applicable";
  }
  return "unknown";
}

void ExperimentSchedule::validate() const {
  for (const EventLabel required :
       {EventLabel::source, EventLabel::choice_1, EventLabel::choice_2,
        EventLabel::measure_1, EventLabel::measure_2})
    if (!has(required))
      throw ConfigError("schedule: missing required event '" + to_string(required) + "'");
  for (const auto& [label, ev] : events)
    if (!std::isfinite(ev.t) || !std::isfinite(ev.x))
      throw ConfigError("schedule: non-finite coordinates for '" + to_string(label) + "'");
}

const Event& ExperimentSchedule::at(EventLabel label) const {
  const auto it = events.find(label);
  if (it == events.end())
    throw ConfigError("schedule: missing event '" + to_string(label) + "'");
  return it->second;
}

IntervalClass interval_class(const Event& e1, const Event& e2) {
  const double dt = e1.t - e2.t;
  const double dx = e1.x - e2.x;
  const double q = dt * dt - dx * dx;
  if (std::abs(q) <= 1e-12) return IntervalClass::lightlike;
  return q > 0.0 ? IntervalClass::timelike : IntervalClass::spacelike;
}

namespace {

void require_spacelike(const ExperimentSchedule& s, EventLabel l1, EventLabel l2,
                       AuditReport& report) {
  const IntervalClass c = interval_class(s.at(l1), s.at(l2));
  if (c != IntervalClass::spacelike)
    report.failures.push_back("(" + to_string(l1) + ", " + to_string(l2) + ") is " +
                              to_string(c));
}

}  // namespace

AuditReport audit_locality(const ExperimentSchedule& s) {
  s.validate();
  AuditReport report{"locality", AuditStatus::pass, {}, std::nullopt, {}};
  require_spacelike(s, EventLabel::measure_1, EventLabel::measure_2, report);
  require_spacelike(s, EventLabel::choice_1, EventLabel::measure_2, report);
  require_spacelike(s, EventLabel::choice_2, EventLabel::measure_1, report);
  if (!report.failures.empty()) report.status = AuditStatus::fail;
  return report;
}

AuditReport audit_collapse_locality(const ExperimentSchedule& s) {
  s.validate();
  AuditReport report{"collapse_locality", AuditStatus::pass, {}, std::nullopt, {}};
  if (!s.has(EventLabel::record_1) || !s.has(EventLabel::record_2)) {
    report.status = AuditStatus::not_applicable;
    report.note = "schedule carries no record events";
    return report;
  }
  const Event& r1 = s.at(EventLabel::record_1);
  const Event& r2 = s.at(EventLabel::record_2);
  require_spacelike(s, EventLabel::record_1, EventLabel::record_2, report);
  if (!report.failures.empty()) report.status = AuditStatus::fail;
  report.slack = std::abs(r1.x - r2.x) - std::abs(r1.t - r2.t);
  return report;
}

AuditReport audit_freedom_of_choice(const ExperimentSchedule& s) {
  s.validate();
  AuditReport report{"freedom_of_choice", AuditStatus::pass, {}, std::nullopt,
                     "criterion: each choice spacelike from the source emission"};
  require_spacelike(s, EventLabel::choice_1, EventLabel::source, report);
  require_spacelike(s, EventLabel::choice_2, EventLabel::source, report);
  if (!report.failures.empty()) report.status = AuditStatus::fail;
  return report;
}

}  // namespace gravbell::causal
