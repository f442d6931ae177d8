#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gravbell::causal {

/// Labeled events of one experimental run in 1+1 Minkowski coordinates
/// with c = 1.
enum class EventLabel {
  source,
  choice_1,
  choice_2,
  measure_1,
  measure_2,
  record_1,
  record_2,
};

std::string to_string(EventLabel label);

struct Event {
  double t = 0.0;
  double x = 0.0;
};

/// source, choices and measurements are required; records are optional
/// unless the collapse audit is requested. At most one event per label.
struct ExperimentSchedule {
  std::map<EventLabel, Event> events;

  void validate() const;
  bool has(EventLabel label) const { return events.count(label) > 0; }
  const Event& at(EventLabel label) const;
};

enum class IntervalClass { spacelike, timelike, lightlike };

std::string to_string(IntervalClass c);

/// Sign of (dt)^2 - (dx)^2; magnitudes below 1e-12 classify lightlike.
/// Coincident events are lightlike and therefore never spacelike.
IntervalClass interval_class(const Event& e1, const Event& e2);

enum class AuditStatus { pass, fail, not_applicable };

std::string to_string(AuditStatus s);

struct AuditReport {
  std::string audit;
  AuditStatus status = AuditStatus::not_applicable;
  std::vector<std::string> failures;
  /// Collapse audit only: the largest delay applicable to either record
  /// that keeps the pair spacelike, |dx| - |dt| (negative when failing).
  std::optional<double> slack;
  std::string note;
};

/// Locality: the two measurements, and each wing's choice against the
/// other wing's measurement, are pairwise spacelike separated.
AuditReport audit_locality(const ExperimentSchedule& s);

/// Collapse locality: the two record events are spacelike separated.
/// Not applicable when the schedule carries no record events.
AuditReport audit_collapse_locality(const ExperimentSchedule& s);

/// Freedom of choice: each choice event is spacelike separated from the
/// source emission. This source-relative criterion is one defensible
/// formalization; the report notes it explicitly.
AuditReport audit_freedom_of_choice(const ExperimentSchedule& s);

}  // namespace gravbell::causal
