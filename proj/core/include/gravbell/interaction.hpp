#pragma once

#include <string>
#include <vector>

namespace gravbell {

enum class SystemKind { particle, photon, environment };
enum class CouplingKind { gravity, electromagnetic, other };

struct SystemNode {
  std::string name;
  SystemKind kind;
};

/// Undirected interaction between two declared systems, active during
/// one experiment stage (1 = entangling drop, 2 = state transfer,
/// 3 = distant measurements).
struct Coupling {
  std::string a;
  std::string b;
  CouplingKind kind;
  int stage;
};

/// The declared interaction structure of one experimental run. The
/// condition checks are graph audits over this declaration; they do not
/// (and cannot) verify the physical apparatus, only the stated wiring.
struct InteractionDeclaration {
  std::vector<SystemNode> systems;
  std::vector<Coupling> couplings;

  /// Throws ConfigError unless every coupling references a declared
  /// system and stages are in {1, 2, 3}.
  void validate() const;

  bool has_system(const std::string& name) const;
  SystemKind kind_of(const std::string& name) const;

  /// particle_1/2 and photon_1/2 with a single stage-1 gravity coupling
  /// between the particles and per-side electromagnetic transfer
  /// couplings at stage 2.
  static InteractionDeclaration standard();
};

std::string to_string(CouplingKind kind);
std::string describe(const Coupling& c);

/// Outcome of one machine-checkable condition. Failures are data, not
/// exceptions: a failed check flows into the experiment verdict.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> failures;
};

}  // namespace gravbell
