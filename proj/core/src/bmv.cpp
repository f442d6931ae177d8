#include "gravbell/bmv.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gravbell/errors.hpp"

namespace gravbell::bmv {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string("BmvConfig: ") + what + " must be strictly positive");
}

}  // namespace

void BmvConfig::validate() const {
  require_positive(mass1_kg, "mass1_kg");
  require_positive(mass2_kg, "mass2_kg");
  require_positive(branch_distance_m.ll, "branch_distance_m.ll");
  require_positive(branch_distance_m.lr, "branch_distance_m.lr");
  require_positive(branch_distance_m.rl, "branch_distance_m.rl");
  require_positive(branch_distance_m.rr, "branch_distance_m.rr");
  require_positive(gravitational_constant, "gravitational_constant");
  require_positive(reduced_planck, "reduced_planck");
  if (!(fall_time_s >= 0.0) || !std::isfinite(fall_time_s))
    throw ConfigError("BmvConfig: fall_time_s must be non-negative");
  if (!(dephasing_rate_hz >= 0.0) || !std::isfinite(dephasing_rate_hz))
    throw ConfigError("BmvConfig: dephasing_rate_hz must be non-negative");
}

BranchPhases branch_phases(const BmvConfig& cfg) {
  cfg.validate();
  const double k = cfg.gravitational_constant * cfg.mass1_kg * cfg.mass2_kg *
                   cfg.fall_time_s / cfg.reduced_planck;
  return {k / cfg.branch_distance_m.ll, k / cfg.branch_distance_m.lr,
          k / cfg.branch_distance_m.rl, k / cfg.branch_distance_m.rr};
}

double entangling_phase(const BmvConfig& cfg) {
  const BranchPhases p = branch_phases(cfg);
  return p.lr + p.rl - p.ll - p.rr;
}

BmvConfig tune_for_singlet(const BmvConfig& cfg) {
  cfg.validate();
  const BranchDistances& d = cfg.branch_distance_m;
  const double inv_sum = 1.0 / d.lr + 1.0 / d.rl - 1.0 / d.ll - 1.0 / d.rr;
  const double rate = cfg.gravitational_constant * cfg.mass1_kg * cfg.mass2_kg *
                      inv_sum / cfg.reduced_planck;  // d(phase)/d(tau)
  if (std::abs(rate) < 1e-300)
    throw NoSolutionError(
        "tune_for_singlet: symmetric branch geometry has zero entangling phase rate");
  BmvConfig tuned = cfg;
  tuned.fall_time_s = std::numbers::pi / std::abs(rate);
  return tuned;
}

namespace {

// Local unitaries mapping the ideal entangling-phase-pi output onto the
// singlet. On qubit 1 a phase correction; on qubit 2 the same followed
// by a Hadamard and i sigma_y. Derivation: after factoring out the
// branch phases relative to LL the state is
//   (|00> + |01> + |10> + e^{-i dphi} |11>)/2,
// which at dphi = pi equals (|0>|+> + |1>|->)/sqrt(2); H then i sigma_y
// on qubit 2 sends this to (|01> - |10>)/sqrt(2).
CMatrix corrective_unitary(const BranchPhases& p) {
  const Complex i{0.0, 1.0};
  CMatrix u1 = CMatrix::identity(2);
  u1.at(1, 1) = std::exp(-i * (p.rl - p.ll));

  const double s = 1.0 / std::sqrt(2.0);
  CMatrix u2(2);  // (i sigma_y) H diag(1, e^{-i(phi_LR - phi_LL)})
  const Complex ph = std::exp(-i * (p.lr - p.ll));
  u2.at(0, 0) = -s;
  u2.at(0, 1) = s * ph;
  u2.at(1, 0) = s;
  u2.at(1, 1) = s * ph;
  return kron(u1, u2);
}

}  // namespace

StageOneOutcome evolve(const BmvConfig& cfg) {
  const BranchPhases phases = branch_phases(cfg);
  const Complex i{0.0, 1.0};

  // (|0>+|1>)/sqrt(2) on each particle, spin tied to path, then the
  // per-branch Newtonian phases.
  const double half = 0.5;
  std::vector<Complex> amp{half * std::exp(i * phases.ll),
                           half * std::exp(i * phases.lr),
                           half * std::exp(i * phases.rl),
                           half * std::exp(i * phases.rr)};
  DensityMatrix rho = DensityMatrix::pure(Ket::from_amplitudes(std::move(amp)));

  const double keep = std::exp(-cfg.dephasing_rate_hz * cfg.fall_time_s);
  rho = apply_channel(rho, QuantumChannel::uniform_dephasing(4, keep));
  rho = apply_channel(rho, QuantumChannel::unitary(corrective_unitary(phases)));

  const double f = fidelity(rho, singlet());
  return StageOneOutcome{rho, phases.lr + phases.rl - phases.ll - phases.rr, f,
                         0.5 - f};
}

double witness_value(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw std::invalid_argument("witness_value: state must be two-qubit");
  return 0.5 - fidelity(rho, singlet());
}

namespace {

// Every stage-1 path from particle_1 to particle_2 whose interior nodes
// are environment systems; non-gravity edges on such a path are exactly
// the condition-2 violations.
void collect_offending_couplings(const InteractionDeclaration& decl,
                                 std::vector<std::string>& failures) {
  std::vector<const Coupling*> stage1;
  for (const auto& c : decl.couplings)
    if (c.stage == 1) stage1.push_back(&c);

  std::vector<std::string> path_nodes{"particle_1"};
  std::vector<const Coupling*> path_edges;
  std::vector<std::string> seen;

  auto visited = [&](const std::string& n) {
    for (const auto& v : path_nodes)
      if (v == n) return true;
    return false;
  };

  std::function<void(const std::string&)> dfs = [&](const std::string& node) {
    for (const Coupling* c : stage1) {
      std::string next;
      if (c->a == node)
        next = c->b;
      else if (c->b == node)
        next = c->a;
      else
        continue;
      if (visited(next)) continue;
      if (next == "particle_2") {
        for (const Coupling* e : path_edges)
          if (e->kind != CouplingKind::gravity) failures.push_back(describe(*e));
        if (c->kind != CouplingKind::gravity) failures.push_back(describe(*c));
        continue;
      }
      if (decl.kind_of(next) != SystemKind::environment) continue;
      path_nodes.push_back(next);
      path_edges.push_back(c);
      dfs(next);
      path_nodes.pop_back();
      path_edges.pop_back();
    }
  };
  dfs("particle_1");

  // Deduplicate while keeping declaration order.
  std::vector<std::string> unique;
  for (auto& f : failures) {
    bool dup = false;
    for (const auto& u : unique) dup = dup || u == f;
    if (!dup) unique.push_back(std::move(f));
  }
  failures = std::move(unique);
}

}  // namespace

std::vector<CheckResult> check_conditions_1_2(const InteractionDeclaration& decl,
                                              const DensityMatrix& initial_state) {
  decl.validate();
  if (initial_state.dim() != 4)
    throw std::invalid_argument("check_conditions_1_2: initial state must be two-qubit");

  CheckResult c1{"condition_1_initially_unentangled", true, {}};
  const double neg = negativity(initial_state);
  if (neg > 1e-10) {
    c1.passed = false;
    c1.failures.push_back("initial state has negativity " + std::to_string(neg));
  }
  const DensityMatrix product =
      tensor(partial_trace(initial_state, 1), partial_trace(initial_state, 2));
  const double defect = product.matrix().max_abs_diff(initial_state.matrix());
  if (defect > 1e-9) {
    c1.passed = false;
    c1.failures.push_back("initial state does not factorize (entrywise defect " +
                          std::to_string(defect) + ")");
  }

  CheckResult c2{"condition_2_gravity_only_coupling", true, {}};
  collect_offending_couplings(decl, c2.failures);
  c2.passed = c2.failures.empty();

  return {std::move(c1), std::move(c2)};
}

}  // namespace gravbell::bmv
