#include "gravbell/transfer.hpp"

#include <map>
#include <string>
#include <vector>

#include "gravbell/errors.hpp"

namespace gravbell::transfer {

void TransferConfig::validate() const {
  if (depolarizing_probability_side1 < 0.0 || depolarizing_probability_side1 > 1.0 ||
      depolarizing_probability_side2 < 0.0 || depolarizing_probability_side2 > 1.0)
    throw ConfigError("TransferConfig: depolarizing probabilities must be in [0,1]");
}

DensityMatrix to_photons(const DensityMatrix& rho_spins, const TransferConfig& cfg) {
  cfg.validate();
  if (rho_spins.dim() != 4)
    throw std::invalid_argument("to_photons: state must be two-qubit");
  if (cfg.mode == Mode::ideal) return rho_spins;
  DensityMatrix rho = apply_channel(
      rho_spins, QuantumChannel::on_qubit(
                     QuantumChannel::depolarizing(cfg.depolarizing_probability_side1), 1));
  return apply_channel(
      rho, QuantumChannel::on_qubit(
               QuantumChannel::depolarizing(cfg.depolarizing_probability_side2), 2));
}

namespace {

bool in_block_1(const std::string& name) {
  return name == "particle_1" || name == "photon_1";
}
bool in_block_2(const std::string& name) {
  return name == "particle_2" || name == "photon_2";
}

}  // namespace

CheckResult check_condition_3(const InteractionDeclaration& decl) {
  decl.validate();
  CheckResult result{"condition_3_no_cross_block_interaction", true, {}};

  std::vector<const Coupling*> stage2;
  for (const auto& c : decl.couplings)
    if (c.stage == 2) stage2.push_back(&c);

  // BFS from block 1 over stage-2 couplings; interior nodes may be
  // anything outside block 2 (environment relays included). Reaching
  // block 2 is a violation and the discovered path is reported.
  std::map<std::string, const Coupling*> reached_via;
  std::vector<std::string> frontier;
  for (const auto& s : decl.systems)
    if (in_block_1(s.name)) {
      reached_via[s.name] = nullptr;
      frontier.push_back(s.name);
    }

  std::string hit;
  while (!frontier.empty() && hit.empty()) {
    std::vector<std::string> next_frontier;
    for (const auto& node : frontier) {
      for (const Coupling* c : stage2) {
        std::string next;
        if (c->a == node)
          next = c->b;
        else if (c->b == node)
          next = c->a;
        else
          continue;
        if (reached_via.count(next)) continue;
        reached_via[next] = c;
        if (in_block_2(next)) {
          hit = next;
          break;
        }
        next_frontier.push_back(next);
      }
      if (!hit.empty()) break;
    }
    frontier = std::move(next_frontier);
  }

  if (!hit.empty()) {
    std::vector<std::string> path;
    std::string node = hit;
    while (reached_via[node] != nullptr) {
      const Coupling* c = reached_via[node];
      path.push_back(describe(*c));
      node = (c->a == node) ? c->b : c->a;
    }
    std::string msg = "cross-block interaction path:";
    for (auto it = path.rbegin(); it != path.rend(); ++it) msg += " " + *it;
    result.passed = false;
    result.failures.push_back(std::move(msg));
  }
  return result;
}

}  // namespace gravbell::transfer
