#pragma once

#include "gravbell/interaction.hpp"
#include "gravbell/quantum.hpp"

namespace gravbell::transfer {

enum class Mode { ideal, depolarizing };

/// Per-side swap imperfection model. The photon carriers are treated as
/// abstract qubits; nothing downstream depends on the physical degree
/// of freedom.
struct TransferConfig {
  Mode mode = Mode::ideal;
  double depolarizing_probability_side1 = 0.0;
  double depolarizing_probability_side2 = 0.0;

  void validate() const;
};

/// Swaps the spin state onto the photon pair. Ideal mode is a pure
/// relabeling S -> P; depolarizing mode additionally applies an
/// independent single-qubit depolarizing channel per side, which scales
/// every two-qubit correlation by (1-p1)(1-p2).
DensityMatrix to_photons(const DensityMatrix& rho_spins, const TransferConfig& cfg);

/// Condition 3: restricted to stage-2 couplings, no interaction path
/// (direct or via environment nodes) connects the {particle_1, photon_1}
/// block to the {particle_2, photon_2} block. A failure reports the
/// offending path.
CheckResult check_condition_3(const InteractionDeclaration& decl);

}  // namespace gravbell::transfer
