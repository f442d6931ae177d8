#pragma once

#include "gravbell/interaction.hpp"
#include "gravbell/quantum.hpp"

namespace gravbell::bmv {

/// Branch separations in meters, keyed by the pair of interferometer
/// paths taken by (particle 1, particle 2). LL maps to |00>, LR to
/// |01>, RL to |10>, RR to |11>.
struct BranchDistances {
  double ll;
  double lr;
  double rl;
  double rr;
};

/// Geometry and dynamics of the entangling drop. Physical constants are
/// fields with CODATA defaults so tests can use round numbers.
struct BmvConfig {
  double mass1_kg = 1e-14;
  double mass2_kg = 1e-14;
  double fall_time_s = 2.5;
  BranchDistances branch_distance_m{250e-6, 100e-6, 250e-6, 250e-6};
  double dephasing_rate_hz = 0.0;
  double gravitational_constant = 6.674e-11;   // m^3 kg^-1 s^-2
  double reduced_planck = 1.054571817e-34;     // J s

  /// Masses, distances and constants strictly positive; fall time and
  /// dephasing rate non-negative.
  void validate() const;
};

struct BranchPhases {
  double ll;
  double lr;
  double rl;
  double rr;
};

/// Newtonian phase accumulated on each branch:
/// phi_b = G m1 m2 tau / (hbar d_b).
BranchPhases branch_phases(const BmvConfig& cfg);

/// The entangling combination phi_LR + phi_RL - phi_LL - phi_RR. Zero
/// for symmetric geometries; the drop produces entanglement iff this is
/// not a multiple of 2 pi.
double entangling_phase(const BmvConfig& cfg);

/// Replaces fall_time with the smallest positive time for which the
/// entangling phase reaches magnitude pi. Throws NoSolutionError when
/// the phase rate is identically zero (fully symmetric geometry).
BmvConfig tune_for_singlet(const BmvConfig& cfg);

struct StageOneOutcome {
  DensityMatrix state;       // spin state of S1 S2 after the drop
  double entangling_phase;   // radians
  double singlet_fidelity;
  double witness_value;
};

/// Runs the entangling drop: each particle starts in (|0>+|1>)/sqrt(2)
/// with spin tied to path, every branch amplitude picks up its
/// Newtonian phase, inter-branch coherences decay by
/// exp(-dephasing_rate * fall_time), and a pair of fixed local
/// corrective unitaries (computed analytically from the branch phases)
/// rotates the ideal entangling-phase-pi output onto the singlet.
StageOneOutcome evolve(const BmvConfig& cfg);

/// Tr(W rho) with W = I/2 - |singlet><singlet|. Negative values certify
/// entanglement.
double witness_value(const DensityMatrix& rho);

/// Condition 1: the initial two-spin state is unentangled (negativity
/// <= 1e-10 and entrywise tensor factorization within 1e-9).
/// Condition 2: every stage-1 interaction channel between the particles,
/// direct or routed through environment nodes, is gravitational.
std::vector<CheckResult> check_conditions_1_2(const InteractionDeclaration& decl,
                                              const DensityMatrix& initial_state);

}  // namespace gravbell::bmv
