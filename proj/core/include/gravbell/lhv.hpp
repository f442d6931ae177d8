#pragma once

#include <array>
#include <utility>

#include "gravbell/bell.hpp"
#include "gravbell/quantum.hpp"

namespace gravbell::lhv {

/// Deterministic local response functions: one +/-1 answer per setting
/// on each wing. These are the 16 vertices of the local polytope for
/// two settings and two outcomes per wing.
struct Strategy {
  std::array<int, 2> wing1;  // responses for a, a'
  std::array<int, 2> wing2;  // responses for b, b'

  int respond_1(bell::Wing1Setting s) const {
    return wing1[static_cast<std::size_t>(s)];
  }
  int respond_2(bell::Wing2Setting s) const {
    return wing2[static_cast<std::size_t>(s)];
  }
};

/// Convex mixture over the 16 deterministic strategies; the most
/// general locally causal hidden-variable model for this scenario.
struct Mixture {
  std::array<double, 16> weights{};

  /// Weights non-negative and summing to 1 within 1e-10.
  void validate() const;
  static Mixture uniform();
  static Mixture point_mass(int strategy_index);
};

/// The four CHSH correlations, the interchange format between the
/// quantum and hidden-variable analyses. Entries are indexed/labelled
/// as in bell::kPairLabels.
struct CorrelationTable {
  std::array<double, 4> e{};  // E(a,b), E(a,b'), E(a',b), E(a',b')

  void validate() const;  // entries within [-1, 1]
  double chsh() const { return bell::chsh_combination(e); }
};

/// All 16 strategies, each exactly once, in a fixed documented order:
/// index bits (3..0) = (r1(a), r1(a'), r2(b), r2(b')) with bit 0 -> +1
/// and bit 1 -> -1, so index 0 is the all-(+1) strategy.
const std::array<Strategy, 16>& enumerate_deterministic();

CorrelationTable table_of(const Strategy& s);
CorrelationTable table_of(const Mixture& m);

/// Builds the quantum correlation table of a state at a settings quad
/// (entries clamped to [-1, 1] against rounding).
CorrelationTable table_of(const DensityMatrix& rho, const bell::SettingsQuad& q);

/// Brute-force maximum of |S| over the deterministic strategies;
/// exactly 2, the local bound every mixture obeys.
double max_chsh();

/// Draws a strategy by weight -- crucially without looking at the
/// settings -- then answers deterministically. Non-signaling by
/// construction.
std::pair<int, int> sample_local(const Mixture& mix, bell::Wing1Setting s1,
                                 bell::Wing2Setting s2, RandomSource& rng);

/// The loophole model: the hidden variable is drawn with knowledge of
/// BOTH settings, from the joint distribution with uniform marginals
/// and product mean E(s1, s2). Reproduces any target correlations --
/// including Tsirelson-saturating ones -- exactly in expectation, which
/// is classically legitimate whenever the measurements are not
/// spacelike separated.
std::pair<int, int> sample_setting_aware(const CorrelationTable& target,
                                         bell::Wing1Setting s1,
                                         bell::Wing2Setting s2, RandomSource& rng);

struct FitResult {
  Mixture mixture;
  double residual = 0.0;  // achieved max |fit - target| over the 4 entries
};

/// Minimax fit of a correlation table by a strategy mixture. The
/// residual is found exactly from the CHSH facet structure (at most one
/// of the eight facets can be violated by a table in the unit cube, and
/// the l-infinity projection moves every coordinate by violation/4);
/// the mixture attaining it is the lexicographically smallest weight
/// vector, computed by a small exact simplex solve. Residual is zero
/// iff the target lies in the local polytope's correlation projection.
FitResult best_fit(const CorrelationTable& target);

/// OutcomeModel adapters so the samplers plug into bell::run_trials.
class LocalModel final : public bell::OutcomeModel {
 public:
  explicit LocalModel(Mixture mix);
  std::pair<int, int> sample(bell::Wing1Setting s1, bell::Wing2Setting s2,
                             RandomSource& rng) const override;

 private:
  Mixture mix_;
};

class SettingAwareModel final : public bell::OutcomeModel {
 public:
  explicit SettingAwareModel(CorrelationTable target);
  SettingAwareModel(const DensityMatrix& rho, const bell::SettingsQuad& q);
  std::pair<int, int> sample(bell::Wing1Setting s1, bell::Wing2Setting s2,
                             RandomSource& rng) const override;

 private:
  CorrelationTable target_;
};

}  // namespace gravbell::lhv
