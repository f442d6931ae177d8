#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "gravbell/quantum.hpp"

namespace gravbell::bell {

/// Measurement direction in the x-z Bloch plane; the realized observable
/// is cos(angle) sigma_z + sin(angle) sigma_x.
struct MeasurementSetting {
  double angle = 0.0;
};

struct SettingsQuad {
  MeasurementSetting a, a_prime;  // wing 1
  MeasurementSetting b, b_prime;  // wing 2
};

enum class Wing1Setting { a = 0, a_prime = 1 };
enum class Wing2Setting { b = 0, b_prime = 1 };

/// Setting-pair index used everywhere: 0 = (a,b), 1 = (a,b'),
/// 2 = (a',b), 3 = (a',b').
int pair_index(Wing1Setting s1, Wing2Setting s2);
extern const std::array<const char*, 4> kPairLabels;

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b') over per-pair correlations
/// indexed as above.
double chsh_combination(const std::array<double, 4>& e);

struct TrialRecord {
  std::int64_t trial_index = 0;
  Wing1Setting setting_1 = Wing1Setting::a;
  Wing2Setting setting_2 = Wing2Setting::b;
  int outcome_1 = 0;  // +1/-1 when detected, 0 otherwise
  int outcome_2 = 0;
  bool detected = false;
};

struct ChshEstimate {
  double s_value = 0.0;
  double standard_error = 0.0;
  std::array<std::int64_t, 4> per_pair_counts{};
  double p_value_local = 1.0;
  std::array<double, 4> per_pair_mean{};
  std::array<double, 4> per_pair_stderr{};
  std::int64_t detected_count = 0;
  std::int64_t total_count = 0;
};

/// The exact Hoeffding-style tail bound used for p_value_local,
/// documented verbatim in every report.
inline constexpr const char* kPValueMethod =
    "hoeffding: p = min(1, exp(-(max(0, |s| - 2))^2 / (2 * sum_j 1/n_j)))";

/// E = Tr(rho A(s1) x B(s2)).
double correlation(const DensityMatrix& rho, MeasurementSetting s1,
                   MeasurementSetting s2);

double chsh_value(const DensityMatrix& rho, const SettingsQuad& q);

/// Settings maximizing |chsh_value|: coarse grid (step pi/60, wing-1
/// setting a pinned to 0 since only angle differences matter for the
/// states of interest) followed by coordinate descent on all four
/// angles down to step 1e-6. The returned value is |S| at the returned
/// settings and is never below the best grid point.
std::pair<SettingsQuad, double> optimize_settings(const DensityMatrix& rho);

/// Per-trial outcome source: the Born rule on a quantum state, or one
/// of the hidden-variable samplers. Implementations are immutable and
/// safe to share across trial workers.
class OutcomeModel {
 public:
  virtual ~OutcomeModel() = default;
  virtual std::pair<int, int> sample(Wing1Setting s1, Wing2Setting s2,
                                     RandomSource& rng) const = 0;
};

/// Born-rule sampling of joint outcomes for a two-qubit state at the
/// four setting pairs of a quad.
class QuantumModel final : public OutcomeModel {
 public:
  QuantumModel(const DensityMatrix& rho, const SettingsQuad& q);
  std::pair<int, int> sample(Wing1Setting s1, Wing2Setting s2,
                             RandomSource& rng) const override;

 private:
  std::array<std::array<double, 4>, 4> joint_;  // [pair][joint outcome]
};

/// Runs n trials: settings drawn uniformly and independently per wing,
/// outcomes from the model, detection flagged per trial with the given
/// probability (undetected trials keep no outcomes). Each trial has its
/// own random stream derived from (seed, trial_index), so the record
/// list is identical for any worker count.
std::vector<TrialRecord> run_trials(const OutcomeModel& model, std::int64_t n,
                                    std::uint64_t seed, double detection_prob,
                                    int workers = 1);

/// Per-pair means over detected trials, the CHSH combination, binomial
/// standard errors summed in quadrature, and the distribution-free
/// p-value bound (kPValueMethod). Throws InsufficientDataError naming
/// the first setting pair with no detected trials.
ChshEstimate estimate_chsh(const std::vector<TrialRecord>& records);

}  // namespace gravbell::bell
