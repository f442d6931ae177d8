#include "gravbell/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "gravbell/errors.hpp"

namespace gravbell::bell {

const std::array<const char*, 4> kPairLabels = {"a_b", "a_bprime", "aprime_b",
                                                "aprime_bprime"};

int pair_index(Wing1Setting s1, Wing2Setting s2) {
  return 2 * static_cast<int>(s1) + static_cast<int>(s2);
}

double chsh_combination(const std::array<double, 4>& e) {
  return e[0] - e[1] + e[2] + e[3];
}

namespace {

// Tr(rho (A x B)) without materializing the Kronecker product.
double correlation_on(const DensityMatrix& rho, const CMatrix& a, const CMatrix& b) {
  Complex sum{0.0, 0.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          sum += rho.entry(2 * i + j, 2 * k + l) * a.at(k, i) * b.at(l, j);
  return sum.real();
}

CMatrix bloch_xz_matrix(double angle) {
  CMatrix m(2);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m.at(0, 0) = c;
  m.at(0, 1) = s;
  m.at(1, 0) = s;
  m.at(1, 1) = -c;
  return m;
}

std::array<double, 4> quad_angles(const SettingsQuad& q) {
  return {q.a.angle, q.a_prime.angle, q.b.angle, q.b_prime.angle};
}

SettingsQuad quad_from_angles(const std::array<double, 4>& x) {
  return SettingsQuad{{x[0]}, {x[1]}, {x[2]}, {x[3]}};
}

}  // namespace

double correlation(const DensityMatrix& rho, MeasurementSetting s1,
                   MeasurementSetting s2) {
  if (rho.dim() != 4)
    throw std::invalid_argument("correlation: state must be two-qubit");
  return correlation_on(rho, bloch_xz_matrix(s1.angle), bloch_xz_matrix(s2.angle));
}

double chsh_value(const DensityMatrix& rho, const SettingsQuad& q) {
  return chsh_combination({correlation(rho, q.a, q.b),
                           correlation(rho, q.a, q.b_prime),
                           correlation(rho, q.a_prime, q.b),
                           correlation(rho, q.a_prime, q.b_prime)});
}

std::pair<SettingsQuad, double> optimize_settings(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw std::invalid_argument("optimize_settings: state must be two-qubit");

  constexpr int kGridPoints = 120;  // step pi/60 over [0, 2pi)
  const double step = std::numbers::pi / 60.0;

  std::vector<CMatrix> obs;
  obs.reserve(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i)
    obs.push_back(bloch_xz_matrix(i * step));

  // e[i][j] = E(theta_i on wing 1, theta_j on wing 2)
  std::vector<std::array<double, kGridPoints>> e(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i)
    for (int j = 0; j < kGridPoints; ++j)
      e[i][j] = correlation_on(rho, obs[i], obs[j]);

  double best = -1.0;
  std::array<double, 4> best_x{0.0, 0.0, 0.0, 0.0};
  for (int j = 0; j < kGridPoints; ++j)
    for (int k = 0; k < kGridPoints; ++k) {
      const double d = e[0][j] - e[0][k];
      for (int i = 0; i < kGridPoints; ++i) {
        const double s = std::abs(d + e[i][j] + e[i][k]);
        if (s > best) {
          best = s;
          best_x = {0.0, i * step, j * step, k * step};
        }
      }
    }

  // Coordinate descent on all four angles with shrinking step.
  const auto objective = [&rho](const std::array<double, 4>& x) {
    return std::abs(chsh_value(rho, quad_from_angles(x)));
  };
  double h = step;
  double value = objective(best_x);
  while (h > 1e-6) {
    bool improved = false;
    for (int c = 0; c < 4; ++c) {
      for (const double dir : {+1.0, -1.0}) {
        std::array<double, 4> trial = best_x;
        trial[c] += dir * h;
        double v = objective(trial);
        while (v > value) {
          best_x = trial;
          value = v;
          improved = true;
          trial[c] += dir * h;
          v = objective(trial);
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  return {quad_from_angles(best_x), value};
}

QuantumModel::QuantumModel(const DensityMatrix& rho, const SettingsQuad& q) {
  if (rho.dim() != 4)
    throw std::invalid_argument("QuantumModel: state must be two-qubit");
  const std::array<double, 4> ang = quad_angles(q);
  const CMatrix eye = CMatrix::identity(2);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      const CMatrix a = bloch_xz_matrix(ang[s1]);
      const CMatrix b = bloch_xz_matrix(ang[2 + s2]);
      auto& joint = joint_[2 * s1 + s2];
      double total = 0.0;
      for (int o = 0; o < 4; ++o) {
        const double sign1 = o < 2 ? 1.0 : -1.0;
        const double sign2 = o % 2 == 0 ? 1.0 : -1.0;
        // Projector (I + sign1 A)/2 x (I + sign2 B)/2
        CMatrix p1 = eye + sign1 * CMatrix(a);
        CMatrix p2 = eye + sign2 * CMatrix(b);
        p1 *= Complex{0.5, 0.0};
        p2 *= Complex{0.5, 0.0};
        Complex tr{0.0, 0.0};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
              for (int l = 0; l < 2; ++l)
                tr += rho.entry(2 * i + j, 2 * k + l) * p1.at(k, i) * p2.at(l, j);
        joint[o] = std::max(tr.real(), 0.0);
        total += joint[o];
      }
      for (double& p : joint) p /= total;
    }
}

std::pair<int, int> QuantumModel::sample(Wing1Setting s1, Wing2Setting s2,
                                         RandomSource& rng) const {
  const auto& joint = joint_[pair_index(s1, s2)];
  const int o = sample_outcomes(std::span<const double>(joint.data(), 4), rng);
  return {o < 2 ? 1 : -1, o % 2 == 0 ? 1 : -1};
}

namespace {

TrialRecord simulate_trial(const OutcomeModel& model, std::int64_t index,
                           std::uint64_t seed, double detection_prob) {
  RandomSource rng = RandomSource::for_trial(seed, static_cast<std::uint64_t>(index));
  const auto s1 = rng.uniform01() < 0.5 ? Wing1Setting::a : Wing1Setting::a_prime;
  const auto s2 = rng.uniform01() < 0.5 ? Wing2Setting::b : Wing2Setting::b_prime;
  auto [o1, o2] = model.sample(s1, s2, rng);
  const bool detected = rng.uniform01() < detection_prob;
  if (!detected) o1 = o2 = 0;
  return TrialRecord{index, s1, s2, o1, o2, detected};
}

}  // namespace

std::vector<TrialRecord> run_trials(const OutcomeModel& model, std::int64_t n,
                                    std::uint64_t seed, double detection_prob,
                                    int workers) {
  if (n < 1) throw std::invalid_argument("run_trials: need at least one trial");
  if (detection_prob < 0.0 || detection_prob > 1.0)
    throw std::invalid_argument("run_trials: detection probability must be in [0,1]");
  if (workers < 1) throw std::invalid_argument("run_trials: need at least one worker");

  std::vector<TrialRecord> records(static_cast<std::size_t>(n));
  const auto fill = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t)
      records[static_cast<std::size_t>(t)] =
          simulate_trial(model, t, seed, detection_prob);
  };

  if (workers == 1 || n < 2 * workers) {
    fill(0, n);
    return records;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fill, lo, hi);
  }
  for (auto& t : pool) t.join();
  return records;
}

ChshEstimate estimate_chsh(const std::vector<TrialRecord>& records) {
  ChshEstimate est;
  est.total_count = static_cast<std::int64_t>(records.size());
  std::array<std::int64_t, 4> sum{};
  for (const auto& r : records) {
    if (!r.detected) continue;
    ++est.detected_count;
    const int p = pair_index(r.setting_1, r.setting_2);
    ++est.per_pair_counts[static_cast<std::size_t>(p)];
    sum[static_cast<std::size_t>(p)] += r.outcome_1 * r.outcome_2;
  }

  double var_sum = 0.0;
  double inv_n_sum = 0.0;
  for (int p = 0; p < 4; ++p) {
    const auto n = est.per_pair_counts[static_cast<std::size_t>(p)];
    if (n == 0)
      throw InsufficientDataError(
          kPairLabels[static_cast<std::size_t>(p)],
          std::string("estimate_chsh: no detected trials for setting pair ") +
              kPairLabels[static_cast<std::size_t>(p)]);
    const double mean =
        static_cast<double>(sum[static_cast<std::size_t>(p)]) / static_cast<double>(n);
    est.per_pair_mean[static_cast<std::size_t>(p)] = mean;
    const double var = std::max(0.0, 1.0 - mean * mean);
    est.per_pair_stderr[static_cast<std::size_t>(p)] =
        std::sqrt(var / static_cast<double>(n));
    var_sum += var / static_cast<double>(n);
    inv_n_sum += 1.0 / static_cast<double>(n);
  }
  est.s_value = chsh_combination(est.per_pair_mean);
  est.standard_error = std::sqrt(var_sum);

  const double deviation = std::max(0.0, std::abs(est.s_value) - 2.0);
  est.p_value_local = std::min(1.0, std::exp(-deviation * deviation / (2.0 * inv_n_sum)));
  return est;
}

}  // namespace gravbell::bell
