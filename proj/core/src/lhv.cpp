#include "gravbell/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gravbell/errors.hpp"

namespace gravbell::lhv {

void Mixture::validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("Mixture: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw std::invalid_argument("Mixture: weights must sum to 1");
}

Mixture Mixture::uniform() {
  Mixture m;
  m.weights.fill(1.0 / 16.0);
  return m;
}

Mixture Mixture::point_mass(int strategy_index) {
  if (strategy_index < 0 || strategy_index >= 16)
    throw std::invalid_argument("Mixture: strategy index out of range");
  Mixture m;
  m.weights[static_cast<std::size_t>(strategy_index)] = 1.0;
  return m;
}

void CorrelationTable::validate() const {
  for (double v : e)
    if (v < -1.0 || v > 1.0 || !std::isfinite(v))
      throw std::invalid_argument("CorrelationTable: entries must be in [-1, 1]");
}

const std::array<Strategy, 16>& enumerate_deterministic() {
  static const std::array<Strategy, 16> all = [] {
    std::array<Strategy, 16> out{};
    for (int i = 0; i < 16; ++i) {
      const auto sign = [i](int bit) { return ((i >> bit) & 1) ? -1 : 1; };
      out[static_cast<std::size_t>(i)] =
          Strategy{{sign(3), sign(2)}, {sign(1), sign(0)}};
    }
    return out;
  }();
  return all;
}

CorrelationTable table_of(const Strategy& s) {
  CorrelationTable t;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      t.e[static_cast<std::size_t>(2 * s1 + s2)] = static_cast<double>(
          s.respond_1(static_cast<bell::Wing1Setting>(s1)) *
          s.respond_2(static_cast<bell::Wing2Setting>(s2)));
  return t;
}

CorrelationTable table_of(const Mixture& m) {
  m.validate();
  const auto& all = enumerate_deterministic();
  CorrelationTable t;
  for (int i = 0; i < 16; ++i) {
    const CorrelationTable ti = table_of(all[static_cast<std::size_t>(i)]);
    for (int k = 0; k < 4; ++k)
      t.e[static_cast<std::size_t>(k)] +=
          m.weights[static_cast<std::size_t>(i)] * ti.e[static_cast<std::size_t>(k)];
  }
  return t;
}

CorrelationTable table_of(const DensityMatrix& rho, const bell::SettingsQuad& q) {
  CorrelationTable t;
  t.e[0] = correlation(rho, q.a, q.b);
  t.e[1] = correlation(rho, q.a, q.b_prime);
  t.e[2] = correlation(rho, q.a_prime, q.b);
  t.e[3] = correlation(rho, q.a_prime, q.b_prime);
  for (double& v : t.e) v = std::clamp(v, -1.0, 1.0);
  return t;
}

double max_chsh() {
  double best = 0.0;
  for (const auto& s : enumerate_deterministic())
    best = std::max(best, std::abs(table_of(s).chsh()));
  return best;
}

std::pair<int, int> sample_local(const Mixture& mix, bell::Wing1Setting s1,
                                 bell::Wing2Setting s2, RandomSource& rng) {
  mix.validate();
  const int idx = sample_outcomes(
      std::span<const double>(mix.weights.data(), mix.weights.size()), rng);
  const Strategy& s = enumerate_deterministic()[static_cast<std::size_t>(idx)];
  return {s.respond_1(s1), s.respond_2(s2)};
}

std::pair<int, int> sample_setting_aware(const CorrelationTable& target,
                                         bell::Wing1Setting s1,
                                         bell::Wing2Setting s2, RandomSource& rng) {
  target.validate();
  const double e = target.e[static_cast<std::size_t>(bell::pair_index(s1, s2))];
  // Uniform marginals, product mean e: P(o1, o2) = (1 + o1 o2 e)/4.
  const std::array<double, 4> joint{(1.0 + e) / 4.0, (1.0 - e) / 4.0,
                                    (1.0 - e) / 4.0, (1.0 + e) / 4.0};
  const int o = sample_outcomes(std::span<const double>(joint.data(), 4), rng);
  return {o < 2 ? 1 : -1, o % 2 == 0 ? 1 : -1};
}

namespace {

// ---------------------------------------------------------------------
// Minimal dense two-phase simplex for  min c.x  s.t.  A x = b, x >= 0.
// Bland's rule throughout, so the pivot sequence is deterministic and
// cycling-free. Problem sizes here are at most ~21 rows by 16 columns.
// ---------------------------------------------------------------------

constexpr double kPivotTol = 1e-11;

struct SimplexResult {
  bool feasible = false;
  std::vector<double> x;
  double objective = 0.0;
};

class Tableau {
 public:
  Tableau(std::vector<std::vector<double>> a, std::vector<double> b, int n_vars)
      : m_(static_cast<int>(a.size())), n_(n_vars), a_(std::move(a)), b_(std::move(b)) {}

  // Phase 1 with artificial variables, then phase 2 on the given costs.
  SimplexResult solve(const std::vector<double>& costs) {
    for (int r = 0; r < m_; ++r)
      if (b_[static_cast<std::size_t>(r)] < 0.0) {
        for (auto& v : a_[static_cast<std::size_t>(r)]) v = -v;
        b_[static_cast<std::size_t>(r)] = -b_[static_cast<std::size_t>(r)];
      }

    const int total = n_ + m_;  // artificials appended after the real columns
    basis_.resize(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) {
      a_[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(total), 0.0);
      a_[static_cast<std::size_t>(r)][static_cast<std::size_t>(n_ + r)] = 1.0;
      basis_[static_cast<std::size_t>(r)] = n_ + r;
    }

    std::vector<double> phase1(static_cast<std::size_t>(total), 0.0);
    for (int j = n_; j < total; ++j) phase1[static_cast<std::size_t>(j)] = 1.0;
    run(phase1, total);
    if (objective(phase1) > 1e-9) return {};

    // Pivot leftover artificials out of the basis where possible; a row
    // with no real pivot column is redundant and stays harmlessly basic
    // at zero.
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < n_) continue;
      for (int j = 0; j < n_; ++j)
        if (std::abs(a_[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]) >
            kPivotTol) {
          pivot(r, j);
          break;
        }
    }

    std::vector<double> phase2(static_cast<std::size_t>(total), 0.0);
    for (int j = 0; j < n_; ++j) phase2[static_cast<std::size_t>(j)] = costs[static_cast<std::size_t>(j)];
    // Large cost on artificials keeps them parked at zero in phase 2.
    for (int j = n_; j < total; ++j) phase2[static_cast<std::size_t>(j)] = 1e6;
    run(phase2, total);

    SimplexResult res;
    res.feasible = true;
    res.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[static_cast<std::size_t>(r)] < n_)
        res.x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] =
            b_[static_cast<std::size_t>(r)];
    res.objective = objective(phase2);
    return res;
  }

 private:
  double objective(const std::vector<double>& costs) const {
    double v = 0.0;
    for (int r = 0; r < m_; ++r)
      v += costs[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] *
           b_[static_cast<std::size_t>(r)];
    return v;
  }

  void run(const std::vector<double>& costs, int total) {
    for (;;) {
      // Reduced costs via the basis multipliers would need an inverse;
      // with these sizes, recompute z_j - c_j directly per column.
      int enter = -1;
      for (int j = 0; j < total && enter < 0; ++j) {
        bool basic = false;
        for (int r = 0; r < m_; ++r) basic = basic || basis_[static_cast<std::size_t>(r)] == j;
        if (basic) continue;
        double zj = 0.0;
        for (int r = 0; r < m_; ++r)
          zj += costs[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] *
                a_[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        if (zj - costs[static_cast<std::size_t>(j)] > kPivotTol) enter = j;  // Bland: first index
      }
      if (enter < 0) return;

      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double arj = a_[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
        if (arj <= kPivotTol) continue;
        const double ratio = b_[static_cast<std::size_t>(r)] / arj;
        if (leave < 0 || ratio < best_ratio - kPivotTol ||
            (std::abs(ratio - best_ratio) <= kPivotTol &&
             basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw InternalError("simplex: unbounded problem");
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    auto& pr = a_[static_cast<std::size_t>(row)];
    const double p = pr[static_cast<std::size_t>(col)];
    for (auto& v : pr) v /= p;
    b_[static_cast<std::size_t>(row)] /= p;
    for (int r = 0; r < m_; ++r) {
      if (r == row) continue;
      auto& ar = a_[static_cast<std::size_t>(r)];
      const double f = ar[static_cast<std::size_t>(col)];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < ar.size(); ++j) ar[j] -= f * pr[j];
      b_[static_cast<std::size_t>(r)] -= f * b_[static_cast<std::size_t>(row)];
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  int m_;
  int n_;
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<int> basis_;
};

// Lexicographically smallest w in {w >= 0, sum w = 1, M w = x}: minimize
// w_0, fix it, then w_1, and so on. Each step is one small LP.
std::array<double, 16> lexicographic_min_mixture(
    const std::array<std::array<double, 16>, 4>& m, const std::array<double, 4>& x) {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int k = 0; k < 4; ++k) {
    a.emplace_back(m[static_cast<std::size_t>(k)].begin(),
                   m[static_cast<std::size_t>(k)].end());
    b.push_back(x[static_cast<std::size_t>(k)]);
  }
  a.emplace_back(16, 1.0);
  b.push_back(1.0);

  std::array<double, 16> w{};
  for (int i = 0; i < 16; ++i) {
    std::vector<double> cost(16, 0.0);
    cost[static_cast<std::size_t>(i)] = 1.0;
    SimplexResult res = Tableau(a, b, 16).solve(cost);
    if (!res.feasible)
      throw InternalError("best_fit: projected table left the local polytope");
    double wi = std::max(0.0, res.x[static_cast<std::size_t>(i)]);
    if (wi < 1e-12) wi = 0.0;
    w[static_cast<std::size_t>(i)] = wi;
    std::vector<double> row(16, 0.0);
    row[static_cast<std::size_t>(i)] = 1.0;
    a.push_back(std::move(row));
    b.push_back(wi);
  }

  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

FitResult best_fit(const CorrelationTable& target) {
  target.validate();

  // The eight CHSH facets: sign vectors with an odd number of minuses.
  // For a table inside the unit cube at most one of them can be
  // violated, and the l-infinity-optimal repair moves each coordinate
  // by exactly violation/4 toward the facet.
  double worst = 0.0;
  std::array<double, 4> worst_signs{1.0, 1.0, 1.0, 1.0};
  for (int bits = 0; bits < 16; ++bits) {
    int minuses = 0;
    std::array<double, 4> s{};
    for (int k = 0; k < 4; ++k) {
      const bool neg = (bits >> k) & 1;
      s[static_cast<std::size_t>(k)] = neg ? -1.0 : 1.0;
      minuses += neg ? 1 : 0;
    }
    if (minuses % 2 == 0) continue;
    double dot = 0.0;
    for (int k = 0; k < 4; ++k)
      dot += s[static_cast<std::size_t>(k)] * target.e[static_cast<std::size_t>(k)];
    if (dot - 2.0 > worst) {
      worst = dot - 2.0;
      worst_signs = s;
    }
  }
  const double t = worst / 4.0;

  std::array<double, 4> fitted = target.e;
  if (t > 0.0)
    for (int k = 0; k < 4; ++k)
      fitted[static_cast<std::size_t>(k)] -= t * worst_signs[static_cast<std::size_t>(k)];

  std::array<std::array<double, 16>, 4> m{};
  const auto& all = enumerate_deterministic();
  for (int i = 0; i < 16; ++i) {
    const CorrelationTable ti = table_of(all[static_cast<std::size_t>(i)]);
    for (int k = 0; k < 4; ++k)
      m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          ti.e[static_cast<std::size_t>(k)];
  }

  FitResult out;
  out.mixture.weights = lexicographic_min_mixture(m, fitted);
  out.mixture.validate();

  const CorrelationTable achieved = table_of(out.mixture);
  double residual = 0.0;
  for (int k = 0; k < 4; ++k)
    residual = std::max(residual, std::abs(achieved.e[static_cast<std::size_t>(k)] -
                                           target.e[static_cast<std::size_t>(k)]));
  out.residual = residual;
  return out;
}

LocalModel::LocalModel(Mixture mix) : mix_(std::move(mix)) { mix_.validate(); }

std::pair<int, int> LocalModel::sample(bell::Wing1Setting s1, bell::Wing2Setting s2,
                                       RandomSource& rng) const {
  return sample_local(mix_, s1, s2, rng);
}

SettingAwareModel::SettingAwareModel(CorrelationTable target)
    : target_(std::move(target)) {
  target_.validate();
}

SettingAwareModel::SettingAwareModel(const DensityMatrix& rho,
                                     const bell::SettingsQuad& q)
    : target_(table_of(rho, q)) {}

std::pair<int, int> SettingAwareModel::sample(bell::Wing1Setting s1,
                                              bell::Wing2Setting s2,
                                              RandomSource& rng) const {
  return sample_setting_aware(target_, s1, s2, rng);
}

}  // namespace gravbell::lhv
