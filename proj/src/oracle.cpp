#include "fairalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fairalloc::oracle {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

int resolve_resolution(const oracle_config& config, int k) {
  const int res = config.grid_resolution > 0 ? config.grid_resolution
                                             : (k <= 3 ? 200 : 60);
  if (res < 2) throw std::invalid_argument("oracle: grid resolution must be >= 2");
  return res;
}

double subset_sum(std::span<const double> r, mask_t s) {
  double total = 0.0;
  for (mask_t bits = s; bits; bits &= bits - 1) total += r[std::countr_zero(bits)];
  return total;
}

}  // namespace

std::vector<double> progressive_fill_maxmin(const setfn::subset_function& f,
                                            const oracle_config& config) {
  const int k = f.size();
  if (k < 1 || k > 12)
    throw exhaustive_limit_error("progressive_fill_maxmin: need 1..12 users");
  if (!(config.fill_step > 0.0))
    throw std::invalid_argument("progressive_fill_maxmin: fill_step must be positive");
  const mask_t all = f.universe();
  const double tie = 1e-12 * std::max(1.0, std::abs(f(all)));

  std::vector<double> rates(k, 0.0);
  mask_t frozen = 0;
  while (frozen != all) {
    // While the frozen set is unchanged, the level at which a constraint
    // becomes tight is constant: raising all unfrozen rates to t costs
    // frozen(S) + t * |S n unfrozen| against f(S). Land on the smallest such
    // level exactly and freeze the unfrozen members of every set tight there.
    double level = std::numeric_limits<double>::infinity();
    for (mask_t s = 1; ; ++s) {
      const int unfrozen = popcount(s & ~frozen);
      if (unfrozen > 0) {
        const double bound = (f(s) - subset_sum(rates, s & frozen)) / unfrozen;
        level = std::min(level, bound);
      }
      if (s == all) break;
    }
    mask_t newly = 0;
    for (mask_t s = 1; ; ++s) {
      const int unfrozen = popcount(s & ~frozen);
      if (unfrozen > 0) {
        const double bound = (f(s) - subset_sum(rates, s & frozen)) / unfrozen;
        if (bound <= level + tie) newly |= s & ~frozen;
      }
      if (s == all) break;
    }
    for (mask_t bits = newly; bits; bits &= bits - 1)
      rates[std::countr_zero(bits)] = level;
    frozen |= newly;
  }
  return rates;
}

std::vector<double> grid_pf_polymatroid(const setfn::subset_function& f,
                                        std::span<const double> d,
                                        const oracle_config& config) {
  const int k = f.size();
  if (k < 1 || k > 4)
    throw exhaustive_limit_error("grid_pf_polymatroid: need 1..4 users");
  if (static_cast<int>(d.size()) != k)
    throw std::invalid_argument("grid_pf_polymatroid: disagreement length mismatch");
  const int res = resolve_resolution(config, k);
  const mask_t all = f.universe();
  const double total = f(all);
  const double slack = 1e-12 * std::max(1.0, std::abs(total));

  std::vector<double> best;
  double best_value = neg_inf;
  std::vector<int> digit(k - 1, 0);
  std::vector<double> r(k, 0.0);
  while (true) {
    double partial = 0.0;
    for (int i = 0; i + 1 < k; ++i) {
      r[i] = total * digit[i] / (res - 1);
      partial += r[i];
    }
    r[k - 1] = total - partial;
    if (r[k - 1] >= -slack) {
      bool feasible = true;
      for (mask_t s = 1; feasible; ++s) {
        if (subset_sum(r, s) > f(s) + slack) feasible = false;
        if (s == all) break;
      }
      if (feasible) {
        double value = 0.0;
        for (int i = 0; i < k; ++i) {
          const double gain = r[i] - d[i];
          value += gain > 0.0 ? std::log(gain) : neg_inf;
        }
        if (value > best_value) {
          best_value = value;
          best = r;
        }
      }
    }
    int pos = 0;
    for (; pos < k - 1; ++pos) {
      if (++digit[pos] < res) break;
      digit[pos] = 0;
    }
    if (pos == k - 1) break;
  }
  if (best.empty() || best_value == neg_inf)
    throw resolution_error(
        "grid_pf_polymatroid: no feasible grid point with a finite objective");
  return best;
}

bc::bc_allocation grid_pf_bc(const bc::bc_channel& ch, std::span<const double> d,
                             const oracle_config& config) {
  const int k = ch.users();
  if (k > 4) throw exhaustive_limit_error("grid_pf_bc: need 1..4 users");
  if (static_cast<int>(d.size()) != k)
    throw std::invalid_argument("grid_pf_bc: disagreement length mismatch");
  const int res = resolve_resolution(config, k);
  const std::vector<double>& ns = ch.sorted_noise();
  const double pt = ch.total_power();
  std::vector<double> d_dec(k);
  for (int p = 0; p < k; ++p) d_dec[p] = d[ch.decode_order()[p]];

  std::vector<double> best_x;
  double best_value = neg_inf;
  std::vector<int> digit(k - 1, 0);
  std::vector<double> x(k, 1.0), r(k, 0.0);
  while (true) {
    bool monotone = true;
    for (int i = 0; i + 1 < k; ++i) {
      x[i] = double(digit[i]) / (res - 1);
      if (i > 0 && x[i] < x[i - 1]) monotone = false;
    }
    if (monotone) {
      double value = 0.0;
      double prev = 0.0;
      for (int i = 0; i < k; ++i) {
        r[i] = 0.5 * std::log1p((x[i] - prev) * pt / (ns[i] + prev * pt));
        const double gain = r[i] - d_dec[i];
        value += gain > 0.0 ? std::log(gain) : neg_inf;
        prev = x[i];
      }
      if (value > best_value) {
        best_value = value;
        best_x = x;
      }
    }
    int pos = 0;
    for (; pos < k - 1; ++pos) {
      if (++digit[pos] < res) break;
      digit[pos] = 0;
    }
    if (pos == k - 1 || k == 1) break;
  }
  if (best_x.empty() || best_value == neg_inf)
    throw resolution_error("grid_pf_bc: no split with a finite objective");

  bc::bc_allocation out;
  bool bargaining = false;
  for (double v : d) bargaining = bargaining || v > 0.0;
  out.objective = bargaining ? bc::criterion::nbs : bc::criterion::pf;
  if (bargaining) out.disagreement.emplace(d.begin(), d.end());
  out.x = best_x;
  out.gamma = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> rates(k), powers(k), sinr(k);
  double prev = 0.0;
  for (int i = 0; i < k; ++i) {
    rates[i] = 0.5 * std::log1p((best_x[i] - prev) * pt / (ns[i] + prev * pt));
    powers[i] = (best_x[i] - prev) * pt;
    sinr[i] = powers[i] / (ns[i] + prev * pt);
    prev = best_x[i];
  }
  std::vector<double> tmp(k);
  for (int p = 0; p < k; ++p) tmp[ch.decode_order()[p]] = rates[p];
  out.rates = tmp;
  for (int p = 0; p < k; ++p) tmp[ch.decode_order()[p]] = powers[p];
  out.powers = tmp;
  for (int p = 0; p < k; ++p) tmp[ch.decode_order()[p]] = sinr[p];
  out.sinr = tmp;
  return out;
}

std::vector<std::vector<double>> sample_dominant_face(
    const setfn::subset_function& f, int count, const oracle_config& config) {
  const int k = f.size();
  if (k < 1 || k > 12)
    throw exhaustive_limit_error("sample_dominant_face: need 1..12 users");
  if (count < 0) throw std::invalid_argument("sample_dominant_face: bad count");
  std::mt19937_64 rng(config.seed);
  const mask_t all = f.universe();
  const double total = f(all);
  const double tol = 1e-9 * std::max(1.0, std::abs(total));

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  const auto greedy_vertex = [&]() {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> v(k);
    mask_t prefix = 0;
    double prev = f(0);
    for (int t = 0; t < k; ++t) {
      prefix |= mask_t{1} << perm[t];
      const double cur = f(prefix);
      v[perm[t]] = cur - prev;
      prev = cur;
    }
    return v;
  };

  std::vector<std::vector<double>> samples;
  samples.reserve(count);
  for (int n = 0; n < count; ++n) {
    bool accepted = false;
    for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
      const int parts = 1 + int(rng() % 4);
      std::vector<double> point(k, 0.0);
      std::vector<double> weights(parts);
      double weight_sum = 0.0;
      for (double& w : weights) {
        w = -std::log(std::max(uniform01(rng), 1e-300));
        weight_sum += w;
      }
      for (int p = 0; p < parts; ++p) {
        const std::vector<double> v = greedy_vertex();
        for (int i = 0; i < k; ++i) point[i] += weights[p] / weight_sum * v[i];
      }
      bool ok = std::abs(subset_sum(point, all) - total) <= tol;
      for (int i = 0; ok && i < k; ++i) ok = point[i] >= -tol;
      for (mask_t s = 1; ok; ++s) {
        if (subset_sum(point, s) > f(s) + tol) ok = false;
        if (s == all) break;
      }
      if (ok) {
        samples.push_back(std::move(point));
        accepted = true;
      }
    }
    if (!accepted)
      throw std::runtime_error(
          "sample_dominant_face: rejection sampling failed; the function does "
          "not look like a normalized polymatroid rank");
  }
  return samples;
}

std::vector<double> random_vector(std::mt19937_64& rng, int k, double lo, double hi) {
  if (k < 1 || !(hi >= lo)) throw std::invalid_argument("random_vector: bad range");
  std::vector<double> out(k);
  for (double& v : out) v = lo + uniform01(rng) * (hi - lo);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> random_majorization_pair(
    std::mt19937_64& rng, int k, double lo, double hi) {
  std::vector<double> spread = random_vector(rng, k, lo, hi);
  std::vector<double> even = spread;
  if (k > 1) {
    for (int t = 0; t < 3 * k; ++t) {
      const int i = int(rng() % std::uint64_t(k));
      int j = int(rng() % std::uint64_t(k - 1));
      if (j >= i) ++j;
      const double lambda = 0.5 * uniform01(rng);
      const double a = even[i], b = even[j];
      even[i] = (1.0 - lambda) * a + lambda * b;
      even[j] = lambda * a + (1.0 - lambda) * b;
    }
  }
  return {even, spread};
}

}  // namespace fairalloc::oracle
