#include "fairalloc/bc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fairalloc/majorization.hpp"

namespace fairalloc::bc {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> to_decode_order(std::span<const double> per_user,
                                    const std::vector<int>& order) {
  std::vector<double> out(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) out[p] = per_user[order[p]];
  return out;
}

std::vector<double> to_original_order(const std::vector<double>& per_position,
                                      const std::vector<int>& order) {
  std::vector<double> out(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) out[order[p]] = per_position[p];
  return out;
}

// Everything the forward propagation knows about one trial x_1.
struct probe {
  int verdict = 0;  // -1: x_1 too small, +1: too large, 0: defect is finite
  double chi = 0.0;                 // last-coupling defect, meaningful when verdict == 0
  std::vector<double> x, r;         // decoding order; filled when verdict == 0
};

int probe_sign(const probe& p) {
  if (p.verdict != 0) return p.verdict;
  return p.chi > 0.0 ? 1 : (p.chi < 0.0 ? -1 : 0);
}

// Fix x_1, chain the stationarity couplings forward to recover every rate
// and split, and report the defect of the final coupling. Rates at positions
// 1..k-2 satisfy their couplings exactly by construction; position k-1 takes
// whatever power is left, and its coupling defect is the root function.
probe propagate(const std::vector<double>& ns, double pt,
                std::span<const utility> util, double x1) {
  const int k = static_cast<int>(ns.size());
  probe out;
  out.x.assign(k, quiet_nan);
  out.r.assign(k, quiet_nan);
  out.r[0] = 0.5 * std::log1p(x1 * pt / ns[0]);
  double d0 = util[0].deriv(out.r[0]);
  if (!(d0 > 0.0) || !std::isfinite(d0)) {
    out.verdict = -1;  // first rate at or below its utility's domain edge
    return out;
  }
  out.x[0] = x1;
  for (int i = 0; i + 2 < k; ++i) {
    const double above = ns[i + 1] + out.x[i] * pt;
    const double below = ns[i] + out.x[i] * pt;
    const double y = util[i].deriv(out.r[i]) * above / below;
    out.r[i + 1] = util[i + 1].deriv_inverse(y);
    out.x[i + 1] = out.x[i] + above * std::expm1(2.0 * out.r[i + 1]) / pt;
    if (!(out.x[i + 1] <= 1.0)) {
      out.verdict = 1;  // power budget exhausted before the last position
      return out;
    }
  }
  out.x[k - 1] = 1.0;
  out.r[k - 1] =
      0.5 * std::log1p((1.0 - out.x[k - 2]) * pt / (ns[k - 1] + out.x[k - 2] * pt));
  const double dk = util[k - 1].deriv(out.r[k - 1]);
  if (!(dk > 0.0) || !std::isfinite(dk)) {
    out.verdict = 1;  // last rate at or below its domain edge: x_1 took too much
    return out;
  }
  out.chi = dk * (ns[k - 2] + out.x[k - 2] * pt) -
            util[k - 2].deriv(out.r[k - 2]) * (ns[k - 1] + out.x[k - 2] * pt);
  return out;
}

// Merged geometric + uniform trial grid over (0, 1], with 0 prepended as a
// guaranteed "too small" anchor.
std::vector<double> scan_grid(int points, double geo_floor) {
  std::vector<double> grid;
  grid.push_back(0.0);
  const int half = std::max(2, points / 2);
  for (int j = 0; j < half; ++j)
    grid.push_back(std::exp(std::log(geo_floor) * (1.0 - double(j) / (half - 1))));
  for (int j = 1; j <= half; ++j) grid.push_back(double(j) / half);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<double> fine_grid(double resolution, double geo_floor) {
  std::vector<double> grid;
  grid.push_back(0.0);
  for (int j = 0; j < 1024; ++j)
    grid.push_back(std::exp(std::log(geo_floor) * (1.0 - double(j) / 1023.0)));
  const int n = static_cast<int>(std::ceil(1.0 / resolution));
  for (int j = 1; j <= n; ++j) grid.push_back(std::min(1.0, j * resolution));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct bracket {
  double lo = 0.0, hi = 1.0;
  bool found = false;
  probe exact;       // set when a scan point hit the root dead on
  bool exact_hit = false;
};

bracket find_bracket(const std::vector<double>& ns, double pt,
                     std::span<const utility> util,
                     const std::vector<double>& grid) {
  bracket b;
  double prev_x = grid.front();
  int prev_sign = probe_sign(propagate(ns, pt, util, prev_x));
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const probe p = propagate(ns, pt, util, grid[j]);
    const int sign = probe_sign(p);
    if (sign == 0) {
      b.exact = p;
      b.exact_hit = true;
      b.found = true;
      return b;
    }
    if (prev_sign < 0 && sign > 0) {
      b.lo = prev_x;
      b.hi = grid[j];
      b.found = true;
      return b;
    }
    prev_x = grid[j];
    prev_sign = sign;
  }
  return b;
}

bc_allocation finish(const bc_channel& ch, const probe& p, criterion objective,
                     int iterations, std::span<const utility> util) {
  const std::vector<double>& ns = ch.sorted_noise();
  const double pt = ch.total_power();
  const int k = ch.users();
  bc_allocation out;
  out.objective = objective;
  out.x = p.x;
  out.iterations = iterations;
  out.gamma = quiet_nan;
  std::vector<double> powers(k), sinr(k);
  double residual = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x_prev = i == 0 ? 0.0 : p.x[i - 1];
    powers[i] = (p.x[i] - x_prev) * pt;
    sinr[i] = powers[i] / (ns[i] + x_prev * pt);
    if (i + 1 < k) {
      const double defect =
          util[i + 1].deriv(p.r[i + 1]) * (ns[i] + p.x[i] * pt) -
          util[i].deriv(p.r[i]) * (ns[i + 1] + p.x[i] * pt);
      residual = std::max(residual, std::abs(defect));
    }
  }
  out.residual = residual;
  out.rates = to_original_order(p.r, ch.decode_order());
  out.powers = to_original_order(powers, ch.decode_order());
  out.sinr = to_original_order(sinr, ch.decode_order());
  return out;
}

}  // namespace

bc_channel::bc_channel(std::vector<double> noise, double total_power)
    : total_power_(total_power) {
  if (noise.empty()) throw std::invalid_argument("bc_channel: no users");
  for (double n : noise)
    if (!(n > 0.0)) throw std::invalid_argument("bc_channel: noise must be positive");
  if (!(total_power > 0.0))
    throw std::invalid_argument("bc_channel: total power must be positive");
  order_.resize(noise.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&noise](int a, int b) { return noise[a] < noise[b]; });
  sorted_.resize(noise.size());
  for (std::size_t p = 0; p < noise.size(); ++p) sorted_[p] = noise[order_[p]];
}

double g_gamma_inverse_entry(double gamma, int i, int j) {
  if (i < 1 || j < 1) throw std::invalid_argument("g_gamma_inverse_entry: 1-based indices");
  if (!(gamma >= 0.0)) throw std::invalid_argument("g_gamma_inverse_entry: gamma < 0");
  if (i < j) return 0.0;
  if (i == j) return gamma;
  return gamma * gamma * std::pow(1.0 + gamma, i - j - 1);
}

double theta_column_sum(double gamma, int j, int k) {
  if (j < 1 || k < 1 || j > k)
    throw std::invalid_argument("theta_column_sum: need 1 <= j <= k");
  if (!(gamma >= 0.0)) throw std::invalid_argument("theta_column_sum: gamma < 0");
  return gamma * std::pow(1.0 + gamma, k - j);
}

double phi_total_power(std::span<const double> noise, double gamma) {
  if (noise.empty()) throw std::invalid_argument("phi_total_power: no users");
  if (!(gamma >= 0.0)) throw std::invalid_argument("phi_total_power: gamma < 0");
  // theta_k = gamma, theta_{j-1} = theta_j * (1 + gamma).
  double theta = gamma;
  double total = 0.0;
  for (std::size_t j = noise.size(); j-- > 0;) {
    total += noise[j] * theta;
    theta *= 1.0 + gamma;
  }
  return total;
}

std::vector<double> boundary_rates(const bc_channel& ch, std::span<const double> x) {
  const int k = ch.users();
  if (static_cast<int>(x.size()) != k)
    throw std::invalid_argument("boundary_rates: split vector length mismatch");
  double prev = 0.0;
  for (double v : x) {
    if (!(v >= prev - 1e-12) || !(v <= 1.0 + 1e-12))
      throw std::invalid_argument("boundary_rates: splits must be nondecreasing in [0, 1]");
    prev = v;
  }
  if (std::abs(x[k - 1] - 1.0) > 1e-12)
    throw std::invalid_argument("boundary_rates: final split must be 1");
  const std::vector<double>& ns = ch.sorted_noise();
  const double pt = ch.total_power();
  std::vector<double> rates(k);
  prev = 0.0;
  for (int i = 0; i < k; ++i) {
    const double cur = std::max(prev, std::min(x[i], 1.0));
    rates[i] = 0.5 * std::log1p((cur - prev) * pt / (ns[i] + prev * pt));
    prev = cur;
  }
  return to_original_order(rates, ch.decode_order());
}

bc_allocation symmetric_allocate(const bc_channel& ch) {
  const std::vector<double>& ns = ch.sorted_noise();
  const double pt = ch.total_power();
  const int k = ch.users();

  double lo = 0.0, hi = 1.0;
  while (phi_total_power(ns, hi) < pt) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("symmetric_allocate: SINR overflow");
  }
  double gamma = hi;
  int iterations = 0;
  for (; iterations < 200; ++iterations) {
    gamma = 0.5 * (lo + hi);
    const double need = phi_total_power(ns, gamma);
    if (std::abs(need - pt) <= 1e-10 * pt) break;
    (need < pt ? lo : hi) = gamma;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }

  // Split power by the common-SINR recurrence, then normalize the final
  // split to exactly 1 (the bisection residual is <= 1e-10 relative).
  bc_allocation out;
  out.objective = criterion::symmetric;
  out.gamma = gamma;
  out.iterations = iterations;
  out.residual = std::abs(phi_total_power(ns, gamma) - pt);
  out.x.assign(k, 1.0);
  double spent = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    spent += gamma * (ns[i] + spent);
    out.x[i] = spent / pt;
  }
  std::vector<double> powers(k), rates(k), sinr(k);
  for (int i = 0; i < k; ++i) {
    const double x_prev = i == 0 ? 0.0 : out.x[i - 1];
    powers[i] = (out.x[i] - x_prev) * pt;
    sinr[i] = powers[i] / (ns[i] + x_prev * pt);
    rates[i] = 0.5 * std::log1p(gamma);
  }
  out.rates = to_original_order(rates, ch.decode_order());
  out.powers = to_original_order(powers, ch.decode_order());
  out.sinr = to_original_order(sinr, ch.decode_order());
  return out;
}

bc_allocation utility_allocate(const bc_channel& ch,
                               std::span<const utility> utilities,
                               const root_options& options) {
  const int k = ch.users();
  if (static_cast<int>(utilities.size()) != k)
    throw std::invalid_argument("utility_allocate: one utility per user required");
  for (const utility& u : utilities)
    if (!u.deriv || !u.deriv_inverse)
      throw std::invalid_argument("utility_allocate: empty utility callback");
  const std::vector<double>& ns = ch.sorted_noise();
  const double pt = ch.total_power();

  // Utilities follow their users into decoding order.
  std::vector<utility> util(utilities.size());
  for (std::size_t p = 0; p < util.size(); ++p)
    util[p] = utilities[ch.decode_order()[p]];

  if (k == 1) {
    probe p;
    p.x = {1.0};
    p.r = {0.5 * std::log1p(pt / ns[0])};
    const double d = util[0].deriv(p.r[0]);
    if (!(d > 0.0) || !std::isfinite(d))
      throw infeasible_disagreement_error(
          "utility_allocate: single-user rate is outside the utility domain");
    return finish(ch, p, criterion::pf, 0, util);
  }

  bracket b = find_bracket(ns, pt, util, scan_grid(options.coarse_points, 1e-12));
  if (!b.found)
    b = find_bracket(ns, pt, util, fine_grid(options.fine_resolution, 1e-14));
  if (!b.found)
    throw root_search_error(
        "utility_allocate: no sign change for the first split in (0, 1] at "
        "the fallback scan resolution");
  if (b.exact_hit) return finish(ch, b.exact, criterion::pf, 0, util);

  double lo = b.lo, hi = b.hi;
  int iterations = 0;
  probe best;
  bool have_best = false;
  while (hi - lo > options.x_tol && iterations < 200) {
    ++iterations;
    const double mid = 0.5 * (lo + hi);
    const probe p = propagate(ns, pt, util, mid);
    const int sign = probe_sign(p);
    if (p.verdict == 0 &&
        (!have_best || std::abs(p.chi) < std::abs(best.chi))) {
      best = p;
      have_best = true;
    }
    if (sign == 0) break;
    (sign < 0 ? lo : hi) = mid;
  }
  const probe final_probe = propagate(ns, pt, util, 0.5 * (lo + hi));
  if (final_probe.verdict == 0 &&
      (!have_best || std::abs(final_probe.chi) <= std::abs(best.chi))) {
    best = final_probe;
    have_best = true;
  }
  if (!have_best)
    throw infeasible_disagreement_error(
        "utility_allocate: no feasible split; the domain window is empty");
  return finish(ch, best, criterion::pf, iterations, util);
}

bc_allocation pf_allocate(const bc_channel& ch, const root_options& options) {
  std::vector<utility> log_util(ch.users());
  for (utility& u : log_util) {
    u.deriv = [](double r) { return 1.0 / r; };
    u.deriv_inverse = [](double y) { return 1.0 / y; };
  }
  bc_allocation out = utility_allocate(ch, log_util, options);
  out.objective = criterion::pf;
  return out;
}

bc_allocation nbs_allocate(const bc_channel& ch, std::span<const double> d,
                           const root_options& options) {
  const int k = ch.users();
  if (static_cast<int>(d.size()) != k)
    throw std::invalid_argument("nbs_allocate: disagreement length mismatch");
  for (double v : d)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("nbs_allocate: disagreement rates must be >= 0");
  std::vector<utility> shifted(k);
  for (int i = 0; i < k; ++i) {
    const double di = d[i];
    shifted[i].deriv = [di](double r) { return 1.0 / (r - di); };
    shifted[i].deriv_inverse = [di](double y) { return di + 1.0 / y; };
  }
  bc_allocation out;
  try {
    out = utility_allocate(ch, shifted, options);
  } catch (const root_search_error&) {
    throw infeasible_disagreement_error(
        "nbs_allocate: no boundary point dominates the disagreement rates");
  }
  for (int i = 0; i < k; ++i)
    if (!(out.rates[i] > d[i]))
      throw infeasible_disagreement_error(
          "nbs_allocate: disagreement point is not strictly dominated");
  out.objective = criterion::nbs;
  out.disagreement.emplace(d.begin(), d.end());
  return out;
}

double bc_sum_capacity(const bc_channel& ch) {
  return 0.5 * std::log1p(ch.total_power() / ch.sorted_noise().front());
}

schur_report schur_explore_pf(std::span<const schur_case> cases) {
  schur_report report;
  for (const schur_case& c : cases) {
    if (c.noise_even.size() != c.noise_spread.size())
      throw std::invalid_argument("schur_explore_pf: noise vectors differ in length");
    if (!majorization::majorized_by(c.noise_even, c.noise_spread))
      throw std::invalid_argument(
          "schur_explore_pf: noise_even must be majorized by noise_spread");
    schur_record rec;
    rec.input = c;
    rec.pf_sum_even = 0.0;
    rec.pf_sum_spread = 0.0;
    const bc_allocation even = pf_allocate(bc_channel(c.noise_even, c.total_power));
    const bc_allocation spread = pf_allocate(bc_channel(c.noise_spread, c.total_power));
    for (double r : even.rates) rec.pf_sum_even += r;
    for (double r : spread.rates) rec.pf_sum_spread += r;
    rec.consistent = rec.pf_sum_spread >= rec.pf_sum_even - 1e-12;
    report.consistent_count += rec.consistent ? 1 : 0;
    report.records.push_back(std::move(rec));
  }
  return report;
}

}  // namespace fairalloc::bc
