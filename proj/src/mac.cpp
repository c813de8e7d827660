#include "fairalloc/mac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fairalloc::mac {

namespace {

constexpr int max_dimension = 32;

// Dense symmetric positive-definite machinery, row-major n x n, n <= 32.
// In-place lower Cholesky factor; returns false if a pivot is nonpositive.
bool cholesky(std::vector<double>& a, int n) {
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      double s = a[i * n + j];
      for (int t = 0; t < j; ++t) s -= a[i * n + t] * a[j * n + t];
      if (i == j) {
        if (!(s > 0.0)) return false;
        a[j * n + j] = std::sqrt(s);
      } else {
        a[i * n + j] = s / a[j * n + j];
      }
    }
  }
  return true;
}

double log_det_from_cholesky(const std::vector<double>& l, int n) {
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += std::log(l[j * n + j]);
  return 2.0 * sum;
}

// Solve (L L^T) z = b given the lower factor.
std::vector<double> cholesky_solve(const std::vector<double>& l, int n,
                                   const std::vector<double>& b) {
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int t = 0; t < i; ++t) s -= l[i * n + t] * y[t];
    y[i] = s / l[i * n + i];
  }
  std::vector<double> z(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int t = i + 1; t < n; ++t) s -= l[t * n + i] * z[t];
    z[i] = s / l[i * n + i];
  }
  return z;
}

// I + (1/noise) * sum over users in mask of P_i s_i s_i^T.
std::vector<double> gram_matrix(const vector_mac& ch, mask_t users) {
  const int n = static_cast<int>(ch.signatures.front().size());
  std::vector<double> m(n * n, 0.0);
  for (int j = 0; j < n; ++j) m[j * n + j] = 1.0;
  for (mask_t bits = users; bits; bits &= bits - 1) {
    const int i = std::countr_zero(bits);
    const double w = ch.powers[i] / ch.noise;
    const std::vector<double>& s = ch.signatures[i];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m[r * n + c] += w * s[r] * s[c];
  }
  return m;
}

// Relabeling of a subset function: new label j stands for old label order[j].
setfn::subset_function relabel(const setfn::subset_function& f,
                               const std::vector<int>& order) {
  return setfn::subset_function(f.size(), [f, order](mask_t local) {
    mask_t original = 0;
    for (mask_t bits = local; bits; bits &= bits - 1)
      original |= mask_t{1} << order[std::countr_zero(bits)];
    return f(original);
  });
}

mask_t map_back(mask_t local, const std::vector<int>& order) {
  mask_t original = 0;
  for (mask_t bits = local; bits; bits &= bits - 1)
    original |= mask_t{1} << order[std::countr_zero(bits)];
  return original;
}

// Undo a relabeled solve: rates and chain masks back to original labels.
maxmin::allocation_result restore_labels(maxmin::allocation_result sorted,
                                         const std::vector<int>& order) {
  maxmin::allocation_result out = sorted;
  for (std::size_t j = 0; j < order.size(); ++j)
    out.rates[order[j]] = sorted.rates[j];
  if (sorted.disagreement) {
    for (std::size_t j = 0; j < order.size(); ++j)
      (*out.disagreement)[order[j]] = (*sorted.disagreement)[j];
  }
  for (std::size_t level = 0; level < sorted.bottleneck_chain.size(); ++level)
    out.bottleneck_chain[level] = map_back(sorted.bottleneck_chain[level], order);
  return out;
}

std::vector<int> sort_by_singletons(const setfn::subset_function& f) {
  std::vector<int> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&f](int a, int b) {
    return f(mask_t{1} << a) < f(mask_t{1} << b);
  });
  return order;
}

maxmin::allocation_result symmetric_point(const setfn::subset_function& f,
                                          bool ordered) {
  maxmin::allocation_result result;
  result.objective = maxmin::criterion::symmetric;
  if (ordered) {
    const std::vector<int> order = sort_by_singletons(f);
    const maxmin::symmetric_result sym =
        maxmin::symmetric_capacity(relabel(f, order), maxmin::solve_mode::ordered);
    result.rates.assign(f.size(), sym.per_user);
    result.sum_rate = sym.total;
    result.bottleneck_chain = {map_back(sym.tight_set, order)};
  } else {
    const maxmin::symmetric_result sym =
        maxmin::symmetric_capacity(f, maxmin::solve_mode::exhaustive);
    result.rates.assign(f.size(), sym.per_user);
    result.sum_rate = sym.total;
    result.bottleneck_chain = {sym.tight_set};
  }
  return result;
}

maxmin::allocation_result maxmin_point(const setfn::subset_function& f,
                                       bool ordered) {
  if (!ordered)
    return maxmin::maxmin_allocate(f, maxmin::solve_mode::exhaustive);
  const std::vector<int> order = sort_by_singletons(f);
  return restore_labels(
      maxmin::maxmin_allocate(relabel(f, order), maxmin::solve_mode::ordered),
      order);
}

}  // namespace

double shannon(double x) {
  if (!(x >= 0.0)) throw std::domain_error("shannon: SNR must be nonnegative");
  return 0.5 * std::log1p(x);
}

void validate(const scalar_mac& ch) {
  if (ch.powers.empty()) throw std::invalid_argument("scalar_mac: no users");
  if (!(ch.noise > 0.0)) throw std::invalid_argument("scalar_mac: noise must be positive");
  for (double p : ch.powers)
    if (!(p >= 0.0)) throw std::invalid_argument("scalar_mac: powers must be nonnegative");
}

void validate(const vector_mac& ch) {
  if (ch.powers.empty()) throw std::invalid_argument("vector_mac: no users");
  if (!(ch.noise > 0.0)) throw std::invalid_argument("vector_mac: noise must be positive");
  for (double p : ch.powers)
    if (!(p >= 0.0)) throw std::invalid_argument("vector_mac: powers must be nonnegative");
  if (ch.signatures.size() != ch.powers.size())
    throw std::invalid_argument("vector_mac: one signature per user required");
  const std::size_t dim = ch.signatures.front().size();
  if (dim < 1) throw std::invalid_argument("vector_mac: empty signature");
  if (dim > max_dimension)
    throw std::invalid_argument("vector_mac: signature dimension exceeds " +
                                std::to_string(max_dimension));
  for (const std::vector<double>& s : ch.signatures) {
    if (s.size() != dim)
      throw std::invalid_argument("vector_mac: signatures must share one dimension");
    double norm2 = 0.0;
    for (double v : s) norm2 += v * v;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9)
      throw std::invalid_argument("vector_mac: signatures must have unit norm");
  }
}

setfn::subset_function scalar_rank(const scalar_mac& ch) {
  validate(ch);
  const std::vector<double> powers = ch.powers;
  const double noise = ch.noise;
  return setfn::subset_function(static_cast<int>(powers.size()),
                                [powers, noise](mask_t s) {
                                  double total = 0.0;
                                  for (mask_t bits = s; bits; bits &= bits - 1)
                                    total += powers[std::countr_zero(bits)];
                                  return shannon(total / noise);
                                });
}

setfn::subset_function vector_rank(const vector_mac& ch) {
  validate(ch);
  const vector_mac channel = ch;
  const int n = static_cast<int>(ch.signatures.front().size());
  return setfn::subset_function(
      static_cast<int>(ch.powers.size()), [channel, n](mask_t s) {
        std::vector<double> m = gram_matrix(channel, s);
        if (!cholesky(m, n))
          throw std::logic_error("vector_rank: factorization of an SPD matrix failed");
        return 0.5 * log_det_from_cholesky(m, n);
      });
}

std::vector<double> tin_rates(const scalar_mac& ch) {
  validate(ch);
  const double total = std::accumulate(ch.powers.begin(), ch.powers.end(), 0.0);
  std::vector<double> d(ch.powers.size());
  for (std::size_t i = 0; i < ch.powers.size(); ++i)
    d[i] = shannon(ch.powers[i] / (ch.noise + total - ch.powers[i]));
  return d;
}

std::vector<double> mmse_rates(const vector_mac& ch) {
  validate(ch);
  const int k = static_cast<int>(ch.powers.size());
  const int n = static_cast<int>(ch.signatures.front().size());
  std::vector<double> d(k);
  for (int i = 0; i < k; ++i) {
    const mask_t others = full_mask(k) & ~(mask_t{1} << i);
    std::vector<double> m = gram_matrix(ch, others);
    if (!cholesky(m, n))
      throw std::logic_error("mmse_rates: factorization of an SPD matrix failed");
    const std::vector<double> z = cholesky_solve(m, n, ch.signatures[i]);
    double quad = 0.0;
    for (int t = 0; t < n; ++t) quad += ch.signatures[i][t] * z[t];
    d[i] = shannon(ch.powers[i] * quad / ch.noise);
  }
  return d;
}

maxmin::allocation_result solve(const scalar_mac& ch, const solve_spec& spec,
                                solve_mode mode) {
  validate(ch);
  const setfn::subset_function f = scalar_rank(ch);
  // Scalar rank functions are generalized symmetric, so the prefix fast path
  // is always sound: automatic means ordered here.
  const bool ordered = mode != solve_mode::exhaustive;
  switch (spec.objective) {
    case maxmin::criterion::symmetric:
      return symmetric_point(f, ordered);
    case maxmin::criterion::maxmin_pf:
      return maxmin_point(f, ordered);
    case maxmin::criterion::nbs: {
      if (!spec.disagreement && ordered) {
        const double noise = ch.noise;
        return maxmin::nbs_canonical_gensym(
            {.phi = [noise](double q) { return shannon(q / noise); },
             .loads = ch.powers});
      }
      const std::vector<double> d =
          spec.disagreement ? *spec.disagreement : maxmin::canonical_disagreement(f);
      return maxmin::nash_bargaining(f, d, maxmin::solve_mode::exhaustive);
    }
  }
  throw std::logic_error("solve: unknown objective");
}

maxmin::allocation_result solve(const vector_mac& ch, const solve_spec& spec,
                                solve_mode mode) {
  validate(ch);
  const setfn::subset_function f = vector_rank(ch);
  const int k = static_cast<int>(ch.powers.size());
  bool ordered = false;
  if (mode == solve_mode::ordered) {
    const setfn::property_witness w = setfn::has_order_property(f);
    if (!w.holds)
      throw std::invalid_argument(
          "solve: ordered mode requires the order property, which this "
          "channel's rank function lacks");
    ordered = true;
  } else if (mode == solve_mode::automatic && k <= 10) {
    ordered = setfn::has_order_property(f).holds;
  }
  switch (spec.objective) {
    case maxmin::criterion::symmetric:
      return symmetric_point(f, ordered);
    case maxmin::criterion::maxmin_pf:
      return maxmin_point(f, ordered);
    case maxmin::criterion::nbs: {
      // The translated function is not guaranteed prefix-friendly even when
      // the rank function is, so bargaining always runs exhaustively.
      const std::vector<double> d =
          spec.disagreement ? *spec.disagreement : maxmin::canonical_disagreement(f);
      return maxmin::nash_bargaining(f, d, maxmin::solve_mode::exhaustive);
    }
  }
  throw std::logic_error("solve: unknown objective");
}

}  // namespace fairalloc::mac
