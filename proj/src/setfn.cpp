#include "fairalloc/setfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <unordered_map>

namespace fairalloc::setfn {

struct subset_function::state {
  int k;
  eval_fn eval;
  mutable std::shared_mutex mu;
  mutable std::unordered_map<mask_t, double> memo;
};

subset_function::subset_function(int k, eval_fn eval) {
  if (k < 0 || k > 31) throw std::invalid_argument("ground set size must be in [0, 31]");
  if (!eval) throw std::invalid_argument("evaluation callback must be non-empty");
  state_ = std::make_shared<state>();
  state_->k = k;
  state_->eval = std::move(eval);
}

int subset_function::size() const noexcept { return state_->k; }

mask_t subset_function::universe() const noexcept { return full_mask(state_->k); }

double subset_function::operator()(mask_t subset) const {
  if (subset & ~universe())
    throw std::invalid_argument("subset has elements outside the ground set");
  {
    std::shared_lock lock(state_->mu);
    auto it = state_->memo.find(subset);
    if (it != state_->memo.end()) return it->second;
  }
  double value = state_->eval(subset);
  std::unique_lock lock(state_->mu);
  return state_->memo.emplace(subset, value).first->second;
}

namespace {

void require_scan_size(const subset_function& f, int limit, const char* op) {
  if (f.size() > limit)
    throw exhaustive_limit_error(std::string(op) + ": ground set of " +
                                 std::to_string(f.size()) +
                                 " exceeds the exhaustive limit of " +
                                 std::to_string(limit));
}

double subset_sum(std::span<const double> r, mask_t s) {
  double total = 0.0;
  while (s) {
    int i = std::countr_zero(s);
    total += r[static_cast<std::size_t>(i)];
    s &= s - 1;
  }
  return total;
}

}  // namespace

property_witness is_submodular(const subset_function& f, double tol) {
  require_scan_size(f, max_exhaustive_users, "is_submodular");
  const mask_t all = f.universe();
  // The condition is symmetric in (S, T), so the lexicographically first
  // violating pair has S <= T and the triangular scan finds exactly it.
  for (mask_t s = 0; ; ++s) {
    for (mask_t t = s; ; ++t) {
      if (f(s) + f(t) < f(s | t) + f(s & t) - tol)
        return {.holds = false, .sets = {s, t}, .element = -1};
      if (t == all) break;
    }
    if (s == all) break;
  }
  return {};
}

property_witness is_monotone(const subset_function& f, double tol) {
  require_scan_size(f, max_exhaustive_users, "is_monotone");
  const mask_t all = f.universe();
  for (mask_t s = 0; ; ++s) {
    for (int i = 0; i < f.size(); ++i) {
      if (contains(s, i)) continue;
      if (f(s | (mask_t{1} << i)) < f(s) - tol)
        return {.holds = false, .sets = {s}, .element = i};
    }
    if (s == all) break;
  }
  return {};
}

property_witness has_order_property(const subset_function& f, double tol) {
  require_scan_size(f, max_triple_scan_users, "has_order_property");
  const int k = f.size();
  const mask_t all = f.universe();
  struct entry {
    double value;
    double joined;  // f(A u C)
    mask_t set;
  };
  std::vector<std::vector<entry>> by_size(static_cast<std::size_t>(k) + 1);
  for (mask_t c = 0; ; ++c) {
    const mask_t comp = all & ~c;
    for (auto& bucket : by_size) bucket.clear();
    // Enumerate subsets of the complement of C (including the empty set,
    // which lands in the size-0 bucket and is skipped below).
    mask_t a = comp;
    while (true) {
      by_size[static_cast<std::size_t>(popcount(a))].push_back(
          {f(a), f(a | c), a});
      if (a == 0) break;
      a = (a - 1) & comp;
    }
    for (int size = 1; size <= popcount(comp); ++size) {
      auto& bucket = by_size[static_cast<std::size_t>(size)];
      if (bucket.size() < 2) continue;
      std::sort(bucket.begin(), bucket.end(), [](const entry& l, const entry& r) {
        if (l.value != r.value) return l.value < r.value;
        if (l.joined != r.joined) return l.joined > r.joined;
        return l.set < r.set;
      });
      // Ascending in f(A), and joined descending within equal f(A) (either
      // side of an equal-value pair may play A, so the group's largest joined
      // must lead): any earlier element plays A against any later B, and a
      // violation exists iff some joined value drops more than tol below the
      // running maximum.
      std::size_t arg_max = 0;
      for (std::size_t j = 1; j < bucket.size(); ++j) {
        if (bucket[j].joined < bucket[arg_max].joined - tol)
          return {.holds = false,
                  .sets = {bucket[arg_max].set, bucket[j].set, c},
                  .element = -1};
        if (bucket[j].joined > bucket[arg_max].joined) arg_max = j;
      }
    }
    if (c == all) break;
  }
  return {};
}

subset_function contract(const subset_function& f, mask_t s0) {
  if (s0 & ~f.universe())
    throw std::invalid_argument("contract: set has elements outside the ground set");
  std::vector<int> remaining;
  for (int i = 0; i < f.size(); ++i)
    if (!contains(s0, i)) remaining.push_back(i);
  const int k = static_cast<int>(remaining.size());
  return subset_function(k, [f, s0, remaining](mask_t local) {
    mask_t original = 0;
    mask_t bits = local;
    while (bits) {
      int j = std::countr_zero(bits);
      original |= mask_t{1} << remaining[static_cast<std::size_t>(j)];
      bits &= bits - 1;
    }
    return f(original | s0) - f(s0);
  });
}

min_ratio_result min_ratio_exhaustive(const subset_function& f, double tie_window) {
  require_scan_size(f, max_exhaustive_users, "min_ratio_exhaustive");
  if (f.size() == 0)
    throw std::invalid_argument("min_ratio_exhaustive: empty ground set");
  const mask_t all = f.universe();
  min_ratio_result best{0, 0.0};
  int best_card = 0;
  for (mask_t s = 1; ; ++s) {
    const int card = popcount(s);
    const double value = f(s) / card;
    if (best.set == 0 || value < best.value - tie_window) {
      best = {s, value};
      best_card = card;
    } else if (value <= best.value + tie_window &&
               (card > best_card || (card == best_card && s < best.set))) {
      best = {s, value};
      best_card = card;
    }
    if (s == all) break;
  }
  return best;
}

prefix_ratio_result min_ratio_ordered(const subset_function& f,
                                      std::span<const int> order, bool debug,
                                      double tie_window) {
  const int k = f.size();
  if (static_cast<int>(order.size()) != k)
    throw std::invalid_argument("min_ratio_ordered: order must list every element once");
  mask_t seen = 0;
  for (int i : order) {
    if (i < 0 || i >= k || contains(seen, i))
      throw std::invalid_argument("min_ratio_ordered: order is not a permutation");
    seen |= mask_t{1} << i;
  }
  if (k == 0) throw std::invalid_argument("min_ratio_ordered: empty ground set");
  if (debug) {
    for (int i = 0; i + 1 < k; ++i) {
      const double lo = f(mask_t{1} << order[static_cast<std::size_t>(i)]);
      const double hi = f(mask_t{1} << order[static_cast<std::size_t>(i) + 1]);
      if (lo > hi + default_tol)
        throw std::logic_error("min_ratio_ordered: order does not sort singleton values");
    }
  }
  prefix_ratio_result best{0, 0.0};
  mask_t prefix = 0;
  for (int m = 1; m <= k; ++m) {
    prefix |= mask_t{1} << order[static_cast<std::size_t>(m) - 1];
    const double value = f(prefix) / m;
    // Strictly better, or a near-tie: the longer prefix wins either way.
    if (best.length == 0 || value <= best.value + tie_window) best = {m, value};
  }
  if (debug && k <= max_triple_scan_users) {
    const min_ratio_result full = min_ratio_exhaustive(f, tie_window);
    if (std::abs(full.value - best.value) > default_tol)
      throw std::logic_error("min_ratio_ordered: prefix minimum disagrees with exhaustive scan");
  }
  return best;
}

bool is_bottleneck(const subset_function& f, std::span<const double> r, mask_t s,
                   double tol) {
  if (static_cast<int>(r.size()) != f.size())
    throw std::invalid_argument("is_bottleneck: rate vector length mismatch");
  return std::abs(subset_sum(r, s) - f(s)) <= tol;
}

property_witness maxmin_certificate(const subset_function& f,
                                    std::span<const double> r, double tol) {
  require_scan_size(f, max_exhaustive_users, "maxmin_certificate");
  if (static_cast<int>(r.size()) != f.size())
    throw std::invalid_argument("maxmin_certificate: rate vector length mismatch");
  const mask_t all = f.universe();
  mask_t covered = 0;
  for (mask_t s = 1; ; ++s) {
    const double sum = subset_sum(r, s);
    const double value = f(s);
    if (sum > value + tol)
      throw std::invalid_argument("maxmin_certificate: rate vector violates a constraint");
    if (std::abs(sum - value) <= tol) {
      double top = -std::numeric_limits<double>::infinity();
      for (mask_t bits = s; bits;) {
        int i = std::countr_zero(bits);
        top = std::max(top, r[static_cast<std::size_t>(i)]);
        bits &= bits - 1;
      }
      for (mask_t bits = s; bits;) {
        int i = std::countr_zero(bits);
        if (r[static_cast<std::size_t>(i)] >= top - tol) covered |= mask_t{1} << i;
        bits &= bits - 1;
      }
    }
    if (s == all) break;
  }
  if (covered == all) return {};
  const int missing = std::countr_zero(static_cast<mask_t>(~covered & all));
  return {.holds = false, .sets = {}, .element = missing};
}

}  // namespace fairalloc::setfn
