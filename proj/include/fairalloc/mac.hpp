#pragma once

#include <optional>
#include <vector>

#include "fairalloc/maxmin.hpp"
#include "fairalloc/setfn.hpp"

namespace fairalloc::mac {

// Multiple-access channel with scalar inputs: user i transmits at power
// powers[i] >= 0 into additive noise of power noise > 0. Rates are in nats.
struct scalar_mac {
  std::vector<double> powers;
  double noise = 1.0;
};

// Multiple-access channel with unit-norm signature vectors: user i transmits
// at power powers[i] along signatures[i] (length dimensions, norm 1 within
// 1e-9) into white noise of power noise per dimension.
struct vector_mac {
  std::vector<double> powers;
  std::vector<std::vector<double>> signatures;  // one column per user
  double noise = 1.0;
};

// 0.5 * ln(1 + x), the Gaussian capacity of an SNR. Throws std::domain_error
// for x < 0.
double shannon(double x);

// Validate channel parameters; throws std::invalid_argument on violation.
void validate(const scalar_mac& ch);
void validate(const vector_mac& ch);

// Capacity-region rank function f(S) = shannon(P(S)/N). Submodular, monotone,
// generalized symmetric (so it has the order property).
setfn::subset_function scalar_rank(const scalar_mac& ch);

// Rank function f(S) = 0.5 * ln det(I + (1/N) * sum_{i in S} P_i s_i s_i^T),
// via a dense Cholesky factorization (signature dimension <= 32). Submodular
// and monotone; the order property is not guaranteed.
setfn::subset_function vector_rank(const vector_mac& ch);

// Rate of each user when all others are treated as noise:
// shannon(P_i / (N + P(everyone else))). Equals the canonical disagreement
// point of scalar_rank.
std::vector<double> tin_rates(const scalar_mac& ch);

// Rate of each user behind a linear MMSE front end:
// shannon((P_i/N) * s_i^T M_i^{-1} s_i) with
// M_i = I + (1/N) * sum_{j != i} P_j s_j s_j^T (outer products; this is what
// makes the identity with vector_rank's canonical disagreement hold). Equals
// the canonical disagreement point of vector_rank.
std::vector<double> mmse_rates(const vector_mac& ch);

enum class solve_mode { automatic, exhaustive, ordered };

// What to solve for. For criterion nbs, disagreement empty means the
// canonical point; otherwise it is the per-user disagreement rate.
struct solve_spec {
  maxmin::criterion objective = maxmin::criterion::maxmin_pf;
  std::optional<std::vector<double>> disagreement;
};

// Fair operating point of a channel's capacity region. Mode automatic picks
// the prefix-only fast path for scalar channels (sorting users by power
// internally and mapping results back) and for vector channels that pass the
// order-property scan; everything else runs exhaustively. Forcing ordered
// mode on a vector channel re-checks the order property first. The scalar
// canonical bargaining point uses the O(k^2) generalized-symmetric path
// outside exhaustive mode.
maxmin::allocation_result solve(const scalar_mac& ch, const solve_spec& spec,
                                solve_mode mode = solve_mode::automatic);
maxmin::allocation_result solve(const vector_mac& ch, const solve_spec& spec,
                                solve_mode mode = solve_mode::automatic);

}  // namespace fairalloc::mac
