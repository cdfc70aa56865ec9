#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "calkin/seq.hpp"

namespace calkin::spaces {

// Band-counting data of a decreasing sequence at base omega:
//   K_n  = #{m : omega^(n+1) < a_m <= omega^n}
//   K~_n = sum_{i<=n} K_i
//   M_n  = sum_{i+j=n} K_i K_j
//   M~_n = sum_{i<=n} M_i
// Counts are held as doubles: exact below 2^53, +inf past the double range
// (log-inverse tails are doubly exponential). Vectors run n = 0..depth.
struct CalkinProfile {
    double omega = 0.0;
    int depth = 0;
    std::vector<double> band;             // K_n
    std::vector<double> band_cumulative;  // K~_n
    std::vector<double> conv;             // M_n
    std::vector<double> conv_cumulative;  // M~_n
};

// Exact band counts for a normalized sequence (a_1 <= 1). Formula-backed
// sequences are counted in closed form; explicit ones by scanning; raw
// prefixes must reach below omega^(depth+1) or InsufficientPrefix is
// raised. NotNormalized when a_1 > 1.
CalkinProfile profile(const seq::DecreasingSeq& a, double omega, int depth);

struct DivergenceRow {
    int r;
    int n;
    double ratio;
};

struct StabilityVerdict {
    enum class Decision { StableCertified, NotStableAtHorizon, Inconclusive };
    Decision decision = Decision::Inconclusive;
    int r = 0;           // certified shift, when stable
    double constant = 0; // sup_n M~_n / K~_{n+r} for that shift
    int horizon = 0;
    std::vector<DivergenceRow> table;  // ratio vs n, for every scanned r
};

// Horizon decision of the tensor-square criterion: the principal space of
// `a` is stable iff M~_n <= C K~_{n+r} for some r, C and all n. For each
// r <= r_max the ratio table M~_n / K~_{n+r} (n <= depth) is scanned; a
// shift whose table has stopped growing certifies stability with
// C = sup ratio. A table is declared diverging when its last quarter is
// monotonically increasing and the final ratio exceeds 10x the first.
StabilityVerdict stability_condition3(const seq::DecreasingSeq& a,
                                      double omega, int r_max, int depth);

struct RemcVerdict {
    bool holds = false;
    double constant = 0.0;  // largest C with K_{n+j} >= C (K~_n)^2 everywhere checked
    int fail_n = -1;        // row witnessing decay otherwise
    int fail_j = -1;
};

// Sufficient stability test: K_{n+j} >= C (K_0+...+K_n)^2 for all n, j.
// Scans every pair with n+j <= depth; Holds carries the largest admissible
// C, FailsAt the row where the ratio has decayed toward zero (mirror of
// the divergence heuristic above).
RemcVerdict remc_sufficient(const seq::DecreasingSeq& a, double omega,
                            int depth);

struct MembershipVerdict {
    bool member = false;
    int r = 0;
    double constant = 0.0;
    std::size_t horizon = 0;
    std::size_t witness_index = 0;  // from the failing domination at r_max
};

// beta belongs to the principal space of alpha iff beta* <~ r (x) alpha
// for some repetition factor r. Searches r <= r_max at the given horizon.
// Both sequences must be normalized (first term <= 1).
MembershipVerdict principal_membership(const seq::DecreasingSeq& beta,
                                       const seq::DecreasingSeq& alpha,
                                       int r_max, std::size_t horizon,
                                       double c_max = 1e6);

struct GapRow {
    int r0;
    int r;              // even
    double index;       // n(r) = r r0 (r r0 + 1) / 2
    double alpha;       // ((omega (x) omega)(n))/n at that index
    double beta;        // (r0 (x) omega) at that index
    double ratio;       // alpha / beta; must grow without bound in r
};

// Closed-form divergence table showing that ((omega (x) omega)(n)/n) is
// not dominated by any r0 (x) omega: along the indices n(r) the ratio
// grows unboundedly in r. Rows are ordered (r0, r).
std::vector<GapRow> counterexample_divergence(double omega,
                                              std::span<const int> r0_list,
                                              std::span<const int> r_list);

struct TailPowerRow {
    std::size_t n;     // checkpoint
    double sum_2p;     // sum_{j<=n} j^-2        (the 2p-th powers)
    double sum_p;      // sum_{j<=n} j^-1        (the p-th powers)
    double harmonic;   // reference harmonic partial sum
};

struct TailPowerDemo {
    double p;
    std::vector<TailPowerRow> rows;
    double zeta2;           // pi^2/6, the 2p bound
    double l2p_tail_bound;  // 1/N integral bound on the dropped 2p tail
};

// Partial-sum table for lambda_j = j^(-1/p), p > 2: the 2p-th powers
// converge (below pi^2/6) while the p-th powers follow the harmonic
// series. Checkpoints are the powers of 10 up to n.
TailPowerDemo l2p_not_lp_demo(double p, std::size_t n);

}  // namespace calkin::spaces
