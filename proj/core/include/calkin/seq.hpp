#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "calkin/errors.hpp"

namespace calkin::seq {

// Tolerances used throughout: identities are compared at 1e-12, one-sided
// inequality checks at 1e-9. Operations that take an explicit `tol`
// parameter default to these.
inline constexpr double kIdentityTol = 1e-12;
inline constexpr double kInequalityTol = 1e-9;

enum class GenKind { Geometric, Power, LogInverse, Explicit };

// Closed-form tail of a DecreasingSeq.
//   Geometric(omega):  term(n) = omega^(n-1),      omega in (0,1)
//   Power(lambda):     term(n) = n^(-lambda),      lambda > 0
//   LogInverse:        term(n) = 1/log2(n+1)
//   Explicit:          the prefix is the whole support; terms beyond are 0
struct Generator {
    GenKind kind = GenKind::Explicit;
    double omega = 0.0;
    double lambda = 0.0;

    static Generator geometric(double omega);
    static Generator power(double lambda);
    static Generator log_inverse();
    static Generator explicit_support();

    // n-th term, 1-based. Explicit generators have no formula; callers must
    // not ask them (DecreasingSeq::term handles that case itself).
    double term(std::size_t n) const;

    // Number of terms strictly greater than x, in closed form. Returns
    // +inf when the count exceeds the double range (log-inverse tails).
    double count_greater(double x) const;
};

// A non-negative, non-increasing sequence held as a finite prefix plus an
// optional generator. Three tail regimes:
//   - formula generator (geometric/power/log-inverse): every term is known,
//     the prefix is just a cache;
//   - explicit generator: the sequence is the prefix followed by zeros;
//   - no generator: only the prefix is known. The tail is still bounded by
//     the last prefix entry (monotonicity), and operations that would need
//     more raise InsufficientPrefix.
class DecreasingSeq {
public:
    DecreasingSeq() = default;
    DecreasingSeq(std::vector<double> prefix, std::optional<Generator> gen);

    static DecreasingSeq geometric(double omega, std::size_t prefix_len = 48);
    static DecreasingSeq power(double lambda, std::size_t prefix_len = 48);
    static DecreasingSeq log_inverse(std::size_t prefix_len = 48);
    // Finite support: `values` followed by zeros. Must be non-increasing.
    static DecreasingSeq from_values(std::vector<double> values);
    // Known prefix, unknown tail.
    static DecreasingSeq prefix_only(std::vector<double> prefix);

    const std::vector<double>& prefix() const { return prefix_; }
    std::size_t prefix_len() const { return prefix_.size(); }
    const std::optional<Generator>& generator() const { return gen_; }

    bool has_formula() const;
    bool finite_support() const;

    // n-th term, 1-based; InsufficientPrefix when the tail is unknown.
    double term(std::size_t n) const;

    // First n terms. Formula kinds materialize on demand, explicit kinds
    // pad zeros, raw prefixes throw InsufficientPrefix past their end.
    std::vector<double> take(std::size_t n) const;

    // Upper bound on every term past the known prefix.
    double tail_bound() const;

    // c * alpha, c >= 0. Drops a formula generator (the scaled sequence no
    // longer matches it) unless c == 1.
    DecreasingSeq scaled(double c) const;

    // r (x) alpha: every term repeated r times. Needs ceil(n/r) source
    // terms to produce n; materialized up to `len` terms.
    DecreasingSeq repeated(std::size_t r, std::size_t len) const;

private:
    std::vector<double> prefix_;
    std::optional<Generator> gen_;
};

// Decreasing rearrangement |raw|* (sorted non-increasingly, multiplicities
// kept). Result has finite support.
DecreasingSeq star_rearrange(std::span<const double> raw);
DecreasingSeq star_rearrange(std::span<const std::complex<double>> raw);

struct TensorEntry {
    double value;
    std::size_t i, j;  // 1-based source indices; 0 marks a zero-pad entry
};

// First n terms of the tensor product a (x) b (all pairwise products,
// rearranged decreasingly) together with the producing index pairs.
// Frontier merge over the sorted product grid, O(n log n) comparisons.
// Ties are emitted in grid-lexicographic order. InsufficientPrefix when a
// raw tail could still reach the n-th largest product.
std::vector<TensorEntry> tensor_prefix_indexed(const DecreasingSeq& a,
                                               const DecreasingSeq& b,
                                               std::size_t n);
DecreasingSeq tensor_prefix(const DecreasingSeq& a, const DecreasingSeq& b,
                            std::size_t n);

struct DominationVerdict {
    bool dominated = false;
    double constant = 0.0;       // sup a_n/b_n over the horizon when dominated
    std::size_t horizon = 0;
    std::size_t witness_index = 0;  // first offending index otherwise (1-based)
};

// Finite-horizon semi-decision of a <~ b: Dominated(C) when
// C = sup_{n<=horizon} a_n/b_n stays <= c_max and b vanishes nowhere a
// doesn't; otherwise the first index where the running sup leaves [0,c_max]
// or b_n = 0 < a_n. The verdict always records the horizon.
DominationVerdict dominates(const DecreasingSeq& a, const DecreasingSeq& b,
                            std::size_t horizon, double c_max);

enum class WeightKind { ClassicalLorentz, LogPower, Explicit };

// Weight sequence: positive, non-increasing, w_1 = 1.
//   ClassicalLorentz(p,q): w_n = n^(p/q-1), 0 < p < q
//   LogPower(alpha,gamma): w_n = (1+ln n)^gamma / n^alpha
class WeightSeq {
public:
    static WeightSeq classical_lorentz(double p, double q);
    static WeightSeq log_power(double alpha, double gamma);
    static WeightSeq from_values(std::vector<double> prefix);

    WeightKind kind() const { return kind_; }
    double p() const { return p_; }
    double q() const { return q_; }
    double alpha() const { return alpha_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& prefix() const { return prefix_; }

    // n-th weight, 1-based; InsufficientPrefix past an explicit prefix.
    double term(std::size_t n) const;

    // Constant C with w_{mn} <= C w_m w_n when the family carries one
    // algebraically: 1 for classical Lorentz weights (multiplicative) and
    // for log-power weights with alpha <= 1.
    std::optional<double> exact_submult_constant() const;

private:
    WeightKind kind_ = WeightKind::Explicit;
    double p_ = 0.0, q_ = 0.0;
    double alpha_ = 0.0, gamma_ = 0.0;
    std::vector<double> prefix_;
};

struct LorentzNorm {
    double value;      // (sum_{n<=N} w_n a_n^p)^(1/p)
    double last_term;  // w_N a_N^p, the final summand (truncation gauge)
};

// N-term partial sum form of ||a||_{w,p}. `a` must already be
// non-increasing (rearrange first otherwise).
LorentzNorm lorentz_norm(const DecreasingSeq& a, const WeightSeq& w, double p,
                         std::size_t n);

// C = max_{m,n <= horizon} w_{mn} / (w_m w_n). Explicit weights must reach
// index horizon^2.
double weight_submult_constant(const WeightSeq& w, std::size_t horizon);

struct TensorNormReport {
    double lhs;       // ||a (x) b||_{w,p}, N-term
    double rhs;       // C^{1/p} ||a||_{w,p} ||b||_{w,p}
    double constant;  // the submultiplicativity constant C used
    bool holds;       // lhs <= rhs + tol
};

// Checks ||a (x) b||_{w,p} <= C^{1/p} ||a|| ||b|| at N terms. Truncating
// the left side only decreases it, so the finite check is sound.
TensorNormReport lorentz_tensor_check(const DecreasingSeq& a,
                                      const DecreasingSeq& b,
                                      const WeightSeq& w, double p,
                                      std::size_t n,
                                      double tol = kInequalityTol);

}  // namespace calkin::seq
