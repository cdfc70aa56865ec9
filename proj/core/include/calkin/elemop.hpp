#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "calkin/linalg.hpp"

namespace calkin::elemop {

using linalg::Matrix;
using linalg::Vector;

// Phi = sum_i M_{A_i,B_i} with M_{A,B}(X) = A X B, acting on the k x k
// matrices. An empty symbol list marks the zero operator (produced only by
// minimal_representation when everything cancels).
struct ElementaryOp {
    int dim = 0;
    std::vector<std::pair<Matrix, Matrix>> symbols;

    void validate() const;  // square symbols matching dim
};

// Column-stacking matrix of Phi: sum_i B_i^T (x) A_i, so that
// hs * vec(X) = vec(Phi(X)) exactly.
Matrix hs_matrix(const ElementaryOp& phi);

// Singular values of Phi as an operator on the Hilbert-Schmidt space
// (where every s-number function reduces to them).
seq::DecreasingSeq hs_singular_numbers(const ElementaryOp& phi);

enum class BoundSide { UpperOnApproxNumbers, LowerOnHilbertNumbers };

struct BlockApproximantWitness {
    double omega;
    std::size_t rank;                    // rank of the banded approximant
    std::vector<double> residual_terms;  // per-level maxima summed into value
};

struct TestFactorizationWitness {
    std::vector<double> lambda, mu;  // diagonal compression weights
};

struct CertifiedBound {
    std::size_t index = 0;  // n, 1-based
    double value = 0.0;
    BoundSide side = BoundSide::UpperOnApproxNumbers;
    std::variant<BlockApproximantWitness, TestFactorizationWitness> witness;
};

// Certified upper bounds on the approximation numbers of M_{A,B} as an
// operator on (M_k, ||.||): band both symbols at omega, drop the banded
// approximant sum_{k+l<=n} M_{A_k,B_l} of rank M~_n, and bound the residual
// by sum_{N>n} max_k ||A_k|| ||B_{N-k}|| (at most omega^(n+1)/(1-omega)).
// Intermediate indices are filled by monotonicity and every bound is capped
// at ||A|| ||B||. Requires ||A||, ||B|| <= 1 (NotNormalized otherwise);
// callers rescale bounds by the original norms.
std::vector<CertifiedBound> a_upper_bounds(const Matrix& a, const Matrix& b,
                                           double omega, std::size_t count);

// Per-index minimum of a_upper_bounds over an omega grid.
std::vector<CertifiedBound> a_upper_bounds_grid(const Matrix& a,
                                                const Matrix& b,
                                                std::span<const double> grid,
                                                std::size_t count);

// 2/3 included: 1/(w^2(1-w)) attains its minimum 6.75 there.
inline constexpr std::array<double, 5> kDefaultOmegaGrid{0.5, 0.6, 2.0 / 3.0,
                                                         0.7, 0.75};

enum class LowerVariant {
    BothL4,   // ||lambda||_4, ||mu||_4 <= 1
    LeftL2,   // ||lambda||_2 <= 1, mu ignored (identity compression)
    RightL2,  // ||mu||_2 <= 1, lambda ignored
};

// Certified lower bounds h_n(M_{A,B}) >= ((lambda s(A)) (x) (mu s(B)))(n)
// for n = 1..k^2, realized by the two-sided diagonal compression of the
// polar/Schmidt data of A and B. NormViolation when the weights exceed the
// variant's unit ball.
std::vector<CertifiedBound> h_lower_bounds(
    const Matrix& a, const Matrix& b, const seq::DecreasingSeq& lambda,
    const seq::DecreasingSeq& mu, LowerVariant variant = LowerVariant::BothL4);

// Per-index best certified lower bound from the sqrt-n weight choice:
// h_n >= (s(A) (x) s(B))(n) / sqrt(n), with equality ||A|| ||B|| at n = 1.
std::vector<CertifiedBound> h_lower_envelope(const Matrix& a, const Matrix& b);

// The compression G o M_{A,B} o F realized in vec coordinates; its singular
// values re-verify an h lower bound independently of the product formula.
Matrix h_lower_compression(const Matrix& a, const Matrix& b,
                           std::span<const double> lambda,
                           std::span<const double> mu);

// Equal operator (hs_matrix difference below 1e-10) whose A-symbols and
// B-symbols are each linearly independent; dependencies are folded into the
// opposite side, alternating until stable. All symbols cancelling yields
// the empty-symbol zero marker.
ElementaryOp minimal_representation(const ElementaryOp& phi);

struct SymbolRecovery {
    int r = 0;                       // number of vector pairs used
    std::vector<Vector> xi, eta;     // the pairs, coefficients absorbed
    std::vector<Matrix> compressions;  // psi_j Phi phi_j, one k x k each
    Matrix reconstructed;            // their sum; equals the target symbol
    double residual = 0.0;           // Frobenius gap to the target symbol
};

// Recovers symbol A_target from Phi alone via random evaluation vectors:
// draws (eta, xi) until the vectors (<B_i eta, xi>)_i span C^m, solves for
// combination coefficients, absorbs them into xi, and returns the
// compressions whose sum reproduces A_target. Requires linearly
// independent B-symbols (run minimal_representation first); SpanFailure
// after 50*m draws signals near-dependence. `target` is 1-based.
SymbolRecovery recover_first_symbol(const ElementaryOp& phi, int target,
                                    std::uint64_t seed);

}  // namespace calkin::elemop
