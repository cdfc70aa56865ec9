#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "calkin/seq.hpp"

namespace calkin::linalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Singular values below this fraction of s_1 are clamped to zero for rank
// decisions (rank witnesses must be integers).
inline constexpr double kRankClamp = 1e-12;

struct Svd {
    Matrix u;                   // rows x k, orthonormal columns
    std::vector<double> sigma;  // k = min(rows, cols), non-increasing
    Matrix v;                   // cols x k, orthonormal columns

    seq::DecreasingSeq singular_seq() const;
    Matrix reconstruct() const;  // u * diag(sigma) * v^H
};

// Deterministic SVD of a dense complex matrix; ConvergenceFailure if the
// underlying iteration gives up.
Svd svd(const Matrix& a);

double spectral_norm(const Matrix& a);

// Numerical rank after clamping singular values below kRankClamp * s_1.
int rank_of(const Matrix& a);

// Standard tensor product, index order (i,i'),(j,j') ->
// (i*rows(b)+i', j*cols(b)+j').
Matrix kron(const Matrix& a, const Matrix& b);

// A * P_S, with P_S the projection onto the right-singular vectors whose
// (0-based) indices lie in `band`. Singular values of the result are
// {s_i : i in band} plus zeros.
Matrix schmidt_truncate(const Matrix& a, std::span<const int> band);

// Right-singular projection family of `a` at base omega: entry k projects
// onto the singular directions with s in (omega^(k+1) * s_1-normalized
// band k]; the family runs to the band of the smallest nonzero singular
// value and empty bands give zero matrices. The matrix must satisfy
// ||a|| <= 1 so that bands align with the absolute scale.
std::vector<Matrix> singular_band_projections(const Matrix& a, double omega);

struct AdditivityReport {
    std::size_t m, n;
    double lhs;  // s_{m+n-1}(S+T)
    double rhs;  // s_m(S) + s_n(T)
    bool holds;
};

// Additivity of singular numbers: s_{m+n-1}(S+T) <= s_m(S) + s_n(T).
AdditivityReport sv_additivity_check(const Matrix& s, const Matrix& t,
                                     std::size_t m, std::size_t n,
                                     double tol = seq::kInequalityTol);

struct KoenigReport {
    double lhs;  // || sum_k kron(A P_k, B Q_k) ||
    double rhs;  // max_k ||A P_k|| ||B Q_k||
    bool holds;
};

// || sum_k A P_k (x) B Q_k || <= max_k ||A P_k|| ||B Q_k|| for mutually
// orthogonal projection families P, Q (checked; throws invalid_argument on
// non-orthogonal bands).
KoenigReport koenig_lemma_check(const Matrix& a, const Matrix& b,
                                std::span<const Matrix> p,
                                std::span<const Matrix> q,
                                double tol = seq::kInequalityTol);

}  // namespace calkin::linalg
