#pragma once

#include <vector>

#include "calkin/elemop.hpp"
#include "calkin/linalg.hpp"

namespace calkin::blockalg {

using linalg::Matrix;

// Finite block algebra (+)_i M_{k_i}, embedded block-diagonally in M_k.
struct BlockAlgebra {
    std::vector<int> blocks;

    int total_dim() const;
    std::vector<int> offsets() const;  // start row/col of each block
    void validate() const;
};

// Block-diagonal compression X -> sum_i P_i X P_i. Idempotent and
// spectral-norm non-increasing.
Matrix pinch(const BlockAlgebra& alg, const Matrix& x);

bool is_block_diagonal(const BlockAlgebra& alg, const Matrix& x,
                       double tol = seq::kIdentityTol);

struct FactorizationReport {
    double residual_diagonal;  // max |pinch(A X B) - A X B| over diag X
    double residual_commute;   // max |pinch(A X B) - A pinch(X) B|
    bool holds;
};

// Evaluates the restriction factorization on X: for block-diagonal
// symbols the compression commutes past them, and block-diagonal inputs
// pass through untouched. Throws invalid_argument when A or B leaves the
// block support.
FactorizationReport factorization_check(const BlockAlgebra& alg,
                                        const Matrix& a, const Matrix& b,
                                        const Matrix& x,
                                        double tol = seq::kIdentityTol);

struct SandwichReport {
    std::vector<double> lower;  // per-index certified h lower bounds
    std::vector<double> upper;  // per-index certified a upper bounds
    std::size_t violations;     // indices with lower > upper + tol
    bool holds;
};

// Certified two-sided bounds for the restricted multiplication operator:
// lower bounds from the diagonal-compression construction inside each
// block, upper bounds from the banded approximant on the full matrices.
// Every lower bound must stay below the matching upper bound.
SandwichReport restriction_sandwich(const BlockAlgebra& alg, const Matrix& a,
                                    const Matrix& b, double omega,
                                    double tol = seq::kInequalityTol);

}  // namespace calkin::blockalg
