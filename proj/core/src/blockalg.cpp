#include "calkin/blockalg.hpp"

#include <algorithm>
#include <cmath>

#include "calkin/errors.hpp"

namespace calkin::blockalg {

int BlockAlgebra::total_dim() const {
    int k = 0;
    for (int b : blocks) k += b;
    return k;
}

std::vector<int> BlockAlgebra::offsets() const {
    std::vector<int> off;
    off.reserve(blocks.size());
    int acc = 0;
    for (int b : blocks) {
        off.push_back(acc);
        acc += b;
    }
    return off;
}

void BlockAlgebra::validate() const {
    if (blocks.empty())
        throw std::invalid_argument("BlockAlgebra: needs at least one block");
    for (int b : blocks)
        if (b < 1)
            throw std::invalid_argument("BlockAlgebra: block dims must be >= 1");
}

Matrix pinch(const BlockAlgebra& alg, const Matrix& x) {
    alg.validate();
    const int k = alg.total_dim();
    if (x.rows() != k || x.cols() != k)
        throw DimensionMismatch("pinch: matrix does not match the algebra");
    Matrix out = Matrix::Zero(k, k);
    const std::vector<int> off = alg.offsets();
    for (std::size_t i = 0; i < alg.blocks.size(); ++i)
        out.block(off[i], off[i], alg.blocks[i], alg.blocks[i]) =
            x.block(off[i], off[i], alg.blocks[i], alg.blocks[i]);
    return out;
}

bool is_block_diagonal(const BlockAlgebra& alg, const Matrix& x, double tol) {
    const int k = alg.total_dim();
    if (x.rows() != k || x.cols() != k) return false;
    return (x - pinch(alg, x)).norm() <= tol * (1.0 + x.norm());
}

FactorizationReport factorization_check(const BlockAlgebra& alg,
                                        const Matrix& a, const Matrix& b,
                                        const Matrix& x, double tol) {
    if (!is_block_diagonal(alg, a) || !is_block_diagonal(alg, b))
        throw std::invalid_argument(
            "factorization_check: symbols leave the block support");
    const Matrix axb = a * x * b;
    FactorizationReport report;
    report.residual_commute = (pinch(alg, axb) - a * pinch(alg, x) * b)
                                  .cwiseAbs()
                                  .maxCoeff();
    if (is_block_diagonal(alg, x))
        report.residual_diagonal = (pinch(alg, axb) - axb).cwiseAbs().maxCoeff();
    else
        report.residual_diagonal = 0.0;
    report.holds = report.residual_commute <= tol &&
                   report.residual_diagonal <= tol;
    return report;
}

SandwichReport restriction_sandwich(const BlockAlgebra& alg, const Matrix& a,
                                    const Matrix& b, double omega,
                                    double tol) {
    if (!is_block_diagonal(alg, a) || !is_block_diagonal(alg, b))
        throw std::invalid_argument(
            "restriction_sandwich: symbols leave the block support");
    const double na = linalg::spectral_norm(a);
    const double nb = linalg::spectral_norm(b);
    const int k = alg.total_dim();
    const std::size_t count = static_cast<std::size_t>(k) *
                              static_cast<std::size_t>(k);

    SandwichReport report;
    report.upper.assign(count, 0.0);
    report.lower.assign(count, 0.0);
    if (na > 0.0 && nb > 0.0) {
        const std::vector<elemop::CertifiedBound> upper =
            elemop::a_upper_bounds(a / na, b / nb, omega, count);
        for (std::size_t j = 0; j < count; ++j)
            report.upper[j] = upper[j].value * na * nb;
    }

    // Per-block diagonal compressions push lower bounds up through the
    // restricted operator.
    const std::vector<int> off = alg.offsets();
    for (std::size_t i = 0; i < alg.blocks.size(); ++i) {
        const int bd = alg.blocks[i];
        const Matrix ai = a.block(off[i], off[i], bd, bd);
        const Matrix bi = b.block(off[i], off[i], bd, bd);
        const std::vector<elemop::CertifiedBound> lo =
            elemop::h_lower_envelope(ai, bi);
        for (const elemop::CertifiedBound& cb : lo) {
            if (cb.index <= count)
                report.lower[cb.index - 1] =
                    std::max(report.lower[cb.index - 1], cb.value);
        }
    }

    report.violations = 0;
    for (std::size_t j = 0; j < count; ++j)
        if (report.lower[j] > report.upper[j] + tol) ++report.violations;
    report.holds = report.violations == 0;
    return report;
}

}  // namespace calkin::blockalg
