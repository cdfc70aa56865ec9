#include "calkin/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "calkin/errors.hpp"

namespace calkin::linalg {

seq::DecreasingSeq Svd::singular_seq() const {
    return seq::DecreasingSeq::from_values(sigma);
}

Matrix Svd::reconstruct() const {
    Eigen::VectorXd s(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        s[static_cast<Eigen::Index>(i)] = sigma[i];
    return u * s.asDiagonal() * v.adjoint();
}

Svd svd(const Matrix& a) {
    if (!a.allFinite())
        throw std::invalid_argument("svd: matrix has non-finite entries");
    Svd out;
    Eigen::VectorXd sv;
    if (std::min(a.rows(), a.cols()) <= 32) {
        Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (dec.info() != Eigen::Success)
            throw ConvergenceFailure("svd: Jacobi iteration did not converge");
        out.u = dec.matrixU();
        out.v = dec.matrixV();
        sv = dec.singularValues();
    } else {
        Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (dec.info() != Eigen::Success)
            throw ConvergenceFailure("svd: divide-and-conquer did not converge");
        out.u = dec.matrixU();
        out.v = dec.matrixV();
        sv = dec.singularValues();
    }
    out.sigma.assign(sv.data(), sv.data() + sv.size());
    return out;
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return svd(a).sigma.front();
}

int rank_of(const Matrix& a) {
    const Svd dec = svd(a);
    if (dec.sigma.empty()) return 0;
    const double cut = kRankClamp * dec.sigma.front();
    int r = 0;
    for (double s : dec.sigma)
        if (s > cut) ++r;
    return r;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

Matrix schmidt_truncate(const Matrix& a, std::span<const int> band) {
    const Svd dec = svd(a);
    Eigen::VectorXd masked = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(dec.sigma.size()));
    for (int i : band) {
        if (i < 0 || static_cast<std::size_t>(i) >= dec.sigma.size())
            throw std::out_of_range("schmidt_truncate: band index out of range");
        masked[i] = dec.sigma[static_cast<std::size_t>(i)];
    }
    return dec.u * masked.asDiagonal() * dec.v.adjoint();
}

std::vector<Matrix> singular_band_projections(const Matrix& a, double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("band base must lie in (0,1)");
    const Svd dec = svd(a);
    if (dec.sigma.empty() || dec.sigma.front() > 1.0 + seq::kIdentityTol)
        throw NotNormalized("singular bands need ||a|| <= 1");
    const double cut = kRankClamp * dec.sigma.front();

    // Band of each nonzero singular value; lower edges by repeated
    // multiplication. Values are sorted, so members.back() is always the
    // band currently open.
    std::vector<std::vector<int>> members(1);
    double lo = omega;  // band k = (omega^(k+1), omega^k]
    std::size_t i = 0;
    while (i < dec.sigma.size() && dec.sigma[i] > cut) {
        if (dec.sigma[i] > lo) {
            members.back().push_back(static_cast<int>(i));
            ++i;
        } else {
            members.emplace_back();
            lo *= omega;
        }
    }

    std::vector<Matrix> projections;
    projections.reserve(members.size());
    const Eigen::Index dim = a.cols();
    for (const std::vector<int>& band : members) {
        Matrix p = Matrix::Zero(dim, dim);
        for (int idx : band) {
            const Vector vi = dec.v.col(idx);
            p += vi * vi.adjoint();
        }
        projections.push_back(std::move(p));
    }
    return projections;
}

AdditivityReport sv_additivity_check(const Matrix& s, const Matrix& t,
                                     std::size_t m, std::size_t n,
                                     double tol) {
    if (s.rows() != t.rows() || s.cols() != t.cols())
        throw DimensionMismatch("sv_additivity_check: shapes differ");
    const std::size_t k =
        static_cast<std::size_t>(std::min(s.rows(), s.cols()));
    if (m < 1 || n < 1 || m + n - 1 > k)
        throw std::out_of_range("sv_additivity_check: index out of range");
    const Svd sum = svd(s + t);
    AdditivityReport report;
    report.m = m;
    report.n = n;
    report.lhs = sum.sigma[m + n - 2];
    report.rhs = svd(s).sigma[m - 1] + svd(t).sigma[n - 1];
    report.holds = report.lhs <= report.rhs + tol;
    return report;
}

KoenigReport koenig_lemma_check(const Matrix& a, const Matrix& b,
                                std::span<const Matrix> p,
                                std::span<const Matrix> q,
                                double tol) {
    if (p.size() != q.size() || p.empty())
        throw std::invalid_argument("koenig_lemma_check: band counts differ");
    for (const Matrix& pk : p)
        if (pk.rows() != a.cols() || pk.cols() != a.cols())
            throw DimensionMismatch("koenig_lemma_check: P band shape");
    for (const Matrix& qk : q)
        if (qk.rows() != b.cols() || qk.cols() != b.cols())
            throw DimensionMismatch("koenig_lemma_check: Q band shape");
    for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t l = k + 1; l < p.size(); ++l) {
            if (spectral_norm(p[k] * p[l]) > 1e-10 ||
                spectral_norm(q[k] * q[l]) > 1e-10)
                throw std::invalid_argument(
                    "koenig_lemma_check: bands are not mutually orthogonal");
        }

    Matrix sum = Matrix::Zero(a.rows() * b.rows(), a.cols() * b.cols());
    double rhs = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const Matrix ap = a * p[k];
        const Matrix bq = b * q[k];
        sum += kron(ap, bq);
        rhs = std::max(rhs, spectral_norm(ap) * spectral_norm(bq));
    }
    KoenigReport report;
    report.lhs = spectral_norm(sum);
    report.rhs = rhs;
    report.holds = report.lhs <= report.rhs + tol;
    return report;
}

}  // namespace calkin::linalg
