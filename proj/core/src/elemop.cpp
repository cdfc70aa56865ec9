#include "calkin/elemop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "calkin/errors.hpp"

namespace calkin::elemop {

using linalg::Svd;

void ElementaryOp::validate() const {
    if (dim <= 0) throw std::invalid_argument("ElementaryOp: dim must be >= 1");
    for (const auto& [a, b] : symbols) {
        if (a.rows() != dim || a.cols() != dim || b.rows() != dim ||
            b.cols() != dim)
            throw DimensionMismatch("ElementaryOp: symbol shape mismatch");
        if (!a.allFinite() || !b.allFinite())
            throw std::invalid_argument("ElementaryOp: non-finite symbol");
    }
}

Matrix hs_matrix(const ElementaryOp& phi) {
    phi.validate();
    const Eigen::Index k2 =
        static_cast<Eigen::Index>(phi.dim) * static_cast<Eigen::Index>(phi.dim);
    Matrix out = Matrix::Zero(k2, k2);
    for (const auto& [a, b] : phi.symbols)
        out += linalg::kron(b.transpose(), a);
    return out;
}

seq::DecreasingSeq hs_singular_numbers(const ElementaryOp& phi) {
    return linalg::svd(hs_matrix(phi)).singular_seq();
}

namespace {

struct BandData {
    std::vector<double> norm;   // largest singular value per band
    std::vector<long> count;    // band populations
    double top = 0.0;           // s_1
    double dropped = 0.0;       // largest clamped singular value
};

// Bands of the singular values at base omega, clamped at kRankClamp * s_1.
BandData band_values(const std::vector<double>& sigma, double omega) {
    BandData d;
    if (sigma.empty()) return d;
    d.top = sigma.front();
    const double cut = linalg::kRankClamp * d.top;
    d.norm.assign(1, 0.0);
    d.count.assign(1, 0);
    double lo = omega;
    std::size_t i = 0;
    while (i < sigma.size() && sigma[i] > cut) {
        if (sigma[i] > lo) {
            d.norm.back() = std::max(d.norm.back(), sigma[i]);
            ++d.count.back();
            ++i;
        } else {
            d.norm.push_back(0.0);
            d.count.push_back(0);
            lo *= omega;
        }
    }
    if (i < sigma.size()) d.dropped = sigma[i];
    // Trim trailing empty bands.
    while (d.norm.size() > 1 && d.count.back() == 0) {
        d.norm.pop_back();
        d.count.pop_back();
    }
    return d;
}

}  // namespace

std::vector<CertifiedBound> a_upper_bounds(const Matrix& a, const Matrix& b,
                                           double omega, std::size_t count) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("a_upper_bounds: omega must lie in (0,1)");
    const Svd da = linalg::svd(a);
    const Svd db = linalg::svd(b);
    const double na = da.sigma.empty() ? 0.0 : da.sigma.front();
    const double nb = db.sigma.empty() ? 0.0 : db.sigma.front();
    if (na > 1.0 + seq::kIdentityTol || nb > 1.0 + seq::kIdentityTol)
        throw NotNormalized("a_upper_bounds requires ||A||, ||B|| <= 1");

    std::vector<CertifiedBound> out;
    out.reserve(count);
    if (na == 0.0 || nb == 0.0) {
        for (std::size_t j = 1; j <= count; ++j) {
            CertifiedBound cb;
            cb.index = j;
            cb.value = 0.0;
            cb.side = BoundSide::UpperOnApproxNumbers;
            cb.witness = BlockApproximantWitness{omega, 0, {}};
            out.push_back(std::move(cb));
        }
        return out;
    }

    const BandData ba = band_values(da.sigma, omega);
    const BandData bb = band_values(db.sigma, omega);
    const int ka = static_cast<int>(ba.norm.size()) - 1;
    const int kb = static_cast<int>(bb.norm.size()) - 1;
    const int n_tot = ka + kb;

    // Residual left out of every band: the clamped singular directions.
    const double safety = ba.dropped * nb + na * bb.dropped;

    // term[N] = max_{k} ||A_k|| ||B_{N-k}||; cum[s] = M~_{s-1}.
    std::vector<double> term(static_cast<std::size_t>(n_tot) + 1, 0.0);
    std::vector<long> level_rank(static_cast<std::size_t>(n_tot) + 1, 0);
    for (int n = 0; n <= n_tot; ++n) {
        const int k_lo = std::max(0, n - kb);
        const int k_hi = std::min(ka, n);
        double t = 0.0;
        long r = 0;
        for (int k = k_lo; k <= k_hi; ++k) {
            t = std::max(t, ba.norm[static_cast<std::size_t>(k)] *
                                bb.norm[static_cast<std::size_t>(n - k)]);
            r += ba.count[static_cast<std::size_t>(k)] *
                 bb.count[static_cast<std::size_t>(n - k)];
        }
        term[static_cast<std::size_t>(n)] = t;
        level_rank[static_cast<std::size_t>(n)] = r;
    }
    // cum[s] = sum of level ranks below level s (so cum[0] = 0).
    std::vector<long> cum(static_cast<std::size_t>(n_tot) + 2, 0);
    for (int n = 0; n <= n_tot; ++n)
        cum[static_cast<std::size_t>(n) + 1] =
            cum[static_cast<std::size_t>(n)] +
            level_rank[static_cast<std::size_t>(n)];
    // suffix[s] = sum_{N >= s} term[N].
    std::vector<double> suffix(static_cast<std::size_t>(n_tot) + 2, 0.0);
    for (int n = n_tot; n >= 0; --n)
        suffix[static_cast<std::size_t>(n)] =
            suffix[static_cast<std::size_t>(n) + 1] +
            term[static_cast<std::size_t>(n)];

    int level = -1;  // largest n with M~_n < j, walked forward with j
    for (std::size_t j = 1; j <= count; ++j) {
        while (level + 1 <= n_tot &&
               cum[static_cast<std::size_t>(level) + 2] <
                   static_cast<long>(j))
            ++level;
        const double residual =
            suffix[static_cast<std::size_t>(level) + 1] + safety;
        CertifiedBound cb;
        cb.index = j;
        cb.side = BoundSide::UpperOnApproxNumbers;
        BlockApproximantWitness w;
        w.omega = omega;
        w.rank = static_cast<std::size_t>(cum[static_cast<std::size_t>(level) + 1]);
        w.residual_terms.assign(term.begin() + (level + 1), term.end());
        if (safety > 0.0) w.residual_terms.push_back(safety);
        if (residual < na * nb) {
            cb.value = residual;
        } else {
            cb.value = na * nb;  // rank-0 approximant
            w.rank = 0;
            w.residual_terms = {na * nb};
        }
        cb.witness = std::move(w);
        out.push_back(std::move(cb));
    }
    return out;
}

std::vector<CertifiedBound> a_upper_bounds_grid(const Matrix& a,
                                                const Matrix& b,
                                                std::span<const double> grid,
                                                std::size_t count) {
    if (grid.empty())
        throw std::invalid_argument("a_upper_bounds_grid: empty grid");
    std::vector<CertifiedBound> best = a_upper_bounds(a, b, grid[0], count);
    for (std::size_t g = 1; g < grid.size(); ++g) {
        std::vector<CertifiedBound> cur = a_upper_bounds(a, b, grid[g], count);
        for (std::size_t j = 0; j < count; ++j)
            if (cur[j].value < best[j].value) best[j] = std::move(cur[j]);
    }
    return best;
}

namespace {

double lp_norm(std::span<const double> v, double p) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s, 1.0 / p);
}

std::vector<double> weight_values(const seq::DecreasingSeq& w, std::size_t k) {
    std::vector<double> out;
    try {
        out = w.take(k);
    } catch (const InsufficientPrefix&) {
        out = w.prefix();
        out.resize(k, 0.0);  // unknown tail: zero weights are always sound
    }
    return out;
}

}  // namespace

std::vector<CertifiedBound> h_lower_bounds(const Matrix& a, const Matrix& b,
                                           const seq::DecreasingSeq& lambda,
                                           const seq::DecreasingSeq& mu,
                                           LowerVariant variant) {
    const Svd da = linalg::svd(a);
    const Svd db = linalg::svd(b);
    const std::size_t ka = da.sigma.size();
    const std::size_t kb = db.sigma.size();

    std::vector<double> lam = weight_values(lambda, ka);
    std::vector<double> muv = weight_values(mu, kb);
    switch (variant) {
        case LowerVariant::BothL4:
            if (lp_norm(lam, 4.0) > 1.0 + seq::kIdentityTol)
                throw NormViolation("h_lower_bounds: ||lambda||_4 > 1");
            if (lp_norm(muv, 4.0) > 1.0 + seq::kIdentityTol)
                throw NormViolation("h_lower_bounds: ||mu||_4 > 1");
            break;
        case LowerVariant::LeftL2:
            if (lp_norm(lam, 2.0) > 1.0 + seq::kIdentityTol)
                throw NormViolation("h_lower_bounds: ||lambda||_2 > 1");
            muv.assign(kb, 1.0);
            break;
        case LowerVariant::RightL2:
            if (lp_norm(muv, 2.0) > 1.0 + seq::kIdentityTol)
                throw NormViolation("h_lower_bounds: ||mu||_2 > 1");
            lam.assign(ka, 1.0);
            break;
    }

    std::vector<double> products;
    products.reserve(ka * kb);
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < kb; ++j)
            products.push_back(lam[i] * da.sigma[i] * muv[j] * db.sigma[j]);
    std::sort(products.begin(), products.end(), std::greater<double>());

    std::vector<CertifiedBound> out;
    out.reserve(products.size());
    for (std::size_t n = 0; n < products.size(); ++n) {
        CertifiedBound cb;
        cb.index = n + 1;
        cb.value = products[n];
        cb.side = BoundSide::LowerOnHilbertNumbers;
        cb.witness = TestFactorizationWitness{lam, muv};
        out.push_back(std::move(cb));
    }
    return out;
}

std::vector<CertifiedBound> h_lower_envelope(const Matrix& a,
                                             const Matrix& b) {
    const Svd da = linalg::svd(a);
    const Svd db = linalg::svd(b);
    const std::size_t ka = da.sigma.size();
    const std::size_t kb = db.sigma.size();
    std::vector<double> products;
    products.reserve(ka * kb);
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < kb; ++j)
            products.push_back(da.sigma[i] * db.sigma[j]);
    std::sort(products.begin(), products.end(), std::greater<double>());

    std::vector<CertifiedBound> out;
    out.reserve(products.size());
    for (std::size_t n = 0; n < products.size(); ++n) {
        const double root = std::sqrt(static_cast<double>(n + 1));
        const double w = 1.0 / std::sqrt(root);  // (n+1)^(-1/4)
        CertifiedBound cb;
        cb.index = n + 1;
        cb.value = products[n] / root;
        cb.side = BoundSide::LowerOnHilbertNumbers;
        TestFactorizationWitness wit;
        wit.lambda.assign(std::min(n + 1, ka), w);
        wit.lambda.resize(ka, 0.0);
        wit.mu.assign(std::min(n + 1, kb), w);
        wit.mu.resize(kb, 0.0);
        cb.witness = std::move(wit);
        out.push_back(std::move(cb));
    }
    return out;
}

Matrix h_lower_compression(const Matrix& a, const Matrix& b,
                           std::span<const double> lambda,
                           std::span<const double> mu) {
    const Svd da = linalg::svd(a);
    const Svd db = linalg::svd(b);
    if (lambda.size() != da.sigma.size() || mu.size() != db.sigma.size())
        throw DimensionMismatch("h_lower_compression: weight lengths");

    // F(X) = U X V^H with U = V_A U_A^H, V = U_B V_B^H (polar isometries);
    // G(Y) = D_lambda Y D_mu with the diagonals in the singular bases.
    const Matrix u = da.v * da.u.adjoint();
    const Matrix v = db.u * db.v.adjoint();
    Eigen::VectorXd lam(static_cast<Eigen::Index>(lambda.size()));
    for (std::size_t i = 0; i < lambda.size(); ++i)
        lam[static_cast<Eigen::Index>(i)] = lambda[i];
    Eigen::VectorXd muv(static_cast<Eigen::Index>(mu.size()));
    for (std::size_t j = 0; j < mu.size(); ++j)
        muv[static_cast<Eigen::Index>(j)] = mu[j];
    const Matrix d_lambda =
        da.u * lam.asDiagonal() * da.u.adjoint();  // sum lam_i e_i e_i^H
    const Matrix d_mu =
        db.v * muv.asDiagonal() * db.v.adjoint();  // sum mu_j f_j f_j^H

    // vec(U X V^H) = (conj(V) (x) U) vec(X); vec(D Y E) = (E^T (x) D) vec(Y).
    const Matrix f_mat = linalg::kron(v.conjugate(), u);
    const Matrix g_mat = linalg::kron(d_mu.transpose(), d_lambda);
    ElementaryOp op;
    op.dim = static_cast<int>(a.rows());
    op.symbols.push_back({a, b});
    return g_mat * hs_matrix(op) * f_mat;
}

namespace {

// Vectorize the chosen side of each pair into the columns of a k^2 x m matrix.
Matrix side_stack(const std::vector<std::pair<Matrix, Matrix>>& pairs,
                  bool a_side, int dim) {
    const Eigen::Index k2 =
        static_cast<Eigen::Index>(dim) * static_cast<Eigen::Index>(dim);
    Matrix s(k2, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Matrix& m = a_side ? pairs[i].first : pairs[i].second;
        s.col(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Vector>(m.data(), k2);
    }
    return s;
}

// One elimination pass over the chosen side; true when a pair was removed.
bool eliminate_once(std::vector<std::pair<Matrix, Matrix>>& pairs, bool a_side,
                    int dim) {
    const double tol = 1e-10;
    double scale = 0.0;
    for (const auto& [a, b] : pairs)
        scale = std::max({scale, a.norm(), b.norm()});
    // Drop symbols that vanish outright.
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].first.norm() <= tol * scale ||
            pairs[i].second.norm() <= tol * scale) {
            pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(i));
            return true;
        }
    }
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        const Matrix head = side_stack(
            {pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(i)},
            a_side, dim);
        const Matrix& mi = a_side ? pairs[i].first : pairs[i].second;
        const Vector target = Eigen::Map<const Vector>(
            mi.data(), static_cast<Eigen::Index>(dim) * dim);
        const Vector coeff =
            head.completeOrthogonalDecomposition().solve(target);
        const double gap = (head * coeff - target).norm();
        if (gap <= tol * (1.0 + target.norm())) {
            // Fold pair i into the earlier pairs on the opposite side.
            for (std::size_t j = 0; j < i; ++j) {
                const linalg::Complex c = coeff[static_cast<Eigen::Index>(j)];
                if (a_side)
                    pairs[j].second += c * pairs[i].second;
                else
                    pairs[j].first += c * pairs[i].first;
            }
            pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(i));
            return true;
        }
    }
    return false;
}

}  // namespace

ElementaryOp minimal_representation(const ElementaryOp& phi) {
    phi.validate();
    ElementaryOp out;
    out.dim = phi.dim;
    out.symbols = phi.symbols;
    bool changed = true;
    while (changed) {
        changed = eliminate_once(out.symbols, true, out.dim);
        if (!changed) changed = eliminate_once(out.symbols, false, out.dim);
    }
    return out;
}

SymbolRecovery recover_first_symbol(const ElementaryOp& phi, int target,
                                    std::uint64_t seed) {
    phi.validate();
    const int m = static_cast<int>(phi.symbols.size());
    if (m == 0) throw std::invalid_argument("recover: zero operator");
    if (target < 1 || target > m)
        throw std::out_of_range("recover: target symbol out of range");
    const int k = phi.dim;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&]() {
        Vector v(k);
        for (int i = 0; i < k; ++i)
            v[i] = linalg::Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
        return v;
    };

    // Collect draws whose evaluation vectors span C^m.
    std::vector<Vector> xis, etas;
    std::vector<Vector> evals;          // accepted v^(j)
    std::vector<Vector> ortho;          // Gram-Schmidt frame of the above
    const int budget = 50 * m;
    for (int t = 0; t < budget && static_cast<int>(evals.size()) < m; ++t) {
        Vector eta = draw();
        Vector xi = draw();
        Vector v(m);
        for (int i = 0; i < m; ++i)
            v[i] = xi.dot(phi.symbols[static_cast<std::size_t>(i)].second * eta);
        Vector w = v;
        for (const Vector& o : ortho) w -= o.dot(w) * o;
        if (w.norm() > 1e-8 * (1.0 + v.norm())) {
            ortho.push_back(w.normalized());
            evals.push_back(std::move(v));
            etas.push_back(std::move(eta));
            xis.push_back(std::move(xi));
        }
    }
    if (static_cast<int>(evals.size()) < m)
        throw SpanFailure(
            "recover: evaluation vectors failed to span after budget; "
            "B-symbols are (near-)dependent");

    const int r = m;
    // Solve sum_j c_j v^(j) = e_target and absorb conj(c_j) into xi_j.
    Matrix vm(m, r);
    for (int j = 0; j < r; ++j) vm.col(j) = evals[static_cast<std::size_t>(j)];
    Vector rhs = Vector::Zero(m);
    rhs[target - 1] = 1.0;
    const Vector c = vm.partialPivLu().solve(rhs);
    for (int j = 0; j < r; ++j)
        xis[static_cast<std::size_t>(j)] *= std::conj(c[j]);

    SymbolRecovery rec;
    rec.r = r;
    rec.xi = xis;
    rec.eta = etas;
    rec.reconstructed = Matrix::Zero(k, k);
    for (int j = 0; j < r; ++j) {
        // psi_j Phi phi_j = sum_i <B_i eta_j, xi_j> A_i, exactly.
        Matrix comp = Matrix::Zero(k, k);
        for (int i = 0; i < m; ++i) {
            const linalg::Complex w = xis[static_cast<std::size_t>(j)].dot(
                phi.symbols[static_cast<std::size_t>(i)].second *
                etas[static_cast<std::size_t>(j)]);
            comp += w * phi.symbols[static_cast<std::size_t>(i)].first;
        }
        rec.reconstructed += comp;
        rec.compressions.push_back(std::move(comp));
    }
    rec.residual =
        (rec.reconstructed - phi.symbols[static_cast<std::size_t>(target - 1)].first)
            .norm();
    return rec;
}

}  // namespace calkin::elemop
