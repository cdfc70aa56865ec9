#include <doctest.h>

#include <algorithm>
#include <random>

#include "calkin/elemop.hpp"

using namespace calkin;
using elemop::ElementaryOp;
using linalg::Complex;
using linalg::Matrix;
using linalg::Vector;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int k) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m(i, j) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    return m;
}

Vector random_vector(std::mt19937_64& rng, int k) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(k);
    for (int i = 0; i < k; ++i)
        v[i] = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    return v;
}

std::vector<double> sorted_products(const std::vector<double>& a,
                                    const std::vector<double>& b) {
    std::vector<double> out;
    for (double x : a)
        for (double y : b) out.push_back(x * y);
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

ElementaryOp single_pair(const Matrix& a, const Matrix& b) {
    ElementaryOp op;
    op.dim = static_cast<int>(a.rows());
    op.symbols.push_back({a, b});
    return op;
}

}  // namespace

TEST_CASE("hs_matrix acts by multiplication on vectorized input") {
    std::mt19937_64 rng(43);
    const int k = 4;

    ElementaryOp idop = single_pair(Matrix::Identity(k, k),
                                    Matrix::Identity(k, k));
    CHECK((elemop::hs_matrix(idop) - Matrix::Identity(k * k, k * k)).norm() ==
          0.0);

    for (int t = 0; t < 10; ++t) {
        const Matrix a = random_matrix(rng, k);
        const Matrix b = random_matrix(rng, k);
        const Matrix x = random_matrix(rng, k);
        const Matrix hs = elemop::hs_matrix(single_pair(a, b));
        const Vector vx = Eigen::Map<const Vector>(x.data(), k * k);
        const Matrix axb = a * x * b;
        const Vector want = Eigen::Map<const Vector>(axb.data(), k * k);
        CHECK((hs * vx - want).norm() < 1e-10);
    }

    // Commutator applied to its own symbol vanishes.
    const Matrix a = random_matrix(rng, k);
    ElementaryOp comm;
    comm.dim = k;
    comm.symbols.push_back({a, Matrix::Identity(k, k)});
    comm.symbols.push_back({Matrix::Identity(k, k), -a});
    const Matrix hs = elemop::hs_matrix(comm);
    const Vector va = Eigen::Map<const Vector>(a.data(), k * k);
    CHECK((hs * va).norm() < 1e-12);
}

TEST_CASE("hs singular numbers: identity and the product law") {
    const ElementaryOp idop = single_pair(Matrix::Identity(3, 3),
                                          Matrix::Identity(3, 3));
    const std::vector<double> s = elemop::hs_singular_numbers(idop).prefix();
    CHECK(s == std::vector<double>(9, 1.0));

    std::mt19937_64 rng(47);
    for (int t = 0; t < 8; ++t) {
        const Matrix a = random_matrix(rng, 4);
        const Matrix b = random_matrix(rng, 4);
        const std::vector<double> got =
            elemop::hs_singular_numbers(single_pair(a, b)).prefix();
        const std::vector<double> want =
            sorted_products(linalg::svd(a).sigma, linalg::svd(b).sigma);
        for (std::size_t i = 0; i < want.size(); ++i)
            CHECK(std::abs(got[i] - want[i]) <= 1e-9);
    }
}

TEST_CASE("upper bounds: exact band arithmetic on a dyadic diagonal") {
    Matrix d = Matrix::Zero(4, 4);
    d(0, 0) = 1.0;
    d(1, 1) = 0.5;
    d(2, 2) = 0.25;
    d(3, 3) = 0.125;
    const std::size_t count = 16;
    const auto bounds = elemop::a_upper_bounds(d, d, 0.5, count);
    REQUIRE(bounds.size() == count);

    // Each band holds one value, so level N has cross count 4-|N-3| and
    // residual term exactly 2^-N, N = 0..6. Walk the cumulative counts
    // and suffix sums by hand as the oracle.
    std::vector<int> level_count(7);
    std::vector<double> level_term(7);
    for (int n = 0; n <= 6; ++n) {
        level_count[n] = 4 - std::abs(n - 3);
        level_term[n] = std::pow(2.0, -n);
    }
    for (std::size_t j = 1; j <= count; ++j) {
        int level = -1;
        long cum = 0;
        while (level + 1 <= 6 &&
               cum + level_count[level + 1] < static_cast<long>(j)) {
            ++level;
            cum += level_count[level];
        }
        double residual = 0.0;
        for (int n = level + 1; n <= 6; ++n) residual += level_term[n];
        const double expect = std::min(residual, 1.0);
        CHECK(bounds[j - 1].value == doctest::Approx(expect).epsilon(1e-12));
        const auto& w =
            std::get<elemop::BlockApproximantWitness>(bounds[j - 1].witness);
        CHECK(w.rank <= j - 1);
        CHECK(w.rank == static_cast<std::size_t>(cum));
    }

    // Past the last level the bound is exactly zero with full-rank witness.
    Matrix d2 = Matrix::Zero(2, 2);
    d2(0, 0) = 1.0;
    d2(1, 1) = 0.5;
    const auto b2 = elemop::a_upper_bounds(d2, d2, 0.5, 6);
    CHECK(b2[3].value == 0.25);  // the exact fourth singular value
    CHECK(b2[4].value == 0.0);
    CHECK(std::get<elemop::BlockApproximantWitness>(b2[4].witness).rank == 4);
    CHECK(b2[5].value == 0.0);

    CHECK_THROWS_AS(elemop::a_upper_bounds(d * 3.0, d, 0.5, 4), NotNormalized);
}

TEST_CASE("upper bounds: witness re-verification") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 6; ++t) {
        const int k = 3 + static_cast<int>(rng() % 3);
        Matrix a = random_matrix(rng, k);
        Matrix b = random_matrix(rng, k);
        a /= linalg::spectral_norm(a);
        b /= linalg::spectral_norm(b);
        const std::size_t count = static_cast<std::size_t>(k) * k;
        const auto bounds = elemop::a_upper_bounds(a, b, 0.5, count);
        for (const elemop::CertifiedBound& cb : bounds) {
            const auto& w =
                std::get<elemop::BlockApproximantWitness>(cb.witness);
            CHECK(w.rank <= cb.index - 1);
            // The value is the sum of its recorded residual terms, each a
            // product of band norms of contractions.
            double sum = 0.0;
            for (double term : w.residual_terms) {
                CHECK(term >= 0.0);
                CHECK(term <= 1.0 + 1e-12);
                sum += term;
            }
            CHECK(cb.value == doctest::Approx(sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("upper bounds fall below the optimized envelope") {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 10; ++t) {
        const int k = 2 + static_cast<int>(rng() % 5);
        Matrix a = random_matrix(rng, k);
        Matrix b = random_matrix(rng, k);
        a /= linalg::spectral_norm(a);
        b /= linalg::spectral_norm(b);
        const std::size_t count = static_cast<std::size_t>(k) * k;
        const auto bounds = elemop::a_upper_bounds_grid(
            a, b, elemop::kDefaultOmegaGrid, count);
        const std::vector<double> prod =
            sorted_products(linalg::svd(a).sigma, linalg::svd(b).sigma);
        for (std::size_t j = 0; j < count; ++j)
            CHECK(bounds[j].value <= 6.75 * prod[j] + 1e-9);
    }
}

TEST_CASE("lower bounds: unit weights give the operator norm at index one") {
    std::mt19937_64 rng(61);
    const Matrix a = random_matrix(rng, 4);
    const Matrix b = random_matrix(rng, 4);
    const auto e1 = seq::DecreasingSeq::from_values({1.0});
    const auto bounds =
        elemop::h_lower_bounds(a, b, e1, e1, elemop::LowerVariant::BothL4);
    const double na = linalg::spectral_norm(a);
    const double nb = linalg::spectral_norm(b);
    CHECK(bounds[0].value == doctest::Approx(na * nb).epsilon(1e-12));
    for (std::size_t j = 1; j < bounds.size(); ++j)
        CHECK(bounds[j].value == 0.0);  // single nonzero weight

    const auto too_big = seq::DecreasingSeq::from_values({1.0, 1.0});
    CHECK_THROWS_AS(elemop::h_lower_bounds(a, b, too_big, too_big,
                                           elemop::LowerVariant::BothL4),
                    NormViolation);
    // The same weights are admissible in the one-sided variant.
    const auto l2ok = seq::DecreasingSeq::from_values(
        {std::sqrt(0.5), std::sqrt(0.5)});
    CHECK_NOTHROW(elemop::h_lower_bounds(a, b, l2ok, e1,
                                         elemop::LowerVariant::LeftL2));
}

TEST_CASE("lower bound envelope: sqrt-index decay and compression witness") {
    std::mt19937_64 rng(67);
    const Matrix a = random_matrix(rng, 3);
    const Matrix b = random_matrix(rng, 3);
    const auto envelope = elemop::h_lower_envelope(a, b);
    const std::vector<double> prod =
        sorted_products(linalg::svd(a).sigma, linalg::svd(b).sigma);
    REQUIRE(envelope.size() == 9);
    for (std::size_t n = 0; n < 9; ++n)
        CHECK(envelope[n].value ==
              doctest::Approx(prod[n] / std::sqrt(n + 1.0)).epsilon(1e-12));

    // Re-verify each bound by compressing and reading singular values:
    // the n-th singular value of the compression equals the bound.
    for (std::size_t n = 0; n < 9; ++n) {
        const auto& w =
            std::get<elemop::TestFactorizationWitness>(envelope[n].witness);
        const Matrix comp = elemop::h_lower_compression(a, b, w.lambda, w.mu);
        const std::vector<double> cs = linalg::svd(comp).sigma;
        CHECK(std::abs(cs[n] - envelope[n].value) <= 1e-9);
    }
}

TEST_CASE("lower bound factors are contractions between the right norms") {
    // The construction factors through F(X) = U X V^H (Hilbert-Schmidt in,
    // operator norm out) and G(Y) = D_lambda Y D_mu (operator norm in,
    // Hilbert-Schmidt out, admissible weights). Check both on random data.
    std::mt19937_64 rng(107);
    const int k = 4;
    const Matrix a = random_matrix(rng, k);
    const Matrix b = random_matrix(rng, k);
    const linalg::Svd da = linalg::svd(a);
    const linalg::Svd db = linalg::svd(b);
    const Matrix u = da.v * da.u.adjoint();
    const Matrix v = db.u * db.v.adjoint();

    std::vector<double> lam(k, std::pow(static_cast<double>(k), -0.25));
    Eigen::VectorXd lamv(k);
    for (int i = 0; i < k; ++i) lamv[i] = lam[i];
    const Matrix d_lambda = da.u * lamv.asDiagonal() * da.u.adjoint();
    const Matrix d_mu = db.v * lamv.asDiagonal() * db.v.adjoint();

    for (int t = 0; t < 20; ++t) {
        const Matrix x = random_matrix(rng, k);
        CHECK(linalg::spectral_norm(u * x * v.adjoint()) <= x.norm() + 1e-9);
        CHECK((d_lambda * x * d_mu).norm() <=
              linalg::spectral_norm(x) + 1e-9);
    }
}

TEST_CASE("lower bounds stay below upper bounds at every index") {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 10; ++t) {
        const int k = 2 + static_cast<int>(rng() % 5);
        Matrix a = random_matrix(rng, k);
        Matrix b = random_matrix(rng, k);
        a /= linalg::spectral_norm(a);
        b /= linalg::spectral_norm(b);
        const std::size_t count = static_cast<std::size_t>(k) * k;
        const auto upper = elemop::a_upper_bounds_grid(
            a, b, elemop::kDefaultOmegaGrid, count);
        const auto lower = elemop::h_lower_envelope(a, b);
        for (std::size_t j = 0; j < count; ++j)
            CHECK(lower[j].value <= upper[j].value + 1e-9);
    }
}

TEST_CASE("minimal representation") {
    std::mt19937_64 rng(73);
    const int k = 4;
    const Matrix a = random_matrix(rng, k);
    const Matrix b = random_matrix(rng, k);
    const Matrix c = random_matrix(rng, k);

    // Exact cancellation collapses to the zero marker.
    ElementaryOp cancel;
    cancel.dim = k;
    cancel.symbols.push_back({a, b});
    cancel.symbols.push_back({a, -b});
    CHECK(elemop::minimal_representation(cancel).symbols.empty());

    // A scaled repeat folds into a single pair.
    ElementaryOp fold;
    fold.dim = k;
    fold.symbols.push_back({a, b});
    fold.symbols.push_back({2.0 * a, c});
    const ElementaryOp folded = elemop::minimal_representation(fold);
    REQUIRE(folded.symbols.size() == 1);
    CHECK((folded.symbols[0].first - a).norm() < 1e-10);
    CHECK((folded.symbols[0].second - (b + 2.0 * c)).norm() < 1e-10);

    // Random redundant operators: pair count shrinks, action preserved.
    for (int t = 0; t < 8; ++t) {
        ElementaryOp op;
        op.dim = k;
        const Matrix a1 = random_matrix(rng, k);
        const Matrix a2 = random_matrix(rng, k);
        op.symbols.push_back({a1, random_matrix(rng, k)});
        op.symbols.push_back({a2, random_matrix(rng, k)});
        op.symbols.push_back({a1 + a2, random_matrix(rng, k)});
        op.symbols.push_back({3.0 * a1, random_matrix(rng, k)});
        op.symbols.push_back({random_matrix(rng, k), random_matrix(rng, k)});
        const ElementaryOp min = elemop::minimal_representation(op);
        CHECK(min.symbols.size() <= op.symbols.size());
        CHECK(min.symbols.size() <= 3);  // at most 3 independent A-symbols
        CHECK((elemop::hs_matrix(min) - elemop::hs_matrix(op)).norm() < 1e-10);
        const std::vector<double> s0 = elemop::hs_singular_numbers(op).prefix();
        const std::vector<double> s1 =
            elemop::hs_singular_numbers(min).prefix();
        for (std::size_t i = 0; i < s0.size(); ++i)
            CHECK(std::abs(s0[i] - s1[i]) <= 1e-9);
    }
}

TEST_CASE("symbol recovery") {
    std::mt19937_64 rng(79);
    const int k = 5, m = 3;

    // Rank-one normalized single symbol: one pair suffices.
    {
        const Vector xi = random_vector(rng, k);
        const Vector eta = random_vector(rng, k);
        Matrix b1 = xi * eta.adjoint();  // <B_1 eta', xi'> pairs well
        b1 /= (xi.dot(b1 * eta));        // normalize the evaluation to 1
        ElementaryOp op = single_pair(random_matrix(rng, k), b1);
        const elemop::SymbolRecovery rec =
            elemop::recover_first_symbol(op, 1, 99);
        CHECK(rec.r == 1);
        CHECK(rec.residual < 1e-8);
    }

    for (int t = 0; t < 8; ++t) {
        ElementaryOp op;
        op.dim = k;
        for (int i = 0; i < m; ++i)
            op.symbols.push_back({random_matrix(rng, k), random_matrix(rng, k)});
        const elemop::SymbolRecovery rec =
            elemop::recover_first_symbol(op, 1, 1234 + t);
        CHECK(rec.r == m);
        CHECK(rec.residual < 1e-8);

        // Shifted additivity of the singular values of the target symbol.
        const std::vector<double> sa = linalg::svd(op.symbols[0].first).sigma;
        for (int n = 1; rec.r * n - rec.r + 1 <= k; ++n) {
            double rhs = 0.0;
            for (const Matrix& comp : rec.compressions)
                rhs += linalg::svd(comp).sigma[static_cast<std::size_t>(n - 1)];
            CHECK(sa[static_cast<std::size_t>(rec.r * n - rec.r)] <=
                  rhs + 1e-9);
        }

        // Deterministic under the seed.
        const elemop::SymbolRecovery again =
            elemop::recover_first_symbol(op, 1, 1234 + t);
        CHECK(again.residual == rec.residual);
        CHECK((again.reconstructed - rec.reconstructed).norm() == 0.0);

        // Any other symbol is recoverable too.
        const elemop::SymbolRecovery second =
            elemop::recover_first_symbol(op, 2, 4321 + t);
        CHECK((second.reconstructed - op.symbols[1].first).norm() < 1e-8);
    }

    // Dependent second-side symbols exhaust the sampling budget.
    ElementaryOp dep;
    dep.dim = k;
    const Matrix b = random_matrix(rng, k);
    dep.symbols.push_back({random_matrix(rng, k), b});
    dep.symbols.push_back({random_matrix(rng, k), 2.0 * b});
    CHECK_THROWS_AS(elemop::recover_first_symbol(dep, 1, 7), SpanFailure);
}
