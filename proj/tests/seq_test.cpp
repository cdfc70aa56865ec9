#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "calkin/seq.hpp"

using namespace calkin;
using seq::DecreasingSeq;
using seq::WeightSeq;

namespace {

// Brute-force oracle: every pairwise product, sorted non-increasingly.
std::vector<double> sorted_products(const std::vector<double>& a,
                                    const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() * b.size());
    for (double x : a)
        for (double y : b) out.push_back(x * y);
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

std::vector<double> random_decreasing(std::mt19937_64& rng, std::size_t len) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(len);
    for (double& x : v) x = std::abs(gauss(rng));
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

}  // namespace

TEST_CASE("star_rearrange sorts absolute values with multiplicity") {
    const std::vector<double> raw{0.1, 0.5, 0.3};
    const DecreasingSeq s = seq::star_rearrange(std::span(raw));
    CHECK(s.prefix() == std::vector<double>{0.5, 0.3, 0.1});

    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(seq::star_rearrange(std::span(ones)).prefix() == ones);

    const std::vector<std::complex<double>> c{{3.0, 4.0}, {0.0, -2.0}};
    CHECK(seq::star_rearrange(std::span(c)).prefix() ==
          std::vector<double>{5.0, 2.0});

    const std::vector<double> empty;
    CHECK(seq::star_rearrange(std::span(empty)).prefix().empty());
}

TEST_CASE("star_rearrange matches a full-sort oracle on random input") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> raw(100);
    for (double& x : raw) x = unif(rng);

    std::vector<double> expect(raw.size());
    std::transform(raw.begin(), raw.end(), expect.begin(),
                   [](double x) { return std::abs(x); });
    std::sort(expect.begin(), expect.end(), std::greater<double>());

    CHECK(seq::star_rearrange(std::span(raw)).prefix() == expect);
}

TEST_CASE("star_rearrange is idempotent and permutation-invariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> raw(31);
        for (double& x : raw) x = unif(rng);
        const std::vector<double> once =
            seq::star_rearrange(std::span(raw)).prefix();
        CHECK(seq::star_rearrange(std::span(once)).prefix() == once);
        std::shuffle(raw.begin(), raw.end(), rng);
        CHECK(seq::star_rearrange(std::span(raw)).prefix() == once);
    }
}

TEST_CASE("generator invariants are enforced") {
    CHECK_THROWS_AS(DecreasingSeq::prefix_only({0.5, 0.7}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DecreasingSeq::prefix_only({0.5, -0.1}),
                    std::invalid_argument);
    // Prefix must agree with its formula.
    CHECK_THROWS_AS(DecreasingSeq({1.0, 0.4}, seq::Generator::geometric(0.5)),
                    std::invalid_argument);
    CHECK_NOTHROW(DecreasingSeq({1.0, 0.5, 0.25},
                                seq::Generator::geometric(0.5)));
}

TEST_CASE("take materializes formulas and pads finite support") {
    const DecreasingSeq g = DecreasingSeq::geometric(0.5, 4);
    const std::vector<double> v = g.take(8);
    CHECK(v.size() == 8);
    CHECK(v[7] == doctest::Approx(1.0 / 128).epsilon(1e-15));

    const DecreasingSeq fin = DecreasingSeq::from_values({0.9, 0.3});
    CHECK(fin.take(4) == std::vector<double>{0.9, 0.3, 0.0, 0.0});

    const DecreasingSeq raw = DecreasingSeq::prefix_only({0.9, 0.3});
    CHECK_THROWS_AS(raw.take(3), InsufficientPrefix);
    CHECK(raw.take(2) == std::vector<double>{0.9, 0.3});
}

TEST_CASE("tensor_prefix: unit vector is the identity element") {
    const DecreasingSeq e = DecreasingSeq::from_values({1.0});
    const DecreasingSeq a = DecreasingSeq::from_values({0.8, 0.5, 0.25, 0.1});
    const DecreasingSeq t = seq::tensor_prefix(e, a, 4);
    CHECK(t.prefix() == a.prefix());
}

TEST_CASE("tensor_prefix: geometric square multiplicities") {
    const DecreasingSeq g = DecreasingSeq::geometric(0.5);
    const DecreasingSeq t = seq::tensor_prefix(g, g, 6);
    CHECK(t.prefix() == std::vector<double>{1.0, 0.5, 0.5, 0.25, 0.25, 0.25});

    // Level n carries multiplicity n+1, for both bases.
    for (double omega : {0.5, 1.0 / 3.0}) {
        const DecreasingSeq h = DecreasingSeq::geometric(omega);
        std::vector<double> expected;
        double level = 1.0;
        for (int n = 0; n <= 12; ++n) {
            for (int c = 0; c <= n; ++c) expected.push_back(level);
            level *= omega;
        }
        const std::vector<double> got =
            seq::tensor_prefix(h, h, expected.size()).prefix();
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(std::abs(got[i] - expected[i]) <=
                  seq::kIdentityTol * expected[i]);
    }
}

TEST_CASE("tensor_prefix equals the brute-force oracle on random pairs") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 25; ++t) {
        const std::vector<double> av = random_decreasing(rng, 12);
        const std::vector<double> bv = random_decreasing(rng, 12);
        const std::vector<double> got =
            seq::tensor_prefix(DecreasingSeq::from_values(av),
                               DecreasingSeq::from_values(bv), 144)
                .prefix();
        CHECK(got == sorted_products(av, bv));
    }
}

TEST_CASE("tensor_prefix is commutative and monotone") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        const std::vector<double> av = random_decreasing(rng, 9);
        const std::vector<double> bv = random_decreasing(rng, 7);
        const DecreasingSeq a = DecreasingSeq::from_values(av);
        const DecreasingSeq b = DecreasingSeq::from_values(bv);
        CHECK(seq::tensor_prefix(a, b, 40).prefix() ==
              seq::tensor_prefix(b, a, 40).prefix());

        // Termwise-larger inputs give a termwise-larger product sequence.
        std::vector<double> av2 = av, bv2 = bv;
        std::uniform_real_distribution<double> bump(0.0, 0.5);
        for (double& x : av2) x += bump(rng);
        for (double& x : bv2) x += bump(rng);
        std::sort(av2.begin(), av2.end(), std::greater<double>());
        std::sort(bv2.begin(), bv2.end(), std::greater<double>());
        // Sorting may pair entries differently, so enforce dominance.
        for (std::size_t i = 0; i < av.size(); ++i)
            av2[i] = std::max(av2[i], av[i]);
        for (std::size_t i = 0; i < bv.size(); ++i)
            bv2[i] = std::max(bv2[i], bv[i]);
        const std::vector<double> lo = seq::tensor_prefix(a, b, 63).prefix();
        const std::vector<double> hi =
            seq::tensor_prefix(DecreasingSeq::from_values(av2),
                               DecreasingSeq::from_values(bv2), 63)
                .prefix();
        for (std::size_t i = 0; i < lo.size(); ++i) CHECK(lo[i] <= hi[i]);
    }
}

TEST_CASE("tensor_prefix certificates for unknown tails") {
    // A raw prefix long enough for the requested terms needs no tail.
    const DecreasingSeq a = DecreasingSeq::prefix_only({1.0, 0.9, 0.8});
    const DecreasingSeq b = DecreasingSeq::from_values({1.0, 0.5});
    CHECK(seq::tensor_prefix(a, b, 3).prefix() ==
          std::vector<double>{1.0, 0.9, 0.8});

    // Asking past what the tail bound can separate must fail.
    CHECK_THROWS_AS(seq::tensor_prefix(a, b, 5), InsufficientPrefix);

    // A raw prefix ending in zero behaves like finite support.
    const DecreasingSeq z = DecreasingSeq::prefix_only({1.0, 0.0});
    CHECK(seq::tensor_prefix(z, b, 4).prefix() ==
          std::vector<double>{1.0, 0.5, 0.0, 0.0});
}

TEST_CASE("tensor certificates are sound against hidden tails") {
    // Reveal only a prefix of a longer sequence; whenever the certificate
    // accepts, the result must match the brute force over the full data,
    // whatever the hidden tail was.
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> cut(1, 39);
    std::uniform_int_distribution<int> ask(1, 60);
    int accepted = 0;
    for (int t = 0; t < 200; ++t) {
        const std::vector<double> full_a = random_decreasing(rng, 40);
        const std::vector<double> full_b = random_decreasing(rng, 40);
        std::vector<double> part_a(full_a.begin(),
                                   full_a.begin() + cut(rng));
        std::vector<double> part_b(full_b.begin(),
                                   full_b.begin() + cut(rng));
        const std::size_t n = static_cast<std::size_t>(ask(rng));
        std::vector<double> truth = sorted_products(full_a, full_b);
        truth.resize(n);
        try {
            const std::vector<double> got =
                seq::tensor_prefix(DecreasingSeq::prefix_only(part_a),
                                   DecreasingSeq::prefix_only(part_b), n)
                    .prefix();
            ++accepted;
            CHECK(got == truth);
        } catch (const InsufficientPrefix&) {
            // Refusing is always allowed; accepting wrongly is not.
        }
    }
    CHECK(accepted > 0);  // the certificate fires often enough to matter
}

TEST_CASE("tensor_prefix_indexed reports producing indices") {
    const DecreasingSeq g = DecreasingSeq::geometric(0.5);
    const auto entries = seq::tensor_prefix_indexed(g, g, 6);
    CHECK(entries[0].i == 1);
    CHECK(entries[0].j == 1);
    for (const seq::TensorEntry& e : entries)
        CHECK(e.value == g.term(e.i) * g.term(e.j));
    // Ties come out in grid-lexicographic order.
    CHECK(entries[1].i == 1);
    CHECK(entries[1].j == 2);
    CHECK(entries[2].i == 2);
    CHECK(entries[2].j == 1);
}

TEST_CASE("dominates: reflexive, separating, termwise") {
    const DecreasingSeq g = DecreasingSeq::geometric(0.5);
    const seq::DominationVerdict self = seq::dominates(g, g, 40, 1e6);
    CHECK(self.dominated);
    CHECK(self.constant == doctest::Approx(1.0));

    // n^-1 against 2^-(n-1): the ratio grows without bound.
    const seq::DominationVerdict no =
        seq::dominates(DecreasingSeq::power(1.0), g, 60, 1e6);
    CHECK_FALSE(no.dominated);
    CHECK(no.witness_index > 1);

    const seq::DominationVerdict quarter =
        seq::dominates(DecreasingSeq::geometric(0.25), g, 60, 1e6);
    CHECK(quarter.dominated);
    CHECK(quarter.constant == doctest::Approx(1.0));

    // Zero in the dominating sequence where the left is positive.
    const seq::DominationVerdict zero = seq::dominates(
        DecreasingSeq::from_values({1.0, 0.5}),
        DecreasingSeq::from_values({1.0, 0.0}), 2, 1e6);
    CHECK_FALSE(zero.dominated);
    CHECK(zero.witness_index == 2);
}

TEST_CASE("lorentz_norm: frozen values and summation oracle") {
    const WeightSeq w12 = WeightSeq::classical_lorentz(1, 2);
    const DecreasingSeq e1 = DecreasingSeq::from_values({1.0});
    CHECK(seq::lorentz_norm(e1, w12, 1.0, 8).value == doctest::Approx(1.0));

    const DecreasingSeq e12 = DecreasingSeq::from_values({1.0, 1.0});
    CHECK(seq::lorentz_norm(e12, w12, 1.0, 8).value ==
          doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-14));

    std::mt19937_64 rng(41);
    const std::vector<double> av = random_decreasing(rng, 50);
    const DecreasingSeq a = DecreasingSeq::from_values(av);
    for (double p : {1.0, 2.0}) {
        double direct = 0.0;
        for (std::size_t n = 0; n < 50; ++n)
            direct += w12.term(n + 1) * std::pow(av[n], p);
        direct = std::pow(direct, 1.0 / p);
        const seq::LorentzNorm got = seq::lorentz_norm(a, w12, p, 50);
        CHECK(std::abs(got.value - direct) <= 1e-12 * (1.0 + direct));
        CHECK(got.last_term ==
              doctest::Approx(w12.term(50) * std::pow(av[49], p)));
    }
}

TEST_CASE("weight families validate and evaluate") {
    CHECK_THROWS_AS(WeightSeq::classical_lorentz(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(WeightSeq::from_values({0.9, 0.8}), std::invalid_argument);
    CHECK_THROWS_AS(WeightSeq::from_values({1.0, 1.1}), std::invalid_argument);

    const WeightSeq lp = WeightSeq::log_power(1, 1);
    CHECK(lp.term(1) == doctest::Approx(1.0));
    CHECK(lp.term(2) == doctest::Approx((1.0 + std::log(2.0)) / 2.0));

    const WeightSeq ex = WeightSeq::from_values({1.0, 0.9, 0.8});
    CHECK(ex.term(3) == 0.8);
    CHECK_THROWS_AS(ex.term(4), InsufficientPrefix);
}

TEST_CASE("weight_submult_constant") {
    // Classical weights are multiplicative: the constant is exactly one.
    CHECK(seq::weight_submult_constant(WeightSeq::classical_lorentz(1, 2),
                                       100) == 1.0);
    CHECK(seq::weight_submult_constant(WeightSeq::classical_lorentz(2, 3),
                                       100) == 1.0);
    CHECK(seq::weight_submult_constant(WeightSeq::log_power(1, 1), 100) == 1.0);

    // The numerical scan agrees with the algebraic constant.
    const WeightSeq cl = WeightSeq::classical_lorentz(1, 2);
    double scan = 0.0;
    for (std::size_t m = 1; m <= 40; ++m)
        for (std::size_t n = 1; n <= 40; ++n)
            scan = std::max(scan, cl.term(m * n) / (cl.term(m) * cl.term(n)));
    CHECK(scan == doctest::Approx(1.0).epsilon(1e-12));

    // Explicit weights against the brute-force double loop.
    std::vector<double> wv(64);
    for (std::size_t n = 0; n < wv.size(); ++n)
        wv[n] = 1.0 / std::sqrt(static_cast<double>(n + 1));
    const WeightSeq ex = WeightSeq::from_values(wv);
    double brute = 0.0;
    for (std::size_t m = 1; m <= 8; ++m)
        for (std::size_t n = 1; n <= 8; ++n)
            brute = std::max(brute, ex.term(m * n) / (ex.term(m) * ex.term(n)));
    CHECK(seq::weight_submult_constant(ex, 8) == brute);
    CHECK_THROWS_AS(seq::weight_submult_constant(ex, 9), InsufficientPrefix);
}

TEST_CASE("lorentz_tensor_check holds on singletons, examples, random pairs") {
    const WeightSeq w = WeightSeq::classical_lorentz(1, 2);
    const DecreasingSeq e1 = DecreasingSeq::from_values({1.0});
    const seq::TensorNormReport single =
        seq::lorentz_tensor_check(e1, e1, w, 1.0, 4);
    CHECK(single.holds);
    CHECK(single.lhs == doctest::Approx(1.0));

    const DecreasingSeq g = DecreasingSeq::geometric(0.5);
    const seq::TensorNormReport geo = seq::lorentz_tensor_check(
        g, g, WeightSeq::log_power(1, 0), 1.0, 400);
    CHECK(geo.holds);
    CHECK(geo.lhs < geo.rhs);  // measurable slack

    std::mt19937_64 rng(59);
    for (int t = 0; t < 40; ++t) {
        const DecreasingSeq a =
            DecreasingSeq::from_values(random_decreasing(rng, 12));
        const DecreasingSeq b =
            DecreasingSeq::from_values(random_decreasing(rng, 12));
        for (double p : {1.0, 2.0}) {
            const seq::TensorNormReport rep =
                seq::lorentz_tensor_check(a, b, w, p, 144);
            CHECK(rep.holds);
        }
    }
}
