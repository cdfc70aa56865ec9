#include "calkin/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "calkin/blockalg.hpp"
#include "calkin/elemop.hpp"
#include "calkin/io.hpp"
#include "calkin/linalg.hpp"
#include "calkin/seq.hpp"
#include "calkin/spaces.hpp"
#include "calkin/version.hpp"

namespace calkin::verify {

namespace {

using linalg::Complex;
using linalg::Matrix;

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    return m;
}

Matrix random_contraction(std::mt19937_64& rng, int k) {
    Matrix m = random_matrix(rng, k, k);
    return m / linalg::spectral_norm(m);
}

std::vector<double> random_decreasing(std::mt19937_64& rng, std::size_t len) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(len);
    for (double& x : v) x = std::abs(gauss(rng));
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

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

struct Runner {
    const RunConfig& cfg;
    std::vector<CriterionResult> results;

    void run(int id, const std::string& name, const std::string& operation,
             const std::string& claim, double threshold, double budget,
             const std::function<double(CriterionResult&)>& body) {
        CriterionResult r;
        r.id = id;
        r.name = name;
        r.operation = operation;
        r.claim = claim;
        r.threshold = threshold;
        r.budget = budget;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.measured = body(r);
            r.pass = r.measured <= threshold;
        } catch (const std::exception& e) {
            r.pass = false;
            r.measured = std::numeric_limits<double>::infinity();
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        if (budget > 0.0 && r.seconds >= budget) r.pass = false;
        results.push_back(std::move(r));
    }
};

// 1: singular values of kron(A,B) against the sorted product oracle.
double crit_kron_product_law(const RunConfig& cfg, CriterionResult&) {
    std::mt19937_64 rng(cfg.seed ^ 0x1ULL);
    std::uniform_int_distribution<int> dim(2, 6);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int ka = dim(rng), kb = dim(rng);
        const Matrix a = random_matrix(rng, ka, ka);
        const Matrix b = random_matrix(rng, kb, kb);
        const std::vector<double> got = linalg::svd(linalg::kron(a, b)).sigma;
        const std::vector<double> want =
            sorted_products(linalg::svd(a).sigma, linalg::svd(b).sigma);
        for (std::size_t i = 0; i < want.size(); ++i)
            worst = std::max(worst, std::abs(got[i] - want[i]));
    }
    return worst;
}

// 2: frontier tensor_prefix against the brute-force sort, as multisets.
double crit_tensor_oracle(const RunConfig& cfg, CriterionResult&) {
    std::mt19937_64 rng(cfg.seed ^ 0x2ULL);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::vector<double> av = random_decreasing(rng, 12);
        const std::vector<double> bv = random_decreasing(rng, 12);
        const seq::DecreasingSeq a = seq::DecreasingSeq::from_values(av);
        const seq::DecreasingSeq b = seq::DecreasingSeq::from_values(bv);
        const std::vector<double> got =
            seq::tensor_prefix(a, b, 144).prefix();
        const std::vector<double> want = sorted_products(av, bv);
        for (std::size_t i = 0; i < 144; ++i)
            worst = std::max(worst, std::abs(got[i] - want[i]));
    }
    return worst;
}

// 3: geometric squares carry value w^n with multiplicity n+1.
double crit_multiplicity_identity(const RunConfig&, CriterionResult& r) {
    double worst = 0.0;
    for (double omega : {0.5, 1.0 / 3.0}) {
        std::vector<double> expected;
        double level = 1.0;
        for (int n = 0; n <= 12; ++n) {
            for (int c = 0; c <= n; ++c) expected.push_back(level);
            level *= omega;
        }
        const seq::DecreasingSeq g = seq::DecreasingSeq::geometric(omega);
        const std::vector<double> got =
            seq::tensor_prefix(g, g, expected.size()).prefix();
        double local = 0.0;
        for (std::size_t i = 0; i < expected.size(); ++i)
            local = std::max(local,
                             std::abs(got[i] - expected[i]) / expected[i]);
        if (omega == 0.5 && local != 0.0) local = 1.0;  // must be bit-exact
        worst = std::max(worst, local);
    }
    r.detail = "multiplicities grouped exactly; values at relative identity tol";
    return worst;
}

// 4: the three stability verdicts, plus the sufficient-condition certificate.
double crit_stability_examples(const RunConfig& cfg, CriterionResult& r) {
    using spaces::StabilityVerdict;
    int failures = 0;
    std::ostringstream detail;

    const auto geo = spaces::stability_condition3(
        seq::DecreasingSeq::geometric(0.5), 0.5, cfg.r_max, cfg.depth);
    if (geo.decision != StabilityVerdict::Decision::NotStableAtHorizon) {
        ++failures;
        detail << "geometric verdict wrong; ";
    }
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto pow = spaces::stability_condition3(
            seq::DecreasingSeq::power(lambda), std::exp(-1.0), cfg.r_max,
            cfg.depth);
        if (pow.decision != StabilityVerdict::Decision::NotStableAtHorizon) {
            ++failures;
            detail << "power " << lambda << " verdict wrong; ";
        }
    }
    const auto logv = spaces::stability_condition3(
        seq::DecreasingSeq::log_inverse(), 0.5, cfg.r_max,
        cfg.depth_double_exp);
    if (logv.decision != StabilityVerdict::Decision::StableCertified) {
        ++failures;
        detail << "log-inverse not certified; ";
    }
    const auto remc = spaces::remc_sufficient(seq::DecreasingSeq::log_inverse(),
                                              0.5, cfg.depth_double_exp);
    if (!remc.holds || !(remc.constant >= 0.25)) {
        ++failures;
        detail << "log-inverse sufficient-condition certificate missing; ";
    }
    r.detail = detail.str();
    return static_cast<double>(failures);
}

// 5: closed-form divergence table strictly increasing, span > 1e3.
double crit_counterexample(const RunConfig&, CriterionResult& r) {
    const std::vector<int> r0s{1, 2, 3};
    const std::vector<int> rs{2, 4, 6, 8, 10};
    const std::vector<spaces::GapRow> rows =
        spaces::counterexample_divergence(0.5, r0s, rs);
    int failures = 0;
    for (std::size_t g = 0; g < r0s.size(); ++g) {
        const std::size_t base = g * rs.size();
        for (std::size_t i = 1; i < rs.size(); ++i)
            if (!(rows[base + i].ratio > rows[base + i - 1].ratio)) ++failures;
        const double span =
            rows[base + rs.size() - 1].ratio / rows[base].ratio;
        if (!(span > 1e3)) ++failures;
        if (g == 0)
            r.detail = "first group span " + io::fmt15(span);
    }
    return static_cast<double>(failures);
}

// 6: the weighted tensor inequality on random pairs under three weights.
double crit_lorentz_inequality(const RunConfig& cfg, CriterionResult& r) {
    std::mt19937_64 rng(cfg.seed ^ 0x6ULL);
    struct Case {
        seq::WeightSeq w;
        double p;
    };
    const std::vector<Case> cases{
        {seq::WeightSeq::classical_lorentz(1, 2), 1.0},
        {seq::WeightSeq::classical_lorentz(2, 3), 2.0},
        {seq::WeightSeq::log_power(1, 1), 1.0},
    };
    for (const Case& c : cases)
        if (c.w.kind() == seq::WeightKind::ClassicalLorentz &&
            seq::weight_submult_constant(c.w, 12) != 1.0) {
            r.detail = "classical weight constant not exactly 1";
            return 1.0;
        }
    double worst = -1.0;  // most positive lhs - rhs gap
    for (int t = 0; t < 100; ++t) {
        const seq::DecreasingSeq a =
            seq::DecreasingSeq::from_values(random_decreasing(rng, 12));
        const seq::DecreasingSeq b =
            seq::DecreasingSeq::from_values(random_decreasing(rng, 12));
        for (const Case& c : cases) {
            const seq::TensorNormReport rep =
                seq::lorentz_tensor_check(a, b, c.w, c.p, 144);
            worst = std::max(worst, rep.lhs - rep.rhs);
        }
    }
    return worst;
}

// 7 and 8 share the same seeded pairs.
struct BoundPair {
    Matrix a, b;
    std::vector<double> products;  // s(A) (x) s(B), brute force
    std::vector<elemop::CertifiedBound> upper;
    std::vector<elemop::CertifiedBound> lower;
};

std::vector<BoundPair> bound_pairs(const RunConfig& cfg) {
    std::mt19937_64 rng(cfg.seed ^ 0x7ULL);
    std::uniform_int_distribution<int> dim(2, 6);
    std::vector<BoundPair> pairs;
    pairs.reserve(20);
    for (int t = 0; t < 20; ++t) {
        BoundPair p;
        const int k = dim(rng);
        p.a = random_contraction(rng, k);
        p.b = random_contraction(rng, k);
        p.products = sorted_products(linalg::svd(p.a).sigma,
                                     linalg::svd(p.b).sigma);
        const std::size_t count = static_cast<std::size_t>(k) * k;
        p.upper = elemop::a_upper_bounds_grid(p.a, p.b,
                                              elemop::kDefaultOmegaGrid, count);
        p.lower = elemop::h_lower_envelope(p.a, p.b);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

double crit_envelope(const std::vector<BoundPair>& pairs, CriterionResult&) {
    double worst = -1.0;  // most positive upper - 6.75 * product gap
    for (const BoundPair& p : pairs)
        for (std::size_t j = 0; j < p.upper.size(); ++j)
            worst = std::max(worst, p.upper[j].value - 6.75 * p.products[j]);
    return worst;
}

double crit_sandwich(const std::vector<BoundPair>& pairs, CriterionResult&) {
    if (pairs.empty())
        throw std::runtime_error("bound pairs unavailable (criterion 7 failed)");
    double worst = -1.0;
    for (const BoundPair& p : pairs) {
        for (std::size_t j = 0; j < p.upper.size(); ++j)
            worst = std::max(worst, p.lower[j].value - p.upper[j].value);
        // h_1 certified value is exactly ||A|| ||B||.
        worst = std::max(worst,
                         std::abs(p.lower[0].value - p.products[0]));
    }
    return worst;
}

// 9: banded projection inequality on singular bands.
double crit_koenig(const RunConfig& cfg, CriterionResult&) {
    std::mt19937_64 rng(cfg.seed ^ 0x9ULL);
    std::uniform_int_distribution<int> dim(2, 6);
    double worst = -1.0;
    for (int t = 0; t < 50; ++t) {
        const int k = dim(rng);
        const Matrix a = random_contraction(rng, k);
        const Matrix b = random_contraction(rng, k);
        std::vector<Matrix> p = linalg::singular_band_projections(a, 0.5);
        std::vector<Matrix> q = linalg::singular_band_projections(b, 0.5);
        const std::size_t bands = std::max(p.size(), q.size());
        p.resize(bands, Matrix::Zero(k, k));
        q.resize(bands, Matrix::Zero(k, k));
        const linalg::KoenigReport rep = linalg::koenig_lemma_check(a, b, p, q);
        worst = std::max(worst, rep.lhs - rep.rhs);
    }
    return worst;
}

// 10: recover the first symbol and check the rank-shift inequality.
double crit_recovery(const RunConfig& cfg, CriterionResult& r) {
    std::mt19937_64 rng(cfg.seed ^ 0xaULL);
    const int m = 3, k = 5;
    double worst_residual = 0.0;
    double worst_gap = -1.0;
    for (int t = 0; t < 20; ++t) {
        elemop::ElementaryOp phi;
        phi.dim = k;
        for (int i = 0; i < m; ++i)
            phi.symbols.push_back(
                {random_matrix(rng, k, k), random_matrix(rng, k, k)});
        const elemop::SymbolRecovery rec =
            elemop::recover_first_symbol(phi, 1, cfg.seed + 1000 + t);
        worst_residual = std::max(worst_residual, rec.residual);

        const std::vector<double> sa =
            linalg::svd(phi.symbols[0].first).sigma;
        std::vector<std::vector<double>> comp_s;
        for (const Matrix& c : rec.compressions)
            comp_s.push_back(linalg::svd(c).sigma);
        for (int n = 1; rec.r * n - rec.r + 1 <= k; ++n) {
            double rhs = 0.0;
            for (const std::vector<double>& s : comp_s)
                rhs += s[static_cast<std::size_t>(n - 1)];
            const double lhs =
                sa[static_cast<std::size_t>(rec.r * n - rec.r)];
            worst_gap = std::max(worst_gap, lhs - rhs);
        }
    }
    r.detail = "worst residual " + io::fmt15(worst_residual) +
               ", worst shift-inequality gap " + io::fmt15(worst_gap);
    // Both must clear their own thresholds; fold into one measure.
    return std::max(worst_residual / 1e-8, worst_gap / 1e-9);
}

// 11: additivity of singular values over random draws.
double crit_additivity(const RunConfig& cfg, CriterionResult&) {
    std::mt19937_64 rng(cfg.seed ^ 0xbULL);
    std::uniform_int_distribution<int> dim(2, 8);
    double worst = -1.0;
    for (int t = 0; t < 200; ++t) {
        const int k = dim(rng);
        const Matrix s = random_matrix(rng, k, k);
        const Matrix u = random_matrix(rng, k, k);
        std::uniform_int_distribution<int> pick(1, k);
        int m = pick(rng), n = pick(rng);
        while (m + n - 1 > k) {
            m = pick(rng);
            n = pick(rng);
        }
        const linalg::AdditivityReport rep = linalg::sv_additivity_check(
            s, u, static_cast<std::size_t>(m), static_cast<std::size_t>(n));
        worst = std::max(worst, rep.lhs - rep.rhs);
    }
    return worst;
}

// 12: pinching is an idempotent contraction, the factorization commutes,
// and the block sandwich never inverts.
double crit_blocks(const RunConfig& cfg, CriterionResult& r) {
    std::mt19937_64 rng(cfg.seed ^ 0xcULL);
    std::uniform_int_distribution<int> nblocks(2, 3), bdim(1, 3);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        blockalg::BlockAlgebra alg;
        const int nb = nblocks(rng);
        for (int i = 0; i < nb; ++i) alg.blocks.push_back(bdim(rng));
        const int k = alg.total_dim();
        const Matrix x = random_matrix(rng, k, k);
        const Matrix px = blockalg::pinch(alg, x);
        worst = std::max(worst, (blockalg::pinch(alg, px) - px).norm());
        worst = std::max(worst, linalg::spectral_norm(px) -
                                    linalg::spectral_norm(x));
        const Matrix a =
            blockalg::pinch(alg, random_matrix(rng, k, k));
        const Matrix b =
            blockalg::pinch(alg, random_matrix(rng, k, k));
        const blockalg::FactorizationReport rep =
            blockalg::factorization_check(alg, a, b, x);
        worst = std::max(worst,
                         std::max(rep.residual_commute, rep.residual_diagonal));
    }
    std::size_t violations = 0;
    for (int t = 0; t < 20; ++t) {
        blockalg::BlockAlgebra alg;
        const int nb = nblocks(rng);
        for (int i = 0; i < nb; ++i) alg.blocks.push_back(bdim(rng));
        const int k = alg.total_dim();
        Matrix a = blockalg::pinch(alg, random_matrix(rng, k, k));
        Matrix b = blockalg::pinch(alg, random_matrix(rng, k, k));
        a /= linalg::spectral_norm(a);
        b /= linalg::spectral_norm(b);
        const blockalg::SandwichReport rep =
            blockalg::restriction_sandwich(alg, a, b, 0.5);
        violations += rep.violations;
    }
    r.detail = "sandwich violations: " + std::to_string(violations);
    if (violations > 0) return 1.0;
    return worst;
}

// 13: j^(-1/p) lies in the 2p class but follows the harmonic series in p.
double crit_l2p_demo(const RunConfig&, CriterionResult& r) {
    int failures = 0;
    std::ostringstream detail;
    for (double p : {3.0, 4.0}) {
        const spaces::TailPowerDemo demo = spaces::l2p_not_lp_demo(p, 10000);
        const spaces::TailPowerRow& last = demo.rows.back();
        if (!(last.sum_2p <= demo.zeta2 + 1e-6)) ++failures;
        if (!(last.sum_p > std::log(1e4) - 1.0)) ++failures;
        detail << "p=" << p << " sum2p=" << io::fmt15(last.sum_2p)
               << " sump=" << io::fmt15(last.sum_p) << "; ";
    }
    r.detail = detail.str();
    return static_cast<double>(failures);
}

}  // namespace

std::vector<CriterionResult> run_all(const RunConfig& cfg) {
    Runner runner{cfg, {}};

    runner.run(1, "kronecker-product-law", "linalg.svd, linalg.kron",
               "singular values of a tensor product are the sorted pairwise "
               "products",
               cfg.tol_inequality, 5.0,
               [&](CriterionResult& r) { return crit_kron_product_law(cfg, r); });
    runner.run(2, "tensor-oracle-equivalence", "seq.tensor_prefix",
               "frontier merge equals the brute-force product sort",
               cfg.tol_identity, 0.0,
               [&](CriterionResult& r) { return crit_tensor_oracle(cfg, r); });
    runner.run(3, "geometric-multiplicity-identity", "seq.tensor_prefix",
               "geometric squares carry level w^n with multiplicity n+1",
               cfg.tol_identity, 0.0,
               [&](CriterionResult& r) {
                   return crit_multiplicity_identity(cfg, r);
               });
    runner.run(4, "stability-verdicts",
               "spaces.stability_condition3, spaces.remc_sufficient",
               "geometric and power profiles diverge; the log-inverse "
               "profile certifies stable",
               0.0, 10.0,
               [&](CriterionResult& r) { return crit_stability_examples(cfg, r); });
    runner.run(5, "principal-gap-divergence", "spaces.counterexample_divergence",
               "the averaged geometric square escapes every repetition of "
               "its generator",
               0.0, 0.0,
               [&](CriterionResult& r) { return crit_counterexample(cfg, r); });
    runner.run(6, "weighted-tensor-inequality", "seq.lorentz_tensor_check",
               "the weighted norm of a tensor product is submultiplicative",
               cfg.tol_inequality, 0.0,
               [&](CriterionResult& r) { return crit_lorentz_inequality(cfg, r); });

    std::vector<BoundPair> pairs;
    runner.run(7, "banded-upper-envelope", "elemop.a_upper_bounds_grid",
               "certified upper bounds stay below 6.75x the product sequence",
               cfg.tol_inequality, 30.0,
               [&](CriterionResult& r) {
                   pairs = bound_pairs(cfg);
                   return crit_envelope(pairs, r);
               });
    runner.run(8, "bound-sandwich", "elemop.h_lower_envelope",
               "certified lower bounds never cross certified upper bounds; "
               "the first lower bound is the operator norm",
               cfg.tol_inequality, 0.0,
               [&](CriterionResult& r) { return crit_sandwich(pairs, r); });
    runner.run(9, "banded-projection-norm", "linalg.koenig_lemma_check",
               "a band-aligned tensor sum is bounded by its largest band "
               "product",
               cfg.tol_inequality, 0.0,
               [&](CriterionResult& r) { return crit_koenig(cfg, r); });
    runner.run(10, "symbol-recovery", "elemop.recover_first_symbol",
               "random evaluation vectors reproduce the first symbol and "
               "its shifted singular values stay below the compression sums",
               1.0, 0.0,
               [&](CriterionResult& r) { return crit_recovery(cfg, r); });
    runner.run(11, "singular-value-additivity", "linalg.sv_additivity_check",
               "s_{m+n-1}(S+T) <= s_m(S) + s_n(T)", cfg.tol_inequality, 0.0,
               [&](CriterionResult& r) { return crit_additivity(cfg, r); });
    runner.run(12, "block-compression-checks",
               "blockalg.pinch, blockalg.factorization_check, "
               "blockalg.restriction_sandwich",
               "pinching is an idempotent contraction compatible with "
               "block-diagonal multiplication; the restricted sandwich "
               "never inverts",
               cfg.tol_identity, 0.0,
               [&](CriterionResult& r) { return crit_blocks(cfg, r); });
    runner.run(13, "half-power-summability", "spaces.l2p_not_lp_demo",
               "j^(-1/p) is 2p-summable but follows the harmonic series at "
               "power p",
               0.0, 0.0,
               [&](CriterionResult& r) { return crit_l2p_demo(cfg, r); });

    return std::move(runner.results);
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results)
        if (!r.pass) return false;
    return true;
}

std::string report_json(const std::vector<CriterionResult>& results,
                        const RunConfig& cfg) {
    std::ostringstream out;
    out << "{\"version\":\"" << kVersion << "\",\"seed\":" << cfg.seed
        << ",\"depth\":" << cfg.depth << ",\"r_max\":" << cfg.r_max
        << ",\"tol_identity\":" << io::fmt15(cfg.tol_identity)
        << ",\"tol_inequality\":" << io::fmt15(cfg.tol_inequality)
        << ",\"criteria\":[";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const CriterionResult& r = results[i];
        if (i) out << ",";
        out << "{\"id\":" << r.id << ",\"name\":\"" << r.name
            << "\",\"operation\":\"" << r.operation << "\",\"claim\":\""
            << r.claim << "\",\"pass\":" << (r.pass ? "true" : "false")
            << ",\"measured\":" << io::fmt15(io::round15(r.measured))
            << ",\"threshold\":" << io::fmt15(r.threshold)
            << ",\"seconds\":" << io::fmt15(io::round15(r.seconds)) << "}";
    }
    out << "],\"all_passed\":"
        << (all_passed(results) ? "true" : "false") << "}";
    return out.str();
}

std::string report_csv(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    out << "id,name,pass,measured,threshold,seconds\n";
    for (const CriterionResult& r : results)
        out << r.id << "," << r.name << "," << (r.pass ? "pass" : "fail")
            << "," << io::fmt15(io::round15(r.measured)) << ","
            << io::fmt15(r.threshold) << ","
            << io::fmt15(io::round15(r.seconds)) << "\n";
    return out.str();
}

std::string summary_lines(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    for (const CriterionResult& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.name
            << " measured=" << io::fmt15(io::round15(r.measured))
            << " threshold=" << io::fmt15(r.threshold) << " ("
            << io::fmt15(io::round15(r.seconds)) << "s)";
        if (!r.detail.empty()) out << " [" << r.detail << "]";
        out << "\n";
    }
    return out.str();
}

}  // namespace calkin::verify
