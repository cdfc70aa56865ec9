#include "calkin/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace calkin::spaces {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Band edges omega^0, omega^1, ... by repeated multiplication, so that
// generator terms built the same way compare consistently.
std::vector<double> band_edges(double omega, int depth) {
    std::vector<double> e(static_cast<std::size_t>(depth) + 2);
    e[0] = 1.0;
    for (std::size_t i = 1; i < e.size(); ++i) e[i] = e[i - 1] * omega;
    return e;
}

// True when the last quarter of `t` is monotonically increasing and the
// final entry exceeds 10x the first.
bool diverging(const std::vector<double>& t) {
    if (t.size() < 2) return false;
    const std::size_t start = t.size() - std::max<std::size_t>(t.size() / 4, 2);
    for (std::size_t i = start + 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) return false;
    return t.back() > 10.0 * t.front();
}

}  // namespace

CalkinProfile profile(const seq::DecreasingSeq& a, double omega, int depth) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("profile base must lie in (0,1)");
    if (depth < 0) throw std::invalid_argument("profile depth must be >= 0");
    const double a1 = a.prefix_len() > 0 ? a.prefix()[0]
                                         : (a.has_formula() ? a.term(1) : 0.0);
    if (a1 > 1.0 + seq::kIdentityTol)
        throw NotNormalized("profile requires a_1 <= 1");

    const std::vector<double> edges = band_edges(omega, depth);
    CalkinProfile p;
    p.omega = omega;
    p.depth = depth;
    p.band.assign(static_cast<std::size_t>(depth) + 1, 0.0);

    if (a.has_formula()) {
        // cg[n] = #terms > omega^n; K_n = cg[n+1] - cg[n].
        std::vector<double> cg(edges.size());
        for (std::size_t i = 0; i < edges.size(); ++i)
            cg[i] = a.generator()->count_greater(edges[i]);
        for (int n = 0; n <= depth; ++n) {
            const double hi = cg[static_cast<std::size_t>(n) + 1];
            const double lo = cg[static_cast<std::size_t>(n)];
            p.band[static_cast<std::size_t>(n)] =
                std::isinf(hi) && std::isinf(lo) ? kInf : hi - lo;
        }
    } else {
        if (!a.finite_support() && a.tail_bound() > edges[edges.size() - 1])
            throw InsufficientPrefix(
                "profile: unknown tail above omega^(depth+1); bands are not "
                "exhausted");
        for (double v : a.prefix()) {
            if (v <= edges[edges.size() - 1]) break;  // below every band
            if (v > edges[1]) {
                // v in (omega, 1]: band 0.
                p.band[0] += 1.0;
                continue;
            }
            // Find n with omega^(n+1) < v <= omega^n.
            const auto it = std::upper_bound(edges.begin(), edges.end(), v,
                                             std::greater<double>());
            const int n = static_cast<int>(it - edges.begin()) - 1;
            if (n >= 0 && n <= depth) p.band[static_cast<std::size_t>(n)] += 1.0;
        }
    }

    p.band_cumulative.resize(p.band.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < p.band.size(); ++n) {
        acc += p.band[n];
        p.band_cumulative[n] = acc;
    }
    p.conv.assign(p.band.size(), 0.0);
    for (std::size_t n = 0; n < p.band.size(); ++n) {
        double m = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (p.band[i] == 0.0 || p.band[n - i] == 0.0) continue;
            m += p.band[i] * p.band[n - i];
        }
        p.conv[n] = m;
    }
    p.conv_cumulative.resize(p.band.size());
    acc = 0.0;
    for (std::size_t n = 0; n < p.band.size(); ++n) {
        acc += p.conv[n];
        p.conv_cumulative[n] = acc;
    }
    return p;
}

StabilityVerdict stability_condition3(const seq::DecreasingSeq& a,
                                      double omega, int r_max, int depth) {
    if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
    const CalkinProfile p = profile(a, omega, depth + r_max);

    StabilityVerdict verdict;
    verdict.horizon = depth;

    bool certified = false;
    int diverged = 0;
    for (int r = 1; r <= r_max; ++r) {
        std::vector<double> ratios;
        ratios.reserve(static_cast<std::size_t>(depth) + 1);
        double sup = 0.0;
        bool valid = true;
        for (int n = 0; n <= depth; ++n) {
            const double num = p.conv_cumulative[static_cast<std::size_t>(n)];
            const double den =
                p.band_cumulative[static_cast<std::size_t>(n + r)];
            const double ratio = den > 0.0 ? num / den : (num > 0.0 ? kInf : 0.0);
            if (!std::isfinite(ratio)) valid = false;
            ratios.push_back(ratio);
            sup = std::max(sup, ratio);
            verdict.table.push_back(DivergenceRow{r, n, ratio});
        }
        if (!valid) continue;
        if (!diverging(ratios)) {
            if (!certified) {
                certified = true;
                verdict.r = r;
                verdict.constant = sup;
            }
        } else {
            ++diverged;
        }
    }
    if (certified)
        verdict.decision = StabilityVerdict::Decision::StableCertified;
    else if (diverged == r_max)
        verdict.decision = StabilityVerdict::Decision::NotStableAtHorizon;
    else
        verdict.decision = StabilityVerdict::Decision::Inconclusive;
    return verdict;
}

RemcVerdict remc_sufficient(const seq::DecreasingSeq& a, double omega,
                            int depth) {
    const CalkinProfile p = profile(a, omega, depth);
    RemcVerdict verdict;

    // rho_n = min_{j>=1, n+j<=depth} K_{n+j} / (K~_n)^2; the hypothesis
    // asks for a uniform positive lower bound over all n.
    std::vector<double> rho;
    std::vector<int> rho_n, rho_j;
    for (int n = 0; n + 1 <= depth; ++n) {
        const double kc = p.band_cumulative[static_cast<std::size_t>(n)];
        if (kc <= 0.0) continue;  // vacuous row
        const double denom = kc * kc;
        double best = kInf;
        int best_j = -1;
        for (int j = 1; n + j <= depth; ++j) {
            const double ratio =
                p.band[static_cast<std::size_t>(n + j)] / denom;
            if (ratio < best) {
                best = ratio;
                best_j = j;
            }
        }
        if (best_j < 0) continue;
        rho.push_back(best);
        rho_n.push_back(n);
        rho_j.push_back(best_j);
    }
    if (rho.empty()) {
        verdict.holds = false;
        return verdict;
    }

    const double cmin = *std::min_element(rho.begin(), rho.end());
    std::vector<double> inverted(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
        inverted[i] = rho[i] > 0.0 ? 1.0 / rho[i] : kInf;
    const bool decayed = cmin <= 0.0 || diverging(inverted);
    if (decayed) {
        const std::size_t at = static_cast<std::size_t>(
            std::min_element(rho.begin(), rho.end()) - rho.begin());
        verdict.holds = false;
        verdict.fail_n = rho_n[at];
        verdict.fail_j = rho_j[at];
    } else {
        verdict.holds = true;
        verdict.constant = cmin;
    }
    return verdict;
}

MembershipVerdict principal_membership(const seq::DecreasingSeq& beta,
                                       const seq::DecreasingSeq& alpha,
                                       int r_max, std::size_t horizon,
                                       double c_max) {
    if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
    if (beta.term(1) > 1.0 + seq::kIdentityTol ||
        alpha.term(1) > 1.0 + seq::kIdentityTol)
        throw NotNormalized("principal_membership requires normalized input");
    MembershipVerdict verdict;
    verdict.horizon = horizon;
    for (int r = 1; r <= r_max; ++r) {
        const seq::DecreasingSeq rep =
            alpha.repeated(static_cast<std::size_t>(r), horizon);
        const seq::DominationVerdict dom =
            seq::dominates(beta, rep, horizon, c_max);
        if (dom.dominated) {
            verdict.member = true;
            verdict.r = r;
            verdict.constant = dom.constant;
            return verdict;
        }
        verdict.witness_index = dom.witness_index;
    }
    return verdict;
}

std::vector<GapRow> counterexample_divergence(double omega,
                                              std::span<const int> r0_list,
                                              std::span<const int> r_list) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("omega must lie in (0,1)");
    std::vector<GapRow> rows;
    for (int r0 : r0_list) {
        if (r0 < 1) throw std::invalid_argument("r0 must be >= 1");
        for (int r : r_list) {
            if (r < 2 || r % 2 != 0)
                throw std::invalid_argument("r must be even and >= 2");
            const double rr0 = static_cast<double>(r) * r0;
            GapRow row;
            row.r0 = r0;
            row.r = r;
            row.index = rr0 * (rr0 + 1.0) / 2.0;
            // alpha_{m(m+1)/2} = 2 omega^(m-1) / (m(m+1)) at m = r r0;
            // beta_{r0 m'} = omega^(m'-1) at m' = r(r r0 + 1)/2.
            row.alpha = 2.0 * std::pow(omega, rr0 - 1.0) / (rr0 * (rr0 + 1.0));
            const double mprime = static_cast<double>(r) * (rr0 + 1.0) / 2.0;
            row.beta = std::pow(omega, mprime - 1.0);
            row.ratio = row.alpha / row.beta;
            rows.push_back(row);
        }
    }
    return rows;
}

TailPowerDemo l2p_not_lp_demo(double p, std::size_t n) {
    if (!(p > 2.0)) throw std::invalid_argument("demo needs p > 2");
    TailPowerDemo demo;
    demo.p = p;
    demo.zeta2 = M_PI * M_PI / 6.0;
    demo.l2p_tail_bound = 1.0 / static_cast<double>(n);
    double s2p = 0.0, sp = 0.0, harm = 0.0;
    std::size_t next = 10;
    for (std::size_t j = 1; j <= n; ++j) {
        const double lam = std::pow(static_cast<double>(j), -1.0 / p);
        s2p += std::pow(lam, 2.0 * p);
        sp += std::pow(lam, p);
        harm += 1.0 / static_cast<double>(j);
        if (j == next || j == n) {
            demo.rows.push_back(TailPowerRow{j, s2p, sp, harm});
            while (next <= j) next *= 10;
        }
    }
    return demo;
}

}  // namespace calkin::spaces
