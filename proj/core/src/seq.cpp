#include "calkin/seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace calkin::seq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_non_increasing(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0) || !std::isfinite(v[i]))
            throw std::invalid_argument(std::string(what) +
                                        ": entries must be finite and >= 0");
        if (i > 0 && v[i] > v[i - 1])
            throw std::invalid_argument(std::string(what) +
                                        ": not non-increasing");
    }
}

}  // namespace

Generator Generator::geometric(double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("geometric ratio must lie in (0,1)");
    Generator g;
    g.kind = GenKind::Geometric;
    g.omega = omega;
    return g;
}

Generator Generator::power(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("power exponent must be positive");
    Generator g;
    g.kind = GenKind::Power;
    g.lambda = lambda;
    return g;
}

Generator Generator::log_inverse() {
    Generator g;
    g.kind = GenKind::LogInverse;
    return g;
}

Generator Generator::explicit_support() {
    Generator g;
    g.kind = GenKind::Explicit;
    return g;
}

double Generator::term(std::size_t n) const {
    switch (kind) {
        case GenKind::Geometric: {
            // Repeated multiplication so that terms and band edges built
            // the same way compare consistently.
            double t = 1.0;
            for (std::size_t k = 1; k < n; ++k) t *= omega;
            return t;
        }
        case GenKind::Power:
            return std::pow(static_cast<double>(n), -lambda);
        case GenKind::LogInverse:
            return 1.0 / std::log2(static_cast<double>(n) + 1.0);
        case GenKind::Explicit:
            return 0.0;
    }
    return 0.0;
}

double Generator::count_greater(double x) const {
    if (!(x > 0.0)) return kInf;  // every positive tail term exceeds x <= 0
    switch (kind) {
        case GenKind::Geometric: {
            if (x >= 1.0) return 0.0;
            std::size_t count = 0;
            double t = 1.0;
            while (t > x) {
                ++count;
                t *= omega;
                if (count > 100000000)
                    throw std::runtime_error("geometric band count overflow");
            }
            return static_cast<double>(count);
        }
        case GenKind::Power: {
            // #{m >= 1 : m^-lambda > x} = #{m < x^(-1/lambda)}
            const double t = std::pow(x, -1.0 / lambda);
            if (!std::isfinite(t)) return kInf;
            return std::max(0.0, std::ceil(t) - 1.0);
        }
        case GenKind::LogInverse: {
            // #{m >= 2 : 1/log2(m) > x} = #{2 <= m < 2^(1/x)}
            const double e = 1.0 / x;
            if (e > 1020.0) return kInf;  // 2^e past the double range
            const double t = std::exp2(e);
            return std::max(0.0, std::ceil(t) - 2.0);
        }
        case GenKind::Explicit:
            return 0.0;  // tail is identically zero
    }
    return 0.0;
}

DecreasingSeq::DecreasingSeq(std::vector<double> prefix,
                             std::optional<Generator> gen)
    : prefix_(std::move(prefix)), gen_(gen) {
    check_non_increasing(prefix_, "DecreasingSeq");
    if (gen_ && gen_->kind != GenKind::Explicit) {
        for (std::size_t i = 0; i < prefix_.size(); ++i) {
            const double expect = gen_->term(i + 1);
            if (std::abs(prefix_[i] - expect) > kIdentityTol * (1.0 + expect))
                throw std::invalid_argument(
                    "DecreasingSeq: prefix disagrees with its generator");
        }
    }
}

DecreasingSeq DecreasingSeq::geometric(double omega, std::size_t prefix_len) {
    Generator g = Generator::geometric(omega);
    std::vector<double> p(prefix_len);
    for (std::size_t i = 0; i < prefix_len; ++i) p[i] = g.term(i + 1);
    return DecreasingSeq(std::move(p), g);
}

DecreasingSeq DecreasingSeq::power(double lambda, std::size_t prefix_len) {
    Generator g = Generator::power(lambda);
    std::vector<double> p(prefix_len);
    for (std::size_t i = 0; i < prefix_len; ++i) p[i] = g.term(i + 1);
    return DecreasingSeq(std::move(p), g);
}

DecreasingSeq DecreasingSeq::log_inverse(std::size_t prefix_len) {
    Generator g = Generator::log_inverse();
    std::vector<double> p(prefix_len);
    for (std::size_t i = 0; i < prefix_len; ++i) p[i] = g.term(i + 1);
    return DecreasingSeq(std::move(p), g);
}

DecreasingSeq DecreasingSeq::from_values(std::vector<double> values) {
    return DecreasingSeq(std::move(values), Generator::explicit_support());
}

DecreasingSeq DecreasingSeq::prefix_only(std::vector<double> prefix) {
    return DecreasingSeq(std::move(prefix), std::nullopt);
}

bool DecreasingSeq::has_formula() const {
    return gen_ && gen_->kind != GenKind::Explicit;
}

bool DecreasingSeq::finite_support() const {
    return gen_ && gen_->kind == GenKind::Explicit;
}

double DecreasingSeq::term(std::size_t n) const {
    if (n == 0) throw std::invalid_argument("term index is 1-based");
    if (n <= prefix_.size()) return prefix_[n - 1];
    if (has_formula()) return gen_->term(n);
    if (finite_support()) return 0.0;
    throw InsufficientPrefix("term " + std::to_string(n) +
                             " lies past a prefix of length " +
                             std::to_string(prefix_.size()));
}

std::vector<double> DecreasingSeq::take(std::size_t n) const {
    std::vector<double> out;
    out.reserve(n);
    const std::size_t known = std::min(n, prefix_.size());
    out.assign(prefix_.begin(), prefix_.begin() + known);
    if (out.size() < n) {
        if (has_formula()) {
            if (gen_->kind == GenKind::Geometric) {
                // Extend by the same recurrence the prefix was built with.
                double t = out.empty() ? 1.0 : out.back() * gen_->omega;
                while (out.size() < n) {
                    out.push_back(t);
                    t *= gen_->omega;
                }
            } else {
                for (std::size_t m = out.size() + 1; m <= n; ++m)
                    out.push_back(gen_->term(m));
            }
        } else if (finite_support()) {
            out.resize(n, 0.0);
        } else {
            throw InsufficientPrefix(
                "take(" + std::to_string(n) + ") exceeds a prefix of length " +
                std::to_string(prefix_.size()) + " with unknown tail");
        }
    }
    return out;
}

double DecreasingSeq::tail_bound() const {
    if (finite_support()) return 0.0;
    if (prefix_.empty()) return has_formula() ? gen_->term(1) : kInf;
    return prefix_.back();
}

DecreasingSeq DecreasingSeq::scaled(double c) const {
    if (!(c >= 0.0)) throw std::invalid_argument("scale must be >= 0");
    if (c == 1.0) return *this;
    std::vector<double> p(prefix_);
    for (double& v : p) v *= c;
    if (finite_support()) return from_values(std::move(p));
    return prefix_only(std::move(p));
}

DecreasingSeq DecreasingSeq::repeated(std::size_t r, std::size_t len) const {
    if (r == 0) throw std::invalid_argument("repetition factor must be >= 1");
    const std::size_t need = (len + r - 1) / r;
    std::vector<double> src = take(need);
    std::vector<double> out;
    out.reserve(len);
    for (std::size_t i = 0; i < need && out.size() < len; ++i)
        for (std::size_t k = 0; k < r && out.size() < len; ++k)
            out.push_back(src[i]);
    if (finite_support()) return from_values(std::move(out));
    return prefix_only(std::move(out));
}

DecreasingSeq star_rearrange(std::span<const double> raw) {
    std::vector<double> v(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) v[i] = std::abs(raw[i]);
    std::sort(v.begin(), v.end(), std::greater<double>());
    return DecreasingSeq::from_values(std::move(v));
}

DecreasingSeq star_rearrange(std::span<const std::complex<double>> raw) {
    std::vector<double> v(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) v[i] = std::abs(raw[i]);
    std::sort(v.begin(), v.end(), std::greater<double>());
    return DecreasingSeq::from_values(std::move(v));
}

namespace {

struct Frontier {
    double value;
    std::size_t i, j;  // 0-based grid coordinates
};

// Max-heap order: larger value first, grid-lexicographic (i,j) on ties.
struct FrontierLess {
    bool operator()(const Frontier& a, const Frontier& b) const {
        if (a.value != b.value) return a.value < b.value;
        if (a.i != b.i) return a.i > b.i;
        return a.j > b.j;
    }
};

}  // namespace

std::vector<TensorEntry> tensor_prefix_indexed(const DecreasingSeq& a,
                                               const DecreasingSeq& b,
                                               std::size_t n) {
    std::vector<TensorEntry> out;
    if (n == 0) return out;
    out.reserve(n);

    // The n largest products live in the leading n x n grid, so a prefix of
    // n terms per factor is always enough; raw prefixes may offer fewer.
    const bool a_raw = !a.has_formula() && !a.finite_support();
    const bool b_raw = !b.has_formula() && !b.finite_support();
    const std::size_t la = a_raw ? std::min(n, a.prefix_len()) : n;
    const std::size_t lb = b_raw ? std::min(n, b.prefix_len()) : n;
    if (la == 0 || lb == 0) {
        if ((a_raw && a.prefix_len() == 0) || (b_raw && b.prefix_len() == 0))
            throw InsufficientPrefix("tensor_prefix: empty raw prefix");
        out.resize(n, TensorEntry{0.0, 0, 0});
        return out;
    }
    const std::vector<double> av = a.take(la);
    const std::vector<double> bv = b.take(lb);

    std::priority_queue<Frontier, std::vector<Frontier>, FrontierLess> heap;
    heap.push({av[0] * bv[0], 0, 0});
    while (out.size() < n && !heap.empty()) {
        const Frontier f = heap.top();
        heap.pop();
        out.push_back(TensorEntry{f.value, f.i + 1, f.j + 1});
        if (f.i + 1 < la) heap.push({av[f.i + 1] * bv[f.j], f.i + 1, f.j});
        if (f.i == 0 && f.j + 1 < lb)
            heap.push({av[0] * bv[f.j + 1], 0, f.j + 1});
    }

    if (out.size() < n) {
        // Grid exhausted: sound to pad zeros only when both tails vanish.
        if (a.tail_bound() == 0.0 && b.tail_bound() == 0.0) {
            out.resize(n, TensorEntry{0.0, 0, 0});
        } else {
            throw InsufficientPrefix(
                "tensor_prefix: grid exhausted before " + std::to_string(n) +
                " products with a nonzero unknown tail");
        }
    } else {
        // An unknown tail must not be able to beat the n-th product.
        const double vmin = out.back().value;
        if (a_raw && la < n && a.tail_bound() * bv[0] > vmin)
            throw InsufficientPrefix(
                "tensor_prefix: left tail bound cannot certify the n-th "
                "largest product");
        if (b_raw && lb < n && b.tail_bound() * av[0] > vmin)
            throw InsufficientPrefix(
                "tensor_prefix: right tail bound cannot certify the n-th "
                "largest product");
    }
    return out;
}

DecreasingSeq tensor_prefix(const DecreasingSeq& a, const DecreasingSeq& b,
                            std::size_t n) {
    const std::vector<TensorEntry> entries = tensor_prefix_indexed(a, b, n);
    std::vector<double> v(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) v[i] = entries[i].value;
    if (a.finite_support() && b.finite_support())
        return DecreasingSeq::from_values(std::move(v));
    return DecreasingSeq::prefix_only(std::move(v));
}

DominationVerdict dominates(const DecreasingSeq& a, const DecreasingSeq& b,
                            std::size_t horizon, double c_max) {
    const std::vector<double> av = a.take(horizon);
    const std::vector<double> bv = b.take(horizon);
    DominationVerdict verdict;
    verdict.horizon = horizon;
    double sup = 0.0;
    for (std::size_t i = 0; i < horizon; ++i) {
        if (av[i] == 0.0) continue;
        if (bv[i] == 0.0) {
            verdict.dominated = false;
            verdict.witness_index = i + 1;
            return verdict;
        }
        sup = std::max(sup, av[i] / bv[i]);
        if (sup > c_max) {
            verdict.dominated = false;
            verdict.witness_index = i + 1;
            return verdict;
        }
    }
    verdict.dominated = true;
    verdict.constant = sup;
    return verdict;
}

WeightSeq WeightSeq::classical_lorentz(double p, double q) {
    if (!(p > 0.0 && p < q))
        throw std::invalid_argument("classical Lorentz weight needs 0 < p < q");
    WeightSeq w;
    w.kind_ = WeightKind::ClassicalLorentz;
    w.p_ = p;
    w.q_ = q;
    return w;
}

WeightSeq WeightSeq::log_power(double alpha, double gamma) {
    if (!(alpha > 0.0) || gamma < 0.0)
        throw std::invalid_argument("log-power weight needs alpha > 0, gamma >= 0");
    WeightSeq w;
    w.kind_ = WeightKind::LogPower;
    w.alpha_ = alpha;
    w.gamma_ = gamma;
    return w;
}

WeightSeq WeightSeq::from_values(std::vector<double> prefix) {
    if (prefix.empty() || std::abs(prefix.front() - 1.0) > kIdentityTol)
        throw std::invalid_argument("weight sequence must start at 1");
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (!(prefix[i] > 0.0))
            throw std::invalid_argument("weights must be positive");
        if (i > 0 && prefix[i] > prefix[i - 1])
            throw std::invalid_argument("weights must be non-increasing");
    }
    WeightSeq w;
    w.kind_ = WeightKind::Explicit;
    w.prefix_ = std::move(prefix);
    return w;
}

double WeightSeq::term(std::size_t n) const {
    if (n == 0) throw std::invalid_argument("weight index is 1-based");
    switch (kind_) {
        case WeightKind::ClassicalLorentz:
            return std::pow(static_cast<double>(n), p_ / q_ - 1.0);
        case WeightKind::LogPower:
            return std::pow(1.0 + std::log(static_cast<double>(n)), gamma_) /
                   std::pow(static_cast<double>(n), alpha_);
        case WeightKind::Explicit:
            if (n > prefix_.size())
                throw InsufficientPrefix("weight index " + std::to_string(n) +
                                         " past explicit prefix");
            return prefix_[n - 1];
    }
    return 0.0;
}

LorentzNorm lorentz_norm(const DecreasingSeq& a, const WeightSeq& w, double p,
                         std::size_t n) {
    if (!(p >= 1.0)) throw std::invalid_argument("lorentz_norm needs p >= 1");
    if (n == 0) return {0.0, 0.0};
    const std::vector<double> av = a.take(n);
    double sum = 0.0;
    double last = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        last = w.term(i + 1) * std::pow(av[i], p);
        sum += last;
    }
    return {std::pow(sum, 1.0 / p), last};
}

std::optional<double> WeightSeq::exact_submult_constant() const {
    // (mn)^e = m^e n^e; and (1+ln mn) <= (1+ln m)(1+ln n) for alpha <= 1.
    if (kind_ == WeightKind::ClassicalLorentz) return 1.0;
    if (kind_ == WeightKind::LogPower && alpha_ <= 1.0) return 1.0;
    return std::nullopt;
}

double weight_submult_constant(const WeightSeq& w, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    if (auto exact = w.exact_submult_constant()) return *exact;
    if (w.kind() == WeightKind::Explicit &&
        w.prefix().size() < horizon * horizon)
        throw InsufficientPrefix(
            "submultiplicativity scan needs weights up to horizon^2");
    double c = 0.0;
    for (std::size_t m = 1; m <= horizon; ++m)
        for (std::size_t n = 1; n <= horizon; ++n)
            c = std::max(c, w.term(m * n) / (w.term(m) * w.term(n)));
    return c;
}

TensorNormReport lorentz_tensor_check(const DecreasingSeq& a,
                                      const DecreasingSeq& b,
                                      const WeightSeq& w, double p,
                                      std::size_t n, double tol) {
    const std::size_t horizon =
        static_cast<std::size_t>(std::sqrt(static_cast<double>(n))) + 1;
    const double c = weight_submult_constant(w, horizon);
    if (!std::isfinite(c))
        throw std::invalid_argument("weight is not submultiplicative");
    TensorNormReport report;
    report.constant = c;
    report.lhs = lorentz_norm(tensor_prefix(a, b, n), w, p, n).value;
    report.rhs = std::pow(c, 1.0 / p) * lorentz_norm(a, w, p, n).value *
                 lorentz_norm(b, w, p, n).value;
    report.holds = report.lhs <= report.rhs + tol;
    return report;
}

}  // namespace calkin::seq
