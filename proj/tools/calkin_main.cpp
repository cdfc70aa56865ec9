// Command-line harness: sequence algebra, stability verdicts, certified
// operator bounds, and the full claim-verification suite.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "calkin/blockalg.hpp"
#include "calkin/elemop.hpp"
#include "calkin/io.hpp"
#include "calkin/linalg.hpp"
#include "calkin/seq.hpp"
#include "calkin/spaces.hpp"
#include "calkin/verify.hpp"
#include "calkin/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace calkin;

constexpr int kExitBadInput = 2;
constexpr int kExitCertificate = 3;

std::uint64_t env_seed(std::uint64_t fallback) {
    if (const char* s = std::getenv("CALKIN_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw std::invalid_argument("CALKIN_SEED is not an integer");
        }
    }
    return fallback;
}

json provenance(std::uint64_t seed) {
    return json{{"version", kVersion}, {"seed", seed}};
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        io::write_file(out_path, text);
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        io::write_file(out_path, text);
}

json seq_values(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(io::round15(x));
    return arr;
}

int run(int argc, char** argv) {
    CLI::App app{"calkin: sequence tensor algebra, Calkin-space stability "
                 "deciders, and certified s-number bounds for elementary "
                 "operators"};
    app.require_subcommand(1);
    app.fallthrough(true);  // global flags usable after the subcommand
    std::uint64_t seed = env_seed(12345);
    std::string out_path;
    std::string format = "json";
    app.add_option("--seed", seed, "deterministic seed (or CALKIN_SEED)");
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--format", format, "json or csv where supported");

    // --- seq ---------------------------------------------------------
    CLI::App* seq_cmd = app.add_subcommand("seq", "sequence-space operations");
    seq_cmd->require_subcommand(1);

    std::string a_spec, b_spec, in_path;
    std::size_t n_terms = 16;
    std::size_t horizon = 60;
    double c_max = 1e6;

    CLI::App* tensor = seq_cmd->add_subcommand(
        "tensor", "first n terms of the tensor product a (x) b");
    tensor->add_option("--a", a_spec, "left sequence spec")->required();
    tensor->add_option("--b", b_spec, "right sequence spec")->required();
    tensor->add_option("-n,--terms", n_terms, "number of terms");

    CLI::App* rearrange = seq_cmd->add_subcommand(
        "rearrange", "decreasing rearrangement of a value list");
    rearrange->add_option("--in", in_path, "JSON file with a values array")
        ->required();

    CLI::App* dominate = seq_cmd->add_subcommand(
        "dominate", "finite-horizon domination verdict a <~ b");
    dominate->add_option("--a", a_spec, "left sequence spec")->required();
    dominate->add_option("--b", b_spec, "right sequence spec")->required();
    dominate->add_option("--horizon", horizon, "indices to check");
    dominate->add_option("--cmax", c_max, "largest admissible constant");

    // --- stability ----------------------------------------------------
    CLI::App* stability = app.add_subcommand(
        "stability", "stability verdict for a principal space");
    std::string stab_spec;
    double omega = 0.5;
    int depth = 40;
    int r_max = 8;
    stability->add_option("--seq", stab_spec, "sequence spec")->required();
    CLI::Option* omega_opt = stability->add_option(
        "--omega", omega, "band base in (0,1); default 1/2, 1/e for pow:");
    stability->add_option("--depth", depth, "profile depth");
    stability->add_option("--rmax", r_max, "largest shift tried");

    // --- elemop -------------------------------------------------------
    CLI::App* elem = app.add_subcommand("elemop", "elementary-operator tools");
    elem->require_subcommand(1);
    std::string op_path;
    double bounds_omega = 2.0 / 3.0;
    bool use_grid = false;
    int target = 1;

    CLI::App* bounds = elem->add_subcommand(
        "bounds", "certified lower/upper bound table for M_{A,B}");
    bounds->add_option("--op", op_path, "operator JSON (single pair used)")
        ->required();
    bounds->add_option("--omega", bounds_omega, "band base");
    bounds->add_flag("--grid", use_grid, "per-index minimum over the omega grid");

    CLI::App* recover = elem->add_subcommand(
        "recover", "recover one symbol from the operator alone");
    recover->add_option("--op", op_path, "operator JSON")->required();
    recover->add_option("--target", target, "1-based symbol index");

    CLI::App* minimal = elem->add_subcommand(
        "minimal", "representation with independent symbols");
    minimal->add_option("--op", op_path, "operator JSON")->required();

    CLI::App* hsnums = elem->add_subcommand(
        "hsnums", "singular values on the Hilbert-Schmidt space");
    hsnums->add_option("--op", op_path, "operator JSON")->required();

    // --- gap ------------------------------------------------------------
    CLI::App* gap = app.add_subcommand(
        "gap", "divergence table of the averaged geometric square against "
               "repeated generators");
    double gap_omega = 0.5;
    std::vector<int> gap_r0{1, 2, 3};
    std::vector<int> gap_r{2, 4, 6, 8, 10};
    gap->add_option("--omega", gap_omega, "geometric base in (0,1)");
    gap->add_option("--r0", gap_r0, "repetition factors");
    gap->add_option("--r", gap_r, "even probe multipliers");

    // --- verify-all -----------------------------------------------------
    CLI::App* verify_cmd = app.add_subcommand(
        "verify-all", "run every claim check and report pass/fail");
    int v_depth = 40;
    int v_rmax = 8;
    double v_tol_identity = 1e-12;
    double v_tol_inequality = 1e-9;
    verify_cmd->add_option("--depth", v_depth, "profile depth");
    verify_cmd->add_option("--rmax", v_rmax, "largest shift tried");
    verify_cmd->add_option("--tol-identity", v_tol_identity,
                           "identity-check tolerance");
    verify_cmd->add_option("--tol-inequality", v_tol_inequality,
                           "inequality-check tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    if (tensor->parsed()) {
        const seq::DecreasingSeq a = io::parse_seq_spec(a_spec);
        const seq::DecreasingSeq b = io::parse_seq_spec(b_spec);
        const seq::DecreasingSeq t = seq::tensor_prefix(a, b, n_terms);
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "seq.tensor";
        report["n"] = n_terms;
        report["values"] = seq_values(t.prefix());
        report["sequence"] = json::parse(io::to_json(t));
        emit(report, out_path);
        return 0;
    }
    if (rearrange->parsed()) {
        const json input = json::parse(io::read_file(in_path));
        if (!input.contains("values") || !input["values"].is_array())
            throw std::invalid_argument("rearrange input needs a values array");
        std::vector<linalg::Complex> raw;
        for (const auto& v : input["values"]) {
            if (v.is_number())
                raw.emplace_back(v.get<double>(), 0.0);
            else if (v.is_array() && v.size() == 2)
                raw.emplace_back(v[0].get<double>(), v[1].get<double>());
            else
                throw std::invalid_argument(
                    "values entries must be numbers or [re,im]");
        }
        const seq::DecreasingSeq s = seq::star_rearrange(raw);
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "seq.rearrange";
        report["values"] = seq_values(s.prefix());
        emit(report, out_path);
        return 0;
    }
    if (dominate->parsed()) {
        const seq::DecreasingSeq a = io::parse_seq_spec(a_spec);
        const seq::DecreasingSeq b = io::parse_seq_spec(b_spec);
        const seq::DominationVerdict v = seq::dominates(a, b, horizon, c_max);
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "seq.dominate";
        report["horizon"] = v.horizon;
        report["dominated"] = v.dominated;
        if (v.dominated)
            report["constant"] = io::round15(v.constant);
        else
            report["witness_index"] = v.witness_index;
        emit(report, out_path);
        return 0;
    }

    if (stability->parsed()) {
        seq::DecreasingSeq s = io::parse_seq_spec(stab_spec);
        if (omega_opt->count() == 0 && s.generator() &&
            s.generator()->kind == seq::GenKind::Power)
            omega = std::exp(-1.0);
        const double first = s.prefix_len() ? s.prefix()[0] : s.term(1);
        if (first > 1.0) s = s.scaled(1.0 / first);
        const spaces::StabilityVerdict v =
            spaces::stability_condition3(s, omega, r_max, depth);
        const spaces::RemcVerdict rv = spaces::remc_sufficient(s, omega, depth);
        if (format == "csv") {
            std::ostringstream csv;
            csv << "r,n,ratio\n";
            for (const spaces::DivergenceRow& row : v.table)
                csv << row.r << "," << row.n << "," << io::fmt15(row.ratio)
                    << "\n";
            emit_text(csv.str(), out_path);
            return 0;
        }
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "spaces.stability_condition3";
        report["omega"] = omega;
        report["depth"] = depth;
        report["r_max"] = r_max;
        switch (v.decision) {
            case spaces::StabilityVerdict::Decision::StableCertified:
                report["decision"] = "stable_certified";
                report["r"] = v.r;
                report["constant"] = io::round15(v.constant);
                break;
            case spaces::StabilityVerdict::Decision::NotStableAtHorizon:
                report["decision"] = "not_stable_at_horizon";
                break;
            case spaces::StabilityVerdict::Decision::Inconclusive:
                report["decision"] = "inconclusive";
                break;
        }
        report["sufficient_condition"] =
            rv.holds ? json{{"holds", true},
                            {"constant", io::round15(rv.constant)}}
                     : json{{"holds", false},
                            {"fail_n", rv.fail_n},
                            {"fail_j", rv.fail_j}};
        json table = json::array();
        for (const spaces::DivergenceRow& row : v.table)
            table.push_back({{"r", row.r},
                             {"n", row.n},
                             {"ratio", io::round15(row.ratio)}});
        report["table"] = table;
        // Certifying one way and failing the other would be inconsistent.
        if (rv.holds &&
            v.decision ==
                spaces::StabilityVerdict::Decision::NotStableAtHorizon) {
            emit(report, out_path);
            throw InsufficientPrefix(
                "sufficient condition holds but the ratio test diverges");
        }
        emit(report, out_path);
        return 0;
    }

    constexpr int kMatrixCap = 64;  // vec-level super-operators stay 4096^2
    const auto load_op = [&](const std::string& path) {
        elemop::ElementaryOp op = io::elemop_from_json(io::read_file(path));
        if (op.dim > kMatrixCap)
            throw std::invalid_argument("operator dimension exceeds the " +
                                        std::to_string(kMatrixCap) +
                                        " harness cap");
        return op;
    };

    if (bounds->parsed()) {
        const elemop::ElementaryOp op = load_op(op_path);
        if (op.symbols.size() != 1)
            throw std::invalid_argument(
                "bounds works on a single-pair operator");
        linalg::Matrix a = op.symbols[0].first;
        linalg::Matrix b = op.symbols[0].second;
        const double na = linalg::spectral_norm(a);
        const double nb = linalg::spectral_norm(b);
        if (na == 0.0 || nb == 0.0)
            throw std::invalid_argument("bounds needs nonzero symbols");
        a /= na;
        b /= nb;
        const std::size_t count =
            static_cast<std::size_t>(op.dim) * static_cast<std::size_t>(op.dim);
        const std::vector<elemop::CertifiedBound> upper =
            use_grid ? elemop::a_upper_bounds_grid(
                           a, b, elemop::kDefaultOmegaGrid, count)
                     : elemop::a_upper_bounds(a, b, bounds_omega, count);
        const std::vector<elemop::CertifiedBound> lower =
            elemop::h_lower_envelope(a, b);
        std::vector<double> products;
        for (double x : linalg::svd(a).sigma)
            for (double y : linalg::svd(b).sigma) products.push_back(x * y);
        std::sort(products.begin(), products.end(), std::greater<double>());

        const double scale = na * nb;
        for (std::size_t j = 0; j < count; ++j) {
            if (lower[j].value > upper[j].value + seq::kInequalityTol)
                throw InsufficientPrefix(
                    "certified bound self-check failed: lower exceeds upper "
                    "at index " +
                    std::to_string(j + 1));
        }
        if (format == "csv") {
            std::ostringstream csv;
            csv << "index,lower,upper,envelope\n";
            for (std::size_t j = 0; j < count; ++j)
                csv << (j + 1) << "," << io::fmt15(lower[j].value * scale)
                    << "," << io::fmt15(upper[j].value * scale) << ","
                    << io::fmt15(6.75 * products[j] * scale) << "\n";
            emit_text(csv.str(), out_path);
            return 0;
        }
        json rows = json::array();
        for (std::size_t j = 0; j < count; ++j)
            rows.push_back({{"index", j + 1},
                            {"lower", io::round15(lower[j].value * scale)},
                            {"upper", io::round15(upper[j].value * scale)},
                            {"envelope",
                             io::round15(6.75 * products[j] * scale)}});
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "elemop.bounds";
        report["omega"] = use_grid ? json("grid") : json(bounds_omega);
        report["scale"] = io::round15(scale);
        report["rows"] = rows;
        emit(report, out_path);
        return 0;
    }
    if (recover->parsed()) {
        const elemop::ElementaryOp op = load_op(op_path);
        const elemop::SymbolRecovery rec =
            elemop::recover_first_symbol(op, target, seed);
        if (rec.residual >= 1e-8)
            throw InsufficientPrefix("recovery residual above 1e-8: " +
                                     io::fmt15(rec.residual));
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "elemop.recover";
        report["target"] = target;
        report["r"] = rec.r;
        report["residual"] = io::round15(rec.residual);
        report["reconstructed"] = json::parse(io::to_json(rec.reconstructed));
        emit(report, out_path);
        return 0;
    }
    if (minimal->parsed()) {
        const elemop::ElementaryOp op = load_op(op_path);
        const elemop::ElementaryOp min = elemop::minimal_representation(op);
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "elemop.minimal";
        report["pairs_in"] = op.symbols.size();
        report["pairs_out"] = min.symbols.size();
        report["zero_operator"] = min.symbols.empty();
        report["operator"] = json::parse(io::to_json(min));
        emit(report, out_path);
        return 0;
    }
    if (hsnums->parsed()) {
        const elemop::ElementaryOp op = load_op(op_path);
        const seq::DecreasingSeq s = elemop::hs_singular_numbers(op);
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "elemop.hsnums";
        report["values"] = seq_values(s.prefix());
        emit(report, out_path);
        return 0;
    }

    if (gap->parsed()) {
        const std::vector<spaces::GapRow> rows =
            spaces::counterexample_divergence(gap_omega, gap_r0, gap_r);
        if (format == "csv") {
            std::ostringstream csv;
            csv << "r0,r,n,ratio\n";
            for (const spaces::GapRow& row : rows)
                csv << row.r0 << "," << row.r << "," << io::fmt15(row.index)
                    << "," << io::fmt15(row.ratio) << "\n";
            emit_text(csv.str(), out_path);
            return 0;
        }
        json table = json::array();
        for (const spaces::GapRow& row : rows)
            table.push_back({{"r0", row.r0},
                             {"r", row.r},
                             {"n", io::round15(row.index)},
                             {"alpha", io::round15(row.alpha)},
                             {"beta", io::round15(row.beta)},
                             {"ratio", io::round15(row.ratio)}});
        json report;
        report["provenance"] = provenance(seed);
        report["operation"] = "spaces.counterexample_divergence";
        report["omega"] = gap_omega;
        report["table"] = table;
        emit(report, out_path);
        return 0;
    }

    if (verify_cmd->parsed()) {
        verify::RunConfig cfg;
        cfg.seed = seed;
        cfg.depth = v_depth;
        cfg.r_max = v_rmax;
        cfg.tol_identity = v_tol_identity;
        cfg.tol_inequality = v_tol_inequality;
        cfg.format = format;
        cfg.out_dir = out_path;
        const std::vector<verify::CriterionResult> results =
            verify::run_all(cfg);
        std::cout << verify::summary_lines(results);
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            const std::filesystem::path dir(cfg.out_dir);
            if (format == "csv")
                io::write_file((dir / "report.csv").string(),
                               verify::report_csv(results));
            else
                io::write_file((dir / "report.json").string(),
                               verify::report_json(results, cfg));
        }
        return verify::all_passed(results) ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InsufficientPrefix& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const SpanFailure& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const ConvergenceFailure& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
