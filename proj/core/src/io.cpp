#include "calkin/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace calkin::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad JSON: ") + e.what());
    }
}

std::vector<double> number_list(const json& j, const char* what) {
    if (!j.is_array())
        throw std::invalid_argument(std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            throw std::invalid_argument(std::string(what) +
                                        " entries must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json seq_to_node(const seq::DecreasingSeq& s) {
    json node;
    node["prefix"] = s.prefix();
    if (!s.generator()) {
        node["generator"] = nullptr;
        return node;
    }
    switch (s.generator()->kind) {
        case seq::GenKind::Geometric:
            node["generator"] = {{"kind", "geometric"},
                                 {"omega", s.generator()->omega}};
            break;
        case seq::GenKind::Power:
            node["generator"] = {{"kind", "power"},
                                 {"lambda", s.generator()->lambda}};
            break;
        case seq::GenKind::LogInverse:
            node["generator"] = {{"kind", "loginverse"}};
            break;
        case seq::GenKind::Explicit:
            node["generator"] = {{"kind", "explicit"}};
            break;
    }
    return node;
}

seq::DecreasingSeq seq_from_node(const json& node) {
    if (!node.is_object() || !node.contains("prefix"))
        throw std::invalid_argument("sequence needs a prefix field");
    std::vector<double> prefix = number_list(node["prefix"], "prefix");
    if (!node.contains("generator") || node["generator"].is_null())
        return seq::DecreasingSeq::prefix_only(std::move(prefix));
    const json& g = node["generator"];
    const std::string kind = g.value("kind", "");
    if (kind == "geometric")
        return seq::DecreasingSeq(std::move(prefix),
                                  seq::Generator::geometric(g.at("omega")));
    if (kind == "power")
        return seq::DecreasingSeq(std::move(prefix),
                                  seq::Generator::power(g.at("lambda")));
    if (kind == "loginverse")
        return seq::DecreasingSeq(std::move(prefix),
                                  seq::Generator::log_inverse());
    if (kind == "explicit")
        return seq::DecreasingSeq::from_values(std::move(prefix));
    throw std::invalid_argument("unknown generator kind: " + kind);
}

json matrix_to_node(const linalg::Matrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

linalg::Matrix matrix_from_node(const json& node) {
    if (!node.is_object())
        throw std::invalid_argument("matrix must be an object");
    const Eigen::Index rows = node.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = node.at("cols").get<Eigen::Index>();
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("matrix dims must be positive");
    const json& entries = node.at("entries");
    if (!entries.is_array() ||
        entries.size() != static_cast<std::size_t>(rows * cols))
        throw std::invalid_argument("matrix entries length != rows*cols");
    linalg::Matrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j, ++idx) {
            const json& e = entries[idx];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
                !e[1].is_number())
                throw std::invalid_argument("matrix entry must be [re,im]");
            m(i, j) = linalg::Complex(e[0].get<double>(), e[1].get<double>());
        }
    if (!m.allFinite())
        throw std::invalid_argument("matrix entries must be finite");
    return m;
}

std::vector<double> split_numbers(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number in list: " + tok);
        }
    }
    return out;
}

}  // namespace

std::string to_json(const seq::DecreasingSeq& s) { return seq_to_node(s).dump(); }

seq::DecreasingSeq seq_from_json(const std::string& text) {
    return seq_from_node(parse(text));
}

std::string to_json(const seq::WeightSeq& w) {
    json node;
    switch (w.kind()) {
        case seq::WeightKind::ClassicalLorentz:
            node = {{"kind", "classical_lorentz"}, {"p", w.p()}, {"q", w.q()}};
            break;
        case seq::WeightKind::LogPower:
            node = {{"kind", "log_power"},
                    {"alpha", w.alpha()},
                    {"gamma", w.gamma()}};
            break;
        case seq::WeightKind::Explicit:
            node = {{"kind", "explicit"}, {"prefix", w.prefix()}};
            break;
    }
    return node.dump();
}

seq::WeightSeq weight_from_json(const std::string& text) {
    const json node = parse(text);
    const std::string kind = node.value("kind", "");
    if (kind == "classical_lorentz")
        return seq::WeightSeq::classical_lorentz(node.at("p"), node.at("q"));
    if (kind == "log_power")
        return seq::WeightSeq::log_power(node.at("alpha"), node.at("gamma"));
    if (kind == "explicit")
        return seq::WeightSeq::from_values(
            number_list(node.at("prefix"), "prefix"));
    throw std::invalid_argument("unknown weight kind: " + kind);
}

std::string to_json(const linalg::Matrix& m) { return matrix_to_node(m).dump(); }

linalg::Matrix matrix_from_json(const std::string& text) {
    return matrix_from_node(parse(text));
}

std::string to_json(const elemop::ElementaryOp& op) {
    json symbols = json::array();
    for (const auto& [a, b] : op.symbols)
        symbols.push_back({{"a", matrix_to_node(a)}, {"b", matrix_to_node(b)}});
    return json{{"dim", op.dim}, {"symbols", symbols}}.dump();
}

elemop::ElementaryOp elemop_from_json(const std::string& text) {
    const json node = parse(text);
    elemop::ElementaryOp op;
    op.dim = node.at("dim").get<int>();
    const json& symbols = node.at("symbols");
    if (!symbols.is_array() || symbols.empty())
        throw std::invalid_argument("operator needs a non-empty symbol list");
    for (const auto& s : symbols)
        op.symbols.push_back(
            {matrix_from_node(s.at("a")), matrix_from_node(s.at("b"))});
    op.validate();
    return op;
}

std::string to_json(const blockalg::BlockAlgebra& alg) {
    return json{{"blocks", alg.blocks}}.dump();
}

blockalg::BlockAlgebra blockalg_from_json(const std::string& text) {
    const json node = parse(text);
    blockalg::BlockAlgebra alg;
    if (!node.contains("blocks") || !node["blocks"].is_array())
        throw std::invalid_argument("block algebra needs a blocks array");
    for (const auto& b : node["blocks"]) alg.blocks.push_back(b.get<int>());
    alg.validate();
    return alg;
}

seq::DecreasingSeq parse_seq_spec(const std::string& spec) {
    if (spec.rfind("geo:", 0) == 0)
        return seq::DecreasingSeq::geometric(std::stod(spec.substr(4)));
    if (spec.rfind("pow:", 0) == 0)
        return seq::DecreasingSeq::power(std::stod(spec.substr(4)));
    if (spec == "loginv") return seq::DecreasingSeq::log_inverse();
    if (spec.rfind("vals:", 0) == 0)
        return seq::DecreasingSeq::from_values(split_numbers(spec.substr(5)));
    if (spec.rfind("raw:", 0) == 0)
        return seq::DecreasingSeq::prefix_only(split_numbers(spec.substr(4)));
    return seq_from_json(read_file(spec));
}

seq::WeightSeq parse_weight_spec(const std::string& spec) {
    if (spec.rfind("cl:", 0) == 0) {
        const std::vector<double> pq = split_numbers(spec.substr(3));
        if (pq.size() != 2)
            throw std::invalid_argument("cl weight needs p,q");
        return seq::WeightSeq::classical_lorentz(pq[0], pq[1]);
    }
    if (spec.rfind("logpow:", 0) == 0) {
        const std::vector<double> ag = split_numbers(spec.substr(7));
        if (ag.size() != 2)
            throw std::invalid_argument("logpow weight needs alpha,gamma");
        return seq::WeightSeq::log_power(ag[0], ag[1]);
    }
    if (spec.rfind("vals:", 0) == 0)
        return seq::WeightSeq::from_values(split_numbers(spec.substr(5)));
    return weight_from_json(read_file(spec));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

double round15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return std::strtod(buf, nullptr);
}

std::string fmt15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

}  // namespace calkin::io
