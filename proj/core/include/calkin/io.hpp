#pragma once

#include <string>

#include "calkin/blockalg.hpp"
#include "calkin/elemop.hpp"
#include "calkin/linalg.hpp"
#include "calkin/seq.hpp"

// JSON wire formats. All reals are IEEE-754 doubles in decimal.
//   DecreasingSeq  {"prefix":[...], "generator":
//                     null | {"kind":"geometric","omega":w}
//                          | {"kind":"power","lambda":l}
//                          | {"kind":"loginverse"} | {"kind":"explicit"}}
//   WeightSeq      {"kind":"classical_lorentz","p":p,"q":q}
//                  | {"kind":"log_power","alpha":a,"gamma":g}
//                  | {"kind":"explicit","prefix":[...]}
//   Matrix         {"rows":m,"cols":n,"entries":[[re,im],...]} row-major
//   ElementaryOp   {"dim":k,"symbols":[{"a":M,"b":M},...]}
//   BlockAlgebra   {"blocks":[2,3,...]}
// Parse errors raise std::invalid_argument.
namespace calkin::io {

std::string to_json(const seq::DecreasingSeq& s);
seq::DecreasingSeq seq_from_json(const std::string& text);

std::string to_json(const seq::WeightSeq& w);
seq::WeightSeq weight_from_json(const std::string& text);

std::string to_json(const linalg::Matrix& m);
linalg::Matrix matrix_from_json(const std::string& text);

std::string to_json(const elemop::ElementaryOp& op);
elemop::ElementaryOp elemop_from_json(const std::string& text);

std::string to_json(const blockalg::BlockAlgebra& alg);
blockalg::BlockAlgebra blockalg_from_json(const std::string& text);

// Command-line sequence shorthand: "geo:0.5", "pow:1", "loginv",
// "vals:1,0.5,0.25" (finite support), "raw:0.9,0.3" (unknown tail), or a
// path to a JSON file in the format above.
seq::DecreasingSeq parse_seq_spec(const std::string& spec);

// Weight shorthand: "cl:p,q", "logpow:alpha,gamma", "vals:1,0.9,...", or a
// JSON file path.
seq::WeightSeq parse_weight_spec(const std::string& spec);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Reports render reals at 15 significant digits.
double round15(double x);
std::string fmt15(double x);

}  // namespace calkin::io
