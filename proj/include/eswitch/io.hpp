// File formats: likelihood/reference CSV, plain key-value configs, and the
// fixed number formatting shared by every emitter (9 significant digits).
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eswitch/data.hpp"

namespace eswitch {

// "%.9g"; infinities print as "inf"/"-inf".
std::string format_g9(double x);

// Header `round,e0,...,e{k-1}`, one row per round, round column 1-based.
// Parse errors throw std::invalid_argument prefixed "<name>:<line>:".
LikelihoodMatrix read_likelihood_csv(std::istream& in, Mode mode,
                                     const std::string& name);
LikelihoodMatrix read_likelihood_file(const std::string& path, Mode mode);
void write_likelihood_csv(std::ostream& out, const LikelihoodMatrix& data);

// Same layout for any per-round distribution table (predictions, marginals).
void write_distribution_csv(std::ostream& out,
                            const std::vector<std::vector<double>>& rows);

// Header `round,expert`, 0-based expert indices.
ReferenceSequence read_reference_csv(std::istream& in, const std::string& name);
ReferenceSequence read_reference_file(const std::string& path);
void write_reference_csv(std::ostream& out, const ReferenceSequence& ref);

// Plain `key=value` lines; '#' starts a comment; repeated keys preserved in
// order.
std::vector<std::pair<std::string, std::string>> read_keyvalue(
    std::istream& in, const std::string& name);
std::vector<std::pair<std::string, std::string>> read_keyvalue_file(
    const std::string& path);

// Strict numeric parsing helpers used by all readers; throw
// std::invalid_argument mentioning `what` on garbage.
double parse_number(const std::string& text, const std::string& what);
long parse_integer(const std::string& text, const std::string& what);
std::vector<std::string> split(const std::string& text, char sep);

}  // namespace eswitch
