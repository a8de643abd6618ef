#include "eswitch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eswitch {

namespace {

[[noreturn]] void fail_at(const std::string& name, int line, const std::string& msg) {
  std::ostringstream os;
  os << name << ":" << line << ": " << msg;
  throw std::invalid_argument(os.str());
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string format_g9(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string s = strip(text);
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + text + "' is not a number");
  }
  if (used != s.size())
    throw std::invalid_argument(what + ": '" + text + "' is not a number");
  return v;
}

long parse_integer(const std::string& text, const std::string& what) {
  const std::string s = strip(text);
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + text + "' is not an integer");
  }
  if (used != s.size())
    throw std::invalid_argument(what + ": '" + text + "' is not an integer");
  return v;
}

// ---------------------------------------------------------------------------
// Likelihood CSV

LikelihoodMatrix read_likelihood_csv(std::istream& in, Mode mode, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) fail_at(name, 1, "empty file, expected a header");
  auto header = split(strip(line), ',');
  if (header.size() < 2 || strip(header[0]) != "round")
    fail_at(name, 1, "header must be round,e0,...,e{k-1}");
  const int k = static_cast<int>(header.size()) - 1;
  for (int e = 0; e < k; ++e)
    if (strip(header[e + 1]) != "e" + std::to_string(e))
      fail_at(name, 1, "header must be round,e0,...,e{k-1}");

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = strip(line);
    if (body.empty()) continue;
    auto cols = split(body, ',');
    if (static_cast<int>(cols.size()) != k + 1) {
      std::ostringstream os;
      os << "expected " << (k + 1) << " columns, found " << cols.size();
      fail_at(name, lineno, os.str());
    }
    long round = 0;
    try {
      round = parse_integer(cols[0], "round");
    } catch (const std::invalid_argument& e) {
      fail_at(name, lineno, e.what());
    }
    if (round != static_cast<long>(rows.size()) + 1) {
      std::ostringstream os;
      os << "round column is " << round << ", expected " << rows.size() + 1;
      fail_at(name, lineno, os.str());
    }
    std::vector<double> row(k);
    for (int e = 0; e < k; ++e) {
      try {
        row[e] = parse_number(cols[e + 1], "expert " + std::to_string(e));
      } catch (const std::invalid_argument& ex) {
        fail_at(name, lineno, ex.what());
      }
    }
    rows.push_back(std::move(row));
  }
  LikelihoodMatrix data = LikelihoodMatrix::from_rows(rows);
  const std::string err = data.check(mode);
  if (!err.empty()) {
    // Map the offending row back to its file line (header offset).
    throw std::invalid_argument(name + ": " + err);
  }
  return data;
}

LikelihoodMatrix read_likelihood_file(const std::string& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  return read_likelihood_csv(in, mode, path);
}

void write_likelihood_csv(std::ostream& out, const LikelihoodMatrix& data) {
  out << "round";
  for (int e = 0; e < data.k; ++e) out << ",e" << e;
  out << "\n";
  for (int i = 0; i < data.t; ++i) {
    out << (i + 1);
    for (int e = 0; e < data.k; ++e) out << "," << format_g9(data.at(i, e));
    out << "\n";
  }
}

void write_distribution_csv(std::ostream& out,
                            const std::vector<std::vector<double>>& rows) {
  const int k = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  out << "round";
  for (int e = 0; e < k; ++e) out << ",e" << e;
  out << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out << (i + 1);
    for (double v : rows[i]) out << "," << format_g9(v);
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Reference CSV

ReferenceSequence read_reference_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) fail_at(name, 1, "empty file, expected a header");
  auto header = split(strip(line), ',');
  if (header.size() != 2 || strip(header[0]) != "round" || strip(header[1]) != "expert")
    fail_at(name, 1, "header must be round,expert");
  std::vector<int> experts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = strip(line);
    if (body.empty()) continue;
    auto cols = split(body, ',');
    if (cols.size() != 2) fail_at(name, lineno, "expected 2 columns");
    long round = 0, expert = 0;
    try {
      round = parse_integer(cols[0], "round");
      expert = parse_integer(cols[1], "expert");
    } catch (const std::invalid_argument& e) {
      fail_at(name, lineno, e.what());
    }
    if (round != static_cast<long>(experts.size()) + 1) {
      std::ostringstream os;
      os << "round column is " << round << ", expected " << experts.size() + 1;
      fail_at(name, lineno, os.str());
    }
    if (expert < 0) fail_at(name, lineno, "expert indices are 0-based and nonnegative");
    experts.push_back(static_cast<int>(expert));
  }
  return ReferenceSequence::from_experts(std::move(experts));
}

ReferenceSequence read_reference_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open reference file '" + path + "'");
  return read_reference_csv(in, path);
}

void write_reference_csv(std::ostream& out, const ReferenceSequence& ref) {
  out << "round,expert\n";
  for (int i = 0; i < ref.t; ++i) out << (i + 1) << "," << ref.experts[i] << "\n";
}

// ---------------------------------------------------------------------------
// Key-value configs

std::vector<std::pair<std::string, std::string>> read_keyvalue(std::istream& in,
                                                               const std::string& name) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = strip(line);
    const auto hash = body.find('#');
    if (hash != std::string::npos) body = strip(body.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos || eq == 0)
      fail_at(name, lineno, "expected key=value, got '" + body + "'");
    kv.emplace_back(strip(body.substr(0, eq)), strip(body.substr(eq + 1)));
  }
  return kv;
}

std::vector<std::pair<std::string, std::string>> read_keyvalue_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return read_keyvalue(in, path);
}

}  // namespace eswitch
