#include "rician/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "rician/error.hpp"

namespace rician {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

Sample parse_sample(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string text = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;
    double x = 0.0;
    if (!parse_number(text, x) || !std::isfinite(x))
      throw ParseError("not a number: '" + text + "'", lineno);
    if (!(x > 0.0)) throw ParseError("nonpositive value " + text, lineno);
    values.push_back(x);
  }
  if (values.empty()) throw ParseError("no observations", 0);
  return Sample(std::move(values));
}

Sample load_sample(const std::string& path) {
  if (path == "-") return parse_sample(std::cin);
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_sample(in);
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_sample(std::ostream& out, const Sample& s) {
  for (double x : s.values()) out << format_double(x) << '\n';
}

void write_chain_csv(std::ostream& out, const Chain& c) {
  out << "iteration,chain,eta,alpha\n";
  for (std::size_t k = 0; k < c.runs.size(); ++k)
    for (const auto& d : c.runs[k].draws)
      out << d.iteration << ',' << k << ',' << format_double(d.eta) << ','
          << format_double(d.alpha) << '\n';
}

Chain read_chain_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  Chain c;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (!header) {
      if (text != "iteration,chain,eta,alpha")
        throw ParseError("expected header iteration,chain,eta,alpha", lineno);
      header = true;
      continue;
    }
    const auto f = split_commas(text);
    double it = 0, ch = 0, eta = 0, alpha = 0;
    if (f.size() != 4 || !parse_number(f[0], it) || !parse_number(f[1], ch) ||
        !parse_number(f[2], eta) || !parse_number(f[3], alpha))
      throw ParseError("malformed chain row", lineno);
    if (ch < 0 || ch != std::floor(ch) || it < 0 || it != std::floor(it))
      throw ParseError("iteration and chain must be nonnegative integers", lineno);
    if (!(eta > 0.0) || !(alpha > 0.0) || !std::isfinite(eta) || !std::isfinite(alpha))
      throw ParseError("eta and alpha must be positive", lineno);
    const auto k = static_cast<std::size_t>(ch);
    if (k > c.runs.size()) throw ParseError("chain indices must be contiguous from 0", lineno);
    if (k == c.runs.size()) c.runs.emplace_back();
    c.runs[k].draws.push_back({static_cast<std::size_t>(it), eta, alpha});
  }
  if (!header) throw ParseError("empty chain file", 0);
  if (c.total_draws() == 0) throw ParseError("chain file has no draws", 0);
  c.config.chains = c.runs.size();
  return c;
}

void write_predictive_csv(std::ostream& out, const PredictiveDraws& d) {
  out << "index,y_new\n";
  for (std::size_t i = 0; i < d.values.size(); ++i)
    out << i << ',' << format_double(d.values[i]) << '\n';
}

void write_study_csv(std::ostream& out, const StudyTable& t) {
  out << "method,n,parameter,bias,mse,cp,failures\n";
  for (const auto& c : t.cells) {
    out << c.method.name() << ',' << c.n << ',' << c.parameter << ',' << format_double(c.bias)
        << ',' << format_double(c.mse) << ',';
    if (c.cp) out << format_double(*c.cp);
    out << ',' << c.failures << '\n';
  }
}

void write_outage_csv(std::ostream& out, const OutageCurve& c) {
  out << "gamma_th,point,lo,hi\n";
  for (const auto& p : c.points)
    out << format_double(p.gamma_th) << ',' << format_double(p.point) << ','
        << format_double(p.lo) << ',' << format_double(p.hi) << '\n';
}

}  // namespace rician
