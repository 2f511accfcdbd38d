#pragma once

// Potential spec files: UTF-8 text, one `key = value` per line, `#` starts a
// comment. The full format is described in README.md.

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "potential.hpp"

namespace isowill {

struct GridSpec {
  enum class Kind { Polar, Rect } kind = Kind::Polar;
  std::vector<double> radii{0.2, 0.5, 1.0, 1.5, 1.95};
  int arg_count = 4;
  double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
  int nx = 5, ny = 5;

  std::vector<std::complex<double>> points() const {
    std::vector<std::complex<double>> out;
    if (kind == Kind::Polar) {
      for (double r : radii)
        for (int k = 0; k < arg_count; ++k) out.push_back(std::polar(r, 2.0 * std::numbers::pi * k / arg_count));
    } else {
      for (int i = 0; i < ny; ++i)
        for (int j = 0; j < nx; ++j) {
          double x = nx == 1 ? x_min : x_min + (x_max - x_min) * j / (nx - 1);
          double y = ny == 1 ? y_min : y_min + (y_max - y_min) * i / (ny - 1);
          out.emplace_back(x, y);
        }
    }
    return out;
  }
  int rows() const { return kind == Kind::Polar ? static_cast<int>(radii.size()) : ny; }
  int cols() const { return kind == Kind::Polar ? arg_count : nx; }
};

struct SpecFile {
  PotentialSpec potential;
  std::optional<GridSpec> grid;
  std::vector<double> lambda_deg;  // empty means {0}
  std::string source;              // raw bytes, for hashing
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// unsigned rational: 3, 3/4, 0.25, 1.5/2
inline std::optional<Q> parse_unsigned_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  auto dec = [](const std::string& t) -> std::optional<Q> {
    if (t.empty()) return std::nullopt;
    std::string digits;
    long scale = 0;
    bool dot = false;
    for (char c : t) {
      if (c == '.') {
        if (dot) return std::nullopt;
        dot = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (dot) ++scale;
      } else {
        return std::nullopt;
      }
    }
    if (digits.empty()) return std::nullopt;
    mpz_class num(digits), den(1);
    for (long k = 0; k < scale; ++k) den *= 10;
    Q q(num, den);
    q.canonicalize();
    return q;
  };
  if (slash == std::string::npos) return dec(s);
  auto n = dec(s.substr(0, slash)), d = dec(s.substr(slash + 1));
  if (!n || !d || sgn(*d) == 0) return std::nullopt;
  Q q = *n / *d;
  q.canonicalize();
  return q;
}

}  // namespace detail

// Gaussian rational literal: 3, -1/2, i, -2i, 1/2i, 3+2i, 0.5-0.25i, 2*i
inline std::optional<GQ> parse_gaussian(std::string s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '*') t += c;
  if (t.empty()) return std::nullopt;
  // split into signed terms at + or - not in leading position
  std::vector<std::string> terms;
  size_t start = 0;
  for (size_t k = 1; k < t.size(); ++k)
    if (t[k] == '+' || t[k] == '-') {
      terms.push_back(t.substr(start, k - start));
      start = k;
    }
  terms.push_back(t.substr(start));
  if (terms.size() > 2) return std::nullopt;
  GQ out;
  bool have_re = false, have_im = false;
  for (std::string term : terms) {
    bool neg = false;
    if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
      neg = term[0] == '-';
      term = term.substr(1);
    }
    bool imag = !term.empty() && term.back() == 'i';
    if (imag) term.pop_back();
    std::optional<Q> v = imag && term.empty() ? std::optional<Q>(Q(1)) : detail::parse_unsigned_rational(term);
    if (!v) return std::nullopt;
    if (neg) *v = -*v;
    if (imag) {
      if (have_im) return std::nullopt;
      have_im = true;
      out.im = *v;
    } else {
      if (have_re) return std::nullopt;
      have_re = true;
      out.re = *v;
    }
  }
  return out;
}

inline SpecFile parse_spec(const std::string& text) {
  SpecFile out;
  out.source = text;
  std::map<std::string, std::vector<GQ>> coeff;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_format = false;
  GridSpec grid;
  bool any_grid = false;

  auto reals = [](const std::string& v, int ln) {
    std::vector<double> xs;
    for (const auto& item : detail::split_commas(v)) {
      try {
        size_t used = 0;
        double x = std::stod(item, &used);
        if (used != item.size() || !std::isfinite(x)) throw std::invalid_argument(item);
        xs.push_back(x);
      } catch (const std::exception&) {
        throw ParseError(ln, "expected a real number, got '" + item + "'");
      }
    }
    return xs;
  };
  auto count = [&](const std::string& v, int ln) {
    auto xs = reals(v, ln);
    if (xs.size() != 1 || xs[0] < 1 || std::floor(xs[0]) != xs[0]) throw ParseError(ln, "expected a positive integer");
    return static_cast<int>(xs[0]);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line = line.substr(3);
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "empty key");
    if (!seen.insert(key).second) throw ParseError(lineno, "duplicate key '" + key + "'");
    if (val.empty()) throw ParseError(lineno, "empty value for '" + key + "'");

    if (key == "format") {
      if (val != "isowill-potential/1") throw ParseError(lineno, "unsupported format '" + val + "'");
      have_format = true;
    } else if (key == "name") {
      out.potential.name = val;
    } else if (key == "base_point") {
      auto g = parse_gaussian(val);
      if (!g) throw ParseError(lineno, "bad complex literal '" + val + "'");
      out.potential.base_point = *g;
    } else if (key.size() >= 7 && key[0] == 'h' && (key.ends_with(".num") || key.ends_with(".den"))) {
      std::string idx = key.substr(1, key.size() - 5);
      if (idx.size() != 2 || idx[0] < '1' || idx[0] > '4' || idx[1] < '1' || idx[1] > '2')
        throw ParseError(lineno, "unknown coefficient key '" + key + "'");
      std::vector<GQ> cs;
      for (const auto& item : detail::split_commas(val)) {
        auto g = parse_gaussian(item);
        if (!g) throw ParseError(lineno, "bad coefficient '" + item + "'");
        cs.push_back(*g);
      }
      coeff[key] = cs;
      if (key.ends_with(".den")) {
        bool zero = true;
        for (const auto& c : cs) zero = zero && c.is_zero();
        if (zero) throw ParseError(lineno, "zero denominator");
      }
    } else if (key == "grid") {
      any_grid = true;
      if (val == "polar")
        grid.kind = GridSpec::Kind::Polar;
      else if (val == "rect")
        grid.kind = GridSpec::Kind::Rect;
      else
        throw ParseError(lineno, "grid must be 'polar' or 'rect'");
    } else if (key == "grid.radii") {
      any_grid = true;
      grid.radii = reals(val, lineno);
      for (double r : grid.radii)
        if (r < 0) throw ParseError(lineno, "negative radius");
    } else if (key == "grid.arg_count") {
      any_grid = true;
      grid.arg_count = count(val, lineno);
    } else if (key == "grid.x" || key == "grid.y") {
      any_grid = true;
      auto xs = reals(val, lineno);
      if (xs.size() != 3 || xs[2] < 1 || std::floor(xs[2]) != xs[2])
        throw ParseError(lineno, "expected 'min, max, count'");
      (key == "grid.x" ? grid.x_min : grid.y_min) = xs[0];
      (key == "grid.x" ? grid.x_max : grid.y_max) = xs[1];
      (key == "grid.x" ? grid.nx : grid.ny) = static_cast<int>(xs[2]);
    } else if (key == "lambda.deg") {
      out.lambda_deg = reals(val, lineno);
    } else {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
  }
  if (!have_format) throw ParseError(lineno == 0 ? 1 : lineno, "missing 'format = isowill-potential/1'");
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 2; ++k) {
      std::string base = "h" + std::to_string(j + 1) + std::to_string(k + 1);
      Poly1 num, den(GQ(1));
      if (auto it = coeff.find(base + ".num"); it != coeff.end()) num = Poly1(it->second);
      if (auto it = coeff.find(base + ".den"); it != coeff.end()) den = Poly1(it->second);
      out.potential.h[j][k] = Rational1(num, den);
    }
  if (any_grid) out.grid = grid;
  return out;
}

inline SpecFile read_spec_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace isowill
