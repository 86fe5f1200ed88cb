#pragma once

// Line-oriented text formats:
//   FJS v1    Fourier series          t = <matrix> ; c = <v1>,<v2>,...
//   HJF v1    Jacobi table            (<n>; <r>) = <v1>,...
//   FJFAM v1  Fourier-Jacobi family   [index m = <matrix>] sections of HJF records
//   HTC v1    theta components        [class s = <matrix>; trunc=<q>] sections of FJS records
// Blank lines and lines starting with '#' are ignored by the readers.

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/ffj_series.hpp"
#include "hfj/field.hpp"
#include "hfj/fourier_series.hpp"
#include "hfj/herm_lattice.hpp"
#include "hfj/jacobi_forms.hpp"
#include "hfj/matrix.hpp"
#include "hfj/rational.hpp"

namespace hfj {

namespace detail {

inline std::string join_values(const Coefficient& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + to_string(c[i]);
  return out;
}

/// Position-tracking reader over one line; failures carry 1-based line and column.
class Cursor {
 public:
  Cursor(std::string_view line, std::size_t lineno) : line_(line), lineno_(lineno) {}

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError(what + " (line " + std::to_string(lineno_) + ", column " + std::to_string(at + 1) + ")", lineno_,
                     at + 1);
  }
  [[noreturn]] void fail(const std::string& what) const { fail(what, pos_); }

  std::size_t pos() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= line_.size(); }

  void expect(std::string_view literal) {
    if (line_.substr(pos_, literal.size()) != literal) fail("expected '" + std::string(literal) + "'");
    pos_ += literal.size();
  }
  bool accept(std::string_view literal) {
    if (line_.substr(pos_, literal.size()) != literal) return false;
    pos_ += literal.size();
    return true;
  }

  /// "[...]" without nesting.
  std::string_view bracketed() {
    if (at_end() || line_[pos_] != '[') fail("expected '['");
    const std::size_t close = line_.find(']', pos_);
    if (close == std::string_view::npos) fail("unterminated matrix");
    std::string_view out = line_.substr(pos_, close - pos_ + 1);
    pos_ = close + 1;
    return out;
  }

  /// Text up to (not including) `stop`, or to the end of the line.
  std::string_view until(std::string_view stop) {
    const std::size_t end = std::min(line_.find(stop, pos_), line_.size());
    std::string_view out = line_.substr(pos_, end - pos_);
    pos_ = end;
    return out;
  }

  void expect_end() const {
    if (!at_end()) fail("unexpected trailing text");
  }

  /// Runs `parse`, turning library errors into positioned parse errors at `at`.
  template <class F>
  auto guarded(std::size_t at, F&& parse) const {
    try {
      return parse();
    } catch (const ParseError& e) {
      fail(e.what(), at);
    } catch (const DomainError& e) {
      fail(e.what(), at);
    }
  }

 private:
  std::string_view line_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
};

struct Line {
  std::string_view text;
  std::size_t number;
};

inline std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t start = 0, number = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') out.push_back({line, number});
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

/// "MAGIC; key=value; ..." with exactly these keys in this order; optional keys may be absent
/// at the end.
inline std::map<std::string, std::pair<std::string, std::size_t>> parse_header(
    const std::vector<Line>& lines, std::string_view magic, const std::vector<std::string>& keys,
    const std::vector<std::string>& optional = {}) {
  if (lines.empty()) throw ParseError("empty input: expected '" + std::string(magic) + "' header", 1, 1);
  Cursor cur(lines[0].text, lines[0].number);
  cur.expect(magic);
  std::map<std::string, std::pair<std::string, std::size_t>> out;
  auto read_key = [&](const std::string& key) {
    cur.expect("; " + key + "=");
    const std::size_t at = cur.pos();
    const std::string value(cur.until("; "));
    if (value.empty()) cur.fail("empty value for '" + key + "'", at);
    out.emplace(key, std::pair{value, at});
  };
  for (const auto& key : keys) read_key(key);
  for (const auto& key : optional)
    if (!cur.at_end()) read_key(key);
  cur.expect_end();
  return out;
}

struct Header {
  std::map<std::string, std::pair<std::string, std::size_t>> fields;
  std::size_t lineno;

  std::string_view text(const std::string& key) const { return fields.at(key).first; }
  bool has(const std::string& key) const { return fields.count(key) != 0; }

  /// Parses one value; errors point at it inside the header line.
  template <class F>
  auto at(const std::string& key, const std::vector<Line>& lines, F&& f) const {
    const auto& [value, col] = fields.at(key);
    return Cursor(lines[0].text, lineno).guarded(col, [&] { return f(std::string_view(value)); });
  }
};

inline long parse_long(std::string_view text) {
  const Rational q = parse_rational(text);
  if (!is_integer(q) || !q.get_num().fits_slong_p()) throw ParseError("expected an integer: '" + std::string(text) + "'");
  return q.get_num().get_si();
}

inline std::size_t parse_size(std::string_view text) {
  const long v = parse_long(text);
  if (v < 0) throw ParseError("expected a nonnegative integer: '" + std::string(text) + "'");
  return static_cast<std::size_t>(v);
}

inline Coefficient parse_values(FieldTag tag, std::string_view text, std::size_t dim) {
  Coefficient out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_field_element(tag, text.substr(start, comma == text.npos ? text.npos : comma - start)));
    if (comma == text.npos) break;
    start = comma + 1;
  }
  if (out.size() != dim)
    throw ParseError("expected " + std::to_string(dim) + " values, found " + std::to_string(out.size()));
  return out;
}

inline void series_records(std::string& out, const FourierSeries& f) {
  for (const auto& [t, c] : f.coefficients()) out += "t = " + to_string(t) + " ; c = " + join_values(c) + "\n";
}

/// Reads one "t = <matrix> ; c = <values>" record into f.
inline void read_series_record(const Line& line, FourierSeries& f) {
  Cursor cur(line.text, line.number);
  cur.expect("t = ");
  const std::size_t at_t = cur.pos();
  const std::string_view mt = cur.bracketed();
  const HermMatrix t = cur.guarded(at_t, [&] { return parse_herm_matrix(f.tag(), mt); });
  cur.expect(" ; c = ");
  const std::size_t at_c = cur.pos();
  const std::string_view vt = cur.until("\n");
  const Coefficient c = cur.guarded(at_c, [&] { return parse_values(f.tag(), vt, f.dim()); });
  if (f.coefficients().count(t)) cur.fail("duplicate record for t = " + to_string(t), at_t);
  cur.guarded(at_t, [&] {
    f.set(t, c);
    return 0;
  });
}

inline void table_records(std::string& out, const JacobiTable& phi) {
  for (const auto& [key, c] : phi.coefficients()) out += to_string(key) + " = " + join_values(c) + "\n";
}

inline std::pair<JacobiKey, Coefficient> read_table_record(const Line& line, FieldTag tag, std::size_t dim) {
  Cursor cur(line.text, line.number);
  cur.expect("(");
  const std::size_t at_n = cur.pos();
  const std::string_view nt = cur.bracketed();
  cur.expect("; ");
  const std::size_t at_r = cur.pos();
  const std::string_view rt = cur.bracketed();
  cur.expect(") = ");
  const std::size_t at_c = cur.pos();
  const std::string_view vt = cur.until("\n");
  HermMatrix n = cur.guarded(at_n, [&] { return parse_herm_matrix(tag, nt); });
  Matrix r = cur.guarded(at_r, [&] { return parse_matrix(tag, rt); });
  Coefficient c = cur.guarded(at_c, [&] { return parse_values(tag, vt, dim); });
  return {JacobiKey{std::move(n), std::move(r)}, std::move(c)};
}

inline FieldTag header_field(const Header& h, const std::vector<Line>& lines) {
  return h.at("d", lines, [](std::string_view v) { return make_field(static_cast<int>(parse_long(v))); });
}

}  // namespace detail

// ---- FJS v1 ----

inline std::string write_series(const FourierSeries& f) {
  std::string out = "FJS v1; d=" + std::to_string(f.tag().d()) + "; g=" + std::to_string(f.degree()) +
                    "; k=" + std::to_string(f.weight()) + "; trunc=" + to_string(f.trunc()) +
                    "; dim=" + std::to_string(f.dim());
  if (!f.semi_integral_support()) out += "; support=rational";
  out += "\n";
  detail::series_records(out, f);
  return out;
}

inline FourierSeries read_series(std::string_view text) {
  const auto lines = detail::content_lines(text);
  const detail::Header h{detail::parse_header(lines, "FJS v1", {"d", "g", "k", "trunc", "dim"}, {"support"}),
                         lines.empty() ? 1 : lines[0].number};
  const FieldTag tag = detail::header_field(h, lines);
  const auto g = h.at("g", lines, detail::parse_size);
  const auto k = h.at("k", lines, detail::parse_long);
  const auto trunc = h.at("trunc", lines, parse_rational);
  const auto dim = h.at("dim", lines, detail::parse_size);
  bool semi = true;
  if (h.has("support")) {
    h.at("support", lines, [](std::string_view v) {
      if (v != "rational") throw ParseError("support must be 'rational'");
      return 0;
    });
    semi = false;
  }
  FourierSeries f = h.at("g", lines, [&](std::string_view) { return FourierSeries(tag, g, k, trunc, dim, semi); });
  for (std::size_t i = 1; i < lines.size(); ++i) detail::read_series_record(lines[i], f);
  return f;
}

// ---- HJF v1 ----

inline std::string table_header_fields(const JacobiTable& phi) {
  return "; d=" + std::to_string(phi.tag().d()) + "; g=" + std::to_string(phi.genus()) +
         "; k=" + std::to_string(phi.weight()) + "; m=" + to_string(phi.index()) + "; trunc=" + to_string(phi.trunc()) +
         "; dim=" + std::to_string(phi.dim());
}

inline std::string write_table(const JacobiTable& phi) {
  std::string out = "HJF v1" + table_header_fields(phi) + "\n";
  detail::table_records(out, phi);
  return out;
}

inline JacobiTable read_table(std::string_view text) {
  const auto lines = detail::content_lines(text);
  const detail::Header h{detail::parse_header(lines, "HJF v1", {"d", "g", "k", "m", "trunc", "dim"}),
                         lines.empty() ? 1 : lines[0].number};
  const FieldTag tag = detail::header_field(h, lines);
  const auto g = h.at("g", lines, detail::parse_size);
  const auto k = h.at("k", lines, detail::parse_long);
  const auto m = h.at("m", lines, [&](std::string_view v) { return parse_herm_matrix(tag, v); });
  const auto trunc = h.at("trunc", lines, parse_rational);
  const auto dim = h.at("dim", lines, detail::parse_size);
  JacobiTable phi = h.at("m", lines, [&](std::string_view) { return JacobiTable(g, k, m, trunc, dim); });
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [key, c] = detail::read_table_record(lines[i], tag, dim);
    detail::Cursor cur(lines[i].text, lines[i].number);
    if (phi.coefficients().count(key)) cur.fail("duplicate record " + to_string(key), 1);
    cur.guarded(1, [&] {
      phi.set(key, c);
      return 0;
    });
  }
  return phi;
}

// ---- FJFAM v1 ----

inline std::string write_family(const FJFamily& fam) {
  std::string out = "FJFAM v1; d=" + std::to_string(fam.tag().d()) + "; g=" + std::to_string(fam.degree()) +
                    "; l=" + std::to_string(fam.cogenus()) + "; k=" + std::to_string(fam.weight()) +
                    "; trunc=" + to_string(fam.trunc()) + "; dim=" + std::to_string(fam.dim()) + "\n";
  for (const auto& [m, phi] : fam.tables()) {
    out += "[index m = " + to_string(m) + "]\n";
    detail::table_records(out, phi);
  }
  return out;
}

inline FJFamily read_family(std::string_view text) {
  const auto lines = detail::content_lines(text);
  const detail::Header h{detail::parse_header(lines, "FJFAM v1", {"d", "g", "l", "k", "trunc", "dim"}),
                         lines.empty() ? 1 : lines[0].number};
  const FieldTag tag = detail::header_field(h, lines);
  const auto g = h.at("g", lines, detail::parse_size);
  const auto l = h.at("l", lines, detail::parse_size);
  const auto k = h.at("k", lines, detail::parse_long);
  const auto trunc = h.at("trunc", lines, parse_rational);
  const auto dim = h.at("dim", lines, detail::parse_size);
  FJFamily fam = h.at("l", lines, [&](std::string_view) { return FJFamily(tag, g, l, k, trunc, dim); });
  std::optional<HermMatrix> current;
  std::map<HermMatrix, bool> seen_sections;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    detail::Cursor cur(lines[i].text, lines[i].number);
    if (cur.accept("[index m = ")) {
      const std::size_t at = cur.pos();
      const std::string_view mt = cur.bracketed();
      cur.expect("]");
      cur.expect_end();
      HermMatrix m = cur.guarded(at, [&] { return parse_herm_matrix(tag, mt); });
      if (!fam.admits_index(m)) cur.fail("illegal Fourier-Jacobi index " + to_string(m), at);
      if (!seen_sections.emplace(m, true).second) cur.fail("duplicate section for m = " + to_string(m), at);
      current = std::move(m);
      continue;
    }
    if (!current) cur.fail("record before the first '[index m = ...]' section");
    auto [key, c] = detail::read_table_record(lines[i], tag, dim);
    if (fam.tables().count(*current) && fam.tables().at(*current).coefficients().count(key))
      cur.fail("duplicate record " + to_string(key), 1);
    cur.guarded(1, [&] {
      fam.set(*current, key, c);
      return 0;
    });
  }
  return fam;
}

// ---- HTC v1 ----

inline std::string write_components(const ThetaComponents& v) {
  const std::size_t dim = v.components.empty() ? 1 : v.components.begin()->second.dim();
  std::string out = "HTC v1; d=" + std::to_string(v.tag().d()) + "; g=" + std::to_string(v.genus) +
                    "; k=" + std::to_string(v.weight) + "; m=" + to_string(v.index) + "; trunc=" + to_string(v.trunc) +
                    "; dim=" + std::to_string(dim) + "\n";
  for (const auto& [s, h] : v.components) {
    out += "[class s = " + to_string(s.rep()) + "; trunc=" + to_string(h.trunc()) + "]\n";
    detail::series_records(out, h);
  }
  return out;
}

/// Every class of Delta_g(m) must have a section, with the truncation zero_components gives it.
inline ThetaComponents read_components(std::string_view text) {
  const auto lines = detail::content_lines(text);
  const detail::Header h{detail::parse_header(lines, "HTC v1", {"d", "g", "k", "m", "trunc", "dim"}),
                         lines.empty() ? 1 : lines[0].number};
  const FieldTag tag = detail::header_field(h, lines);
  const auto g = h.at("g", lines, detail::parse_size);
  const auto k = h.at("k", lines, detail::parse_long);
  const auto m = h.at("m", lines, [&](std::string_view v) { return parse_herm_matrix(tag, v); });
  const auto trunc = h.at("trunc", lines, parse_rational);
  const auto dim = h.at("dim", lines, detail::parse_size);
  ThetaComponents v = h.at("m", lines, [&](std::string_view) {
    if (!is_pd(m)) throw DomainError("theta components need a positive definite index");
    return zero_components(g, k, m, trunc, dim);
  });
  const CosetLattice lattice(m);
  FourierSeries* current = nullptr;
  std::map<CosetClass, bool> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    detail::Cursor cur(lines[i].text, lines[i].number);
    if (cur.accept("[class s = ")) {
      const std::size_t at = cur.pos();
      const std::string_view st = cur.bracketed();
      cur.expect("; trunc=");
      const std::size_t at_q = cur.pos();
      const std::string_view qt = cur.until("]");
      cur.expect("]");
      cur.expect_end();
      const CosetClass s = cur.guarded(at, [&] { return reduce_class(parse_matrix(tag, st), lattice); });
      if (!(s.rep() == parse_matrix(tag, st))) cur.fail("class representative is not canonical", at);
      if (!seen.emplace(s, true).second) cur.fail("duplicate section for s = " + to_string(s.rep()), at);
      current = &v.components.at(s);
      const Rational q = cur.guarded(at_q, [&] { return parse_rational(qt); });
      if (q != current->trunc()) cur.fail("component truncation must be " + to_string(current->trunc()), at_q);
      continue;
    }
    if (!current) cur.fail("record before the first '[class s = ...]' section");
    detail::read_series_record(lines[i], *current);
  }
  if (seen.size() != v.components.size())
    throw ParseError("expected " + std::to_string(v.components.size()) + " class sections, found " +
                         std::to_string(seen.size()),
                     lines.empty() ? 1 : lines.back().number + 1, 1);
  return v;
}

// ---- files ----

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DomainError("write failed for '" + path + "'");
}

/// The magic word of a file ("FJS", "HJF", "FJFAM", "HTC"), or empty.
inline std::string detect_format(std::string_view text) {
  for (const auto& line : detail::content_lines(text)) {
    for (std::string_view magic : {"FJFAM v1;", "FJS v1;", "HJF v1;", "HTC v1;"})
      if (line.text.substr(0, magic.size()) == magic) return std::string(magic.substr(0, magic.find(' ')));
    return "";
  }
  return "";
}

}  // namespace hfj
