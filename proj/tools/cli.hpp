#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "hfj/bounds.hpp"
#include "hfj/ffj_series.hpp"
#include "hfj/io.hpp"
#include "hfj/jacobi_forms.hpp"

namespace hfj::cli {

enum Exit : int { ok = 0, usage = 1, parse = 2, consistency = 3 };

struct Options {
  int field = 0;
  std::size_t degree = 1;
  std::size_t cogenus = 0;
  long weight = 0;
  std::string trunc;
  std::string index = "1";
  std::string shift = "0";
  std::vector<std::string> in;
  std::string out;
  std::string reading = "linear";
  bool strict = false;
};

namespace detail {

inline void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
}

inline const std::string& single_input(const Options& o) {
  if (o.in.size() != 1) throw DomainError("expected exactly one --in file");
  return o.in.front();
}

inline Rational trunc_value(const Options& o) {
  if (o.trunc.empty()) throw DomainError("--trunc is required");
  try {
    return parse_rational(o.trunc);
  } catch (const ParseError& e) {
    throw DomainError(std::string("bad --trunc: ") + e.what());
  }
}

inline CReading reading(const Options& o) {
  if (o.reading == "linear") return CReading::linear;
  if (o.reading == "squared") return CReading::squared;
  throw DomainError("--reading must be 'linear' or 'squared'");
}

inline FieldTag field(const Options& o) {
  if (o.field == 0) throw DomainError("--field is required");
  return make_field(o.field);
}

/// A matrix argument: "[...]" text, or a bare scalar standing for scalar * I_size.
inline Matrix matrix_arg(FieldTag tag, const std::string& text, std::size_t rows, std::size_t cols,
                         const std::string& name) {
  try {
    if (!text.empty() && text.front() == '[') {
      Matrix m = parse_matrix(tag, text);
      if (m.rows() != rows || m.cols() != cols) throw DomainError(name + " has the wrong shape");
      return m;
    }
    const FieldElement x = parse_field_element(tag, text);
    if (x.is_zero()) return Matrix(tag, rows, cols);
    if (rows != cols) throw DomainError(name + ": a scalar needs a square shape");
    Matrix m(tag, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) m(i, i) = x;
    return m;
  } catch (const ParseError& e) {
    throw DomainError("bad " + name + ": " + e.what());
  }
}

inline int theta(const Options& o, std::ostream& out) {
  const FieldTag tag = field(o);
  std::size_t l = 1;
  if (!o.index.empty() && o.index.front() == '[') l = std::count(o.index.begin(), o.index.end(), ';') + 1;
  const HermMatrix m(matrix_arg(tag, o.index, l, l, "--m"));
  const Matrix shift = matrix_arg(tag, o.shift, o.degree, l, "--shift");
  if (!shift.is_dual_integral()) throw DomainError("--shift must have entries in the inverse different");
  emit(o, out, write_table(theta_coeffs(reduce_class(shift, m), trunc_value(o))));
  return ok;
}

inline int decompose(const Options& o, std::ostream& out) {
  const JacobiTable phi = read_table(read_file(single_input(o)));
  emit(o, out, write_components(theta_decompose(phi, o.strict ? ThetaCheck::strict : ThetaCheck::probe)));
  return ok;
}

inline int recompose(const Options& o, std::ostream& out) {
  const ThetaComponents v = read_components(read_file(single_input(o)));
  emit(o, out, write_table(theta_recompose(v, o.trunc.empty() ? v.trunc : trunc_value(o))));
  return ok;
}

inline int multiply(const Options& o, std::ostream& out) {
  if (o.in.size() != 2) throw DomainError("multiply needs two --in files");
  const FourierSeries a = read_series(read_file(o.in[0]));
  const std::string second = read_file(o.in[1]);
  const std::string format = detect_format(second);
  if (format == "FJS")
    emit(o, out, write_series(mul(a, read_series(second))));
  else if (format == "HJF")
    emit(o, out, write_table(mul(a, read_table(second))));
  else
    throw DomainError("second factor must be an FJS or HJF file");
  return ok;
}

inline int report_violations(const std::vector<SymmetryViolation>& report, std::ostream& out) {
  for (const auto& v : report) out << "violation generator=" << v.generator << " " << v.witness << "\n";
  if (!report.empty()) return consistency;
  out << "symmetric\n";
  return ok;
}

inline int symmetry_check(const Options& o, std::ostream& out) {
  const std::string text = read_file(single_input(o));
  const std::string format = detect_format(text);
  if (format == "FJS") {
    const FourierSeries f = read_series(text);
    return report_violations(check_symmetry(f, gl_generators(f.tag(), f.degree())), out);
  }
  if (format == "FJFAM") {
    const FJFamily fam = read_family(text);
    return report_violations(check_family(fam, gl_generators(fam.tag(), fam.degree())), out);
  }
  if (format == "HTC") {
    const ThetaComponents v = read_components(text);
    return report_violations(check_component_symmetry(v, gl_generators(v.tag(), v.genus)), out);
  }
  throw DomainError("symmetry-check reads FJS, FJFAM or HTC files");
}

inline int rearrange(const Options& o, std::ostream& out) {
  const FJFamily fam = read_family(read_file(single_input(o)));
  emit(o, out, write_family(rearrange_cogenus(fam, o.cogenus == 0 ? fam.cogenus() - 1 : o.cogenus)));
  return ok;
}

inline int psi0(const Options& o, std::ostream& out) {
  emit(o, out, write_family(extract_psi0(read_family(read_file(single_input(o))))));
  return ok;
}

inline int bounds(const Options& o, std::ostream& out) {
  const BoundReport r = bound_report(o.weight, o.degree, field(o), reading(o));
  emit(o, out, to_text(r) + "json=" + to_json(r).dump() + "\n");
  return ok;
}

inline int c_constant_cmd(const Options& o, std::ostream& out) {
  const FieldTag tag = field(o);
  emit(o, out, "mu=" + to_string(euclidean_constant(tag).mu) + " c=" + to_string(c_constant(tag, reading(o))) + "\n");
  return ok;
}

/// Parses each file and reports whether writing it back reproduces it byte for byte.
inline int validate(const Options& o, std::ostream& out) {
  if (o.in.empty()) throw DomainError("validate needs at least one --in file");
  for (const auto& path : o.in) {
    const std::string text = read_file(path);
    const std::string format = detect_format(text);
    std::string again;
    std::size_t records = 0;
    if (format == "FJS") {
      const auto f = read_series(text);
      records = f.coefficients().size();
      again = write_series(f);
    } else if (format == "HJF") {
      const auto phi = read_table(text);
      records = phi.coefficients().size();
      again = write_table(phi);
    } else if (format == "FJFAM") {
      const auto fam = read_family(text);
      for (const auto& [m, phi] : fam.tables()) records += phi.coefficients().size();
      again = write_family(fam);
    } else if (format == "HTC") {
      const auto v = read_components(text);
      for (const auto& [s, h] : v.components) records += h.coefficients().size();
      again = write_components(v);
    } else {
      throw ParseError("unknown file format in '" + path + "'", 1, 1);
    }
    out << "valid " << format << " records=" << records << " canonical=" << (again == text ? "yes" : "no") << " "
        << path << "\n";
  }
  return ok;
}

inline std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace detail

/// Runs one subcommand. Failures print "error: <kind>: <reason>" on `err` and return 1 (usage or
/// domain), 2 (malformed input) or 3 (consistency or truncation violation).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Hermitian modular and Jacobi form coefficient tools", "hfj"};
  app.require_subcommand(1);
  Options o;
  using Handler = int (*)(const Options&, std::ostream&);
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto add = [&](const std::string& name, const std::string& about, Handler h) {
    CLI::App* sub = app.add_subcommand(name, about);
    commands.emplace_back(sub, h);
    return sub;
  };
  auto with_field = [&](CLI::App* sub) { sub->add_option("--field", o.field, "d in {-1,-2,-3,-7,-11}"); };
  auto with_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output file (default stdout)"); };
  auto with_in = [&](CLI::App* sub) { sub->add_option("--in", o.in, "input file")->required(); };

  {
    auto* s = add("c-constant", "print the deep-hole norm mu and c", detail::c_constant_cmd);
    with_field(s);
    s->add_option("--reading", o.reading, "linear (c = 1 - mu) or squared (c = 1 - mu^2)");
    with_out(s);
  }
  {
    auto* s = add("theta", "theta coefficient table of index m and shift s", detail::theta);
    with_field(s);
    s->add_option("--degree", o.degree, "genus g");
    s->add_option("--m", o.index, "index: integer or matrix");
    s->add_option("--shift", o.shift, "shift: 0 or g x l matrix");
    s->add_option("--trunc", o.trunc, "trace bound");
    with_out(s);
  }
  {
    auto* s = add("decompose", "theta decomposition of an HJF table", detail::decompose);
    with_in(s);
    s->add_flag("--strict", o.strict, "check every representative of every class");
    with_out(s);
  }
  {
    auto* s = add("recompose", "Jacobi table from HTC theta components", detail::recompose);
    with_in(s);
    s->add_option("--trunc", o.trunc, "trace bound (default: the file's)");
    with_out(s);
  }
  {
    auto* s = add("multiply", "product of an FJS series with an FJS series or HJF table", detail::multiply);
    with_in(s);
    with_out(s);
  }
  {
    auto* s = add("symmetry-check", "GL_g(O_E) symmetry of an FJS, FJFAM or HTC file", detail::symmetry_check);
    with_in(s);
  }
  {
    auto* s = add("rearrange", "change the cogenus of an FJFAM family", detail::rearrange);
    with_in(s);
    s->add_option("--cogenus", o.cogenus, "target cogenus (default l - 1)");
    with_out(s);
  }
  {
    auto* s = add("psi0", "psi_0 of an FJFAM family as a family of degree g - 1", detail::psi0);
    with_in(s);
    with_out(s);
  }
  {
    auto* s = add("bounds", "slope bound, vanishing thresholds and exponents", detail::bounds);
    with_field(s);
    s->add_option("--degree", o.degree, "degree g");
    s->add_option("--weight", o.weight, "weight k");
    s->add_option("--reading", o.reading, "linear or squared");
    with_out(s);
  }
  {
    auto* s = add("validate", "re-read files and check canonical form", detail::validate);
    with_in(s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << detail::one_line(e.what()) << "\n";
    return usage;
  }

  try {
    for (const auto& [sub, handler] : commands)
      if (sub->parsed()) return handler(o, out);
    err << "error: usage: no subcommand\n";
    return usage;
  } catch (const ParseError& e) {
    err << "error: parse: " << detail::one_line(e.what()) << "\n";
    return parse;
  } catch (const TruncationError& e) {
    err << "error: truncation: " << detail::one_line(e.what()) << "\n";
    return consistency;
  } catch (const ConsistencyError& e) {
    err << "error: consistency: " << detail::one_line(e.what()) << "\n";
    return consistency;
  } catch (const Error& e) {
    err << "error: domain: " << detail::one_line(e.what()) << "\n";
    return usage;
  }
}

}  // namespace hfj::cli
