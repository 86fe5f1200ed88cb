#pragma once

// Exact rational consequences of the lower slope bound 12 c_E^(g-1).

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/field.hpp"
#include "hfj/rational.hpp"

namespace hfj {

/// Which constant plays the role of c_E: 1 - mu, or 1 - mu^2 for comparison.
enum class CReading { linear, squared };

inline std::string to_string(CReading reading) { return reading == CReading::linear ? "linear" : "squared"; }

inline Rational c_constant(FieldTag tag, CReading reading = CReading::linear) {
  const auto e = euclidean_constant(tag);
  return reading == CReading::linear ? e.c : e.c_squared;
}

/// 12 c^(g-1), by the recursion omega_n >= c omega_(n-1) from omega_1 >= 12.
inline Rational slope_lower_bound(std::size_t g, FieldTag tag, CReading reading = CReading::linear) {
  if (g == 0) throw DomainError("degree must be positive");
  const Rational c = c_constant(tag, reading);
  Rational omega = 12;
  for (std::size_t n = 2; n <= g; ++n) omega *= c;
  return omega;
}

/// k / omega_g: a weight-k form of degree g vanishing to a larger order is zero.
inline Rational vanishing_threshold(long k, std::size_t g, FieldTag tag, CReading reading = CReading::linear) {
  if (k < 0) throw DomainError("weight must be nonnegative");
  return Rational(k) / slope_lower_bound(g, tag, reading);
}

/// c^-1 k / omega_g: J_{k,m}[m] = 0 for integers m beyond it.
inline Rational jacobi_index_threshold(long k, std::size_t g, FieldTag tag, CReading reading = CReading::linear) {
  return vanishing_threshold(k, g, tag, reading) / c_constant(tag, reading);
}

/// Fourier-Jacobi indices d_start <= m <= floor(jacobi_index_threshold(k, g - 1)) that can
/// carry a nonzero graded piece in the filtration of a degree-g form vanishing to order d_start.
inline std::vector<long> truncation_budget(long k, std::size_t g, long d_start, FieldTag tag,
                                           CReading reading = CReading::linear) {
  if (g < 2) throw DomainError("truncation budget needs degree at least 2");
  if (d_start < 0) throw DomainError("starting order must be nonnegative");
  const Integer top = floor_div(jacobi_index_threshold(k, g - 1, tag, reading));
  std::vector<long> out;
  for (long m = d_start; m <= top; ++m) out.push_back(m);
  return out;
}

struct DimensionExponents {
  long fm;       ///< dim FM_k grows like k^(g^2)
  long graded;   ///< dim FM_{<=k} grows like k^(g^2 + 1)
};

inline DimensionExponents dimension_exponents(std::size_t g) {
  if (g == 0) throw DomainError("degree must be positive");
  const long sq = static_cast<long>(g * g);
  return {sq, sq + 1};
}

/// C(k, g) = coefficient * pi^pi_power.
struct TraceConstant {
  Rational coefficient;
  long pi_power;
};

/// 2^(-g^2-g) pi^(-g^2) prod_{0<=i,j<g} (k - 2g + 1 + i + j).
inline TraceConstant trace_formula_constant(long k, std::size_t g) {
  if (g == 0) throw DomainError("degree must be positive");
  const long n = static_cast<long>(g);
  Integer prod = 1;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) prod *= k - 2 * n + 1 + i + j;
  Integer two = 1;
  for (long i = 0; i < n * n + n; ++i) two *= 2;
  return {Rational(prod) / Rational(two), -n * n};
}

struct BoundReport {
  std::size_t g;
  long k;
  FieldTag tag;
  CReading reading;
  Rational slope_lb;
  Rational ord_vanish_threshold;
  Rational jacobi_index_threshold;
  long fm_exponent;
  long graded_exponent;
};

inline BoundReport bound_report(long k, std::size_t g, FieldTag tag, CReading reading = CReading::linear) {
  const auto e = dimension_exponents(g);
  return {g,
          k,
          tag,
          reading,
          slope_lower_bound(g, tag, reading),
          vanishing_threshold(k, g, tag, reading),
          jacobi_index_threshold(k, g, tag, reading),
          e.fm,
          e.graded};
}

/// key=value lines in a fixed order.
inline std::string to_text(const BoundReport& r) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + "=" + value + "\n"; };
  line("d", std::to_string(r.tag.d()));
  line("g", std::to_string(r.g));
  line("k", std::to_string(r.k));
  line("reading", to_string(r.reading));
  line("slope_lb", to_string(r.slope_lb));
  line("ord_vanish_threshold", to_string(r.ord_vanish_threshold));
  line("jacobi_index_threshold", to_string(r.jacobi_index_threshold));
  line("fm_exponent", std::to_string(r.fm_exponent));
  line("graded_exponent", std::to_string(r.graded_exponent));
  return out;
}

/// Rationals are written as strings so that no value passes through floating point.
inline nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["d"] = r.tag.d();
  j["g"] = r.g;
  j["k"] = r.k;
  j["reading"] = to_string(r.reading);
  j["slope_lb"] = to_string(r.slope_lb);
  j["ord_vanish_threshold"] = to_string(r.ord_vanish_threshold);
  j["jacobi_index_threshold"] = to_string(r.jacobi_index_threshold);
  j["fm_exponent"] = r.fm_exponent;
  j["graded_exponent"] = r.graded_exponent;
  return j;
}

}  // namespace hfj
