#pragma once

#include <climits>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "kecss/graph.hpp"

namespace kecss {

using Rational = boost::multiprecision::cpp_rational;

// rho = covered / weight, with its round-up to a power of two kept as an
// exponent: rounded = 2^exponent is the least power of two strictly greater
// than rho.
struct CostEffectiveness {
  static constexpr int kInfinite = INT_MAX;
  static constexpr int kZero = INT_MIN;

  std::uint64_t covered = 0;
  Weight weight = 1;
  int exponent = kZero;

  bool infinite() const { return exponent == kInfinite; }
  bool zero() const { return exponent == kZero; }
  // Exact rho; only meaningful when not infinite.
  Rational raw() const { return Rational(covered) / Rational(weight); }
  // Exact rounded value; only meaningful when neither zero nor infinite.
  Rational rounded() const;
};

// Smallest z with 2^z > covered / weight; covered > 0, weight > 0.
int rounded_exponent(std::uint64_t covered, Weight weight);
CostEffectiveness make_cost_effectiveness(std::uint64_t covered, Weight weight);

// 2^exponent as an exact rational.
Rational power_of_two(int exponent);

// Harmonic number H_l as an exact rational.
Rational harmonic(int l);

}  // namespace kecss
