#include "kecss/cost.hpp"

#include <bit>

#include "kecss/errors.hpp"

namespace kecss {

namespace {

using u128 = unsigned __int128;

// 2^z > c / w  <=>  w * 2^z > c.
bool power_exceeds(int z, std::uint64_t c, Weight w) {
  if (z >= 0) {
    if (z >= 64) return true;
    return (static_cast<u128>(w) << z) > c;
  }
  if (-z >= 64) return w > 0;
  return static_cast<u128>(w) > (static_cast<u128>(c) << -z);
}

}  // namespace

Rational power_of_two(int exponent) {
  if (exponent >= 0) return Rational(boost::multiprecision::cpp_int(1) << exponent);
  return Rational(1, boost::multiprecision::cpp_int(1) << -exponent);
}

Rational CostEffectiveness::rounded() const { return power_of_two(exponent); }

int rounded_exponent(std::uint64_t covered, Weight weight) {
  if (covered == 0 || weight == 0) throw PreconditionError("rounded_exponent needs positive operands");
  int z = static_cast<int>(std::bit_width(covered)) - static_cast<int>(std::bit_width(weight)) - 1;
  while (!power_exceeds(z, covered, weight)) ++z;
  return z;
}

CostEffectiveness make_cost_effectiveness(std::uint64_t covered, Weight weight) {
  CostEffectiveness ce;
  ce.covered = covered;
  ce.weight = weight;
  if (covered == 0) {
    ce.exponent = CostEffectiveness::kZero;
  } else if (weight == 0) {
    ce.exponent = CostEffectiveness::kInfinite;
  } else {
    ce.exponent = rounded_exponent(covered, weight);
  }
  return ce;
}

Rational harmonic(int l) {
  Rational h = 0;
  for (int i = 1; i <= l; ++i) h += Rational(1, i);
  return h;
}

}  // namespace kecss
