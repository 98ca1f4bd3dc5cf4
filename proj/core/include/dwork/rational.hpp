#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace dwork {

using Rational = boost::rational<std::int64_t>;
using IntVec = std::vector<std::int64_t>;
using RatVec = std::vector<Rational>;

inline std::int64_t floor(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

inline std::int64_t ceil(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace dwork
