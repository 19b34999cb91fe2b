#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace khbn {

/// Integer Laurent polynomial in a single variable q.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly monomial(int exponent, std::int64_t coeff = 1);
  static LaurentPoly constant(std::int64_t c) { return monomial(0, c); }

  std::int64_t coeff(int exponent) const;
  void add_term(int exponent, std::int64_t coeff);
  bool is_zero() const { return terms_.empty(); }
  const std::map<int, std::int64_t>& terms() const { return terms_; }

  /// q -> q^{-1}
  LaurentPoly reflected() const;
  LaurentPoly shifted(int by) const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Renders like "q^3 - 2 q + q^-1"; "0" for the zero polynomial.
  std::string to_string(const std::string& var = "q") const;

 private:
  std::map<int, std::int64_t> terms_;
};

}  // namespace khbn
