#include "khbn/laurent.hpp"

#include <sstream>

namespace khbn {

LaurentPoly LaurentPoly::monomial(int exponent, std::int64_t coeff) {
  LaurentPoly p;
  p.add_term(exponent, coeff);
  return p;
}

std::int64_t LaurentPoly::coeff(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? 0 : it->second;
}

void LaurentPoly::add_term(int exponent, std::int64_t coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly LaurentPoly::reflected() const {
  LaurentPoly r;
  for (auto [e, c] : terms_) r.terms_.emplace(-e, c);
  return r;
}

LaurentPoly LaurentPoly::shifted(int by) const {
  LaurentPoly r;
  for (auto [e, c] : terms_) r.terms_.emplace(e + by, c);
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (auto [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (auto [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  for (auto [ea, ca] : a.terms_)
    for (auto [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
  return r;
}

std::string LaurentPoly::to_string(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    auto [e, c] = *it;
    std::int64_t mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << " ";
    os << var;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

}  // namespace khbn
