#include "distlab/rational.hpp"

#include <cctype>

#include "distlab/errors.hpp"

namespace distlab {

namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
  if (!s.empty() && allow_sign && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false))
    throw InvalidParam("malformed rational '" + std::string(text) + "'");
  mpz_class p(std::string(num.front() == '+' ? num.substr(1) : num), 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) throw InvalidParam("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_decimal(const Rational& q, int significant) {
  mpf_class f(q, 256);
  int len = gmp_snprintf(nullptr, 0, "%.*Fg", significant, f.get_mpf_t());
  std::string out(static_cast<std::size_t>(len) + 1, '\0');
  gmp_snprintf(out.data(), out.size(), "%.*Fg", significant, f.get_mpf_t());
  out.resize(static_cast<std::size_t>(len));
  return out;
}

bool is_power_of_two(const Rational& q, long* exponent) {
  if (sgn(q) <= 0) return false;
  const mpz_class& p = q.get_num();
  const mpz_class& d = q.get_den();
  if (mpz_popcount(p.get_mpz_t()) != 1 || mpz_popcount(d.get_mpz_t()) != 1) return false;
  if (exponent)
    *exponent = static_cast<long>(mpz_scan1(p.get_mpz_t(), 0)) - static_cast<long>(mpz_scan1(d.get_mpz_t(), 0));
  return true;
}

}  // namespace distlab
