#include "hypersteiner/rational.hpp"

#include <cctype>
#include <mutex>
#include <sstream>
#include <vector>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InvalidArgument("empty number");

  auto fail = [&] { return InvalidArgument("not a number: '" + std::string(text) + "'"); };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) throw fail();
    mpz_class den{std::string(den_text)};
    if (den == 0) throw InvalidArgument("zero denominator");
    Rational r = num / Rational(den);
    r.canonicalize();
    return r;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) throw fail();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  long fraction_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw fail();
    if (!int_part.empty() && !all_digits(int_part)) throw fail();
    if (!frac_part.empty() && !all_digits(frac_part)) throw fail();
    digits = std::string(int_part) + std::string(frac_part);
    fraction_digits = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw fail();
    digits = std::string(s);
  }
  Rational r{mpz_class(digits)};
  long scale = exponent - fraction_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0) {
    r /= Rational(ten_pow);
  } else {
    r *= Rational(ten_pow);
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(value) * scale;
  // Round half up on the magnitude.
  mpz_class q = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
  mpz_class int_part = q / scale;
  mpz_class frac_part = q % scale;
  std::ostringstream out;
  if (sgn(value) < 0 && q != 0) out << '-';
  out << int_part.get_str();
  if (digits > 0) {
    std::string frac = frac_part.get_str();
    out << '.' << std::string(static_cast<std::size_t>(digits) - frac.size(), '0') << frac;
  }
  return out.str();
}

double to_double(const Rational& value) { return value.get_d(); }

Rational harmonic(int n) {
  if (n < 0) throw InvalidArgument("harmonic number of a negative argument");
  static std::mutex mutex;
  static std::vector<Rational> table{Rational(0)};
  std::lock_guard lock(mutex);
  while (static_cast<int>(table.size()) <= n) {
    Rational next = table.back() + Rational(1, static_cast<unsigned long>(table.size()));
    next.canonicalize();
    table.push_back(next);
  }
  return table[static_cast<std::size_t>(n)];
}

mpz_class lcm_of_denominators(std::span<const Rational> values) {
  mpz_class result = 1;
  for (const auto& v : values) {
    mpz_lcm(result.get_mpz_t(), result.get_mpz_t(), v.get_den_mpz_t());
  }
  return result;
}

std::int64_t to_int64(const Rational& value) {
  if (value.get_den() != 1 || !value.get_num().fits_slong_p()) {
    throw InvariantViolation("expected a small integer, got " + to_string(value));
  }
  return value.get_num().get_si();
}

}  // namespace hypersteiner
