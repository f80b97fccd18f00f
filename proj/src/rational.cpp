#include "regrobust/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>

#include "regrobust/errors.hpp"

namespace regrobust {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 uabs(i128 x) { return x < 0 ? static_cast<u128>(-(x + 1)) + 1 : static_cast<u128>(x); }

bool fits64(i128 x) { return x >= kMin && x <= kMax; }

mpz_class mpz_from_i128(i128 x) {
  u128 mag = uabs(x);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class r = (hi << 64) + lo;
  return x < 0 ? mpz_class(-r) : r;
}

bool mul_overflows(std::int64_t a, std::int64_t b, std::int64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw InvalidArgument("rational with zero denominator");
  set_i128(n, d);
}

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
  if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
  if (this == &o) return *this;
  num_ = o.num_;
  den_ = o.den_;
  if (o.big_) {
    if (big_) {
      *big_ = *o.big_;
    } else {
      big_ = std::make_unique<mpq_class>(*o.big_);
    }
  } else {
    big_.reset();
  }
  return *this;
}

Rational::~Rational() = default;

void Rational::set_i128(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd_u128(uabs(n), static_cast<u128>(d));
  if (g > 1) {
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
  }
  if (fits64(n) && fits64(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
    big_.reset();
    return;
  }
  mpq_class q(mpz_from_i128(n), mpz_from_i128(d));
  set_big(std::move(q));
}

void Rational::set_big(mpq_class&& q) {
  q.canonicalize();
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
    return;
  }
  num_ = 0;
  den_ = 1;
  big_ = std::make_unique<mpq_class>(std::move(q));
}

Rational Rational::from_mpq(const mpq_class& q) {
  Rational r;
  r.set_big(mpq_class(q));
  return r;
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

Rational Rational::parse(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string s(text.substr(b, e - b));
  if (s.empty()) throw ParseError("empty rational literal");
  auto bad = [&]() { return ParseError("malformed rational literal '" + s + "'"); };

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    auto is_int = [](const std::string& t) {
      std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
      if (i >= t.size()) return false;
      for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
      return true;
    };
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!is_int(n) || !is_int(d)) throw bad();
    if (n[0] == '+') n.erase(0, 1);
    if (d[0] == '+') d.erase(0, 1);
    mpz_class zn(n), zd(d);
    if (zd == 0) throw ParseError("zero denominator in '" + s + "'");
    Rational r;
    r.set_big(mpq_class(zn, zd));
    return r;
  }

  // decimal / scientific
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  std::int64_t scale = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++scale;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw bad();
  std::int64_t exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw bad();
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    if (i >= s.size()) throw bad();
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw bad();
      v = v * 10 + (s[i] - '0');
      if (v > 100000) throw ParseError("exponent out of range in '" + s + "'");
    }
    exp10 = eneg ? -v : v;
  }
  mpz_class num(digits);
  if (neg) num = -num;
  std::int64_t p = exp10 - scale;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(p < 0 ? -p : p));
  mpq_class q = p >= 0 ? mpq_class(num * ten_pow) : mpq_class(num, ten_pow);
  Rational r;
  r.set_big(std::move(q));
  return r;
}

std::string Rational::str() const {
  if (big_) return big_->get_num().get_str() + "/" + big_->get_den().get_str();
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::pretty() const {
  if (big_) return big_->get_str();
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

int Rational::sign() const noexcept {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const noexcept {
  if (big_) return big_->get_den() == 1;
  return den_ == 1;
}

Rational Rational::floor() const {
  if (big_) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return from_mpq(mpq_class(f));
  }
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return Rational(q);
}

Rational Rational::ceil() const { return -(-*this).floor(); }

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

std::size_t Rational::hash() const noexcept {
  if (big_) return std::hash<std::string>{}(big_->get_str());
  std::size_t h = std::hash<std::int64_t>{}(num_);
  return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (den_ == 1 && o.den_ == 1) {
      std::int64_t s;
      if (!__builtin_add_overflow(num_, o.num_, &s)) {
        num_ = s;
        return *this;
      }
      set_i128(static_cast<i128>(num_) + o.num_, 1);
      return *this;
    }
    set_i128(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
             static_cast<i128>(den_) * o.den_);
    return *this;
  }
  set_big(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (den_ == 1 && o.den_ == 1) {
      std::int64_t s;
      if (!__builtin_sub_overflow(num_, o.num_, &s)) {
        num_ = s;
        return *this;
      }
      set_i128(static_cast<i128>(num_) - o.num_, 1);
      return *this;
    }
    set_i128(static_cast<i128>(num_) * o.den_ - static_cast<i128>(o.num_) * den_,
             static_cast<i128>(den_) * o.den_);
    return *this;
  }
  set_big(to_mpq() - o.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (den_ == 1 && o.den_ == 1) {
      std::int64_t p;
      if (!mul_overflows(num_, o.num_, p)) {
        num_ = p;
        return *this;
      }
    }
    set_i128(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
    return *this;
  }
  set_big(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.sign() == 0) throw InvalidArgument("division by zero rational");
  if (!big_ && !o.big_) {
    set_i128(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
    return *this;
  }
  set_big(to_mpq() / o.to_mpq());
  return *this;
}

Rational Rational::operator-() const {
  if (!big_ && num_ != kMin) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  return from_mpq(-to_mpq());
}

bool operator==(const Rational& a, const Rational& b) noexcept {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: a big value never fits int64
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) return a.num_ <=> b.num_;
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

ExtendedCost operator+(const ExtendedCost& a, const ExtendedCost& b) {
  if (!a.finite() || !b.finite()) return ExtendedCost::infinity();
  return ExtendedCost(a.value() + b.value());
}

std::strong_ordering operator<=>(const ExtendedCost& a, const ExtendedCost& b) {
  if (!a.finite() && !b.finite()) return std::strong_ordering::equal;
  if (!a.finite()) return std::strong_ordering::greater;
  if (!b.finite()) return std::strong_ordering::less;
  return a.value() <=> b.value();
}

std::ostream& operator<<(std::ostream& os, const ExtendedCost& c) { return os << c.str(); }

}  // namespace regrobust
