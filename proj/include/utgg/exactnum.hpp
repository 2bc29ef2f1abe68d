#pragma once

// Exact arithmetic for character computations over F_q, q an odd-or-even
// prime: the prime field F_p, the cyclotomic integer ring Z[zeta_p], and its
// fraction-by-integer extension.  Character values of finite p-groups live in
// Z[zeta_p]; inner products live in Q(zeta_p) with rational denominators.
// Everything here is exact — no floating point anywhere.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace utgg {

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::logic_error(msg);
}

// Invariant check that survives NDEBUG; used for internal consistency and
// precondition reporting throughout the library.
#define UTGG_REQUIRE(cond, msg)      \
  do {                               \
    if (!(cond)) ::utgg::fail(msg);  \
  } while (0)

inline bool is_small_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Fp — element of the prime field F_p, canonical value in [0, p).
// ---------------------------------------------------------------------------
struct Fp {
  int32_t v = 0;
  int32_t p = 0;

  Fp() = default;
  Fp(long long value, int prime) : p(static_cast<int32_t>(prime)) {
    UTGG_REQUIRE(is_small_prime(prime), "Fp: modulus must be prime");
    long long r = value % prime;
    if (r < 0) r += prime;
    v = static_cast<int32_t>(r);
  }

  static Fp zero(int prime) { return Fp(0, prime); }
  static Fp one(int prime) { return Fp(1, prime); }

  bool is_zero() const { return v == 0; }

  friend Fp operator+(Fp a, Fp b) {
    UTGG_REQUIRE(a.p == b.p, "Fp: mixed moduli");
    return Fp(static_cast<long long>(a.v) + b.v, a.p);
  }
  friend Fp operator-(Fp a, Fp b) {
    UTGG_REQUIRE(a.p == b.p, "Fp: mixed moduli");
    return Fp(static_cast<long long>(a.v) - b.v, a.p);
  }
  friend Fp operator*(Fp a, Fp b) {
    UTGG_REQUIRE(a.p == b.p, "Fp: mixed moduli");
    return Fp(static_cast<long long>(a.v) * b.v, a.p);
  }
  Fp operator-() const { return Fp(-static_cast<long long>(v), p); }

  Fp pow(long long e) const {
    UTGG_REQUIRE(v != 0 || e >= 0, "Fp: negative power of zero");
    if (v == 0) return e == 0 ? Fp::one(p) : Fp::zero(p);
    long long ee = e % (p - 1);
    if (ee < 0) ee += p - 1;
    Fp acc = Fp::one(p), base = *this;
    while (ee > 0) {
      if (ee & 1) acc = acc * base;
      base = base * base;
      ee >>= 1;
    }
    return acc;
  }

  Fp inv() const {
    UTGG_REQUIRE(v != 0, "Fp: inverse of zero");
    return pow(p - 2);
  }

  friend bool operator==(const Fp& a, const Fp& b) = default;
};

// ---------------------------------------------------------------------------
// CycInt — element of Z[zeta_p] written in the canonical integral basis
// {1, zeta, ..., zeta^{p-2}}, with the relation 1 + zeta + ... + zeta^{p-1}
// = 0 applied eagerly.  Representation is unique, so operator== is
// coefficient-wise.  Coefficients are arbitrary-precision.
// ---------------------------------------------------------------------------
class CycInt {
 public:
  explicit CycInt(int prime) : p_(prime), c_(prime - 1) {
    UTGG_REQUIRE(is_small_prime(prime), "CycInt: modulus must be prime");
  }

  static CycInt from_int(int prime, const mpz_class& n) {
    CycInt r(prime);
    r.c_[0] = n;
    return r;
  }

  // zeta^k for any integer k (reduced mod p; exponent p-1 folds into the
  // basis via the vanishing cyclotomic sum).
  static CycInt zeta_pow(int prime, long long k) {
    CycInt r(prime);
    long long e = k % prime;
    if (e < 0) e += prime;
    if (e < prime - 1) {
      r.c_[e] = 1;
    } else {
      for (auto& ci : r.c_) ci = -1;
    }
    return r;
  }

  int prime() const { return p_; }
  const mpz_class& coeff(int i) const { return c_[static_cast<size_t>(i)]; }

  bool is_zero() const {
    for (const auto& ci : c_)
      if (ci != 0) return false;
    return true;
  }

  friend CycInt operator+(const CycInt& a, const CycInt& b) {
    UTGG_REQUIRE(a.p_ == b.p_, "CycInt: mixed moduli");
    CycInt r(a.p_);
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }
  friend CycInt operator-(const CycInt& a, const CycInt& b) {
    UTGG_REQUIRE(a.p_ == b.p_, "CycInt: mixed moduli");
    CycInt r(a.p_);
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }
  CycInt operator-() const {
    CycInt r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
    return r;
  }
  CycInt& operator+=(const CycInt& b) { return *this = *this + b; }
  CycInt& operator-=(const CycInt& b) { return *this = *this - b; }

  friend CycInt operator*(const CycInt& a, const CycInt& b) {
    UTGG_REQUIRE(a.p_ == b.p_, "CycInt: mixed moduli");
    const int p = a.p_;
    // Convolve into exponents 0..2p-4, fold exponents mod p, then reduce
    // the zeta^{p-1} bucket through the vanishing sum.
    std::vector<mpz_class> acc(static_cast<size_t>(p));
    for (int i = 0; i < p - 1; ++i) {
      if (a.c_[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; j < p - 1; ++j) {
        if (b.c_[static_cast<size_t>(j)] == 0) continue;
        acc[static_cast<size_t>((i + j) % p)] +=
            a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)];
      }
    }
    return from_exponent_acc(p, acc);
  }
  CycInt& operator*=(const CycInt& b) { return *this = *this * b; }

  friend CycInt operator*(const mpz_class& s, const CycInt& a) {
    CycInt r(a.p_);
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = s * a.c_[i];
    return r;
  }

  // Galois twist zeta -> zeta^t for t in 1..p-1.
  CycInt galois(int t) const {
    UTGG_REQUIRE(t % p_ != 0, "CycInt: Galois exponent divisible by p");
    std::vector<mpz_class> acc(static_cast<size_t>(p_));
    for (int i = 0; i < p_ - 1; ++i) {
      if (c_[static_cast<size_t>(i)] == 0) continue;
      int e = static_cast<int>((static_cast<long long>(i) * t) % p_);
      acc[static_cast<size_t>(e)] += c_[static_cast<size_t>(i)];
    }
    return from_exponent_acc(p_, acc);
  }

  // Complex conjugation zeta -> zeta^{-1}.
  CycInt conj() const { return galois(p_ - 1); }

  bool divisible_by(const mpz_class& m) const {
    UTGG_REQUIRE(m != 0, "CycInt: division by zero");
    for (const auto& ci : c_)
      if (ci % m != 0) return false;
    return true;
  }

  CycInt divide_exact(const mpz_class& m) const {
    UTGG_REQUIRE(divisible_by(m), "CycInt: inexact integer division");
    CycInt r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] / m;
    return r;
  }

  // The rational elements of Z[zeta_p] are exactly those with zero
  // coefficients on zeta^1..zeta^{p-2} (the basis is a Q-basis).
  std::optional<mpz_class> as_integer() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return std::nullopt;
    return c_[0];
  }

  friend bool operator==(const CycInt& a, const CycInt& b) {
    return a.p_ == b.p_ && a.c_ == b.c_;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      mpz_class a = c_[i];
      if (!first) os << (a > 0 ? " + " : " - ");
      else if (a < 0) os << "-";
      mpz_class mag = abs(a);
      if (i == 0 || mag != 1) os << mag.get_str();
      if (i > 0) {
        if (mag != 1) os << "*";
        os << "z";
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  static CycInt from_exponent_acc(int p, const std::vector<mpz_class>& acc) {
    CycInt r(p);
    const mpz_class& top = acc[static_cast<size_t>(p - 1)];
    for (int i = 0; i < p - 1; ++i)
      r.c_[static_cast<size_t>(i)] = acc[static_cast<size_t>(i)] - top;
    return r;
  }

  int32_t p_;
  std::vector<mpz_class> c_;
};

inline CycInt cyc_mul(const CycInt& a, const CycInt& b) { return a * b; }
inline CycInt cyc_conj(const CycInt& a) { return a.conj(); }

// Additive character e(x) = zeta_p^x of (F_p, +).  Orthogonality:
// sum_{x in F_p} e(a*x) = p * [a == 0].
inline CycInt additive_character(const Fp& x) {
  return CycInt::zeta_pow(x.p, x.v);
}

// ---------------------------------------------------------------------------
// CycRat — element of Q(zeta_p) kept as (CycInt numerator) / (positive
// integer denominator), reduced so gcd(content(num), den) = 1.  Closed under
// division by nonzero elements via the Galois norm.
// ---------------------------------------------------------------------------
class CycRat {
 public:
  explicit CycRat(int prime) : num_(prime), den_(1) {}
  CycRat(CycInt num, mpz_class den) : num_(std::move(num)), den_(std::move(den)) {
    UTGG_REQUIRE(den_ != 0, "CycRat: zero denominator");
    if (den_ < 0) {
      den_ = -den_;
      num_ = -num_;
    }
    reduce();
  }
  static CycRat of(CycInt n) { return CycRat(std::move(n), 1); }

  int prime() const { return num_.prime(); }
  const CycInt& num() const { return num_; }
  const mpz_class& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  friend CycRat operator+(const CycRat& a, const CycRat& b) {
    return CycRat(b.den_ * a.num_ + a.den_ * b.num_, a.den_ * b.den_);
  }
  friend CycRat operator-(const CycRat& a, const CycRat& b) {
    return CycRat(b.den_ * a.num_ - a.den_ * b.num_, a.den_ * b.den_);
  }
  friend CycRat operator*(const CycRat& a, const CycRat& b) {
    return CycRat(a.num_ * b.num_, a.den_ * b.den_);
  }
  CycRat operator-() const { return CycRat(-num_, den_); }

  // Division through the norm: 1/x = (prod of nontrivial Galois twists of
  // x) / N(x), with the norm N(x) a plain integer.
  friend CycRat operator/(const CycRat& a, const CycRat& b) {
    UTGG_REQUIRE(!b.is_zero(), "CycRat: division by zero");
    const int p = a.prime();
    CycInt cofactor = CycInt::from_int(p, 1);
    for (int t = 2; t <= p - 1; ++t) cofactor *= b.num_.galois(t);
    CycInt norm_elt = b.num_ * cofactor;
    auto norm = norm_elt.as_integer();
    UTGG_REQUIRE(norm.has_value() && *norm != 0, "CycRat: norm failure");
    return CycRat(b.den_ * (a.num_ * cofactor), a.den_ * (*norm));
  }

  CycRat conj() const { return CycRat(num_.conj(), den_); }

  friend bool operator==(const CycRat& a, const CycRat& b) {
    return a.den_ == b.den_ && a.num_ == b.num_;
  }

  std::string to_string() const {
    std::string s = num_.to_string();
    if (den_ != 1) s = "(" + s + ")/" + den_.get_str();
    return s;
  }

 private:
  void reduce() {
    mpz_class g = den_;
    for (int i = 0; i < prime() - 1; ++i) {
      mpz_class t;
      mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), num_.coeff(i).get_mpz_t());
      g = t;
      if (g == 1) return;
    }
    if (g > 1) {
      num_ = num_.divide_exact(g);
      den_ /= g;
    }
  }

  CycInt num_;
  mpz_class den_;
};

// Rational-number view: numerator/denominator if the value lies in Q.
inline std::optional<std::pair<mpz_class, mpz_class>> as_rational(
    const CycRat& x) {
  auto n = x.num().as_integer();
  if (!n) return std::nullopt;
  return std::make_pair(*n, x.den());
}

}  // namespace utgg
