#pragma once
// Arithmetic in GF(2^m) for small m. Elements are polynomials over GF(2)
// packed into a machine word: bit i holds the coefficient of x^i. Each field
// uses the irreducible modulus of its degree with the smallest integer
// encoding, so every computed value is reproducible bit for bit.
//
// Contexts are immutable after construction; all operations are pure and safe
// to call concurrently.

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quadperm {

struct Fq {
  std::uint64_t bits = 0;
  std::uint16_t deg = 0;  // degree of the owning field, catches context mix-ups
  friend bool operator==(const Fq&, const Fq&) = default;
};

namespace detail {

inline int poly_degree(std::uint64_t p) {
  return p == 0 ? -1 : 63 - std::countl_zero(p);
}

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t mod) {
  const int dm = poly_degree(mod);
  for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) a ^= mod << (d - dm);
  return a;
}

inline std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a = poly_mod(a, b);
    std::swap(a, b);
  }
  return a;
}

// (a * b) mod `mod`, carry-less. Requires deg(mod) <= 62.
inline std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  const int dm = poly_degree(mod);
  a = poly_mod(a, mod);
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if ((a >> dm) & 1) a ^= mod;
  }
  return r;
}

// f of degree m is irreducible over GF(2) iff it shares no factor with
// x^(2^i) - x for any 1 <= i <= m/2.
inline bool poly_irreducible(std::uint64_t f) {
  const int m = poly_degree(f);
  if (m < 1) return false;
  std::uint64_t r = 0b10;  // x
  for (int i = 1; i <= m / 2; ++i) {
    r = poly_mulmod(r, r, f);
    if (poly_gcd(f, r ^ 0b10ULL) != 1) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  if (v == 0) return "0";
  char buf[16];
  int n = 0;
  while (v != 0) {
    buf[n++] = digits[v & 0xf];
    v >>= 4;
  }
  std::string s;
  s.reserve(n);
  while (n > 0) s.push_back(buf[--n]);
  return s;
}

inline std::uint64_t parse_hex(const std::string& s) {
  if (s.empty() || s.size() > 16) throw std::invalid_argument("bad hex element: '" + s + "'");
  std::uint64_t v = 0;
  for (char ch : s) {
    int d;
    if (ch >= '0' && ch <= '9') d = ch - '0';
    else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
    else throw std::invalid_argument("bad hex element: '" + s + "'");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

class FieldCtx {
 public:
  static constexpr unsigned kMaxDegree = 24;
  // mul/inv/sqrt go through log/exp tables up to this degree, shift-and-reduce
  // beyond it; the contract is the reduced carry-less product either way.
  static constexpr unsigned kTableDegree = 12;

  static FieldCtx make(unsigned m) {
    if (m < 1 || m > kMaxDegree)
      throw std::invalid_argument("field degree out of supported range [1,24]");
    return FieldCtx(m);
  }

  // Wider-degree constructor for the quadratic-extension carrier; not part of
  // the base-field API.
  static FieldCtx make_ext(unsigned m) {
    if (m < 1 || m > 48) throw std::invalid_argument("extension degree out of range [1,48]");
    return FieldCtx(m);
  }

  unsigned degree() const { return m_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t element_count() const { return count_; }

  Fq element(std::uint64_t bits) const {
    if (bits >= count_) throw std::invalid_argument("element bits exceed field size");
    return Fq{bits, m16_};
  }
  Fq zero() const { return Fq{0, m16_}; }
  Fq one() const { return Fq{1, m16_}; }

  Fq add(Fq a, Fq b) const {
    check(a);
    check(b);
    return Fq{a.bits ^ b.bits, m16_};
  }

  Fq mul(Fq a, Fq b) const {
    check(a);
    check(b);
    if (!exp_.empty()) {
      if (a.bits == 0 || b.bits == 0) return zero();
      return Fq{exp_[log_[a.bits] + log_[b.bits]], m16_};
    }
    return Fq{detail::poly_mulmod(a.bits, b.bits, modulus_), m16_};
  }

  Fq sqr(Fq a) const { return mul(a, a); }

  Fq inv(Fq a) const {
    check(a);
    if (a.bits == 0) throw std::domain_error("inverse of zero");
    if (!exp_.empty()) return Fq{exp_[(count_ - 1) - log_[a.bits]], m16_};
    return pow(a, count_ - 2);
  }

  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }

  Fq pow(Fq a, std::uint64_t e) const {
    check(a);
    Fq r = one();
    Fq base = a;
    while (e != 0) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e != 0) base = mul(base, base);
    }
    return r;
  }

  // Absolute trace to GF(2). Linear, so it reduces to a parity of masked bits.
  int trace(Fq a) const {
    check(a);
    return std::popcount(a.bits & trace_mask_) & 1;
  }

  // Unique square root a^(2^(m-1)); squaring is a bijection in characteristic 2.
  Fq sqrt(Fq a) const {
    check(a);
    if (a.bits == 0) return a;
    if (!exp_.empty()) {
      const std::uint64_t l = log_[a.bits];
      return Fq{exp_[(l & 1) ? (l + count_ - 1) / 2 : l / 2], m16_};
    }
    return pow(a, count_ >> 1);
  }

  // H(a) = sum a^(4^i) over 0 <= i <= (m-1)/2; solves y^2 + y = a when
  // trace(a) = 0. Odd degree only.
  Fq half_trace(Fq a) const {
    if ((m_ & 1u) == 0) throw std::logic_error("half-trace needs odd field degree");
    check(a);
    Fq acc = a;
    Fq t = a;
    for (unsigned i = 0; i < (m_ - 1) / 2; ++i) {
      t = sqr(sqr(t));
      acc = add(acc, t);
    }
    return acc;
  }

  // Roots of x^2 + b x + c = 0, b != 0. Solvable iff trace(c/b^2) = 0; the
  // b = 0 case is plain sqrt and is rejected here. Even-degree fields (which
  // only show up tiny) fall back to scanning for a root of y^2 + y = w.
  std::optional<std::pair<Fq, Fq>> solve_quadratic(Fq b, Fq c) const {
    check(b);
    check(c);
    if (b.bits == 0) throw std::invalid_argument("solve_quadratic requires b != 0");
    const Fq w = mul(c, inv(sqr(b)));
    Fq y = zero();
    if (m_ & 1u) {
      if (trace(w) == 1) return std::nullopt;
      y = half_trace(w);
    } else {
      bool found = false;
      for (std::uint64_t yb = 0; yb < count_; ++yb) {
        const Fq cand{yb, m16_};
        if (add(sqr(cand), cand) == w) {
          y = cand;
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }
    Fq r0 = mul(b, y);
    Fq r1 = add(r0, b);
    if (r1.bits < r0.bits) std::swap(r0, r1);
    return std::make_pair(r0, r1);
  }

  std::string encode(Fq a) const {
    check(a);
    return to_hex(a.bits);
  }
  Fq decode(const std::string& s) const { return element(parse_hex(s)); }

  std::string to_json() const {
    return "{\"m\": " + std::to_string(m_) + ", \"modulus\": \"" + to_hex(modulus_) + "\"}";
  }

 private:
  explicit FieldCtx(unsigned m)
      : m_(m), m16_(static_cast<std::uint16_t>(m)), count_(std::uint64_t(1) << m) {
    // Smallest irreducible in integer encoding. Even candidates are divisible
    // by x, so step by 2 from 2^m + 1.
    modulus_ = 0;
    for (std::uint64_t cand = count_ | 1; cand < (count_ << 1); cand += 2) {
      if (detail::poly_irreducible(cand)) {
        modulus_ = cand;
        break;
      }
    }
    if (modulus_ == 0) throw std::logic_error("no irreducible modulus found");

    trace_mask_ = 0;
    for (unsigned i = 0; i < m_; ++i) {
      std::uint64_t v = std::uint64_t(1) << i;
      std::uint64_t s = v;
      for (unsigned j = 1; j < m_; ++j) {
        v = detail::poly_mulmod(v, v, modulus_);
        s ^= v;
      }
      if (s > 1) throw std::logic_error("trace of basis element not in GF(2)");
      if (s == 1) trace_mask_ |= std::uint64_t(1) << i;
    }

    if (m_ <= kTableDegree) build_tables();
  }

  void build_tables() {
    const std::uint64_t q1 = count_ - 1;
    std::uint64_t g = 1;
    if (q1 > 1) {
      const auto primes = detail::distinct_prime_factors(q1);
      for (g = 2; g < count_; ++g) {
        bool ok = true;
        for (std::uint64_t p : primes) {
          if (pow_nt(g, q1 / p) == 1) {
            ok = false;
            break;
          }
        }
        if (ok) break;
      }
      if (g >= count_) throw std::logic_error("no multiplicative generator found");
    }
    exp_.resize(2 * q1);
    log_.assign(count_, 0);
    std::uint64_t cur = 1;
    for (std::uint64_t i = 0; i < 2 * q1; ++i) {
      exp_[i] = cur;
      if (i < q1) log_[cur] = i;
      cur = detail::poly_mulmod(cur, g, modulus_);
    }
  }

  std::uint64_t pow_nt(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    while (e != 0) {
      if (e & 1) r = detail::poly_mulmod(r, a, modulus_);
      e >>= 1;
      a = detail::poly_mulmod(a, a, modulus_);
    }
    return r;
  }

  void check(const Fq& a) const {
    if (a.deg != m16_ || a.bits >= count_)
      throw std::invalid_argument("element does not belong to this field context");
  }

  unsigned m_;
  std::uint16_t m16_;
  std::uint64_t count_;
  std::uint64_t modulus_ = 0;
  std::uint64_t trace_mask_ = 0;
  std::vector<std::uint64_t> exp_;  // g^i for i < 2(q-1); empty above kTableDegree
  std::vector<std::uint64_t> log_;
};

// Smallest-index multiplicative generator; used for subfield construction.
inline Fq find_generator(const FieldCtx& f) {
  const std::uint64_t q1 = f.element_count() - 1;
  if (q1 == 1) return f.one();
  const auto primes = detail::distinct_prime_factors(q1);
  for (std::uint64_t g = 2; g < f.element_count(); ++g) {
    const Fq cand = f.element(g);
    bool ok = true;
    for (std::uint64_t p : primes) {
      if (f.pow(cand, q1 / p) == f.one()) {
        ok = false;
        break;
      }
    }
    if (ok) return cand;
  }
  throw std::logic_error("no generator found");
}

// Evaluate a GF(2)-coefficient polynomial (bit i <-> x^i) at a field element.
inline Fq eval_gf2_poly(std::uint64_t coeffs, Fq at, const FieldCtx& f) {
  Fq r = f.zero();
  for (int i = detail::poly_degree(coeffs); i >= 0; --i) {
    r = f.mul(r, at);
    if ((coeffs >> i) & 1) r = f.add(r, f.one());
  }
  return r;
}

}  // namespace quadperm
