#pragma once
// The quadrinomial f(x) = conj(x)^3 + a1 conj(x)^2 x + a2 x^2 conj(x) + a3 x^3
// over GF(2^(2m)) with a1 in GF(2^m), its theta invariants, the Gamma
// membership test, coefficient normalization, the rational maps used to
// restrict the question to the norm-one subgroup mu, and two permutation
// tests: an exhaustive one (the oracle) and a structured one that walks mu.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadperm/gf2tower.hpp"

namespace quadperm {

struct Triple {
  Fq a1;
  Fq2 a2, a3;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// t1 and t4 are conjugation-fixed whenever a1 lies in the base field; t2bar
// and t3bar cache the conjugates. Unconditionally,
// t2*t2bar + t3*t3bar = t4*(t1 + t4).
struct ThetaVector {
  Fq2 t1, t2, t2bar, t3, t3bar, t4;
};

// Numerator and denominator coefficients of F(x) = eps(x)/tau(x), the
// restriction of the mu walk to base-field inputs. Each eps_i = conj(tau_i).
struct RationalMapCoeffs {
  std::array<Fq2, 4> eps;  // eps[0] x^3 + eps[1] x^2 + eps[2] x + eps[3]
  std::array<Fq2, 4> tau;
};

// h(1) = 1 + a1 + a2 + a3. When it vanishes, f(0) = f(1) = 0 and f cannot
// permute anything; both permutation tests short-circuit on it.
inline Fq2 h_at_one(const Triple& t, const TowerCtx& ctx) {
  return ctx.add(ctx.add(ctx.one(), ctx.embed(t.a1)), ctx.add(t.a2, t.a3));
}

inline Fq2 f_eval(const Triple& t, const Fq2& x, const TowerCtx& ctx) {
  const Fq2 a1 = ctx.embed(t.a1);
  const Fq2 xb = ctx.conj(x);
  const Fq2 xb2 = ctx.sqr(xb);
  const Fq2 x2 = ctx.sqr(x);
  Fq2 r = ctx.mul(xb2, xb);
  r = ctx.add(r, ctx.mul(a1, ctx.mul(xb2, x)));
  r = ctx.add(r, ctx.mul(t.a2, ctx.mul(x2, xb)));
  r = ctx.add(r, ctx.mul(t.a3, ctx.mul(x2, x)));
  return r;
}

inline ThetaVector theta_of(const Triple& t, const TowerCtx& ctx) {
  const Fq2 a1 = ctx.embed(t.a1);
  const Fq2 a2b = ctx.conj(t.a2);
  const Fq2 a3b = ctx.conj(t.a3);
  const Fq2 n2 = ctx.mul(t.a2, a2b);
  const Fq2 n3 = ctx.mul(t.a3, a3b);
  ThetaVector th;
  th.t1 = ctx.add(ctx.add(ctx.one(), ctx.sqr(a1)), ctx.add(n2, n3));
  th.t2 = ctx.add(a1, ctx.mul(a2b, t.a3));
  th.t3 = ctx.add(a2b, ctx.mul(a1, a3b));
  th.t4 = ctx.add(ctx.sqr(a1), n2);
  th.t2bar = ctx.conj(th.t2);
  th.t3bar = ctx.conj(th.t3);
  if (!ctx.in_base(th.t1) || !ctx.in_base(th.t4))
    throw std::logic_error("theta_1/theta_4 escaped the base field; a1 was not a base element");
  return th;
}

// Gamma: t1 != 0, t2^2 = t1 * t3bar, and trace(t4/t1) = 1 in the base field.
inline bool gamma_of_theta(const ThetaVector& th, const TowerCtx& ctx) {
  if (th.t1 == ctx.zero()) return false;
  if (!(ctx.sqr(th.t2) == ctx.mul(th.t1, th.t3bar))) return false;
  const Fq t1 = ctx.to_base(th.t1);
  const Fq t4 = ctx.to_base(th.t4);
  return ctx.base().trace(ctx.base().div(t4, t1)) == 1;
}

inline bool gamma_member(const Triple& t, const TowerCtx& ctx) {
  if (!ctx.tower_mode()) throw std::domain_error("Gamma membership requires odd m");
  return gamma_of_theta(theta_of(t, ctx), ctx);
}

// Rescales (a1, a2, a3) with a1 anywhere in GF(2^(2m))* to an equivalent
// triple whose first coefficient lands in the base field: with beta^2 a1 = 1
// and rho = beta/conj(beta), f(beta x) = conj(beta)^3 * f'(x) where f' has
// coefficients (a1 rho, a2 rho^2, a3 rho^3) and a1 rho = beta^(-1-2^m) is
// conjugation-fixed. Permutation status is preserved.
inline Triple normalize_triple(const Fq2& a1, const Fq2& a2, const Fq2& a3, const TowerCtx& ctx) {
  if (a1 == ctx.zero()) throw std::invalid_argument("normalize_triple requires a1 != 0");
  const Fq2 beta = ctx.sqrt(ctx.inv(a1));
  const Fq2 rho = ctx.div(beta, ctx.conj(beta));
  const Fq2 na1 = ctx.mul(a1, rho);
  const Fq2 na2 = ctx.mul(a2, ctx.sqr(rho));
  const Fq2 na3 = ctx.mul(a3, ctx.mul(rho, ctx.sqr(rho)));
  return Triple{ctx.to_base(na1), na2, na3};
}

// (x + w^2)/(x + w): injective from GF(2^m) into mu \ {1}.
inline Fq2 phi(Fq x, const TowerCtx& ctx) { return ctx.mu_point(x); }

inline RationalMapCoeffs rational_map_coeffs(const Triple& t, const TowerCtx& ctx) {
  const Fq2 w = ctx.omega();
  const Fq2 w2 = ctx.sqr(w);
  const Fq2 one = ctx.one();
  const Fq2 a1 = ctx.embed(t.a1);
  const Fq2 a2b = ctx.conj(t.a2);
  const Fq2 a3b = ctx.conj(t.a3);
  RationalMapCoeffs rc;
  rc.eps[0] = ctx.add(ctx.add(a1, a2b), ctx.add(a3b, one));
  rc.eps[1] = ctx.add(ctx.add(ctx.mul(w2, a1), ctx.mul(w, a2b)), ctx.add(ctx.mul(w2, a3b), w));
  rc.eps[2] = ctx.add(ctx.add(ctx.mul(w2, a1), ctx.mul(w, a2b)), ctx.add(ctx.mul(w, a3b), w2));
  rc.eps[3] = ctx.add(ctx.add(ctx.mul(w, a1), ctx.mul(w2, a2b)), ctx.add(a3b, one));
  rc.tau[0] = ctx.add(ctx.add(a1, t.a2), ctx.add(t.a3, one));
  rc.tau[1] = ctx.add(ctx.add(ctx.mul(w, a1), ctx.mul(w2, t.a2)), ctx.add(ctx.mul(w, t.a3), w2));
  rc.tau[2] = ctx.add(ctx.add(ctx.mul(w, a1), ctx.mul(w2, t.a2)), ctx.add(ctx.mul(w2, t.a3), w));
  rc.tau[3] = ctx.add(ctx.add(ctx.mul(w2, a1), ctx.mul(w, t.a2)), ctx.add(t.a3, one));
  return rc;
}

// F(x) for base-field x. Empty when the denominator vanishes, which happens
// exactly when h has a root at the corresponding mu point; callers treat that
// as non-permutation evidence.
inline std::optional<Fq2> F_eval(const RationalMapCoeffs& rc, Fq x, const TowerCtx& ctx) {
  const Fq2 xe = ctx.embed(x);
  auto horner = [&](const std::array<Fq2, 4>& c) {
    Fq2 r = c[0];
    for (int i = 1; i < 4; ++i) r = ctx.add(ctx.mul(r, xe), c[i]);
    return r;
  };
  const Fq2 den = horner(rc.tau);
  if (den == ctx.zero()) return std::nullopt;
  return ctx.mul(horner(rc.eps), ctx.inv(den));
}

inline std::optional<Fq2> F_eval(const Triple& t, Fq x, const TowerCtx& ctx) {
  return F_eval(rational_map_coeffs(t, ctx), x, ctx);
}

// g(z) = z^3 h(z)^(2^m - 1) in total form, h(z) = z^3 + a1 z^2 + a2 z + a3.
// Returns 0 when h(z) = 0 (0^(2^m-1) = 0); for z in mu with h(z) != 0 the
// value is back in mu.
inline Fq2 mu_map_value(const Triple& t, const Fq2& z, const TowerCtx& ctx) {
  const Fq2 a1 = ctx.embed(t.a1);
  Fq2 h = ctx.add(ctx.mul(ctx.add(ctx.mul(ctx.add(z, a1), z), t.a2), z), t.a3);
  if (h == ctx.zero()) return ctx.zero();
  const Fq2 z3 = ctx.mul(ctx.sqr(z), z);
  return ctx.mul(z3, ctx.mul(ctx.conj(h), ctx.inv(h)));
}

namespace detail {

// Tracks distinct indices drawn from [0, n); bitset for dense ranges, sorted
// list beyond that.
class DistinctTracker {
 public:
  explicit DistinctTracker(std::uint64_t n, std::uint64_t expected = 0) {
    if (n <= (std::uint64_t(1) << 26)) {
      words_.assign(static_cast<std::size_t>((n + 63) / 64), 0);
    } else {
      seen_.reserve(static_cast<std::size_t>(expected));
    }
  }

  // false if the index was already present
  bool insert(std::uint64_t idx) {
    if (!words_.empty()) {
      auto& w = words_[static_cast<std::size_t>(idx >> 6)];
      const std::uint64_t bit = std::uint64_t(1) << (idx & 63);
      if (w & bit) return false;
      w |= bit;
      return true;
    }
    seen_.push_back(idx);
    return true;
  }

  // only meaningful in sorted-list mode; bitset mode already rejected dups
  bool all_distinct() {
    if (!words_.empty()) return true;
    std::sort(seen_.begin(), seen_.end());
    return std::adjacent_find(seen_.begin(), seen_.end()) == seen_.end();
  }

 private:
  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> seen_;
};

}  // namespace detail

// Exhaustive test: f is a permutation iff its image has full cardinality.
// Works in either representation; cost is 2^(2m) evaluations.
inline bool is_perm_bruteforce(const Triple& t, const TowerCtx& ctx) {
  const std::uint64_t n = ctx.element_count();
  if (n > (std::uint64_t(1) << 26))
    throw std::invalid_argument("field too large for the exhaustive permutation test");
  detail::DistinctTracker seen(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!seen.insert(ctx.index(f_eval(t, ctx.from_index(i), ctx)))) return false;
  }
  return true;
}

// Structured test: f permutes GF(2^(2m)) iff gcd(3, 2^m - 1) = 1 (i.e. m odd)
// and z -> z^3 h(z)^(2^m - 1) is a bijection of mu. A vanishing h on mu sends
// a point to 0, outside mu, so it is non-permutation evidence on its own even
// without a collision.
inline bool is_perm_structured(const Triple& t, const TowerCtx& ctx) {
  if (h_at_one(t, ctx) == ctx.zero()) return false;
  if (std::gcd<std::uint64_t>(3, (std::uint64_t(1) << ctx.m()) - 1) != 1) return false;
  const std::uint64_t n = ctx.element_count();
  detail::DistinctTracker seen(n, ctx.mu_order());
  bool ok = true;
  auto probe = [&](const Fq2& z) {
    if (!ok) return;
    const Fq2 w = mu_map_value(t, z, ctx);
    if (w == ctx.zero() || !seen.insert(ctx.index(w))) ok = false;
  };
  probe(ctx.one());
  for (std::uint64_t xb = 0; ok && xb < ctx.base().element_count(); ++xb)
    probe(ctx.mu_point(ctx.base().element(xb)));
  return ok && seen.all_distinct();
}

// Text form "a1=<hex> a2=<hex,hex> a3=<hex,hex>" (single hex per element in
// the direct representation).
inline std::string encode_triple(const Triple& t, const TowerCtx& ctx) {
  return "a1=" + ctx.base().encode(t.a1) + " a2=" + ctx.encode(t.a2) + " a3=" + ctx.encode(t.a3);
}

inline Triple decode_triple(const std::string& a1, const std::string& a2, const std::string& a3,
                            const TowerCtx& ctx) {
  return Triple{ctx.base().decode(a1), ctx.decode(a2), ctx.decode(a3)};
}

}  // namespace quadperm
