#pragma once
// The symmetric biquadratic L(x, y) whose off-diagonal rational zeros witness
// collisions of F: coefficient formulas in the theta invariants, the
// factorization classifier (four non-rational linear factors / two conjugate
// quadratics / two conjugate linear factors / a component defined over the
// base field), explicit factor reconstruction, brute-force point counting and
// the d-degree point-count lower bound.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quadperm/quadrinomial.hpp"

namespace quadperm {

// l[i][j] is the coefficient of x^i y^j; the map is symmetric (l12 = l21,
// l02 = l20, l01 = l10) and every coefficient is conjugation-fixed.
struct CurveCoeffs {
  Fq2 l22, l21, l20, l11, l10, l00;
};

enum class CurveClass {
  Quad1111,           // four non-rational linear factors
  Quad22,             // two conjugate irreducible quadratics
  Lin11,              // two conjugate linear factors (quadratic curve)
  RationalComponent,  // some absolutely irreducible component is base-rational
  ZeroPolynomial,     // all coefficients vanish
  ExcludedDegenerate  // screened out before classification (h(1) = 0)
};

inline const char* to_string(CurveClass c) {
  switch (c) {
    case CurveClass::Quad1111: return "quad_1111";
    case CurveClass::Quad22: return "quad_22";
    case CurveClass::Lin11: return "lin_11";
    case CurveClass::RationalComponent: return "rational_component";
    case CurveClass::ZeroPolynomial: return "zero_polynomial";
    case CurveClass::ExcludedDegenerate: return "excluded_degenerate";
  }
  return "?";
}

struct FactorTerm {
  unsigned dx, dy;
  Fq2 coeff;
};

struct BivariateFactor {
  std::vector<FactorTerm> terms;
};

struct FactorizationReport {
  CurveClass cls = CurveClass::RationalComponent;
  Fq2 leading{};                        // scalar multiplier in front of the factors
  std::vector<BivariateFactor> factors;
  bool product_verified = false;
  std::int64_t off_diagonal_rational_zeros = -1;  // -1 = not counted
};

inline CurveCoeffs curve_coeffs(const ThetaVector& th, const TowerCtx& ctx) {
  if (!ctx.tower_mode()) throw std::domain_error("curve coefficients require odd m");
  const Fq2 w = ctx.omega();
  const Fq2 w2 = ctx.sqr(w);
  CurveCoeffs c;
  c.l22 = ctx.add(th.t1, ctx.add(th.t3, th.t3bar));
  c.l21 = ctx.add(th.t1, ctx.add(th.t2, th.t2bar));
  c.l20 = ctx.add(th.t4, ctx.add(ctx.add(ctx.mul(w, th.t3), ctx.mul(w2, th.t3bar)),
                                 ctx.add(ctx.mul(w, th.t2), ctx.mul(w2, th.t2bar))));
  c.l11 = th.t1;
  c.l10 = ctx.add(th.t1, ctx.add(ctx.mul(w2, th.t2), ctx.mul(w, th.t2bar)));
  c.l00 = ctx.add(th.t1, ctx.add(ctx.mul(w2, th.t3), ctx.mul(w, th.t3bar)));
  for (const Fq2* l : {&c.l22, &c.l21, &c.l20, &c.l11, &c.l10, &c.l00}) {
    if (!ctx.in_base(*l)) throw std::logic_error("curve coefficient escaped the base field");
  }
  return c;
}

inline bool curve_is_zero(const CurveCoeffs& c, const TowerCtx& ctx) {
  const Fq2 z = ctx.zero();
  return c.l22 == z && c.l21 == z && c.l20 == z && c.l11 == z && c.l10 == z && c.l00 == z;
}

inline Fq2 L_eval(const CurveCoeffs& c, Fq x, Fq y, const TowerCtx& ctx) {
  const Fq2 xe = ctx.embed(x);
  const Fq2 ye = ctx.embed(y);
  const Fq2 x2 = ctx.sqr(xe);
  const Fq2 y2 = ctx.sqr(ye);
  Fq2 r = ctx.mul(c.l22, ctx.mul(x2, y2));
  r = ctx.add(r, ctx.mul(c.l21, ctx.add(ctx.mul(x2, ye), ctx.mul(xe, y2))));
  r = ctx.add(r, ctx.mul(c.l20, ctx.add(x2, y2)));
  r = ctx.add(r, ctx.mul(c.l11, ctx.mul(xe, ye)));
  r = ctx.add(r, ctx.mul(c.l10, ctx.add(xe, ye)));
  r = ctx.add(r, c.l00);
  return r;
}

// Case split from the coefficient conditions. The caller has already screened
// h(1) != 0; ZeroPolynomial is detected empirically.
inline CurveClass classify_theta(const ThetaVector& th, const TowerCtx& ctx) {
  const CurveCoeffs c = curve_coeffs(th, ctx);
  if (curve_is_zero(c, ctx)) return CurveClass::ZeroPolynomial;

  // Two conjugate linear factors: t1 = t2 + t2bar != 0, t3 = t2 + g,
  // t4 = g + t2 + t2bar with g = (t2^2 + t2bar^2 + t2 t2bar)/(t2 + t2bar).
  const Fq2 s2 = ctx.add(th.t2, th.t2bar);
  if (th.t1 == s2 && !(s2 == ctx.zero())) {
    const Fq2 g = ctx.div(
        ctx.add(ctx.add(ctx.sqr(th.t2), ctx.sqr(th.t2bar)), ctx.mul(th.t2, th.t2bar)), s2);
    if (th.t3 == ctx.add(th.t2, g) && th.t4 == ctx.add(g, s2)) return CurveClass::Lin11;
  }

  // Quartic cases need l22 != 0, i.e. t1 != t3 + t3bar.
  if (!(c.l22 == ctx.zero()) && !(th.t1 == ctx.zero()) && gamma_of_theta(th, ctx)) {
    const Fq2 rhs = ctx.add(ctx.sqr(th.t1), ctx.mul(th.t3, th.t3bar));
    return ctx.sqr(th.t4) == rhs ? CurveClass::Quad1111 : CurveClass::Quad22;
  }
  return CurveClass::RationalComponent;
}

namespace detail {

using TermGrid = std::map<std::pair<unsigned, unsigned>, Fq2>;

inline void grid_add(TermGrid& g, unsigned dx, unsigned dy, const Fq2& c, const TowerCtx& ctx) {
  const auto key = std::make_pair(dx, dy);
  auto it = g.find(key);
  if (it == g.end()) {
    if (!(c == ctx.zero())) g.emplace(key, c);
  } else {
    it->second = ctx.add(it->second, c);
    if (it->second == ctx.zero()) g.erase(it);
  }
}

inline TermGrid grid_of(const BivariateFactor& f, const TowerCtx& ctx) {
  TermGrid g;
  for (const auto& t : f.terms) grid_add(g, t.dx, t.dy, t.coeff, ctx);
  return g;
}

inline TermGrid grid_mul(const TermGrid& a, const TermGrid& b, const TowerCtx& ctx) {
  TermGrid out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b)
      grid_add(out, ka.first + kb.first, ka.second + kb.second, ctx.mul(va, vb), ctx);
  return out;
}

// Expand leading * product(factors) and compare against all nine coefficients.
inline bool product_matches(const FactorizationReport& rep, const CurveCoeffs& c,
                            const TowerCtx& ctx) {
  TermGrid prod;
  prod.emplace(std::make_pair(0u, 0u), ctx.one());
  for (const auto& f : rep.factors) prod = grid_mul(prod, grid_of(f, ctx), ctx);
  for (auto& [k, v] : prod) v = ctx.mul(v, rep.leading);

  const auto want = [&](unsigned dx, unsigned dy) -> Fq2 {
    if (dx == 2 && dy == 2) return c.l22;
    if ((dx == 2 && dy == 1) || (dx == 1 && dy == 2)) return c.l21;
    if ((dx == 2 && dy == 0) || (dx == 0 && dy == 2)) return c.l20;
    if (dx == 1 && dy == 1) return c.l11;
    if ((dx == 1 && dy == 0) || (dx == 0 && dy == 1)) return c.l10;
    return c.l00;
  };
  for (unsigned dx = 0; dx <= 2; ++dx) {
    for (unsigned dy = 0; dy <= 2; ++dy) {
      const auto it = prod.find({dx, dy});
      const Fq2 got = it == prod.end() ? ctx.zero() : it->second;
      if (!(got == want(dx, dy))) return false;
    }
  }
  // anything of higher degree must have cancelled
  for (const auto& [k, v] : prod) {
    if (k.first > 2 || k.second > 2) return false;
  }
  return true;
}

inline BivariateFactor linear_x(const Fq2& a, const TowerCtx& ctx) {
  return BivariateFactor{{{1, 0, ctx.one()}, {0, 0, a}}};
}
inline BivariateFactor linear_y(const Fq2& a, const TowerCtx& ctx) {
  return BivariateFactor{{{0, 1, ctx.one()}, {0, 0, a}}};
}

}  // namespace detail

// Rebuilds the explicit factors for a classified curve and re-expands the
// product as a self-check. A report with product_verified = false means the
// classifier and the reconstruction disagree, which is a bug, not an input
// condition.
inline FactorizationReport reconstruct_factors([[maybe_unused]] const ThetaVector& th,
                                               const CurveCoeffs& c, CurveClass cls,
                                               const TowerCtx& ctx) {
  FactorizationReport rep;
  rep.cls = cls;
  switch (cls) {
    case CurveClass::Quad1111: {
      // l21 = (a + abar) l22, l20 = a*abar l22: a is a root of
      // x^2 + (l21/l22) x + l20/l22, off the base field.
      rep.leading = c.l22;
      const auto roots = ctx.solve_quadratic(ctx.div(c.l21, c.l22), ctx.div(c.l20, c.l22));
      if (!roots) return rep;
      const auto [a, abar] = *roots;
      rep.factors = {detail::linear_x(a, ctx), detail::linear_x(abar, ctx),
                     detail::linear_y(a, ctx), detail::linear_y(abar, ctx)};
      rep.product_verified = detail::product_matches(rep, c, ctx);
      return rep;
    }
    case CurveClass::Quad22: {
      rep.leading = c.l22;
      const auto roots = ctx.solve_quadratic(ctx.div(c.l21, c.l22), ctx.div(c.l20, c.l22));
      if (!roots) return rep;
      const auto [a, abar] = *roots;
      // (xy + a x + abar y + b)(xy + abar x + a y + b) with b in the base
      // field, b^2 = l00/l22.
      const Fq2 b = ctx.embed(ctx.base().sqrt(ctx.to_base(ctx.div(c.l00, c.l22))));
      BivariateFactor f1{{{1, 1, ctx.one()}, {1, 0, a}, {0, 1, abar}, {0, 0, b}}};
      BivariateFactor f2{{{1, 1, ctx.one()}, {1, 0, abar}, {0, 1, a}, {0, 0, b}}};
      rep.factors = {f1, f2};
      rep.product_verified = detail::product_matches(rep, c, ctx);
      if (rep.product_verified) return rep;
      // Fallback shape (xy + a x + a y + b)(xy + abar x + abar y + bbar) with
      // b + bbar = l11/l22 and b*bbar = l00/l22.
      const auto broots = ctx.solve_quadratic(ctx.div(c.l11, c.l22), ctx.div(c.l00, c.l22));
      if (!broots) return rep;
      for (const Fq2& bb : {broots->first, broots->second}) {
        const Fq2 bbbar = ctx.conj(bb);
        BivariateFactor g1{{{1, 1, ctx.one()}, {1, 0, a}, {0, 1, a}, {0, 0, bb}}};
        BivariateFactor g2{{{1, 1, ctx.one()}, {1, 0, abar}, {0, 1, abar}, {0, 0, bbbar}}};
        rep.factors = {g1, g2};
        rep.product_verified = detail::product_matches(rep, c, ctx);
        if (rep.product_verified) return rep;
      }
      return rep;
    }
    case CurveClass::Lin11: {
      // l20 (x + a y + b)(x + abar y + bbar) with b*bbar = l00/l20,
      // b + bbar = l10/l20 and a = b/bbar.
      rep.leading = c.l20;
      if (c.l20 == ctx.zero()) return rep;
      Fq2 a, b, bbar;
      if (c.l10 == ctx.zero()) {
        // Then the constant terms vanish too and the curve is
        // l20 (x + a y)(x + abar y) with a*abar = 1, (a + abar) l20 = l11.
        const auto roots = ctx.solve_quadratic(ctx.div(c.l11, c.l20), ctx.one());
        if (!roots) return rep;
        a = roots->first;
        b = bbar = ctx.zero();
      } else {
        const auto roots = ctx.solve_quadratic(ctx.div(c.l10, c.l20), ctx.div(c.l00, c.l20));
        if (!roots) return rep;
        b = roots->first;
        bbar = roots->second;
        a = ctx.div(b, bbar);
      }
      BivariateFactor f1{{{1, 0, ctx.one()}, {0, 1, a}, {0, 0, b}}};
      BivariateFactor f2{{{1, 0, ctx.one()}, {0, 1, ctx.conj(a)}, {0, 0, bbar}}};
      rep.factors = {f1, f2};
      rep.product_verified = detail::product_matches(rep, c, ctx);
      return rep;
    }
    default:
      throw std::invalid_argument("reconstruct_factors needs a classified curve");
  }
}

// Brute-force count of base-rational zeros of L, total and off the diagonal.
inline std::pair<std::uint64_t, std::uint64_t> count_rational_zeros(const CurveCoeffs& c,
                                                                    const TowerCtx& ctx) {
  const unsigned m = ctx.m();
  if (m > 14) throw std::invalid_argument("point counting is exhaustive; m <= 14 only");
  const std::uint64_t n = std::uint64_t(1) << m;
  std::uint64_t total = 0, off = 0;
  for (std::uint64_t xb = 0; xb < n; ++xb) {
    const Fq x = ctx.base().element(xb);
    for (std::uint64_t yb = 0; yb < n; ++yb) {
      const Fq y = ctx.base().element(yb);
      if (L_eval(c, x, y, ctx) == ctx.zero()) {
        ++total;
        if (xb != yb) ++off;
      }
    }
  }
  return {total, off};
}

// Exact rational with a binary-power denominator. For odd m the square root
// below is irrational and gets rounded in the pessimistic direction, so the
// reported bound is never optimistic.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

namespace detail {

inline unsigned __int128 isqrt_u128(unsigned __int128 n) {
  if (n == 0) return 0;
  unsigned __int128 x = static_cast<unsigned __int128>(std::sqrt(static_cast<double>(n)));
  while (x > 0 && x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

}  // namespace detail

// 2^m - (d-1)(d-2) 2^(m/2) - d(d-1)^2/2 - 1, the guaranteed number of affine
// rational points when a degree-d curve has a base-rational absolutely
// irreducible component.
inline Rational hasse_weil_lower_bound(unsigned d, unsigned m) {
  if (d < 1) throw std::invalid_argument("degree must be >= 1");
  if (m > 30) throw std::invalid_argument("bound evaluation supported for m <= 30");
  const std::int64_t A = static_cast<std::int64_t>(d - 1) * static_cast<std::int64_t>(d - 2);
  const std::int64_t C =
      static_cast<std::int64_t>(d) * static_cast<std::int64_t>(d - 1) * static_cast<std::int64_t>(d - 1) / 2 + 1;
  const std::int64_t q = std::int64_t(1) << m;
  if (A == 0 || (m % 2 == 0)) {
    return Rational{q - A * (std::int64_t(1) << (m / 2)) - C, 1};
  }
  constexpr unsigned kFracBits = 32;
  // floor(2^(m/2) * 2^k) = isqrt(2^(m + 2k)); round the subtracted term up.
  const unsigned __int128 s =
      detail::isqrt_u128(static_cast<unsigned __int128>(1) << (m + 2 * kFracBits));
  const __int128 num = (static_cast<__int128>(q - C) << kFracBits) -
                       static_cast<__int128>(A) * static_cast<__int128>(s + 1);
  return Rational{static_cast<std::int64_t>(num), std::int64_t(1) << kFracBits};
}

}  // namespace quadperm
