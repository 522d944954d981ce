#pragma once
// The quadratic extension GF(2^(2m)) over GF(2^m), with conjugation
// z -> z^(2^m), relative norm/trace, and the subgroup of norm-one elements
// mu = { z : z^(2^m + 1) = 1 }.
//
// Odd m: x^2 + x + 1 stays irreducible over GF(2^m), so elements live in the
// basis {1, w} with w^2 = w + 1. Conjugation is then (u, v) -> (u + v, v),
// two XORs, which is the hot operation everywhere downstream. Even m: the
// extension is carried directly as GF(2)[x]/(f) of degree 2m together with an
// explicit embedding of the base field; only conjugation, norm and brute-force
// evaluation are ever needed there.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quadperm/gf2field.hpp"

namespace quadperm {

struct Fq2 {
  Fq u, v;
  friend bool operator==(const Fq2&, const Fq2&) = default;
};

// GF(2^m) sitting inside a degree-2m carrier: the linear embedding and its
// inverse on the conjugation-fixed subfield.
class SubfieldMap {
 public:
  static SubfieldMap build(const FieldCtx& sub, const FieldCtx& ext) {
    const unsigned ms = sub.degree();
    if (ext.degree() != 2 * ms) throw std::invalid_argument("extension degree must be 2m");
    SubfieldMap map;
    map.sub_degree_ = ms;

    // The subfield of order 2^m is generated multiplicatively by
    // g^((2^(2m)-1)/(2^m-1)); the base modulus has all its roots there.
    // Pick the smallest root for reproducibility.
    const std::uint64_t qe1 = ext.element_count() - 1;
    const std::uint64_t qs1 = sub.element_count() - 1;
    const Fq sg = ext.pow(find_generator(ext), qe1 / qs1);
    std::uint64_t best = UINT64_MAX;
    Fq w = ext.one();
    for (std::uint64_t k = 0; k < qs1; ++k, w = ext.mul(w, sg)) {
      if (eval_gf2_poly(sub.modulus(), w, ext).bits == 0 && w.bits < best) best = w.bits;
    }
    if (best == UINT64_MAX) throw std::logic_error("base modulus has no root in the extension");

    const Fq root = ext.element(best);
    map.basis_.resize(ms);
    Fq p = ext.one();
    for (unsigned i = 0; i < ms; ++i) {
      map.basis_[i] = p.bits;
      p = ext.mul(p, root);
    }

    // Echelonize the basis once so membership queries are a short XOR chain.
    for (unsigned i = 0; i < ms; ++i) {
      std::uint64_t vec = map.basis_[i];
      std::uint64_t comb = std::uint64_t(1) << i;
      for (const auto& row : map.rows_) {
        if (detail::poly_degree(vec) == detail::poly_degree(row.vec)) {
          vec ^= row.vec;
          comb ^= row.comb;
        }
      }
      if (vec == 0) throw std::logic_error("subfield basis is degenerate");
      auto it = map.rows_.begin();
      while (it != map.rows_.end() && detail::poly_degree(it->vec) > detail::poly_degree(vec)) ++it;
      map.rows_.insert(it, Row{vec, comb});
    }
    return map;
  }

  std::uint64_t embed_bits(std::uint64_t a) const {
    std::uint64_t w = 0;
    for (unsigned i = 0; i < sub_degree_; ++i) {
      if ((a >> i) & 1) w ^= basis_[i];
    }
    return w;
  }

  std::optional<std::uint64_t> extract_bits(std::uint64_t w) const {
    std::uint64_t acc = 0;
    for (const auto& row : rows_) {
      if (detail::poly_degree(w) == detail::poly_degree(row.vec)) {
        w ^= row.vec;
        acc ^= row.comb;
      }
    }
    if (w != 0) return std::nullopt;
    return acc;
  }

 private:
  struct Row {
    std::uint64_t vec;
    std::uint64_t comb;
  };
  unsigned sub_degree_ = 0;
  std::vector<std::uint64_t> basis_;
  std::vector<Row> rows_;  // sorted by decreasing leading bit
};

class TowerCtx {
 public:
  // Direct (even-m) carriers need a subfield search over 2^m elements; the
  // even-degree checks in this project only ever use tiny fields.
  static constexpr unsigned kMaxDirectDegree = 12;

  static TowerCtx make(unsigned m) {
    TowerCtx t(FieldCtx::make(m));
    return t;
  }

  unsigned m() const { return base_.degree(); }
  bool tower_mode() const { return tower_; }
  const FieldCtx& base() const { return base_; }
  const FieldCtx& ext() const {
    if (!ext_) throw std::logic_error("no direct carrier in tower mode");
    return *ext_;
  }

  std::uint64_t element_count() const { return std::uint64_t(1) << (2 * m()); }

  Fq2 zero() const { return tower_ ? Fq2{base_.zero(), base_.zero()} : Fq2{ext_->zero(), ext_->zero()}; }
  Fq2 one() const { return tower_ ? Fq2{base_.one(), base_.zero()} : Fq2{ext_->one(), ext_->zero()}; }

  // w with w^2 + w + 1 = 0 and w outside the base field. For even m the cube
  // roots of unity already lie in GF(2^m), so no such element exists.
  Fq2 omega() const {
    if (!tower_) throw std::domain_error("omega requires odd m");
    return Fq2{base_.zero(), base_.one()};
  }

  Fq2 embed(Fq a) const {
    if (tower_) return Fq2{base_.add(a, base_.zero()), base_.zero()};  // validates a
    if (a.deg != base_.degree()) throw std::invalid_argument("embed: element not from the base field");
    return Fq2{ext_->element(sub_->embed_bits(a.bits)), ext_->zero()};
  }

  bool in_base(const Fq2& z) const {
    if (tower_) return z.v.bits == 0;
    return sub_->extract_bits(z.u.bits).has_value();
  }

  Fq to_base(const Fq2& z) const {
    if (tower_) {
      if (z.v.bits != 0) throw std::domain_error("element is not in the base subfield");
      return z.u;
    }
    const auto bits = sub_->extract_bits(z.u.bits);
    if (!bits) throw std::domain_error("element is not in the base subfield");
    return base_.element(*bits);
  }

  Fq2 add(const Fq2& a, const Fq2& b) const {
    if (tower_) return Fq2{base_.add(a.u, b.u), base_.add(a.v, b.v)};
    return Fq2{ext_->add(a.u, b.u), ext_->zero()};
  }

  Fq2 mul(const Fq2& a, const Fq2& b) const {
    if (tower_) {
      // (u1 + v1 w)(u2 + v2 w) with w^2 = w + 1; three base multiplications.
      const Fq p = base_.mul(a.u, b.u);
      const Fq q = base_.mul(a.v, b.v);
      const Fq r = base_.mul(base_.add(a.u, a.v), base_.add(b.u, b.v));
      return Fq2{base_.add(p, q), base_.add(r, p)};
    }
    return Fq2{ext_->mul(a.u, b.u), ext_->zero()};
  }

  Fq2 sqr(const Fq2& a) const {
    if (tower_) {
      const Fq v2 = base_.sqr(a.v);
      return Fq2{base_.add(base_.sqr(a.u), v2), v2};
    }
    return Fq2{ext_->sqr(a.u), ext_->zero()};
  }

  Fq2 conj(const Fq2& a) const {
    if (tower_) return Fq2{base_.add(a.u, a.v), a.v};
    std::uint64_t w = 0;
    for (unsigned i = 0; i < 2 * m(); ++i) {
      if ((a.u.bits >> i) & 1) w ^= conj_basis_[i];
    }
    return Fq2{ext_->element(w), ext_->zero()};
  }

  Fq norm(const Fq2& a) const {
    if (tower_) return base_.add(base_.add(base_.sqr(a.u), base_.mul(a.u, a.v)), base_.sqr(a.v));
    return to_base(mul(a, conj(a)));
  }

  Fq rel_trace(const Fq2& a) const {
    if (tower_) return a.v;
    return to_base(add(a, conj(a)));
  }

  Fq2 inv(const Fq2& a) const {
    if (a == zero()) throw std::domain_error("inverse of zero");
    if (tower_) {
      const Fq ni = base_.inv(norm(a));
      const Fq2 cz = conj(a);
      return Fq2{base_.mul(cz.u, ni), base_.mul(cz.v, ni)};
    }
    return Fq2{ext_->inv(a.u), ext_->zero()};
  }

  Fq2 div(const Fq2& a, const Fq2& b) const { return mul(a, inv(b)); }

  Fq2 pow(const Fq2& a, std::uint64_t e) const {
    Fq2 r = one();
    Fq2 base = a;
    while (e != 0) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e != 0) base = mul(base, base);
    }
    return r;
  }

  Fq2 sqrt(const Fq2& a) const {
    if (tower_) return Fq2{base_.sqrt(base_.add(a.u, a.v)), base_.sqrt(a.v)};
    return Fq2{ext_->sqrt(a.u), ext_->zero()};
  }

  // Dense index in [0, 2^(2m)) used for bitsets and enumeration order.
  std::uint64_t index(const Fq2& a) const {
    if (tower_) return a.u.bits | (a.v.bits << m());
    return a.u.bits;
  }

  Fq2 from_index(std::uint64_t i) const {
    if (i >= element_count()) throw std::invalid_argument("index exceeds extension size");
    if (tower_) {
      const std::uint64_t mask = (std::uint64_t(1) << m()) - 1;
      return Fq2{base_.element(i & mask), base_.element(i >> m())};
    }
    return Fq2{ext_->element(i), ext_->zero()};
  }

  // The bijection x -> (x + w^2)/(x + w) from GF(2^m) onto mu \ {1}.
  Fq2 mu_point(Fq x) const {
    if (!tower_) throw std::domain_error("mu enumeration requires odd m");
    const Fq2 num{base_.add(x, base_.one()), base_.one()};  // x + w^2, with w^2 = 1 + w
    const Fq2 den{base_.add(x, base_.zero()), base_.one()};
    return mul(num, inv(den));
  }

  std::uint64_t mu_order() const { return base_.element_count() + 1; }

  // Visits 1 first, then mu_point(x) for x in increasing bit order.
  template <typename Fn>
  void mu_for_each(Fn&& fn) const {
    fn(one());
    for (std::uint64_t xb = 0; xb < base_.element_count(); ++xb) fn(mu_point(base_.element(xb)));
  }

  std::vector<Fq2> mu_elements() const {
    std::vector<Fq2> out;
    out.reserve(mu_order());
    mu_for_each([&](const Fq2& z) { out.push_back(z); });
    return out;
  }

  // Roots of x^2 + b x + c over GF(2^(2m)), b != 0, tower representation.
  // Substituting x = b y reduces to y^2 + y = c/b^2 =: w0 + w1 w, which splits
  // into two base-field Artin-Schreier equations; solvability of the whole
  // thing is trace(w1) = 0 because the relative trace of w is w1.
  std::optional<std::pair<Fq2, Fq2>> solve_quadratic(const Fq2& b, const Fq2& c) const {
    if (!tower_) throw std::domain_error("extension quadratic solver requires tower mode");
    if (b == zero()) throw std::invalid_argument("solve_quadratic requires b != 0");
    const Fq2 w = mul(c, inv(sqr(b)));
    if (base_.trace(w.v) != 0) return std::nullopt;
    Fq y1 = base_.half_trace(w.v);
    Fq t = base_.add(w.u, base_.sqr(y1));
    if (base_.trace(t) != 0) {
      // the other root of y1^2 + y1 = w1 flips the second trace (m odd)
      y1 = base_.add(y1, base_.one());
      t = base_.add(w.u, base_.sqr(y1));
    }
    const Fq y0 = base_.half_trace(t);
    Fq2 r0 = mul(b, Fq2{y0, y1});
    Fq2 r1 = add(r0, b);
    if (index(r1) < index(r0)) std::swap(r0, r1);
    return std::make_pair(r0, r1);
  }

  std::string encode(const Fq2& a) const {
    if (tower_) return to_hex(a.u.bits) + "," + to_hex(a.v.bits);
    return to_hex(a.u.bits);
  }

  Fq2 decode(const std::string& s) const {
    if (tower_) {
      const auto comma = s.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("expected 'u_hex,v_hex' for a tower element: '" + s + "'");
      return Fq2{base_.decode(s.substr(0, comma)), base_.decode(s.substr(comma + 1))};
    }
    return Fq2{ext_->decode(s), ext_->zero()};
  }

  std::string to_json() const {
    std::string j = "{\"m\": " + std::to_string(m()) + ", \"mode\": \"" +
                    (tower_ ? "tower" : "direct") + "\", \"base_modulus\": \"" +
                    to_hex(base_.modulus()) + "\"";
    if (!tower_) j += ", \"modulus_2m\": \"" + to_hex(ext_->modulus()) + "\"";
    return j + "}";
  }

 private:
  explicit TowerCtx(FieldCtx base) : base_(std::move(base)), tower_((base_.degree() & 1u) != 0) {
    if (!tower_) {
      const unsigned m = base_.degree();
      if (m > kMaxDirectDegree)
        throw std::invalid_argument("even-degree towers supported up to m = 12");
      ext_.emplace(FieldCtx::make_ext(2 * m));
      sub_.emplace(SubfieldMap::build(base_, *ext_));
      conj_basis_.resize(2 * m);
      for (unsigned i = 0; i < 2 * m; ++i) {
        Fq p = ext_->element(std::uint64_t(1) << i);
        for (unsigned j = 0; j < m; ++j) p = ext_->sqr(p);
        conj_basis_[i] = p.bits;
      }
    }
  }

  FieldCtx base_;
  bool tower_;
  std::optional<FieldCtx> ext_;
  std::optional<SubfieldMap> sub_;
  std::vector<std::uint64_t> conj_basis_;  // direct mode: images of x^i under Frobenius^m
};

}  // namespace quadperm
