// Acceptance suite: ten end-to-end checks of the verification artifact, one
// printed line each. Exit status is nonzero if any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "quadperm/quadperm.hpp"

using namespace quadperm;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string u64s(std::uint64_t v) { return std::to_string(v); }

Triple random_triple(const TowerCtx& ctx, std::uint64_t seed, std::uint64_t i) {
  return sample_triple(seed, i, ctx);
}

// 1. Exhaustive main-theorem equivalence at m = 1 and m = 3, with the
//    brute-force oracle on every triple, zero discrepancies, m = 3 single
//    threaded in under a minute.
void criterion1() {
  bool pass = true;
  std::string detail;
  for (unsigned m : {1u, 3u}) {
    RunConfig cfg;
    cfg.m = m;
    cfg.bf = BfPolicy::All;
    cfg.jobs = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const VerifySummary sum = run_verify(cfg);
    const double dt = seconds_since(t0);
    const std::uint64_t want = 1ULL << (5 * m);
    const std::uint64_t want_gamma = m == 1 ? 4 : 442;  // frozen regression baselines
    pass = pass && sum.triples == want && sum.discrepancies == 0 &&
           sum.bruteforce_checked == want && sum.gamma_members == want_gamma &&
           sum.permutations == want_gamma;
    if (m == 3) pass = pass && dt < 60.0;
    detail += "m=" + u64s(m) + ": " + u64s(sum.triples) + " triples, " +
              u64s(sum.gamma_members) + " Gamma = " + u64s(sum.permutations) +
              " permutations, " + u64s(sum.discrepancies) + " discrepancies (" +
              std::to_string(dt).substr(0, 5) + "s)  ";
  }
  report(1, pass, "main-theorem equivalence, exhaustive. " + detail);
}

// 2. Even-m necessity: m = 2 and m = 4 exhaustively yield zero permutations
//    (structured short-circuit plus seeded brute-force spot checks).
void criterion2() {
  bool pass = true;
  std::string detail;
  for (unsigned m : {2u, 4u}) {
    RunConfig cfg;
    cfg.m = m;
    cfg.bf = m == 2 ? BfPolicy::All : BfPolicy::Spot;
    cfg.bf_spot = 1000;
    cfg.jobs = 2;
    const auto t0 = std::chrono::steady_clock::now();
    const VerifySummary sum = run_verify(cfg);
    const double dt = seconds_since(t0);
    pass = pass && sum.triples == (1ULL << (5 * m)) && sum.permutations == 0 &&
           sum.discrepancies == 0 && dt < 600.0;
    if (m == 4) pass = pass && sum.bruteforce_checked >= 1000;
    detail += "m=" + u64s(m) + ": " + u64s(sum.triples) + " triples, 0 permutations, bf=" +
              u64s(sum.bruteforce_checked) + " (" + std::to_string(dt).substr(0, 5) + "s)  ";
  }
  report(2, pass, "even-m necessity, exhaustive. " + detail);
}

// 3. Sampled equivalence at m = 5 (1e5 triples, 1e3 brute-forced) and
//    m = 7 (1e4 triples).
void criterion3() {
  RunConfig c5;
  c5.m = 5;
  c5.mode = RunMode::Sample;
  c5.samples = 100000;
  c5.seed = 20260808;
  c5.bf = BfPolicy::Spot;
  c5.bf_spot = 1000;
  c5.jobs = 2;
  const VerifySummary s5 = run_verify(c5);

  RunConfig c7;
  c7.m = 7;
  c7.mode = RunMode::Sample;
  c7.samples = 10000;
  c7.seed = 20260809;
  c7.bf = BfPolicy::None;
  c7.jobs = 2;
  const VerifySummary s7 = run_verify(c7);

  const bool pass = s5.discrepancies == 0 && s5.bruteforce_checked == 1000 &&
                    s7.discrepancies == 0 && s5.triples == 100000 && s7.triples == 10000;
  report(3, pass,
         "sampled equivalence. m=5: " + u64s(s5.triples) + " samples, " +
             u64s(s5.gamma_members) + " Gamma, bf=" + u64s(s5.bruteforce_checked) +
             ", disc=" + u64s(s5.discrepancies) + "; m=7: " + u64s(s7.triples) +
             " samples, disc=" + u64s(s7.discrepancies));
}

// 4. Oracle agreement: structured test equals brute force on every triple for
//    m in {1, 2, 3}.
void criterion4() {
  std::uint64_t mismatches = 0, checked = 0;
  for (unsigned m : {1u, 2u, 3u}) {
    const TowerCtx ctx = TowerCtx::make(m);
    const std::uint64_t total = 1ULL << (5 * m);
    for (std::uint64_t i = 0; i < total; ++i) {
      const Triple t = triple_at(i, ctx);
      if (is_perm_structured(t, ctx) != is_perm_bruteforce(t, ctx)) ++mismatches;
      ++checked;
    }
  }
  report(4, mismatches == 0,
         "oracle agreement on " + u64s(checked) + " triples (m=1,2,3), mismatches=" +
             u64s(mismatches));
}

// 5. Theta identities: the unconditional one on 1e4 random triples for
//    m in {3,5,7,9}; the two Gamma-conditional ones on every member at m = 3
//    and on 1e3 sampled members at m in {5,7}.
void criterion5() {
  bool pass = true;
  std::string detail;

  for (unsigned m : {3u, 5u, 7u, 9u}) {
    const TowerCtx ctx = TowerCtx::make(m);
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      const ThetaVector th = theta_of(random_triple(ctx, 500 + m, i), ctx);
      const Fq2 lhs = ctx.add(ctx.mul(th.t2, th.t2bar), ctx.mul(th.t3, th.t3bar));
      if (!(lhs == ctx.mul(th.t4, ctx.add(th.t1, th.t4)))) ++bad;
    }
    pass = pass && bad == 0;
    detail += "item1 m=" + u64s(m) + " bad=" + u64s(bad) + "  ";
  }

  auto check_member = [](const TowerCtx& ctx, const ThetaVector& th, std::uint64_t& bad2,
                         std::uint64_t& bad3) {
    const Fq2 lhs2 = ctx.add(ctx.mul(th.t2, th.t3), ctx.mul(th.t2bar, th.t3bar));
    const Fq2 n2 = ctx.mul(th.t2, th.t2bar);
    const Fq2 rhs2 = ctx.div(ctx.mul(n2, ctx.add(th.t2, th.t2bar)), th.t1);
    if (!(lhs2 == rhs2)) ++bad2;
    bool lambda_exists = false;
    ctx.mu_for_each([&](const Fq2& lam) {
      if (lambda_exists) return;
      const Fq2 e =
          ctx.add(th.t1, ctx.add(ctx.mul(th.t2, ctx.conj(lam)), ctx.mul(th.t2bar, lam)));
      if (e == ctx.zero()) lambda_exists = true;
    });
    if (lambda_exists && !(n2 == ctx.mul(th.t1, th.t4))) ++bad3;
  };

  {
    const TowerCtx ctx = TowerCtx::make(3);
    std::uint64_t members = 0, bad2 = 0, bad3 = 0;
    for (std::uint64_t i = 0; i < (1ULL << 15); ++i) {
      const Triple t = triple_at(i, ctx);
      const ThetaVector th = theta_of(t, ctx);
      if (!gamma_of_theta(th, ctx)) continue;
      ++members;
      check_member(ctx, th, bad2, bad3);
    }
    pass = pass && members == 442 && bad2 == 0 && bad3 == 0;
    detail += "items2,3 m=3 members=" + u64s(members) + " bad=" + u64s(bad2 + bad3) + "  ";
  }

  for (unsigned m : {5u, 7u}) {
    const TowerCtx ctx = TowerCtx::make(m);
    std::uint64_t members = 0, bad2 = 0, bad3 = 0, trials = 0;
    while (members < 1000) {
      const ThetaVector th = theta_of(random_triple(ctx, 600 + m, trials++), ctx);
      if (!gamma_of_theta(th, ctx)) continue;
      ++members;
      check_member(ctx, th, bad2, bad3);
    }
    pass = pass && bad2 == 0 && bad3 == 0;
    detail += "items2,3 m=" + u64s(m) + " members=" + u64s(members) + " bad=" +
              u64s(bad2 + bad3) + "  ";
  }

  report(5, pass, "theta identities. " + detail);
}

// 6. Curve soundness, exhaustive m = 3 over all triples with h(1) != 0 and a
//    nonzero curve: classification matches Gamma, every reconstruction
//    re-expands exactly, rational components have off-diagonal zeros, Gamma
//    members have none.
void criterion6() {
  const TowerCtx ctx = TowerCtx::make(3);
  std::uint64_t screened = 0, class_mismatch = 0, product_fail = 0, rc_without_zero = 0,
                gamma_with_zero = 0;
  for (std::uint64_t i = 0; i < (1ULL << 15); ++i) {
    const Triple t = triple_at(i, ctx);
    if (h_at_one(t, ctx) == ctx.zero()) continue;
    const ThetaVector th = theta_of(t, ctx);
    const CurveCoeffs cc = curve_coeffs(th, ctx);
    if (curve_is_zero(cc, ctx)) continue;
    ++screened;
    const bool gamma = gamma_of_theta(th, ctx);
    const CurveClass cls = classify_theta(th, ctx);
    const bool classified =
        cls == CurveClass::Quad1111 || cls == CurveClass::Quad22 || cls == CurveClass::Lin11;
    if (classified != gamma) ++class_mismatch;
    if (classified && !reconstruct_factors(th, cc, cls, ctx).product_verified) ++product_fail;
    const auto [total, off] = count_rational_zeros(cc, ctx);
    (void)total;
    if (cls == CurveClass::RationalComponent && off == 0) ++rc_without_zero;
    if (gamma && off != 0) ++gamma_with_zero;
  }
  const bool pass =
      class_mismatch == 0 && product_fail == 0 && rc_without_zero == 0 && gamma_with_zero == 0;
  report(6, pass,
         "curve soundness m=3 over " + u64s(screened) + " curves: class/Gamma mismatches=" +
             u64s(class_mismatch) + ", product failures=" + u64s(product_fail) +
             ", rational w/o off-diag zero=" + u64s(rc_without_zero) +
             ", Gamma with off-diag zero=" + u64s(gamma_with_zero));
}

// 7. F-map consistency: coefficient evaluation equals the composed walk for
//    every x, on all triples at m = 3 and on 1e3 random triples at m = 5.
void criterion7() {
  std::uint64_t bad = 0, checked = 0;
  auto check = [&](const TowerCtx& ctx, const Triple& t) {
    if (h_at_one(t, ctx) == ctx.zero()) return;
    ++checked;
    const RationalMapCoeffs rc = rational_map_coeffs(t, ctx);
    for (std::uint64_t xb = 0; xb < ctx.base().element_count(); ++xb) {
      const Fq x = ctx.base().element(xb);
      const auto direct = F_eval(rc, x, ctx);
      const Fq2 composed = mu_map_value(t, phi(x, ctx), ctx);
      const bool comp_defined = !(composed == ctx.zero());
      if (direct.has_value() != comp_defined || (direct && !(*direct == composed))) {
        ++bad;
        return;
      }
    }
  };
  {
    const TowerCtx ctx = TowerCtx::make(3);
    for (std::uint64_t i = 0; i < (1ULL << 15); ++i) check(ctx, triple_at(i, ctx));
  }
  {
    const TowerCtx ctx = TowerCtx::make(5);
    for (std::uint64_t i = 0; i < 1000; ++i) check(ctx, random_triple(ctx, 700, i));
  }
  report(7, bad == 0,
         "F-map consistency on " + u64s(checked) + " triples (m=3 exhaustive, m=5 sampled), "
         "disagreements=" + u64s(bad));
}

// 8. phi is a bijection onto mu minus 1 and every mu element has norm one,
//    for odd m up to 9.
void criterion8() {
  bool pass = true;
  std::string detail;
  for (unsigned m : {1u, 3u, 5u, 7u, 9u}) {
    const TowerCtx ctx = TowerCtx::make(m);
    std::set<std::uint64_t> image;
    bool norms_ok = true;
    for (std::uint64_t xb = 0; xb < ctx.base().element_count(); ++xb) {
      const Fq2 z = phi(ctx.base().element(xb), ctx);
      image.insert(ctx.index(z));
      if (!(ctx.norm(z) == ctx.base().one())) norms_ok = false;
    }
    const bool injective = image.size() == ctx.base().element_count();
    image.insert(ctx.index(ctx.one()));
    std::set<std::uint64_t> mu;
    for (const Fq2& z : ctx.mu_elements()) {
      mu.insert(ctx.index(z));
      if (!(ctx.norm(z) == ctx.base().one())) norms_ok = false;
    }
    const bool ok = injective && norms_ok && image == mu && mu.size() == ctx.mu_order();
    pass = pass && ok;
    detail += "m=" + u64s(m) + (ok ? " ok  " : " FAIL  ");
  }
  report(8, pass, "phi/mu bijection and norms, odd m <= 9. " + detail);
}

// 9. Quadratic solvers: 1e4 seeded instances per field; roots satisfy the
//    equation exactly; unsolvable verdicts cross-checked exhaustively where
//    the field is tiny; solvable fraction within 3 sigma of 1/2.
void criterion9() {
  bool pass = true;
  std::string detail;

  for (unsigned m = 1; m <= 9; ++m) {
    const FieldCtx f = FieldCtx::make(m);
    const SplitMix sm{900 + m};
    std::uint64_t solvable = 0, bad = 0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      const std::uint64_t n = f.element_count();
      Fq b = f.element(sm.draw(2 * i) % n);
      if (b.bits == 0) b = f.one();
      const Fq c = f.element(sm.draw(2 * i + 1) % n);
      const auto r = f.solve_quadratic(b, c);
      if (r) {
        ++solvable;
        for (const Fq& root : {r->first, r->second})
          if (!(f.add(f.add(f.sqr(root), f.mul(b, root)), c) == f.zero())) ++bad;
      } else if (m <= 5) {
        for (std::uint64_t xb = 0; xb < n; ++xb) {
          const Fq x = f.element(xb);
          if (f.add(f.add(f.sqr(x), f.mul(b, x)), c) == f.zero()) ++bad;
        }
      }
    }
    // binomial(1e4, 1/2): 3 sigma = 150
    const bool frac_ok = solvable > 5000 - 150 && solvable < 5000 + 150;
    pass = pass && bad == 0 && frac_ok;
    if (!frac_ok || bad) detail += "base m=" + u64s(m) + " BAD  ";
  }

  for (unsigned m : {3u, 5u}) {
    const TowerCtx ctx = TowerCtx::make(m);
    const SplitMix sm{950 + m};
    std::uint64_t solvable = 0, bad = 0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      Fq2 b = ctx.from_index(sm.draw(2 * i) & (ctx.element_count() - 1));
      if (b == ctx.zero()) b = ctx.one();
      const Fq2 c = ctx.from_index(sm.draw(2 * i + 1) & (ctx.element_count() - 1));
      const auto r = ctx.solve_quadratic(b, c);
      if (r) {
        ++solvable;
        for (const Fq2& root : {r->first, r->second})
          if (!(ctx.add(ctx.add(ctx.sqr(root), ctx.mul(b, root)), c) == ctx.zero())) ++bad;
      } else {
        for (std::uint64_t xb = 0; xb < ctx.element_count(); ++xb) {
          const Fq2 x = ctx.from_index(xb);
          if (ctx.add(ctx.add(ctx.sqr(x), ctx.mul(b, x)), c) == ctx.zero()) ++bad;
        }
      }
    }
    const bool frac_ok = solvable > 5000 - 150 && solvable < 5000 + 150;
    pass = pass && bad == 0 && frac_ok;
    detail += "tower m=" + u64s(m) + " solvable=" + u64s(solvable) + " bad=" + u64s(bad) + "  ";
  }

  report(9, pass, "quadratic solvers, 1e4 instances per field. " + detail);
}

// 10. Bound table: d = 4 values match 2^m - 6*2^(m/2) - 19 to printed
//     precision for m in 4..20, are never optimistic, and the table reports
//     that the bound only clears 2 from m = 7 on; small odd m are covered by
//     direct enumeration instead (criterion 6 at m = 3, sampled here at m = 5).
void criterion10() {
  bool pass = true;
  const BoundTable tab = run_bound_table(4, 20);
  for (const auto& r : tab.rows) {
    const long double exact = std::pow(2.0L, r.m) - 6.0L * std::pow(2.0L, r.m / 2.0L) - 19.0L;
    const long double got = static_cast<long double>(r.bound.num) / r.bound.den;
    if (std::fabs(static_cast<double>(got - exact)) > 1e-6) pass = false;
    if (got > exact) pass = false;  // pessimistic rounding only
  }
  if (tab.first_m_exceeding_two != 7) pass = false;

  // the small-m gap is closed by enumeration: sampled non-Gamma curves at
  // m = 5 all expose an off-diagonal rational zero
  const TowerCtx ctx = TowerCtx::make(5);
  std::uint64_t rational = 0, without_zero = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const Triple t = random_triple(ctx, 1000, i);
    if (h_at_one(t, ctx) == ctx.zero()) continue;
    const ThetaVector th = theta_of(t, ctx);
    const CurveCoeffs cc = curve_coeffs(th, ctx);
    if (curve_is_zero(cc, ctx)) continue;
    if (classify_theta(th, ctx) != CurveClass::RationalComponent) continue;
    ++rational;
    const auto [total, off] = count_rational_zeros(cc, ctx);
    (void)total;
    if (off == 0) ++without_zero;
  }
  pass = pass && rational > 0 && without_zero == 0;

  report(10, pass,
         "bound table m=4..20 exact to 1e-6, never optimistic; first m with bound>2 is " +
             u64s(tab.first_m_exceeding_two) + " (reported in table footer); m=5 enumeration: " +
             u64s(rational) + " rational-component curves, " + u64s(without_zero) +
             " without off-diagonal zeros");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%s: %d/10 criteria passed in %.1fs\n", g_failures == 0 ? "PASS" : "FAIL",
              10 - g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
