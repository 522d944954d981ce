#pragma once
// Verification harness: enumerates or samples coefficient triples, runs the
// requested checks on each, and reduces per-triple records into a summary.
// Everything is deterministic for a fixed (m, mode, seed): samples come from
// a counter-based generator and workers merge their chunks in enumeration
// order, so the emitted report is byte-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "quadperm/curve.hpp"
#include "quadperm/prng.hpp"
#include "quadperm/quadrinomial.hpp"

namespace quadperm {

enum class RunMode { Exhaustive, Sample };
enum class BfPolicy { Auto, All, None, Spot };

struct RunChecks {
  bool theorem = true;
  bool lemma4 = false;
  bool curve = false;
  bool fmap = false;
  bool hasseweil = false;
};

struct RunConfig {
  unsigned m = 3;
  RunMode mode = RunMode::Exhaustive;
  std::uint64_t samples = 0;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  BfPolicy bf = BfPolicy::Auto;
  std::uint64_t bf_spot = 1000;
  RunChecks checks;
  bool emit_records = true;
};

struct TripleRecord {
  std::uint64_t ordinal = 0;
  Triple t;
  bool gamma = false;
  bool perm_structured = false;
  std::optional<bool> perm_bruteforce;
  std::optional<CurveClass> curve_class;
  std::optional<bool> product_verified;
  std::int64_t off_diagonal_zeros = -1;  // -1 = not counted
  std::string discrepancy;               // empty in a passing run
};

struct VerifySummary {
  unsigned m = 0;
  RunMode mode = RunMode::Exhaustive;
  std::uint64_t triples = 0;
  std::uint64_t gamma_members = 0;
  std::uint64_t permutations = 0;
  std::uint64_t bruteforce_checked = 0;
  std::uint64_t discrepancies = 0;
  std::vector<std::string> first_discrepancies;  // capped preview for logs
  std::optional<std::uint64_t> seed;
  RunChecks checks;
  std::optional<Rational> bound_d4;
  double wall_seconds = 0;  // reported on stderr by the CLI, never in the stream
};

using RecordSink = std::function<void(const TripleRecord&)>;

// Uniform triple from a seeded counter; three independent 64-bit draws.
inline Triple sample_triple(std::uint64_t seed, std::uint64_t index, const TowerCtx& ctx) {
  const unsigned m = ctx.m();
  const std::uint64_t bmask = (std::uint64_t(1) << m) - 1;
  const SplitMix sm{seed};
  const std::uint64_t r1 = sm.draw(3 * index);
  const std::uint64_t r2 = sm.draw(3 * index + 1);
  const std::uint64_t r3 = sm.draw(3 * index + 2);
  return Triple{ctx.base().element(r1 & bmask),
                ctx.from_index(r2 & (ctx.element_count() - 1)),
                ctx.from_index(r3 & (ctx.element_count() - 1))};
}

// Exhaustive order: a1 outer, then a2, then a3, each by increasing index.
inline Triple triple_at(std::uint64_t i, const TowerCtx& ctx) {
  const std::uint64_t n2 = ctx.element_count();
  return Triple{ctx.base().element(i / (n2 * n2)), ctx.from_index((i / n2) % n2),
                ctx.from_index(i % n2)};
}

namespace detail {

inline void note(TripleRecord& rec, const std::string& what) {
  if (!rec.discrepancy.empty()) rec.discrepancy += "; ";
  rec.discrepancy += what;
}

}  // namespace detail

// All requested checks for one triple.
inline TripleRecord process_triple(const Triple& t, const RunConfig& cfg, bool run_bf,
                                   const TowerCtx& ctx) {
  TripleRecord rec;
  rec.t = t;
  const bool odd = ctx.tower_mode();
  const bool degenerate = h_at_one(t, ctx) == ctx.zero();

  if (cfg.checks.theorem || cfg.checks.curve || cfg.checks.lemma4) {
    rec.gamma = odd && gamma_member(t, ctx);
  }

  if (cfg.checks.theorem) {
    rec.perm_structured = is_perm_structured(t, ctx);
    const bool expected = odd && rec.gamma;
    if (rec.perm_structured != expected)
      detail::note(rec, "theorem: structured=" + std::to_string(rec.perm_structured) +
                            " but m-odd-and-Gamma=" + std::to_string(expected));
    if (run_bf) {
      rec.perm_bruteforce = is_perm_bruteforce(t, ctx);
      if (*rec.perm_bruteforce != rec.perm_structured)
        detail::note(rec, "oracle: bruteforce=" + std::to_string(*rec.perm_bruteforce) +
                              " structured=" + std::to_string(rec.perm_structured));
    }
  }

  if (cfg.checks.lemma4) {
    const ThetaVector th = theta_of(t, ctx);
    const Fq2 lhs = ctx.add(ctx.mul(th.t2, th.t2bar), ctx.mul(th.t3, th.t3bar));
    const Fq2 rhs = ctx.mul(th.t4, ctx.add(th.t1, th.t4));
    if (!(lhs == rhs)) detail::note(rec, "theta identity (unconditional) violated");
    if (odd && rec.gamma) {
      const Fq2 lhs2 = ctx.add(ctx.mul(th.t2, th.t3), ctx.mul(th.t2bar, th.t3bar));
      const Fq2 n2 = ctx.mul(th.t2, th.t2bar);
      const Fq2 rhs2 = ctx.div(ctx.mul(n2, ctx.add(th.t2, th.t2bar)), th.t1);
      if (!(lhs2 == rhs2)) detail::note(rec, "theta identity (Gamma, item 2) violated");
      bool lambda_exists = false;
      ctx.mu_for_each([&](const Fq2& lam) {
        if (lambda_exists) return;
        const Fq2 e = ctx.add(th.t1, ctx.add(ctx.mul(th.t2, ctx.conj(lam)), ctx.mul(th.t2bar, lam)));
        if (e == ctx.zero()) lambda_exists = true;
      });
      if (lambda_exists && !(n2 == ctx.mul(th.t1, th.t4)))
        detail::note(rec, "theta identity (Gamma, item 3) violated");
    }
  }

  if (cfg.checks.fmap && odd && !degenerate) {
    const RationalMapCoeffs rc = rational_map_coeffs(t, ctx);
    for (std::uint64_t xb = 0; xb < ctx.base().element_count(); ++xb) {
      const Fq x = ctx.base().element(xb);
      const auto direct = F_eval(rc, x, ctx);
      const Fq2 composed = mu_map_value(t, ctx.mu_point(x), ctx);
      const bool comp_defined = !(composed == ctx.zero());
      if (direct.has_value() != comp_defined ||
          (direct.has_value() && !(*direct == composed))) {
        detail::note(rec, "fmap: coefficient form and composed form disagree at x=" +
                              ctx.base().encode(x));
        break;
      }
    }
  }

  if (cfg.checks.curve && odd && !degenerate) {
    const ThetaVector th = theta_of(t, ctx);
    const CurveCoeffs cc = curve_coeffs(th, ctx);
    const CurveClass cls = classify_theta(th, ctx);
    rec.curve_class = cls;
    const bool classified =
        cls == CurveClass::Quad1111 || cls == CurveClass::Quad22 || cls == CurveClass::Lin11;
    if (cls != CurveClass::ZeroPolynomial && classified != rec.gamma)
      detail::note(rec, std::string("curve: class ") + to_string(cls) +
                            " inconsistent with Gamma=" + std::to_string(rec.gamma));
    if (classified) {
      const FactorizationReport rep = reconstruct_factors(th, cc, cls, ctx);
      rec.product_verified = rep.product_verified;
      if (!rep.product_verified) detail::note(rec, "curve: factor product mismatch");
    }
    if (2 * ctx.m() <= 20) {
      const auto [total, off] = count_rational_zeros(cc, ctx);
      (void)total;
      rec.off_diagonal_zeros = static_cast<std::int64_t>(off);
      if (cls == CurveClass::RationalComponent && off == 0)
        detail::note(rec, "curve: rational component but no off-diagonal zero");
      if (rec.gamma && off != 0)
        detail::note(rec, "curve: Gamma member with off-diagonal zeros");
    }
  } else if (cfg.checks.curve && odd && degenerate) {
    rec.curve_class = CurveClass::ExcludedDegenerate;
  }

  return rec;
}

namespace detail {

inline bool bf_enabled(const RunConfig& cfg, std::uint64_t ordinal, std::uint64_t total,
                       const std::vector<std::uint64_t>& spot_sorted) {
  switch (cfg.bf) {
    case BfPolicy::All: return true;
    case BfPolicy::None: return false;
    case BfPolicy::Spot:
      if (cfg.mode == RunMode::Sample) return ordinal < cfg.bf_spot;
      return std::binary_search(spot_sorted.begin(), spot_sorted.end(), ordinal);
    case BfPolicy::Auto: break;
  }
  (void)total;
  return false;  // resolved to a concrete policy before the run
}

}  // namespace detail

inline VerifySummary run_verify(const RunConfig& cfg_in, const TowerCtx& ctx,
                                const RecordSink& sink = {}) {
  RunConfig cfg = cfg_in;
  if (cfg.m != ctx.m()) throw std::invalid_argument("config degree does not match the context");
  if (cfg.mode == RunMode::Exhaustive && 5 * cfg.m > 26)
    throw std::invalid_argument("exhaustive mode requires 2^(5m) <= 2^26 (m <= 5)");
  if (cfg.mode == RunMode::Sample && !cfg.seed.has_value())
    throw std::invalid_argument("sample mode requires a seed");
  if (cfg.mode == RunMode::Sample && cfg.samples == 0)
    throw std::invalid_argument("sample mode requires a sample count");
  if (cfg.jobs == 0) cfg.jobs = 1;

  const std::uint64_t total = cfg.mode == RunMode::Exhaustive
                                  ? (std::uint64_t(1) << (5 * cfg.m))
                                  : cfg.samples;
  // Resolve the automatic brute-force policy: everything for tiny fields,
  // seeded spot checks while the field is still cheap to enumerate, none from
  // m = 7 on (the two tests' equivalence is certified at small m instead).
  if (cfg.bf == BfPolicy::Auto) {
    if (cfg.mode == RunMode::Exhaustive && cfg.m <= 3) cfg.bf = BfPolicy::All;
    else if (cfg.m < 7 && 2 * cfg.m <= 20) cfg.bf = BfPolicy::Spot;
    else cfg.bf = BfPolicy::None;
  }
  std::vector<std::uint64_t> spot;
  if (cfg.bf == BfPolicy::Spot && cfg.mode == RunMode::Exhaustive) {
    const SplitMix sm{cfg.seed.value_or(0x9044c6e1352b2a2eULL)};
    spot.reserve(cfg.bf_spot);
    for (std::uint64_t j = 0; j < cfg.bf_spot; ++j) spot.push_back(sm.draw(j) % total);
    std::sort(spot.begin(), spot.end());
  }

  VerifySummary sum;
  sum.m = cfg.m;
  sum.mode = cfg.mode;
  sum.seed = cfg.seed;
  sum.checks = cfg.checks;
  if (cfg.checks.hasseweil) sum.bound_d4 = hasse_weil_lower_bound(4, cfg.m);

  const auto t0 = std::chrono::steady_clock::now();

  struct Chunk {
    std::vector<TripleRecord> records;
    std::uint64_t gamma = 0, perms = 0, bf = 0, disc = 0;
    std::vector<std::string> disc_preview;
    bool done = false;
  };

  auto make_record = [&](std::uint64_t i) {
    const Triple t = cfg.mode == RunMode::Exhaustive ? triple_at(i, ctx)
                                                     : sample_triple(*cfg.seed, i, ctx);
    TripleRecord rec = process_triple(t, cfg, detail::bf_enabled(cfg, i, total, spot), ctx);
    rec.ordinal = i;
    return rec;
  };

  auto absorb = [&](Chunk& c, const TripleRecord& rec) {
    if (rec.gamma) ++c.gamma;
    if (rec.perm_structured) ++c.perms;
    if (rec.perm_bruteforce.has_value()) ++c.bf;
    if (!rec.discrepancy.empty()) {
      ++c.disc;
      if (c.disc_preview.size() < 4) c.disc_preview.push_back(rec.discrepancy);
    }
  };

  auto reduce = [&](const Chunk& c) {
    sum.gamma_members += c.gamma;
    sum.permutations += c.perms;
    sum.bruteforce_checked += c.bf;
    sum.discrepancies += c.disc;
    for (const auto& d : c.disc_preview)
      if (sum.first_discrepancies.size() < 8) sum.first_discrepancies.push_back(d);
    if (sink)
      for (const auto& r : c.records) sink(r);
  };

  if (cfg.jobs == 1) {
    Chunk c;
    for (std::uint64_t i = 0; i < total; ++i) {
      const TripleRecord rec = make_record(i);
      absorb(c, rec);
      if (cfg.emit_records && sink) sink(rec);
    }
    reduce(c);  // records already emitted in order
  } else {
    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t nchunks = (total + kChunk - 1) / kChunk;
    std::vector<Chunk> chunks(static_cast<std::size_t>(nchunks));
    std::atomic<std::uint64_t> next{0};
    std::mutex mu;
    std::condition_variable cv;

    auto worker = [&] {
      for (;;) {
        const std::uint64_t ci = next.fetch_add(1);
        if (ci >= nchunks) return;
        Chunk c;
        const std::uint64_t lo = ci * kChunk;
        const std::uint64_t hi = std::min(total, lo + kChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
          TripleRecord rec = make_record(i);
          absorb(c, rec);
          if (cfg.emit_records && sink) c.records.push_back(std::move(rec));
        }
        {
          std::lock_guard<std::mutex> lk(mu);
          chunks[static_cast<std::size_t>(ci)] = std::move(c);
          chunks[static_cast<std::size_t>(ci)].done = true;
        }
        cv.notify_all();
      }
    };

    std::vector<std::thread> pool;
    for (unsigned j = 0; j < cfg.jobs; ++j) pool.emplace_back(worker);
    for (std::uint64_t ci = 0; ci < nchunks; ++ci) {
      std::unique_lock<std::mutex> lk(mu);
      cv.wait(lk, [&] { return chunks[static_cast<std::size_t>(ci)].done; });
      Chunk c = std::move(chunks[static_cast<std::size_t>(ci)]);
      lk.unlock();
      reduce(c);
    }
    for (auto& th : pool) th.join();
  }

  sum.triples = total;
  sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

inline VerifySummary run_verify(const RunConfig& cfg, const RecordSink& sink = {}) {
  const TowerCtx ctx = TowerCtx::make(cfg.m);
  return run_verify(cfg, ctx, sink);
}

// ---- serialization ----

inline std::vector<std::string> check_names(const RunChecks& c) {
  std::vector<std::string> v;
  if (c.theorem) v.push_back("theorem");
  if (c.lemma4) v.push_back("lemma4");
  if (c.curve) v.push_back("curve");
  if (c.fmap) v.push_back("fmap");
  if (c.hasseweil) v.push_back("hasseweil");
  return v;
}

inline nlohmann::json record_json(const TripleRecord& rec, const TowerCtx& ctx) {
  nlohmann::json j;
  j["a1"] = ctx.base().encode(rec.t.a1);
  j["a2"] = ctx.encode(rec.t.a2);
  j["a3"] = ctx.encode(rec.t.a3);
  j["gamma"] = rec.gamma;
  j["perm_structured"] = rec.perm_structured;
  if (rec.perm_bruteforce) j["perm_bruteforce"] = *rec.perm_bruteforce;
  if (rec.curve_class) j["curve_class"] = to_string(*rec.curve_class);
  if (rec.product_verified) j["product_verified"] = *rec.product_verified;
  if (rec.off_diagonal_zeros >= 0) j["off_diagonal_zeros"] = rec.off_diagonal_zeros;
  if (!rec.discrepancy.empty()) j["discrepancy"] = rec.discrepancy;
  return j;
}

inline nlohmann::json summary_json(const VerifySummary& s) {
  nlohmann::json j;
  j["type"] = "summary";
  j["m"] = s.m;
  j["mode"] = s.mode == RunMode::Exhaustive ? "exhaustive" : "sample";
  j["triples"] = s.triples;
  j["gamma_members"] = s.gamma_members;
  j["permutations"] = s.permutations;
  j["bruteforce_checked"] = s.bruteforce_checked;
  j["discrepancies"] = s.discrepancies;
  j["checks"] = check_names(s.checks);
  if (s.seed) j["seed"] = *s.seed;
  if (s.bound_d4) {
    j["bound_d4"] = {{"num", s.bound_d4->num}, {"den", s.bound_d4->den}};
  }
  return j;
}

inline std::string record_tsv_header() {
  return "a1\ta2\ta3\tgamma\tperm_structured\tperm_bruteforce\tcurve_class\toff_diagonal_zeros\tdiscrepancy";
}

inline std::string record_tsv(const TripleRecord& rec, const TowerCtx& ctx) {
  std::ostringstream os;
  os << ctx.base().encode(rec.t.a1) << '\t' << ctx.encode(rec.t.a2) << '\t'
     << ctx.encode(rec.t.a3) << '\t' << rec.gamma << '\t' << rec.perm_structured << '\t';
  if (rec.perm_bruteforce) os << *rec.perm_bruteforce;
  else os << '-';
  os << '\t' << (rec.curve_class ? to_string(*rec.curve_class) : "-") << '\t';
  if (rec.off_diagonal_zeros >= 0) os << rec.off_diagonal_zeros;
  else os << '-';
  os << '\t' << (rec.discrepancy.empty() ? "-" : rec.discrepancy);
  return os.str();
}

// ---- per-triple diagnostics ----

inline nlohmann::json run_diagnose(const Triple& t, const TowerCtx& ctx) {
  nlohmann::json j;
  j["m"] = ctx.m();
  j["context"] = nlohmann::json::parse(ctx.to_json());
  j["a1"] = ctx.base().encode(t.a1);
  j["a2"] = ctx.encode(t.a2);
  j["a3"] = ctx.encode(t.a3);
  const bool odd = ctx.tower_mode();
  const bool degenerate = h_at_one(t, ctx) == ctx.zero();
  j["degenerate"] = degenerate;

  const ThetaVector th = theta_of(t, ctx);
  j["theta"] = {{"t1", ctx.encode(th.t1)},   {"t2", ctx.encode(th.t2)},
                {"t2_bar", ctx.encode(th.t2bar)}, {"t3", ctx.encode(th.t3)},
                {"t3_bar", ctx.encode(th.t3bar)}, {"t4", ctx.encode(th.t4)}};

  if (odd) j["gamma"] = gamma_member(t, ctx);
  j["perm_structured"] = is_perm_structured(t, ctx);
  if (2 * ctx.m() <= 20) j["perm_bruteforce"] = is_perm_bruteforce(t, ctx);

  if (odd) {
    if (degenerate) {
      j["curve"] = {{"class", to_string(CurveClass::ExcludedDegenerate)}};
    } else {
      const CurveCoeffs cc = curve_coeffs(th, ctx);
      nlohmann::json cj;
      cj["coeffs"] = {{"l22", ctx.encode(cc.l22)}, {"l21", ctx.encode(cc.l21)},
                      {"l20", ctx.encode(cc.l20)}, {"l11", ctx.encode(cc.l11)},
                      {"l10", ctx.encode(cc.l10)}, {"l00", ctx.encode(cc.l00)}};
      const CurveClass cls = classify_theta(th, ctx);
      cj["class"] = to_string(cls);
      if (cls == CurveClass::Quad1111 || cls == CurveClass::Quad22 || cls == CurveClass::Lin11) {
        const FactorizationReport rep = reconstruct_factors(th, cc, cls, ctx);
        cj["leading"] = ctx.encode(rep.leading);
        nlohmann::json fl = nlohmann::json::array();
        for (const auto& f : rep.factors) {
          nlohmann::json terms = nlohmann::json::array();
          for (const auto& term : f.terms)
            terms.push_back({{"x", term.dx}, {"y", term.dy}, {"c", ctx.encode(term.coeff)}});
          fl.push_back(terms);
        }
        cj["factors"] = fl;
        cj["product_verified"] = rep.product_verified;
      }
      if (ctx.m() <= 10) {
        const auto [tot, off] = count_rational_zeros(cc, ctx);
        cj["zeros_total"] = tot;
        cj["zeros_off_diagonal"] = off;
      }
      j["curve"] = cj;
    }
  }
  return j;
}

// ---- bound table ----

struct BoundRow {
  unsigned m;
  Rational bound;
  bool exceeds_two;
};

struct BoundTable {
  std::vector<BoundRow> rows;
  unsigned first_m_exceeding_two = 0;
};

inline BoundTable run_bound_table(unsigned m_min, unsigned m_max) {
  if (m_min < 1 || m_min > m_max || m_max > 30)
    throw std::invalid_argument("bound table range must satisfy 1 <= m_min <= m_max <= 30");
  BoundTable tab;
  for (unsigned m = m_min; m <= m_max; ++m) {
    const Rational b = hasse_weil_lower_bound(4, m);
    tab.rows.push_back({m, b, b.value() > 2.0});
  }
  for (unsigned m = 1; m <= 30; ++m) {
    if (hasse_weil_lower_bound(4, m).value() > 2.0) {
      tab.first_m_exceeding_two = m;
      break;
    }
  }
  return tab;
}

}  // namespace quadperm
