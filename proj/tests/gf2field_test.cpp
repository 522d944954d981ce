#include <catch2/catch.hpp>

#include "quadperm/gf2field.hpp"
#include "quadperm/prng.hpp"

using namespace quadperm;

namespace {

// Independent reducibility oracle: trial division by every polynomial of
// degree 1..m/2 (the library test goes through gcds with x^(2^i) - x).
bool reducible_by_trial_division(std::uint64_t f) {
  const int m = detail::poly_degree(f);
  for (std::uint64_t d = 2; detail::poly_degree(d) <= m / 2; ++d) {
    if (detail::poly_mod(f, d) == 0) return true;
  }
  return false;
}

Fq random_element(const FieldCtx& f, Rng& rng) {
  return f.element(rng.below(f.element_count()));
}

}  // namespace

TEST_CASE("modulus is the smallest irreducible of its degree") {
  CHECK(FieldCtx::make(1).modulus() == 0b11);
  CHECK(FieldCtx::make(2).modulus() == 0b111);
  CHECK(FieldCtx::make(3).modulus() == 0b1011);

  for (unsigned m = 2; m <= 12; ++m) {
    const FieldCtx f = FieldCtx::make(m);
    REQUIRE(detail::poly_degree(f.modulus()) == static_cast<int>(m));
    CHECK_FALSE(reducible_by_trial_division(f.modulus()));
    // nothing smaller of the same degree is irreducible
    for (std::uint64_t cand = f.element_count(); cand < f.modulus(); ++cand) {
      CHECK(reducible_by_trial_division(cand));
    }
  }
}

TEST_CASE("degree range is enforced") {
  CHECK_THROWS_AS(FieldCtx::make(0), std::invalid_argument);
  CHECK_THROWS_AS(FieldCtx::make(25), std::invalid_argument);
  CHECK_NOTHROW(FieldCtx::make(24));
}

TEST_CASE("multiplication basics") {
  const FieldCtx f = FieldCtx::make(3);
  const Fq x = f.element(0x2);
  CHECK(f.mul(f.zero(), x) == f.zero());
  CHECK(f.mul(f.one(), x) == x);
  // x * x^2 = x^3 = x + 1 mod x^3 + x + 1
  CHECK(f.mul(x, f.element(0x4)) == f.element(0x3));

  const FieldCtx g = FieldCtx::make(4);
  CHECK_THROWS_AS(f.mul(x, g.one()), std::invalid_argument);
  CHECK_THROWS_AS(f.element(8), std::invalid_argument);
}

TEST_CASE("field axioms hold exhaustively for m <= 4") {
  for (unsigned m = 1; m <= 4; ++m) {
    const FieldCtx f = FieldCtx::make(m);
    const std::uint64_t n = f.element_count();
    for (std::uint64_t i = 0; i < n; ++i) {
      const Fq a = f.element(i);
      if (i != 0) CHECK(f.mul(a, f.inv(a)) == f.one());
      for (std::uint64_t j = 0; j < n; ++j) {
        const Fq b = f.element(j);
        CHECK(f.mul(a, b) == f.mul(b, a));
        for (std::uint64_t k = 0; k < n; ++k) {
          const Fq c = f.element(k);
          REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
          REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("inverse and power") {
  const FieldCtx f = FieldCtx::make(3);
  CHECK(f.inv(f.one()) == f.one());
  // x * (x^2 + 1) = x^3 + x = 1
  CHECK(f.inv(f.element(0x2)) == f.element(0x5));
  CHECK_THROWS_AS(f.inv(f.zero()), std::domain_error);

  Rng rng(11);
  for (unsigned m : {3u, 5u, 9u, 14u}) {
    const FieldCtx g = FieldCtx::make(m);
    for (int i = 0; i < 50; ++i) {
      const Fq a = random_element(g, rng);
      CHECK(g.pow(a, 1) == a);
      CHECK(g.pow(a, g.element_count()) == a);
      if (a.bits != 0) {
        // cross-check inv against an exponentiation route
        CHECK(g.mul(a, g.inv(a)) == g.one());
        CHECK(g.inv(a) == g.pow(a, g.element_count() - 2));
      }
    }
  }
  // exhaustive inverse cross-check on GF(8)
  for (std::uint64_t i = 1; i < 8; ++i) {
    const Fq a = f.element(i);
    Fq found = f.zero();
    for (std::uint64_t j = 1; j < 8; ++j)
      if (f.mul(a, f.element(j)) == f.one()) found = f.element(j);
    CHECK(f.inv(a) == found);
  }
}

TEST_CASE("trace is additive, squaring-invariant and balanced") {
  for (unsigned m = 1; m <= 10; ++m) {
    const FieldCtx f = FieldCtx::make(m);
    CHECK(f.trace(f.zero()) == 0);
    if (m & 1) CHECK(f.trace(f.one()) == 1);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < f.element_count(); ++i) {
      const Fq a = f.element(i);
      if (f.trace(a)) ++ones;
      CHECK(f.trace(f.sqr(a)) == f.trace(a));
    }
    CHECK(ones == f.element_count() / 2);  // surjective and balanced
    Rng rng(m);
    for (int i = 0; i < 200; ++i) {
      const Fq a = random_element(f, rng), b = random_element(f, rng);
      REQUIRE(f.trace(f.add(a, b)) == (f.trace(a) ^ f.trace(b)));
    }
  }
}

TEST_CASE("square root inverts squaring") {
  const FieldCtx f3 = FieldCtx::make(3);
  CHECK(f3.sqrt(f3.zero()) == f3.zero());
  CHECK(f3.sqrt(f3.one()) == f3.one());
  // sqrt(x) = x^4 = x^2 + x
  CHECK(f3.sqrt(f3.element(0x2)) == f3.element(0x6));

  for (unsigned m = 1; m <= 10; ++m) {
    const FieldCtx f = FieldCtx::make(m);
    for (std::uint64_t i = 0; i < f.element_count(); ++i) {
      const Fq a = f.element(i);
      REQUIRE(f.sqrt(f.sqr(a)) == a);
      REQUIRE(f.sqr(f.sqrt(a)) == a);
    }
  }
}

TEST_CASE("half-trace solves Artin-Schreier equations for odd m") {
  for (unsigned m : {1u, 3u, 5u, 7u, 9u}) {
    const FieldCtx f = FieldCtx::make(m);
    for (std::uint64_t i = 0; i < f.element_count(); ++i) {
      const Fq a = f.element(i);
      if (f.trace(a) == 0) {
        const Fq y = f.half_trace(a);
        REQUIRE(f.add(f.sqr(y), y) == a);
      }
    }
  }
  CHECK_THROWS_AS(FieldCtx::make(4).half_trace(FieldCtx::make(4).one()), std::logic_error);
}

TEST_CASE("quadratic solver") {
  const FieldCtx f = FieldCtx::make(3);

  SECTION("x^2 + x = 0 has roots {0, 1}") {
    const auto r = f.solve_quadratic(f.one(), f.zero());
    REQUIRE(r.has_value());
    CHECK(r->first == f.zero());
    CHECK(r->second == f.one());
  }

  SECTION("unsolvable when trace(c/b^2) = 1") {
    for (std::uint64_t cb = 0; cb < 8; ++cb) {
      const Fq c = f.element(cb);
      if (f.trace(c) == 1) CHECK_FALSE(f.solve_quadratic(f.one(), c).has_value());
    }
  }

  SECTION("b = 0 is rejected") {
    CHECK_THROWS_AS(f.solve_quadratic(f.zero(), f.one()), std::invalid_argument);
  }

  SECTION("verdicts agree with exhaustive root search, m <= 5") {
    for (unsigned m = 1; m <= 5; ++m) {
      const FieldCtx g = FieldCtx::make(m);
      const std::uint64_t n = g.element_count();
      for (std::uint64_t bb = 1; bb < n; ++bb) {
        std::uint64_t solvable = 0;
        for (std::uint64_t cb = 0; cb < n; ++cb) {
          const Fq b = g.element(bb), c = g.element(cb);
          std::vector<Fq> roots;
          for (std::uint64_t xb = 0; xb < n; ++xb) {
            const Fq x = g.element(xb);
            if (g.add(g.add(g.sqr(x), g.mul(b, x)), c) == g.zero()) roots.push_back(x);
          }
          const auto r = g.solve_quadratic(b, c);
          REQUIRE(r.has_value() == !roots.empty());
          if (r) {
            ++solvable;
            REQUIRE(roots.size() == 2);
            CHECK(r->first == roots[0]);
            CHECK(r->second == roots[1]);
            CHECK(r->second == g.add(r->first, b));
          }
        }
        // exactly half the c values are solvable for every nonzero b
        REQUIRE(solvable == n / 2);
      }
    }
  }
}

TEST_CASE("solvable c count is 2^(m-1) for every nonzero b up to m = 7") {
  for (unsigned m = 6; m <= 7; ++m) {
    const FieldCtx f = FieldCtx::make(m);
    const std::uint64_t n = f.element_count();
    for (std::uint64_t bb = 1; bb < n; ++bb) {
      const Fq binv2 = f.inv(f.sqr(f.element(bb)));
      std::uint64_t solvable = 0;
      for (std::uint64_t cb = 0; cb < n; ++cb)
        if (f.trace(f.mul(f.element(cb), binv2)) == 0) ++solvable;
      REQUIRE(solvable == n / 2);
    }
  }
}

TEST_CASE("hex encoding") {
  const FieldCtx f = FieldCtx::make(5);
  CHECK(f.encode(f.element(0x1f)) == "1f");
  CHECK(f.decode("1f") == f.element(0x1f));
  CHECK(f.decode("0") == f.zero());
  CHECK_THROWS_AS(f.decode("xyz"), std::invalid_argument);
  CHECK_THROWS_AS(f.decode(""), std::invalid_argument);
  CHECK_THROWS_AS(f.decode("20"), std::invalid_argument);  // out of range
  CHECK(f.to_json() == "{\"m\": 5, \"modulus\": \"25\"}");
}
