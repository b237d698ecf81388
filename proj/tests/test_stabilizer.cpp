// Stabilizer-group tests.  The independent oracle is literal group closure:
// multiply generators until the element set stops growing, tracking phases,
// and compare against the span-based order and validity verdicts.
#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stabdec/stabilizer.hpp"

namespace {

using namespace stabdec;

PauliOp op(i64 d, std::vector<i64> x, std::vector<i64> z, i64 g2 = 0) {
  return make_pauli(d, std::move(x), std::move(z), g2);
}

StabilizerGroup make_group(i64 d, i64 n, std::vector<PauliOp> gens, Partition part = {}) {
  StabilizerGroup s;
  s.d = d;
  s.n_sites = n;
  s.gens = std::move(gens);
  s.partition = std::move(part);
  return s;
}

Partition parts(std::vector<std::vector<i64>> blocks) {
  Partition p;
  const char* names[] = {"a", "b", "c"};
  for (size_t i = 0; i < blocks.size(); ++i) p.labels.push_back(names[i % 3]);
  p.blocks = std::move(blocks);
  return p;
}

std::vector<i64> element_key(const PauliOp& p) {
  std::vector<i64> key = p.x;
  key.insert(key.end(), p.z.begin(), p.z.end());
  key.push_back(p.gamma2);
  return key;
}

// Full phased closure of the generated group by repeated multiplication.
std::set<std::vector<i64>> closure(const StabilizerGroup& s, size_t cap = 300000) {
  std::set<std::vector<i64>> seen;
  std::vector<PauliOp> work{identity_op(s.d, s.n_sites)};
  seen.insert(element_key(work.front()));
  while (!work.empty()) {
    PauliOp cur = work.back();
    work.pop_back();
    for (const PauliOp& g : s.gens) {
      PauliOp next = multiply(cur, g);
      if (seen.insert(element_key(next)).second) {
        REQUIRE(seen.size() <= cap);
        work.push_back(next);
      }
    }
  }
  return seen;
}

i64 span_order(const StabilizerGroup& s) {
  Ring R(s.d);
  return span_size(R, howell_form(R, generator_matrix(s)));
}

ModMatrix howell_basis_of(const StabilizerGroup& s) {
  Ring R(s.d);
  return howell_form(R, generator_matrix(s)).basis;
}

i64 rand_range(std::mt19937_64& rng, i64 lo, i64 hi) {  // inclusive bounds
  return lo + static_cast<i64>(rng() % static_cast<u64>(hi - lo + 1));
}

ModMatrix random_invertible(const Ring& R, i64 m, std::mt19937_64& rng) {
  ModMatrix l = ModMatrix::identity(m);
  for (i64 step = 0; step < 4 * m + 2; ++step) {
    i64 kind = rand_range(rng, 0, 2);
    i64 i = rand_range(rng, 0, m - 1);
    i64 j = rand_range(rng, 0, m - 1);
    if (kind == 0 && i != j) {
      i64 c = rand_range(rng, 0, R.d() - 1);
      for (i64 k = 0; k < m; ++k) l.at(i, k) = R.add(l.at(i, k), R.mul(c, l.at(j, k)));
    } else if (kind == 1) {
      i64 u = 0;
      do {
        u = rand_range(rng, 1, R.d() - 1);
      } while (!R.is_unit(u));
      for (i64 k = 0; k < m; ++k) l.at(i, k) = R.mul(u, l.at(i, k));
    } else if (i != j) {
      for (i64 k = 0; k < m; ++k) std::swap(l.at(i, k), l.at(j, k));
    }
  }
  return l;
}

PauliOp random_pauli(i64 d, i64 n, std::mt19937_64& rng) {
  std::vector<i64> x(static_cast<size_t>(n)), z(static_cast<size_t>(n));
  for (auto& e : x) e = rand_range(rng, 0, d - 1);
  for (auto& e : z) e = rand_range(rng, 0, d - 1);
  i64 g2 = rand_range(rng, 0, 2 * d - 1);
  if (d % 2 == 1 && g2 % 2 != 0) g2 = (g2 + d) % (2 * d);
  return make_pauli(d, std::move(x), std::move(z), g2);
}

// Valid group: one X-type or Z-type power per chosen site, then a generator
// basis change by a random invertible matrix, then Pauli conjugation.  All
// three steps preserve validity exactly.
StabilizerGroup random_valid_group(i64 d, i64 n, std::mt19937_64& rng) {
  std::vector<PauliOp> gens;
  for (i64 site = 0; site < n; ++site) {
    if (rand_range(rng, 0, 3) == 0) continue;  // leave some sites unconstrained
    std::vector<i64> x(static_cast<size_t>(n), 0), z(static_cast<size_t>(n), 0);
    i64 e = rand_range(rng, 1, d - 1);
    if (rand_range(rng, 0, 1) == 0)
      x[static_cast<size_t>(site)] = e;
    else
      z[static_cast<size_t>(site)] = e;
    gens.push_back(make_pauli(d, std::move(x), std::move(z), 0));
  }
  StabilizerGroup s = make_group(d, n, std::move(gens));
  Ring R(d);
  if (!s.gens.empty())
    s = change_generators(s, random_invertible(R, static_cast<i64>(s.gens.size()), rng));
  return conjugate_by_pauli(s, random_pauli(d, n, rng));
}

StabilizerGroup ghz9() {
  return make_group(9, 3,
                    {op(9, {1, 1, 1}, {0, 0, 0}), op(9, {0, 0, 0}, {1, 8, 0}),
                     op(9, {0, 0, 0}, {1, 0, 8})},
                    parts({{0}, {1}, {2}}));
}

TEST_SUITE("stabilizer") {
  TEST_CASE("generator matrix stacks x and z blocks") {
    StabilizerGroup s = ghz9();
    ModMatrix m = generator_matrix(s);
    CHECK(m.rows == 3);
    CHECK(m.cols == 6);
    CHECK(m.row(0) == std::vector<i64>{1, 1, 1, 0, 0, 0});
    CHECK(m.row(1) == std::vector<i64>{0, 0, 0, 1, 8, 0});
    CHECK(m.row(2) == std::vector<i64>{0, 0, 0, 1, 0, 8});
    CHECK(generator_matrix(make_group(4, 2, {})).rows == 0);
  }

  TEST_CASE("validation accepts known good groups") {
    SUBCASE("half powers at d=4") {
      StabilizerGroup s = make_group(4, 1, {op(4, {2}, {0}), op(4, {0}, {2})});
      ValidationReport rep = validate(s);
      CHECK(rep.valid());
      CHECK(rep.pure);
      CHECK(rep.order_factored == std::map<i64, i64>{{2, 2}});
    }
    SUBCASE("three-site GHZ at d=9") {
      ValidationReport rep = validate(ghz9());
      CHECK(rep.valid());
      CHECK(rep.pure);
      CHECK(rep.order_factored == std::map<i64, i64>{{3, 6}});
    }
    SUBCASE("single shift generator at composite d") {
      ValidationReport rep = validate(make_group(6, 1, {op(6, {1}, {0})}));
      CHECK(rep.valid());
      CHECK(rep.pure);
      CHECK(rep.order_factored == std::map<i64, i64>{{2, 1}, {3, 1}});
    }
    SUBCASE("composite-dimension pair group") {
      StabilizerGroup s = make_group(6, 2, {op(6, {1, 1}, {0, 0}), op(6, {0, 0}, {1, 5})},
                                     parts({{0}, {1}}));
      ValidationReport rep = validate(s);
      CHECK(rep.valid());
      CHECK(rep.pure);
      CHECK(rep.order_factored == std::map<i64, i64>{{2, 2}, {3, 2}});
    }
    SUBCASE("subgroup is valid but not pure") {
      ValidationReport rep = validate(make_group(4, 1, {op(4, {2}, {0})}));
      CHECK(rep.valid());
      CHECK_FALSE(rep.pure);
      CHECK(rep.order_factored == std::map<i64, i64>{{2, 1}});
    }
    SUBCASE("empty generator list") {
      ValidationReport rep = validate(make_group(5, 2, {}));
      CHECK(rep.valid());
      CHECK_FALSE(rep.pure);
      CHECK(rep.order_factored.empty());
    }
  }

  TEST_CASE("validation rejects bad groups") {
    SUBCASE("non-commuting generators") {
      ValidationReport rep = validate(make_group(3, 1, {op(3, {1}, {0}), op(3, {0}, {1})}));
      CHECK_FALSE(rep.commuting);
      CHECK_FALSE(rep.valid());
    }
    SUBCASE("generator power with residual phase") {
      // (XZ)^2 = w^2 I at d=2, caught by the g^d check.
      ValidationReport rep = validate(make_group(2, 1, {op(2, {1}, {1})}));
      CHECK(rep.commuting);
      CHECK_FALSE(rep.phases_consistent);
    }
    SUBCASE("phased identity generator") {
      ValidationReport rep = validate(make_group(2, 1, {op(2, {0}, {0}, 2)}));
      CHECK_FALSE(rep.phases_consistent);
    }
    SUBCASE("vanishing combination with residual phase") {
      // Both generators pass the g^d check, but g1 * g2 = w X^4 = w I.
      StabilizerGroup s = make_group(4, 1, {op(4, {2}, {0}, 2), op(4, {2}, {0})});
      ValidationReport rep = validate(s);
      CHECK(rep.commuting);
      CHECK_FALSE(rep.phases_consistent);
    }
    SUBCASE("generator shape mismatch") {
      StabilizerGroup s = make_group(4, 2, {op(4, {2}, {0})});
      ValidationReport rep = validate(s);
      CHECK_FALSE(rep.shape_ok);
      CHECK_FALSE(rep.valid());
    }
    SUBCASE("partition problems") {
      StabilizerGroup s = make_group(3, 2, {op(3, {0, 0}, {1, 0})}, parts({{0, 1}, {1}}));
      CHECK_FALSE(validate(s).shape_ok);
      s.partition = parts({{0}});
      CHECK_FALSE(validate(s).shape_ok);  // site 1 uncovered
      s.partition = parts({{0}, {1, 2}});
      CHECK_FALSE(validate(s).shape_ok);  // site 2 out of range
      s.partition = parts({{0}, {1}});
      CHECK(validate(s).shape_ok);
      s.partition = Partition{};
      CHECK(validate(s).shape_ok);  // no partition is acceptable
    }
  }

  TEST_CASE("span order matches literal closure exactly when valid") {
    std::mt19937_64 rng(20260816);
    struct Shape {
      i64 d, n;
    };
    for (Shape shape : {Shape{2, 2}, Shape{3, 2}, Shape{4, 2}, Shape{5, 1}, Shape{6, 2},
                        Shape{8, 1}, Shape{9, 2}, Shape{12, 1}}) {
      for (int rep = 0; rep < 6; ++rep) {
        StabilizerGroup s = random_valid_group(shape.d, shape.n, rng);
        CAPTURE(shape.d);
        CAPTURE(shape.n);
        ValidationReport v = validate(s);
        REQUIRE(v.valid());
        i64 expected = span_order(s);
        CHECK(static_cast<i64>(closure(s).size()) == expected);
        i64 product = 1;
        for (auto [p, e] : v.order_factored)
          for (i64 k = 0; k < e; ++k) product *= p;
        CHECK(product == expected);
      }
    }
    // With a phase-inconsistent group the closure is strictly larger than
    // the exponent-vector span because phased copies of the same vector
    // appear as distinct elements.
    StabilizerGroup bad = make_group(2, 1, {op(2, {1}, {1})});
    CHECK(static_cast<i64>(closure(bad).size()) == 4);
    CHECK(span_order(bad) == 2);
  }

  TEST_CASE("group_element pins and homomorphism") {
    StabilizerGroup s = ghz9();
    CHECK(group_element(s, {1, 0, 0}) == op(9, {1, 1, 1}, {0, 0, 0}));
    CHECK(group_element(s, {0, 1, 1}) == op(9, {0, 0, 0}, {2, 8, 8}));
    CHECK(group_element(s, {0, 0, 0}) == identity_op(9, 3));
    CHECK(group_element(s, {0, 3, 0}) == pauli_power(s.gens[1], 3));
    CHECK_THROWS_AS(group_element(s, {1, 0}), std::invalid_argument);

    std::mt19937_64 rng(7);
    for (i64 d : {2, 4, 6, 9}) {
      StabilizerGroup g = random_valid_group(d, 2, rng);
      for (int rep = 0; rep < 8; ++rep) {
        std::vector<i64> c1(g.gens.size()), c2(g.gens.size()), sum(g.gens.size());
        for (size_t i = 0; i < g.gens.size(); ++i) {
          c1[i] = rand_range(rng, 0, 2 * d - 1);
          c2[i] = rand_range(rng, 0, 2 * d - 1);
          sum[i] = c1[i] + c2[i];
        }
        CHECK(group_element(g, sum) == multiply(group_element(g, c1), group_element(g, c2)));
      }
    }
  }

  TEST_CASE("coefficients_of inverts group_element on the span") {
    StabilizerGroup s = ghz9();
    SUBCASE("members and non-members") {
      std::optional<std::vector<i64>> c = coefficients_of(s, op(9, {0, 0, 0}, {2, 8, 8}));
      REQUIRE(c.has_value());
      PauliOp rebuilt = group_element(s, *c);
      CHECK(rebuilt.x == std::vector<i64>{0, 0, 0});
      CHECK(rebuilt.z == std::vector<i64>{2, 8, 8});
      CHECK_FALSE(coefficients_of(s, op(9, {1, 0, 0}, {0, 0, 0})).has_value());
      CHECK_FALSE(coefficients_of(s, op(9, {0, 0, 0}, {1, 0, 0})).has_value());
      CHECK(coefficients_of(s, identity_op(9, 3)).has_value());
    }
    SUBCASE("empty generator list") {
      StabilizerGroup empty = make_group(5, 1, {});
      CHECK(coefficients_of(empty, identity_op(5, 1)) == std::vector<i64>{});
      CHECK_FALSE(coefficients_of(empty, op(5, {1}, {0})).has_value());
    }
    SUBCASE("roundtrip is canonical on random groups") {
      std::mt19937_64 rng(99);
      for (i64 d : {3, 4, 6, 8}) {
        StabilizerGroup g = random_valid_group(d, 2, rng);
        for (int rep = 0; rep < 10; ++rep) {
          std::vector<i64> c(g.gens.size());
          for (auto& e : c) e = rand_range(rng, 0, d - 1);
          PauliOp member = group_element(g, c);
          std::optional<std::vector<i64>> back = coefficients_of(g, member);
          REQUIRE(back.has_value());
          PauliOp again = group_element(g, *back);
          CHECK(again.x == member.x);
          CHECK(again.z == member.z);
          CHECK(coefficients_of(g, again) == back);  // representative is stable
        }
      }
    }
  }

  TEST_CASE("commutant phase lookup") {
    StabilizerGroup s = make_group(4, 1, {op(4, {2}, {0}), op(4, {0}, {2})});
    SUBCASE("pinned offsets") {
      CHECK(commutant_phase_lookup(s, op(4, {2}, {0}, 4)) == 4);  // w^2 X^2 needs w^2 more
      CHECK(commutant_phase_lookup(s, op(4, {2}, {0})) == 0);
      CHECK(commutant_phase_lookup(s, op(4, {0}, {2})) == 0);
      CHECK(commutant_phase_lookup(s, identity_op(4, 1)) == 0);
      StabilizerGroup g9 = ghz9();
      CHECK(commutant_phase_lookup(g9, op(9, {0, 0, 0}, {3, 6, 0})) == 0);
      CHECK(commutant_phase_lookup(g9, op(9, {0, 0, 0}, {3, 6, 0}, 2)) == 16);
    }
    SUBCASE("rejects non-commuting and non-member operators") {
      CHECK_THROWS_AS(commutant_phase_lookup(s, op(4, {1}, {1})), std::invalid_argument);
      StabilizerGroup sub = make_group(4, 1, {op(4, {2}, {0})});
      CHECK_THROWS_AS(commutant_phase_lookup(sub, op(4, {0}, {2})), std::invalid_argument);
    }
    SUBCASE("offset tracks an explicit phase shift") {
      std::mt19937_64 rng(5);
      for (i64 d : {2, 3, 4, 6, 9}) {
        StabilizerGroup g = random_valid_group(d, 2, rng);
        for (int rep = 0; rep < 6; ++rep) {
          std::vector<i64> c(g.gens.size());
          for (auto& e : c) e = rand_range(rng, 0, d - 1);
          PauliOp member = group_element(g, c);
          i64 shift = 2 * rand_range(rng, 0, d - 1);
          PauliOp probe = member;
          probe.gamma2 = mod_floor(probe.gamma2 + shift, 2 * d);
          CHECK(commutant_phase_lookup(g, probe) == mod_floor(-shift, 2 * d));
        }
      }
    }
  }

  TEST_CASE("change_generators rewrites the basis but not the group") {
    StabilizerGroup s = ghz9();
    SUBCASE("pinned row operation") {
      ModMatrix l = ModMatrix::identity(3);
      l.at(1, 2) = 1;  // second generator picks up the third
      StabilizerGroup t = change_generators(s, l);
      CHECK(t.gens[1] == op(9, {0, 0, 0}, {2, 8, 8}));
      CHECK(t.gens[0] == s.gens[0]);
      CHECK(t.gens[2] == s.gens[2]);
      CHECK(howell_basis_of(t) == howell_basis_of(s));
      CHECK(validate(t).valid());
      CHECK(validate(t).pure);
    }
    SUBCASE("identity matrix is a no-op") {
      StabilizerGroup t = change_generators(s, ModMatrix::identity(3));
      CHECK(t.gens.size() == s.gens.size());
      for (size_t i = 0; i < s.gens.size(); ++i) CHECK(t.gens[i] == s.gens[i]);
    }
    SUBCASE("rejects bad matrices") {
      ModMatrix wide(2, 3);
      CHECK_THROWS_AS(change_generators(s, wide), std::invalid_argument);
      ModMatrix singular = ModMatrix::zeros(3, 3);
      singular.at(0, 0) = 1;
      singular.at(1, 1) = 3;  // 3 is not a unit mod 9
      singular.at(2, 2) = 1;
      CHECK_THROWS_AS(change_generators(s, singular), std::invalid_argument);
    }
    SUBCASE("random invertible matrices preserve span and validity") {
      std::mt19937_64 rng(31);
      for (i64 d : {2, 4, 6, 9, 12}) {
        StabilizerGroup g = random_valid_group(d, 2, rng);
        if (g.gens.empty()) continue;
        Ring R(d);
        for (int rep = 0; rep < 5; ++rep) {
          ModMatrix l = random_invertible(R, static_cast<i64>(g.gens.size()), rng);
          StabilizerGroup t = change_generators(g, l);
          CHECK(howell_basis_of(t) == howell_basis_of(g));
          CHECK(validate(t).valid());
        }
      }
    }
  }

  TEST_CASE("conjugation by a Pauli shifts phases only") {
    StabilizerGroup s = make_group(4, 1, {op(4, {2}, {0}), op(4, {0}, {2})});
    StabilizerGroup t = conjugate_by_pauli(s, op(4, {1}, {0}));
    CHECK(t.gens[0] == op(4, {2}, {0}));      // X^2 commutes with X
    CHECK(t.gens[1] == op(4, {0}, {2}, 4));   // Z^2 picks up w^2
    CHECK(validate(t).valid());

    std::mt19937_64 rng(17);
    for (i64 d : {2, 3, 6, 8, 9}) {
      StabilizerGroup g = random_valid_group(d, 2, rng);
      PauliOp nu = random_pauli(d, 2, rng);
      StabilizerGroup conj = conjugate_by_pauli(g, nu);
      CHECK(validate(conj).valid());
      CHECK(howell_basis_of(conj) == howell_basis_of(g));
      StabilizerGroup back = conjugate_by_pauli(conj, pauli_inverse(nu));
      for (size_t i = 0; i < g.gens.size(); ++i) CHECK(back.gens[i] == g.gens[i]);
    }
  }

  TEST_CASE("crt_split factors composite dimensions") {
    SUBCASE("rejects prime powers") {
      CHECK_THROWS_AS(crt_split(make_group(4, 1, {op(4, {1}, {0})})), std::invalid_argument);
      CHECK_THROWS_AS(crt_split(make_group(9, 1, {})), std::invalid_argument);
    }
    SUBCASE("single shift at d=6") {
      std::vector<StabilizerGroup> f = crt_split(make_group(6, 1, {op(6, {1}, {0})}));
      REQUIRE(f.size() == 2);
      CHECK(f[0].d == 2);
      CHECK(f[1].d == 3);
      REQUIRE(f[0].gens.size() == 1);
      REQUIRE(f[1].gens.size() == 1);
      CHECK(f[0].gens[0] == op(2, {1}, {0}));
      CHECK(f[1].gens[0] == op(3, {2}, {0}));
    }
    SUBCASE("pair group at d=6 keeps partition") {
      StabilizerGroup s = make_group(6, 2, {op(6, {1, 1}, {0, 0}), op(6, {0, 0}, {1, 5})},
                                     parts({{0}, {1}}));
      std::vector<StabilizerGroup> f = crt_split(s);
      REQUIRE(f.size() == 2);
      CHECK(f[0].gens[0] == op(2, {1, 1}, {0, 0}));
      CHECK(f[0].gens[1] == op(2, {0, 0}, {1, 1}));
      CHECK(f[1].gens[0] == op(3, {2, 2}, {0, 0}));
      CHECK(f[1].gens[1] == op(3, {0, 0}, {1, 2}));
      CHECK(f[0].partition.blocks == s.partition.blocks);
      CHECK(f[1].partition.blocks == s.partition.blocks);
      CHECK(validate(f[0]).pure);
      CHECK(validate(f[1]).pure);
    }
    SUBCASE("identity components are dropped") {
      std::vector<StabilizerGroup> f = crt_split(make_group(6, 1, {op(6, {3}, {0})}));
      REQUIRE(f[0].gens.size() == 1);
      CHECK(f[0].gens[0] == op(2, {1}, {0}));
      CHECK(f[1].gens.empty());
    }
    SUBCASE("phase distribution with an even-factor correction") {
      std::vector<StabilizerGroup> f = crt_split(make_group(6, 1, {op(6, {1}, {0}, 1)}));
      CHECK(f[0].gens[0] == op(2, {1}, {0}, 3));
      CHECK(f[1].gens[0] == op(3, {2}, {0}, 2));
    }
    SUBCASE("recombined phases and vectors are exact") {
      std::mt19937_64 rng(23);
      for (i64 d : {6, 12, 15, 30}) {
        Ring R(d);
        const std::vector<PrimePower>& factors = R.factors();
        for (int rep = 0; rep < 30; ++rep) {
          PauliOp g = random_pauli(d, 2, rng);
          std::vector<StabilizerGroup> f = crt_split(make_group(d, 2, {g}));
          REQUIRE(f.size() == factors.size());
          i64 recombined = 0;
          for (size_t i = 0; i < f.size(); ++i) {
            i64 q = factors[i].d;
            i64 t = Ring(q).inv(mod_floor(d / q, q));
            i64 tinv = Ring(q).inv(t);
            PauliOp part =
                f[i].gens.empty() ? identity_op(q, 2) : f[i].gens[0];
            for (i64 site = 0; site < 2; ++site) {
              size_t sq = static_cast<size_t>(site);
              CHECK(part.x[sq] == mod_floor(t * g.x[sq], q));
              CHECK(part.z[sq] == mod_floor(g.z[sq], q));
              CHECK(mod_floor(tinv * part.x[sq], q) == mod_floor(g.x[sq], q));
            }
            recombined = mod_floor(recombined + part.gamma2 * (d / q), 2 * d);
          }
          CHECK(recombined == g.gamma2);
        }
      }
    }
    SUBCASE("commutation phases factor consistently") {
      std::mt19937_64 rng(41);
      for (int rep = 0; rep < 20; ++rep) {
        i64 d = 12;
        PauliOp a = random_pauli(d, 2, rng);
        PauliOp b = random_pauli(d, 2, rng);
        i64 c = commutation_phase(a, b);
        std::vector<StabilizerGroup> fa = crt_split(make_group(d, 2, {a}));
        std::vector<StabilizerGroup> fb = crt_split(make_group(d, 2, {b}));
        Ring R(d);
        for (size_t i = 0; i < R.factors().size(); ++i) {
          i64 q = R.factors()[i].d;
          i64 t = Ring(q).inv(mod_floor(d / q, q));
          PauliOp pa = fa[i].gens.empty() ? identity_op(q, 2) : fa[i].gens[0];
          PauliOp pb = fb[i].gens.empty() ? identity_op(q, 2) : fb[i].gens[0];
          CHECK(commutation_phase(pa, pb) == mod_floor(t * c, q));
        }
      }
    }
  }
}

}  // namespace
