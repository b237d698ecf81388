// Pauli algebra checked against a dense matrix oracle: operators are built
// as explicit d^N x d^N matrices and every algebraic identity is verified
// numerically, independently of the symbolic implementation.
#include "doctest.h"

#include <complex>
#include <random>
#include <vector>

#include "stabdec/pauli.hpp"

using namespace stabdec;

namespace {

using cd = std::complex<double>;
using Mat = std::vector<cd>;  // row-major dim x dim

i64 int_pow(i64 b, i64 e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Dense matrix of w^{gamma2/2} X^x Z^z acting on site-0-most-significant
// indices: (X^x Z^z)|m> = w^{z.m} |m + x>.
Mat dense_pauli(const PauliOp& p) {
  const i64 n = p.sites();
  const i64 dim = int_pow(p.d, n);
  Mat u(static_cast<size_t>(dim * dim), cd(0, 0));
  const double pi = 3.14159265358979323846;
  cd global = std::polar(1.0, pi * static_cast<double>(p.gamma2) / static_cast<double>(p.d));
  for (i64 m = 0; m < dim; ++m) {
    i64 rest = m, out = 0, zdot = 0;
    for (i64 q = n - 1; q >= 0; --q) {
      i64 digit = rest % p.d;
      rest /= p.d;
      zdot += p.z[static_cast<size_t>(q)] * digit;
      i64 shifted = (digit + p.x[static_cast<size_t>(q)]) % p.d;
      out += shifted * int_pow(p.d, n - 1 - q);
    }
    cd amp = global * std::polar(1.0, 2.0 * pi * static_cast<double>(zdot) /
                                          static_cast<double>(p.d));
    u[static_cast<size_t>(out * dim + m)] = amp;
  }
  return u;
}

Mat mat_product(const Mat& a, const Mat& b, i64 dim) {
  Mat c(static_cast<size_t>(dim * dim), cd(0, 0));
  for (i64 i = 0; i < dim; ++i)
    for (i64 k = 0; k < dim; ++k) {
      cd aik = a[static_cast<size_t>(i * dim + k)];
      if (std::abs(aik) < 1e-15) continue;
      for (i64 j = 0; j < dim; ++j)
        c[static_cast<size_t>(i * dim + j)] += aik * b[static_cast<size_t>(k * dim + j)];
    }
  return c;
}

double mat_dist(const Mat& a, const Mat& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Mat scale_mat(const Mat& a, cd s) {
  Mat r = a;
  for (auto& e : r) e *= s;
  return r;
}

PauliOp random_pauli(std::mt19937_64& rng, i64 d, i64 n) {
  std::vector<i64> x(static_cast<size_t>(n)), z(static_cast<size_t>(n));
  for (auto& e : x) e = static_cast<i64>(rng() % static_cast<u64>(d));
  for (auto& e : z) e = static_cast<i64>(rng() % static_cast<u64>(d));
  i64 g2 = static_cast<i64>(rng() % static_cast<u64>(2 * d));
  if (d % 2 == 1 && g2 % 2 != 0) g2 = (g2 + 1) % (2 * d);
  return make_pauli(d, x, z, g2);
}

}  // namespace

TEST_SUITE_BEGIN("pauli");

TEST_CASE("construction and parity validation") {
  auto p = make_pauli(4, {5, -1}, {2, 6}, 9);
  CHECK(p.x == std::vector<i64>{1, 3});
  CHECK(p.z == std::vector<i64>{2, 2});
  CHECK(p.gamma2 == 1);
  CHECK_THROWS(make_pauli(3, {0}, {0}, 1));   // odd d needs even gamma2
  CHECK_NOTHROW(make_pauli(3, {0}, {0}, 2));
  CHECK(is_identity(identity_op(5, 3)));
  CHECK_FALSE(is_identity(make_pauli(5, {0}, {0}, 2)));
}

TEST_CASE("pinned products") {
  // Z * X = w^1 X Z at d=4 (gamma2 = 2).
  auto Z = make_pauli(4, {0}, {1}, 0);
  auto X = make_pauli(4, {1}, {0}, 0);
  auto ZX = multiply(Z, X);
  CHECK(ZX.x == std::vector<i64>{1});
  CHECK(ZX.z == std::vector<i64>{1});
  CHECK(ZX.gamma2 == 2);
  // X * Z keeps gamma2 = 0: the blocks are already in canonical order.
  auto XZ = multiply(X, Z);
  CHECK(XZ.gamma2 == 0);
  // identity is neutral
  auto a = make_pauli(4, {3}, {2}, 5);
  CHECK(multiply(a, identity_op(4, 1)) == a);
  CHECK(multiply(identity_op(4, 1), a) == a);
  // d=3: X*X = X^2
  auto X3 = make_pauli(3, {1}, {0}, 0);
  CHECK(multiply(X3, X3).x == std::vector<i64>{2});
}

TEST_CASE("pinned commutation phases") {
  auto X = make_pauli(4, {1}, {0}, 0);
  auto Z = make_pauli(4, {0}, {1}, 0);
  CHECK(commutation_phase(X, Z) == 3);  // XZ = w^{-1} ZX
  CHECK(commutation_phase(Z, X) == 1);
  CHECK(commutation_phase(X, X) == 0);

  // d=9: X1X2X3 commutes with Z1 Z2^8.
  auto g1 = make_pauli(9, {1, 1, 1}, {0, 0, 0}, 0);
  auto g2 = make_pauli(9, {0, 0, 0}, {1, 8, 0}, 0);
  CHECK(commutation_phase(g1, g2) == 0);
  CHECK(pauli_commute(g1, g2));
}

TEST_CASE("pinned restricted commutation phases") {
  // d=9, a = X1X2X3, b = Z1 Z2^8: site {0} gives 1, site {1} gives 8,
  // site {2} gives 0; the total telescopes to commutation_phase(b, a) = 0.
  auto a = make_pauli(9, {1, 1, 1}, {0, 0, 0}, 0);
  auto b = make_pauli(9, {0, 0, 0}, {1, 8, 0}, 0);
  CHECK(restricted_commutation_phase(a, b, {0}) == 1);
  CHECK(restricted_commutation_phase(a, b, {1}) == 8);
  CHECK(restricted_commutation_phase(a, b, {2}) == 0);
  CHECK(restricted_commutation_phase(a, b, {}) == 0);
  CHECK(restricted_commutation_phase(a, b, {0, 1, 2}) == commutation_phase(b, a));

  // d=3 three-party entangled-state generators.
  auto h1 = make_pauli(3, {1, 1, 1}, {0, 0, 0}, 0);
  auto h2 = make_pauli(3, {0, 0, 0}, {0, 1, 2}, 0);
  CHECK(restricted_commutation_phase(h1, h2, {1}) == 1);
}

TEST_CASE("restriction vector layout") {
  auto a = make_pauli(9, {1, 2, 3}, {4, 5, 6}, 0);
  CHECK(restriction_vector(a, {0, 2}) == std::vector<i64>{1, 3, 4, 6});
  CHECK(restriction_vector(a, {1}) == std::vector<i64>{2, 5});
}

TEST_CASE("power closed form, pinned") {
  // (XZ)^2 at d=4: z.x = 1, so gamma2 = 2 and the result is w X^2 Z^2.
  auto XZ = make_pauli(4, {1}, {1}, 0);
  auto sq = pauli_power(XZ, 2);
  CHECK(sq.x == std::vector<i64>{2});
  CHECK(sq.z == std::vector<i64>{2});
  CHECK(sq.gamma2 == 2);
  // a^0 = I, a^{2d} = I, a^{-1} * a = I.
  auto a = make_pauli(4, {3}, {2}, 5);
  CHECK(is_identity(pauli_power(a, 0)));
  CHECK(is_identity(pauli_power(a, 8)));
  CHECK(is_identity(multiply(pauli_inverse(a), a)));
}

TEST_CASE("text rendering") {
  CHECK(to_text(identity_op(4, 2)) == "I");
  CHECK(to_text(make_pauli(4, {1, 0}, {0, 2}, 2)) == "w^1 X0 Z1^2");
  CHECK(to_text(make_pauli(2, {1}, {0}, 1)) == "w^1/2 X0");
  CHECK(to_text(make_pauli(9, {0, 0}, {0, 8}, 4)) == "w^2 Z1^8");
}

TEST_CASE("dense oracle: products, powers, commutation") {
  std::mt19937_64 rng(424242);
  const double pi = 3.14159265358979323846;
  for (i64 d : {2, 3, 4, 5, 8, 9}) {
    for (i64 n : {1, 2}) {
      if (int_pow(d, n) > 81) continue;
      const i64 dim = int_pow(d, n);
      for (int trial = 0; trial < 12; ++trial) {
        PauliOp a = random_pauli(rng, d, n);
        PauliOp b = random_pauli(rng, d, n);

        // product
        CHECK(mat_dist(dense_pauli(multiply(a, b)),
                       mat_product(dense_pauli(a), dense_pauli(b), dim)) < 1e-10);

        // commutation: A B = w^c B A
        i64 c = commutation_phase(a, b);
        cd w_c = std::polar(1.0, 2.0 * pi * static_cast<double>(c) / static_cast<double>(d));
        CHECK(mat_dist(mat_product(dense_pauli(a), dense_pauli(b), dim),
                       scale_mat(mat_product(dense_pauli(b), dense_pauli(a), dim), w_c)) <
              1e-10);

        // power
        i64 k = static_cast<i64>(rng() % static_cast<u64>(2 * d + 3));
        Mat acc(static_cast<size_t>(dim * dim), cd(0, 0));
        for (i64 i = 0; i < dim; ++i) acc[static_cast<size_t>(i * dim + i)] = 1.0;
        Mat am = dense_pauli(a);
        for (i64 i = 0; i < k; ++i) acc = mat_product(acc, am, dim);
        CHECK(mat_dist(dense_pauli(pauli_power(a, k)), acc) < 1e-9);
      }
    }
  }
}

TEST_CASE("algebraic properties") {
  std::mt19937_64 rng(99);
  for (i64 d : {4, 9, 6, 8}) {
    for (int trial = 0; trial < 20; ++trial) {
      PauliOp a = random_pauli(rng, d, 3);
      PauliOp b = random_pauli(rng, d, 3);
      PauliOp c = random_pauli(rng, d, 3);
      // associativity
      CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
      // antisymmetry of the commutation phase
      CHECK(commutation_phase(a, b) == mod_floor(-commutation_phase(b, a), d));
      CHECK(commutation_phase(a, a) == 0);
      // partition sum telescopes to the swapped commutation phase
      i64 total = 0;
      for (const auto& part : std::vector<std::vector<i64>>{{0}, {1, 2}}) {
        total = mod_floor(total + restricted_commutation_phase(a, b, part), d);
      }
      CHECK(total == commutation_phase(b, a));
      // power additivity
      i64 j = static_cast<i64>(rng() % 7), k = static_cast<i64>(rng() % 7);
      CHECK(multiply(pauli_power(a, j), pauli_power(a, k)) == pauli_power(a, j + k));
    }
  }
}

TEST_SUITE_END();
