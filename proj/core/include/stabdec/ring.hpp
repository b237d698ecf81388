// Modular arithmetic over Z_d, prime/prime-power factoring, and the
// unit-multiplier construction used by the Howell normal form.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace stabdec {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Largest modulus the library accepts by default.  Entry products stay below
// 2^40 at this cap, so int64 arithmetic never overflows inside a single
// multiply-reduce step.
constexpr i64 kDefaultModulusCap = i64{1} << 20;

inline i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

// g = gcd(a, b) with g = u*a + v*b over the integers, g >= 0.
struct Xgcd {
  i64 g, u, v;
};

inline Xgcd xgcd(i64 a, i64 b) {
  i64 old_r = a, r = b;
  i64 old_u = 1, u = 0;
  i64 old_v = 0, v = 1;
  while (r != 0) {
    i64 q = old_r / r;
    i64 t = old_r - q * r; old_r = r; r = t;
    t = old_u - q * u; old_u = u; u = t;
    t = old_v - q * v; old_v = v; v = t;
  }
  if (old_r < 0) { old_r = -old_r; old_u = -old_u; old_v = -old_v; }
  return {old_r, old_u, old_v};
}

inline bool is_prime(i64 v) {
  if (v < 2) return false;
  for (i64 f = 2; f * f <= v; ++f)
    if (v % f == 0) return false;
  return true;
}

// d = p^n with p prime, n >= 1.
struct PrimePower {
  i64 p = 0;
  i64 n = 0;
  i64 d = 0;
};

// Factors d >= 2 into prime powers, ascending by prime.
inline std::vector<PrimePower> factor_prime_powers(i64 d) {
  if (d < 2) throw std::invalid_argument("factor_prime_powers: d must be >= 2");
  std::vector<PrimePower> out;
  i64 rest = d;
  for (i64 f = 2; f * f <= rest; ++f) {
    if (rest % f != 0) continue;
    PrimePower pp{f, 0, 1};
    while (rest % f == 0) { rest /= f; ++pp.n; pp.d *= f; }
    out.push_back(pp);
  }
  if (rest > 1) out.push_back(PrimePower{rest, 1, rest});
  return out;
}

inline PrimePower as_prime_power(i64 d) {
  auto fs = factor_prime_powers(d);
  if (fs.size() != 1)
    throw std::invalid_argument("as_prime_power: " + std::to_string(d) +
                                " is not a prime power");
  return fs[0];
}

// Arithmetic modulo a fixed d.  Representatives live in [0, d).
class Ring {
 public:
  explicit Ring(i64 d, i64 cap = kDefaultModulusCap) : d_(d) {
    if (d < 2) throw std::invalid_argument("Ring: modulus must be >= 2");
    if (d > cap)
      throw std::invalid_argument("Ring: modulus " + std::to_string(d) +
                                  " exceeds cap " + std::to_string(cap));
    factors_ = factor_prime_powers(d);
  }

  i64 d() const { return d_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

  i64 r(i64 a) const { return mod_floor(a, d_); }
  i64 add(i64 a, i64 b) const { return mod_floor(a + b, d_); }
  i64 sub(i64 a, i64 b) const { return mod_floor(a - b, d_); }
  i64 mul(i64 a, i64 b) const { return mod_floor(mod_floor(a, d_) * mod_floor(b, d_), d_); }
  i64 neg(i64 a) const { return mod_floor(-a, d_); }

  i64 pow(i64 a, i64 e) const {
    i64 base = r(a);
    if (e < 0) { base = inv(base); e = -e; }
    i64 acc = 1;
    while (e > 0) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }

  bool is_unit(i64 a) const { return std::gcd(mod_floor(a, d_), d_) == 1; }

  i64 inv(i64 a) const {
    a = r(a);
    Xgcd e = xgcd(a, d_);
    if (e.g != 1)
      throw std::invalid_argument("Ring::inv: " + std::to_string(a) +
                                  " is not a unit mod " + std::to_string(d_));
    return mod_floor(e.u, d_);
  }

  // Returns a unit u with u*a = gcd(a, d) (mod d).  Built per prime power of
  // d and recombined by CRT, so it is deterministic and loop-free: with
  // g = gcd(a, d) and s from s*a = g (mod d), s is already a unit modulo
  // d/g; each prime of d missing from d/g gets patched by adding d/g once.
  i64 unit_multiplier(i64 a) const {
    a = r(a);
    if (a == 0) return 1;
    Xgcd e = xgcd(a, d_);
    i64 g = e.g;
    i64 s = mod_floor(e.u, d_);
    i64 dg = d_ / g;
    // CRT over the prime powers of d: keep s where it is a unit, shift by
    // d/g where it is not (s and d/g are coprime, so the shift fixes it).
    i64 m = 1, x = 0;  // running solution x mod m
    for (const auto& pp : factors_) {
      i64 rq = mod_floor(s, pp.d);
      if (rq % pp.p == 0) rq = mod_floor(rq + dg, pp.d);
      // combine x (mod m) with rq (mod pp.d)
      Xgcd c = xgcd(m, pp.d);
      i64 diff = mod_floor(rq - x, pp.d);
      i64 step = mod_floor(c.u * diff, pp.d);
      x = x + m * step;
      m *= pp.d;
      x = mod_floor(x, m);
    }
    return x;
  }

 private:
  i64 d_;
  std::vector<PrimePower> factors_;
};

}  // namespace stabdec
