// Phase-tracked generalized Pauli (Weyl) operators on qudit registers.
//
// An operator is w^{gamma2/2} X^x Z^z with w = exp(2*pi*i/d), the X block
// written to the left of the Z block, and the phase stored doubled (gamma2 =
// 2*gamma mod 2d) so that half-integer phases at even d stay integral.  For
// odd d only integer phases are valid, i.e. gamma2 must be even.
#pragma once

#include <string>
#include <vector>

#include "stabdec/ring.hpp"

namespace stabdec {

struct PauliOp {
  i64 d = 2;            // qudit dimension
  std::vector<i64> x;   // X exponents per site, in [0, d)
  std::vector<i64> z;   // Z exponents per site, in [0, d)
  i64 gamma2 = 0;       // doubled phase exponent, in [0, 2d)

  i64 sites() const { return static_cast<i64>(x.size()); }
  bool operator==(const PauliOp& o) const {
    return d == o.d && x == o.x && z == o.z && gamma2 == o.gamma2;
  }
};

PauliOp identity_op(i64 d, i64 sites);

// Validates ranges and the odd-d parity constraint.
PauliOp make_pauli(i64 d, std::vector<i64> x, std::vector<i64> z, i64 gamma2);

bool is_identity(const PauliOp& p);

// Operator product a * b.  Reordering Z^{z_a} past X^{x_b} contributes
// w^{z_a . x_b}, so gamma2 adds 2 * (z_a . x_b).
PauliOp multiply(const PauliOp& a, const PauliOp& b);

// a^k for any integer k (a^{2d} is the identity).  The closed form is
// gamma2(a^k) = k*gamma2 + (z.x) * k * (k-1)  (mod 2d).
PauliOp pauli_power(const PauliOp& a, i64 k);

PauliOp pauli_inverse(const PauliOp& a);

// c with a b = w^c b a: c = z_a . x_b - z_b . x_a (mod d).
i64 commutation_phase(const PauliOp& a, const PauliOp& b);

bool pauli_commute(const PauliOp& a, const PauliOp& b);

// Commutation phase restricted to a subset of sites:
// sum over q in sites of (x_{a,q} z_{b,q} - z_{a,q} x_{b,q}) mod d.
// Summed over the blocks of a partition this gives commutation_phase(b, a).
i64 restricted_commutation_phase(const PauliOp& a, const PauliOp& b,
                                 const std::vector<i64>& site_subset);

// Restriction of a to the given sites as a fresh 2m exponent vector
// (x block then z block); phase is dropped.
std::vector<i64> restriction_vector(const PauliOp& a, const std::vector<i64>& site_subset);

// Human-readable rendering, e.g. "w^3/2 X0^2 Z1".  The identity renders "I".
std::string to_text(const PauliOp& p);

}  // namespace stabdec
