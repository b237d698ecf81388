// Logged operations.  Every step the decomposition engine takes is recorded
// as a GateOp so a dense simulator can replay it; elementary Clifford gates
// also know their exact conjugation action on Pauli operators.
//
// A gate acts on the top p^level component of each targeted site: a site of
// physical dimension p^m with m >= level is treated as |j_top> (x) |j_rest>
// with j_top in [0, p^level), and the gate touches j_top only.  p is prime
// for engine-emitted gates; a composite base with level 1 is allowed for
// full-dimension scrambling.
#pragma once

#include <string>
#include <vector>

#include "stabdec/pauli.hpp"

namespace stabdec {

enum class GateKind {
  fourier,       // |j> -> sum_k w^{jk} |k> / sqrt(dim)
  phase,         // diag(w_{2*dim}^{kappa*param*j^2}), kappa = 1 (even dim) or dim+1 (odd)
  cz,            // diag(w^{param * j_s * j_t}) on two sites
  mult,          // |j> -> |param * j>, param a unit
  pauli,         // product over sites of X^{pauli_x[i]} Z^{pauli_z[i]}, phase-free
  rescale,       // level rebalancing isometry (see apply_gate)
  swap_extract,  // swap low-n_prime digits of each site with a fresh ancilla
};

struct GateOp {
  GateKind kind = GateKind::fourier;
  i64 p = 2;      // base; the gate's component dimension is p^level
  i64 level = 1;  // acts on the top p^level component of each target site
  std::vector<i64> sites;
  i64 param = 0;  // phase/cz exponent or mult multiplier
  std::vector<i64> pauli_x, pauli_z;          // pauli kind, aligned with sites
  i64 n_prime = 0;                            // swap_extract: extracted level
  std::vector<i64> ancilla_sites;             // swap_extract: appended site indices
  std::vector<std::string> parties;           // swap_extract: participating block labels
};

const char* gate_kind_name(GateKind kind);

i64 gate_dimension(const GateOp& g);  // p^level

// Exact conjugation g a g^{-1} for the Clifford kinds (fourier, phase, cz,
// mult, pauli) acting at full level: a.d must equal p^level.  rescale and
// swap_extract are not Pauli-to-Pauli maps and are rejected.
PauliOp conjugate_by_gate(const GateOp& g, const PauliOp& a);

}  // namespace stabdec
