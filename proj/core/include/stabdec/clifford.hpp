// Local Clifford synthesis: factoring a symplectic row action over Z_{p^n}
// into elementary gates, forward synthesis of vector-normalizing circuits,
// mod-p diagonalization with a Hensel lift back to p^n, the level-rebalancing
// group map, and Pauli frame corrections.
//
// Conventions.  A party's m qudits carry stacked exponent coordinates
// (x_0 .. x_{m-1} | z_0 .. z_{m-1}).  Conjugating an operator by a Clifford
// acts on its coordinate row vector on the right, so a LocalClifford stores
// that 2m x 2m row-action matrix together with phase-carrying images of the
// single-qudit X_i and Z_i.  compile_to_elementary factors the matrix into
// gates whose composed conjugation reproduces the images exactly, phases
// included.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stabdec/gates.hpp"
#include "stabdec/linalg.hpp"
#include "stabdec/pauli.hpp"
#include "stabdec/ring.hpp"
#include "stabdec/stabilizer.hpp"

namespace stabdec {

struct LocalClifford {
  std::string party;
  std::vector<i64> qudits;  // global site ids in local index order
  i64 d = 2;                // prime power p^level
  ModMatrix symplectic;     // 2m x 2m over Z_d, row action on (x | z)
  std::vector<PauliOp> image_x, image_z;  // local m-site images with phases
};

// The form matrix Omega with <u, v> = u * Omega * v^T = u_x.v_z - u_z.v_x.
ModMatrix symplectic_form(i64 m, i64 d);

bool is_symplectic(const Ring& R, const ModMatrix& m);

// Wraps a symplectic matrix with the canonical phase choice gamma2 =
// ((d - 1) * (x . z)) mod 2, the parity forced by requiring every image to
// have order dividing d.
LocalClifford clifford_from_symplectic(std::string party, std::vector<i64> qudits,
                                       i64 d, ModMatrix symplectic);

// Factors lc into elementary gates (replay order, global site ids) whose
// composed conjugation maps each X_i and Z_i exactly onto lc's images,
// phases included; a phase-fixing Pauli gate is prepended when needed.
// d must be a prime power.
std::vector<GateOp> compile_to_elementary(const LocalClifford& lc);

// Gate list (replay order, global sites) conjugating an operator whose
// restriction to `qudits` is the nonzero row u = (x | z) into (0 | g e_0)
// exactly, where g = gcd(d, entries of u).
std::vector<GateOp> synth_map_to_z(i64 d, const std::vector<i64>& qudits,
                                   const std::vector<i64>& u);

// Gate list mapping the restriction row w onto the bare X_0 exactly while
// fixing the row (0 | p^{n-n_prime} e_0).  Requires w_x[0] = 1 mod
// p^{n_prime}; that residue is what keeps the fixed row fixed.
std::vector<GateOp> synth_map_to_x_fixing_z(i64 d, const std::vector<i64>& qudits,
                                            const std::vector<i64>& w, i64 n_prime);

// For rows (x | z) over Z_p that pairwise commute mod p: a symplectic matrix
// M over Z_p with (rows * M) supported on the z half only.
ModMatrix diagonalize_local_group(i64 p, const ModMatrix& rows);

// Hensel lift of a symplectic matrix mod p to an exactly symplectic matrix
// mod p^n, congruent to the input mod p.
ModMatrix lift_symplectic(i64 p, i64 n, const ModMatrix& m);

// Conjugates every generator through the gate(s); Clifford kinds only.
StabilizerGroup conjugate_group(const StabilizerGroup& s, const GateOp& g);
StabilizerGroup conjugate_group(const StabilizerGroup& s,
                                const std::vector<GateOp>& gates);

// Level rebalancing at one site of a group over d = p^n, n >= 2.  Requires
// Z_site^{p^{n-1}} in the group at phase 0.  Each generator maps (x, z) =
// (p a, b) -> (a, p b) at the site with its phase unchanged, a fresh
// X_site^{p^{n-1}} generator is appended, and generators that became trivial
// are dropped.  Returns the rescale GateOp for the replay log.
GateOp apply_v_gate_to_group(StabilizerGroup& s, i64 site);

// Finds a Pauli nu whose conjugation moves each target member (vector taken
// from the PauliOp, desired doubled phase paired with it) to that phase,
// conjugates s by nu in place, and returns one phase-free Pauli GateOp per
// partition block that nu touches.
std::vector<GateOp> pauli_frame_correction(
    StabilizerGroup& s, const std::vector<std::pair<PauliOp, i64>>& targets);

}  // namespace stabdec
