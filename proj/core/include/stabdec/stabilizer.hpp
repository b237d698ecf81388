// Stabilizer groups: generator lists with a tripartite site partition,
// validation, the exponent map F(c) = prod_i g_i^{c_i}, coefficient lookup,
// commutant phase lookup, generator basis changes, and the CRT split of a
// composite-dimension group into prime-power factors.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stabdec/linalg.hpp"
#include "stabdec/pauli.hpp"
#include "stabdec/ring.hpp"

namespace stabdec {

// Ordered site partition.  Blocks may be empty; labels name the blocks.
struct Partition {
  std::vector<std::string> labels;
  std::vector<std::vector<i64>> blocks;

  i64 size() const { return static_cast<i64>(blocks.size()); }
};

struct StabilizerGroup {
  i64 d = 2;
  i64 n_sites = 0;
  std::vector<PauliOp> gens;
  Partition partition;
};

// Rows are the stacked exponent vectors (x | z), one generator per row.
ModMatrix generator_matrix(const StabilizerGroup& s);

struct ValidationReport {
  bool shape_ok = false;           // dimensions agree, partition well formed
  bool commuting = false;
  bool phases_consistent = false;  // every vanishing combination is exactly I
  bool pure = false;               // |S| = d^n_sites
  std::map<i64, i64> order_factored;  // |S| as prime -> exponent
  std::vector<std::string> problems;

  bool valid() const { return shape_ok && commuting && phases_consistent; }
};

// Checks generator dimensions against the group, partition well-formedness
// (an empty partition is allowed; a nonempty one must cover every site
// exactly once), pairwise commutation, phase consistency (g^d = I for each
// generator and F(c) = I for every vanishing coefficient combination c), and
// computes the group order.  pure additionally requires |S| = d^n_sites.

ValidationReport validate(const StabilizerGroup& s);

// F(c) = g_0^{c_0} g_1^{c_1} ... in index order, phases included.
PauliOp group_element(const StabilizerGroup& s, const std::vector<i64>& coeffs);

// Canonical exponent vector c with F(c) matching g's exponent vectors, or
// nullopt when g is outside the span.  Phases are not compared; in a valid
// group the vector part determines the element.
std::optional<std::vector<i64>> coefficients_of(const StabilizerGroup& s, const PauliOp& g);

// For g commuting with every generator of a valid group: the phase offset
// phi2 (doubled, in [0, 2d)) with w^{phi2/2} g in S.  Throws if g does not
// commute with the group or its vector lies outside the span.
i64 commutant_phase_lookup(const StabilizerGroup& s, const PauliOp& g);

// Replaces the generators by new_gens[i] = F(row i of L).  L must be
// invertible over Z_d.
StabilizerGroup change_generators(const StabilizerGroup& s, const ModMatrix& l);

// Conjugates every generator by the Pauli nu (group of nu g nu^dagger).
StabilizerGroup conjugate_by_pauli(const StabilizerGroup& s, const PauliOp& nu);

// Splits a composite-d group into one group per prime-power factor q = p^n
// of d, ascending in p.  Under the isomorphism |j> -> prod_i |j * t_i mod
// q_i> with t_i = (d/q_i)^{-1} mod q_i, X maps to X^{t_i} per factor and Z
// maps to Z; the phase exponent is distributed so the factor phases multiply
// back to the original.  Throws if d is already a prime power.
std::vector<StabilizerGroup> crt_split(const StabilizerGroup& s);

}  // namespace stabdec
