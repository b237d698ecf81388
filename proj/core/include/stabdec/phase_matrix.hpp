// Restricted-commutation phase matrices of a partitioned stabilizer group,
// and the entanglement classification they induce for prime-power dimension.
//
// For generators g_1..g_m and partition block alpha, M_alpha[i][j] is the
// commutation phase of g_i and g_j restricted to alpha's sites.  The set
// satisfies three exact identities: zero diagonal, M + M^T = 0, and (for a
// commuting generator set) sum over blocks = 0.  Changing generators by an
// invertible matrix L maps each M to L M L^T; local unitaries that preserve
// the partition leave the matrices unchanged, so they classify the
// entanglement shared across blocks.
#pragma once

#include <vector>

#include "stabdec/linalg.hpp"
#include "stabdec/stabilizer.hpp"

namespace stabdec {

struct PhaseMatrixSet {
  i64 d = 2;
  std::vector<ModMatrix> mats;  // one m x m matrix per partition block
};

PhaseMatrixSet phase_matrices(const StabilizerGroup& s);

// The image of the set under gens[i] -> F(row i of L):  M -> L M L^T.
PhaseMatrixSet transform_phase_matrices(const PhaseMatrixSet& pm, const ModMatrix& l);

// Entrywise reduction mod q (q dividing d), as a matrix over Z_q.
ModMatrix mat_mod(const ModMatrix& m, i64 q);

// Trichotomy for a three-block partition at prime-power d = p^n:
//
//   condition 1: every matrix vanishes mod p; no correlations survive at
//     the top level (reduce the level, or finish if n = 1).
//   condition 2: the three row spans intersect nontrivially; a three-way
//     shared state of level n' = log_p(order of the largest intersection
//     vector) is extractable.  dual holds that vector divided down to full
//     order p^n.
//   condition 3: otherwise; a two-way shared state of full level n is
//     extractable between the blocks in pair.  dual is a full-order vector
//     in the column spans of both pair matrices whose p^{n-1} multiple
//     avoids the third block's span.
//
// The dual vector is expressed in generator-coefficient space.
struct Classification {
  int condition = 1;
  std::vector<i64> dual;   // conditions 2 and 3
  i64 level = 0;           // n' (condition 2) or n (condition 3)
  std::vector<i64> pair;   // condition 3: the two block indices sharing the pair
};

Classification classify(const PhaseMatrixSet& pm);

}  // namespace stabdec
