// Dense-vector reference simulator.  Everything here is brute force on
// explicit amplitude vectors: it exists to pin down semantics and to verify
// the symbolic engine, not to be fast.  Site 0 is the most significant index
// digit; a gate touches the top p^level component of each targeted site.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stabdec/gates.hpp"
#include "stabdec/stabilizer.hpp"

namespace stabdec {

// Thrown when a dense simulation would exceed the amplitude cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kOracleTol = 1e-10;   // residuals, unitarity, replay checks
inline constexpr double kRankTol = 1e-8;      // singular-value cutoff for ranks
inline constexpr i64 kDefaultAmpCap = i64{1} << 14;  // max amplitudes per state

struct DenseState {
  std::vector<i64> dims;                  // per-site dimensions (mixed radix)
  std::vector<std::complex<double>> amp;  // length = product of dims
  i64 size() const { return static_cast<i64>(amp.size()); }
};

i64 state_size(const std::vector<i64>& dims);
DenseState zero_state(const std::vector<i64>& dims);

// A state stabilized by every generator of s, built by averaging each
// generator's cyclic group against a seeded random vector (sequential
// projections commute for a commuting group).  For a valid pure group this
// is the joint +1 eigenvector, unique up to global phase.  Throws
// std::invalid_argument for phase-inconsistent generators, CapExceeded past
// amp_cap, and std::runtime_error if no stabilized vector emerges.
DenseState state_from_group(const StabilizerGroup& s, std::uint64_t seed,
                            i64 amp_cap = kDefaultAmpCap);

// Residual max_g ||g|psi> - |psi>|| over the generators (0 for stabilized).
double stabilization_residual(const StabilizerGroup& s, const DenseState& st);

// Full-dimension Pauli action (every site dimension must equal a.d).
void apply_pauli(DenseState& st, const PauliOp& a);

// Replay one logged operation (swap_extract grows the state by its
// ancillas, which must land at the current end of the site list).
void apply_gate(DenseState& st, const GateOp& g, i64 amp_cap = kDefaultAmpCap);
void apply_log(DenseState& st, const std::vector<GateOp>& log, i64 amp_cap = kDefaultAmpCap);

// |<a|b>|; global phase never matters in these checks.
double fidelity(const DenseState& a, const DenseState& b);

// Rank of the bipartite amplitude matrix (listed sites vs the rest),
// counting singular values above kRankTol.
i64 reduced_rank(const DenseState& st, const std::vector<i64>& sites);

// dims-shaped state in which each listed group of equal-dimension sites
// carries sum_m |m,...,m>/sqrt(dim) and every remaining site is |0>.
DenseState canonical_state(const std::vector<i64>& dims,
                           const std::vector<std::vector<i64>>& equal_groups);

// Dense matrix of g on the ordered tensor product of target_dims (the gate's
// sites, relabeled 0..k-1).  swap_extract yields a rectangular isometry with
// the ancillas appended; columns are orthonormal for every kind.
std::vector<std::vector<std::complex<double>>> gate_matrix(
    const GateOp& g, const std::vector<i64>& target_dims);

struct RandomGroupParams {
  i64 d = 2;
  i64 n_sites = 1;
  i64 gate_count = 20;    // scrambling conjugations after seeding
  i64 gens_max = 0;       // 0 = unlimited; else never emit more generators
  i64 protect_site = -1;  // if >= 0: keep a Z^{p^{n-1}} stabilizer on this site
                          // and never apply a Fourier gate to it
};

// Deterministic per seed: seeds each site with powers of X and Z whose spans
// multiply to the full site order, scrambles with random elementary
// Cliffords (applied by conjugation), and draws a random three-block
// partition labeled a/b/c.
StabilizerGroup random_stabilizer_group(const RandomGroupParams& params, std::uint64_t seed);

}  // namespace stabdec
