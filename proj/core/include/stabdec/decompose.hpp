// The decomposition engine.  Starting from a pure tripartite stabilizer
// group at prime-power dimension p^n, it alternates two moves until only a
// base-level product state is left:
//
//   * level reduction: when every phase matrix vanishes mod p, a local
//     Clifford turns all generators into products of Zs and X^p s, each
//     qudit sheds one |0>_p factor, and the group rebases to p^{n-1};
//   * extraction: when a witness vector survives in the phase-matrix spans,
//     local synthesis rotates a dual pair of members onto one anchor qudit
//     per involved block and swaps an n'-level GHZ (three blocks) or EPR
//     pair (two blocks) out into fresh ancillas.
//
// Composite dimensions are split into prime-power factors first and each
// factor runs independently.  Every step is logged as GateOps so the dense
// oracle can replay the whole decomposition against the canonical product
// state it claims to reach.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabdec/gates.hpp"
#include "stabdec/phase_matrix.hpp"
#include "stabdec/stabilizer.hpp"

namespace stabdec {

// An internal guarantee failed (synthesis fell short, purity was lost, the
// iteration budget ran out, or progress stalled).  Distinct from
// std::invalid_argument, which rejects bad inputs before the engine starts.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EngineConfig {
  i64 max_iter = 0;        // 0: derive n*(2N+1)+4 from the input
  bool verify = false;     // dense replay of the log per prime-power factor
  i64 amp_cap = i64{1} << 14;  // amplitude budget for that replay
  std::uint64_t seed = 0;  // recorded in the report; the engine is deterministic
  bool trace = false;      // keep per-iteration classification snapshots
};

// Everything is counted in base-p levels: one GHZ_{p^k} equals k GHZ_p
// copies, and an unentangled p^n qudit contributes n to its block's tally.
// The pair slots follow partition block order: ab = blocks 0 and 1, etc.
struct Counts {
  i64 n_ghz = 0;
  i64 n_ab = 0, n_ac = 0, n_bc = 0;
  i64 n_a = 0, n_b = 0, n_c = 0;
};

struct ExtractionRecord {
  int condition = 2;                 // 2: three-way witness, 3: pair witness
  i64 level = 0;                     // n', extracted p-levels per site
  std::vector<std::string> parties;  // participating block labels
  std::vector<i64> sites;            // anchor qudit per block, block order
  std::vector<i64> ancillas;         // appended ancilla indices (dim p^level)
};

struct AncillaRecord {
  std::string party;
  i64 dimension = 0;  // p^{n'}
};

struct IterationTrace {
  i64 n = 0;                    // level when classified
  int condition = 1;
  i64 level = 0;                // classification level (n' or n)
  std::vector<i64> witness;     // classification dual vector
  std::vector<i64> entropies;   // per-block cut entropy, p-level units
};

struct FactorReport {
  i64 p = 2, n = 1, d = 2;
  Counts counts;
  i64 iterations = 0;
  std::vector<ExtractionRecord> extractions;
  std::vector<AncillaRecord> ancillas;
  std::vector<GateOp> log;
  StabilizerGroup final_group;        // all-Z base-level form
  std::vector<IterationTrace> trace;  // filled when config.trace
  bool verified = false;              // dense replay ran and passed
  bool verify_skipped = false;        // replay would exceed the cap
  double fidelity = 0.0;
};

struct DecompositionReport {
  i64 d = 2;
  i64 n_sites = 0;
  Counts totals;                      // summed over factors
  std::vector<FactorReport> factors;  // ascending prime
  std::uint64_t seed = 0;
};

// Cut entropy of one partition block in p-level units:
// n * (block size) - log_p |{ s in S : supp(s) inside the block }|.
i64 block_entropy(const StabilizerGroup& s, i64 block);

// One level-reduction step.  Requires prime-power d = p^n with n >= 2 and
// every phase matrix zero mod p (throws std::invalid_argument otherwise).
// Mutates s into the rebased p^{n-1} group on the same sites and returns the
// gates applied.  Throws EngineError if a synthesis guarantee fails.
std::vector<GateOp> reduce_level(StabilizerGroup& s);

// Terminal rotation at n = 1: requires all phase matrices zero (condition
// 1); drives the group to exactly <Z_q> with zero phases on every site.
std::vector<GateOp> final_rotation(StabilizerGroup& s);

struct ExtractionOutcome {
  ExtractionRecord record;
  std::vector<GateOp> log;
};

// One extraction step for a condition-2 or condition-3 witness.  Mutates s
// into the residual group; ancilla_base is the global index the first fresh
// ancilla should take (original sites plus ancillas appended so far).
ExtractionOutcome extract_entanglement(StabilizerGroup& s, const Classification& witness,
                                       i64 ancilla_base);

// Full pipeline: validates the input (std::invalid_argument on an invalid,
// impure, unpartitioned, or more-than-three-block group), splits composite
// dimensions by CRT, runs the engine per factor, derives the unentangled
// tallies from the level budget, and optionally replays the log densely
// (skipped when the amplitude cap would be exceeded; a failed replay is an
// EngineError).
DecompositionReport run(const StabilizerGroup& s, const EngineConfig& config = {});

}  // namespace stabdec
