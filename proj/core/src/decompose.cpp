// Decomposition engine.  The loop classifies the cross-party pairing
// matrices, then either rebases the whole group one level down (all pairings
// vanish mod p) or extracts one maximal entangled block onto fresh ancillas
// (a witness certifies shared correlations).  Every move appends replayable
// gates to the log, so the caller can re-run the schedule against a dense
// state and check the landing point.
#include "stabdec/decompose.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "stabdec/clifford.hpp"
#include "stabdec/linalg.hpp"
#include "stabdec/oracle.hpp"

namespace stabdec {
namespace {

// Minimum replay fidelity accepted by run() when verification is on.
constexpr double kReplayTol = 1e-8;

i64 ipow(i64 base, i64 exp) {
  i64 acc = 1;
  for (i64 i = 0; i < exp; ++i) acc *= base;
  return acc;
}

// Exact base-p logarithm of a value the engine expects to be a power of p.
i64 log_exact(i64 p, i64 value) {
  i64 k = 0;
  while (value > 1) {
    if (value % p != 0)
      throw EngineError("log_exact: " + std::to_string(value) +
                        " is not a power of " + std::to_string(p));
    value /= p;
    ++k;
  }
  return k;
}

i64 dot(const Ring& R, const std::vector<i64>& a, const std::vector<i64>& b) {
  i64 acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc = R.add(acc, R.mul(a[i], b[i]));
  return acc;
}

bool vector_part_zero(const PauliOp& a) {
  for (i64 e : a.x)
    if (e != 0) return false;
  for (i64 e : a.z)
    if (e != 0) return false;
  return true;
}

// The classifier always speaks about three parties; groups presented with
// fewer blocks get empty ones appended under fresh labels.
void pad_partition(StabilizerGroup& s) {
  if (s.partition.size() > 3)
    throw std::invalid_argument(
        "run: at most three partition blocks are supported");
  if (s.partition.blocks.empty() && s.n_sites > 0)
    throw std::invalid_argument("run: sites present but the partition is empty");
  const char* defaults[3] = {"a", "b", "c"};
  while (s.partition.size() < 3) {
    std::string label;
    for (const char* cand : defaults) {
      if (std::find(s.partition.labels.begin(), s.partition.labels.end(),
                    cand) == s.partition.labels.end()) {
        label = cand;
        break;
      }
    }
    if (label.empty()) label = "block" + std::to_string(s.partition.size());
    s.partition.labels.push_back(label);
    s.partition.blocks.emplace_back();
  }
}

// Exponent of p in the size of the row span of gen_rows.
i64 span_exponent(const Ring& R, i64 p, const ModMatrix& gen_rows) {
  const HowellForm h = howell_form(R, gen_rows);
  const auto factored = span_size_factored(R, h);
  const auto it = factored.find(p);
  return it == factored.end() ? i64{0} : it->second;
}

// Coefficient relation matrix: column i reads off generator i at one
// coordinate, so its right kernel is the set of coefficient vectors whose
// product has no support on the listed coordinates.
ModMatrix coordinate_matrix(const StabilizerGroup& s,
                            const std::vector<char>& keep) {
  const i64 m = static_cast<i64>(s.gens.size());
  i64 rows = 0;
  for (char k : keep) rows += k ? 2 : 0;
  ModMatrix out(rows, m);
  i64 r = 0;
  for (i64 q = 0; q < s.n_sites; ++q) {
    if (!keep[static_cast<size_t>(q)]) continue;
    for (i64 i = 0; i < m; ++i) {
      out.at(r, i) = s.gens[static_cast<size_t>(i)].x[static_cast<size_t>(q)];
      out.at(r + 1, i) = s.gens[static_cast<size_t>(i)].z[static_cast<size_t>(q)];
    }
    r += 2;
  }
  return out;
}

std::vector<GateOp> reduce_impl(StabilizerGroup& s, const PrimePower& pp) {
  const i64 d = pp.d;
  const i64 p = pp.p;
  std::vector<GateOp> log;
  const i64 m = static_cast<i64>(s.gens.size());

  // Rotate each party so that, mod p, every generator restriction is pure Z.
  for (size_t b = 0; b < s.partition.blocks.size(); ++b) {
    const std::vector<i64>& sites = s.partition.blocks[b];
    if (sites.empty()) continue;
    ModMatrix rows(m, 2 * static_cast<i64>(sites.size()));
    bool nonzero = false;
    for (i64 i = 0; i < m; ++i) {
      std::vector<i64> rv = restriction_vector(s.gens[static_cast<size_t>(i)], sites);
      for (i64& e : rv) {
        e = mod_floor(e, p);
        nonzero = nonzero || e != 0;
      }
      rows.set_row(i, rv);
    }
    if (!nonzero) continue;
    const ModMatrix action = diagonalize_local_group(p, rows);
    const ModMatrix lifted = lift_symplectic(p, pp.n, action);
    const LocalClifford lc =
        clifford_from_symplectic(s.partition.labels[b], sites, d, lifted);
    for (const GateOp& gate : compile_to_elementary(lc)) {
      s = conjugate_group(s, gate);
      log.push_back(gate);
    }
  }
  for (const PauliOp& g : s.gens)
    for (i64 e : g.x)
      if (mod_floor(e, p) != 0)
        throw EngineError("reduce_level: a raw shift survived the rotation");

  // Every single-site deep Z is now central, hence a member up to phase;
  // align all of them at +1 so the bottom digit of every site reads 0.
  const i64 marker = ipow(p, pp.n - 1);
  std::vector<std::pair<PauliOp, i64>> targets;
  for (i64 q = 0; q < s.n_sites; ++q) {
    PauliOp t = identity_op(d, s.n_sites);
    t.z[static_cast<size_t>(q)] = marker;
    targets.emplace_back(std::move(t), 0);
  }
  const std::vector<GateOp> corr = pauli_frame_correction(s, targets);
  log.insert(log.end(), corr.begin(), corr.end());

  // Rebase the group one level down: shifts divide by p, phases divide by p,
  // the aligned markers drop out.
  StabilizerGroup down;
  down.d = d / p;
  down.n_sites = s.n_sites;
  down.partition = s.partition;
  for (const PauliOp& g : s.gens) {
    std::vector<i64> x(g.x.size()), z(g.z.size());
    bool zero = true;
    for (size_t q = 0; q < g.x.size(); ++q) {
      x[q] = g.x[q] / p;
      z[q] = mod_floor(g.z[q], d / p);
      zero = zero && x[q] == 0 && z[q] == 0;
    }
    if (mod_floor(g.gamma2, p) != 0)
      throw EngineError("reduce_level: a generator phase resisted the rebase");
    const i64 g2 = g.gamma2 / p;
    if (zero) {
      if (g2 != 0)
        throw EngineError("reduce_level: a phased identity survived the rebase");
      continue;
    }
    down.gens.push_back(make_pauli(d / p, x, z, g2));
  }
  const ValidationReport vr = validate(down);
  if (!vr.valid() || !vr.pure)
    throw EngineError("reduce_level: the rebased group failed validation");
  s = std::move(down);
  return log;
}

std::vector<GateOp> final_impl(StabilizerGroup& s, const PrimePower& pp) {
  const i64 p = pp.p;
  std::vector<GateOp> log;
  const i64 m = static_cast<i64>(s.gens.size());
  for (size_t b = 0; b < s.partition.blocks.size(); ++b) {
    const std::vector<i64>& sites = s.partition.blocks[b];
    if (sites.empty()) continue;
    ModMatrix rows(m, 2 * static_cast<i64>(sites.size()));
    bool nonzero = false;
    for (i64 i = 0; i < m; ++i) {
      const std::vector<i64> rv =
          restriction_vector(s.gens[static_cast<size_t>(i)], sites);
      for (i64 e : rv) nonzero = nonzero || e != 0;
      rows.set_row(i, rv);
    }
    if (!nonzero) continue;
    const ModMatrix action = diagonalize_local_group(p, rows);
    const LocalClifford lc =
        clifford_from_symplectic(s.partition.labels[b], sites, p, action);
    for (const GateOp& gate : compile_to_elementary(lc)) {
      s = conjugate_group(s, gate);
      log.push_back(gate);
    }
  }
  for (const PauliOp& g : s.gens)
    for (i64 e : g.x)
      if (e != 0) throw EngineError("final_rotation: a shift survived");

  std::vector<std::pair<PauliOp, i64>> targets;
  for (i64 q = 0; q < s.n_sites; ++q) {
    PauliOp t = identity_op(p, s.n_sites);
    t.z[static_cast<size_t>(q)] = 1;
    targets.emplace_back(std::move(t), 0);
  }
  const std::vector<GateOp> corr = pauli_frame_correction(s, targets);
  log.insert(log.end(), corr.begin(), corr.end());

  // Purity plus all-Z generators force the full Z group, so the canonical
  // presentation is one bare Z per site.
  StabilizerGroup out;
  out.d = p;
  out.n_sites = s.n_sites;
  out.partition = s.partition;
  for (i64 q = 0; q < s.n_sites; ++q) {
    std::vector<i64> x(static_cast<size_t>(s.n_sites), 0);
    std::vector<i64> z(static_cast<size_t>(s.n_sites), 0);
    z[static_cast<size_t>(q)] = 1;
    out.gens.push_back(make_pauli(p, x, z, 0));
  }
  s = std::move(out);
  return log;
}

ExtractionOutcome extract_impl(StabilizerGroup& s, const Classification& w,
                               const std::vector<i64>& blocks, i64 ancilla_base,
                               const PrimePower& pp) {
  const i64 d = pp.d;
  const i64 p = pp.p;
  const i64 n = pp.n;
  const i64 n_prime = w.level;
  const i64 depth = ipow(p, n - n_prime);
  const Ring R(d);
  const i64 m = static_cast<i64>(s.gens.size());
  const PhaseMatrixSet pm = phase_matrices(s);

  // A coefficient vector in the kernel of the summed block pairings that
  // pairs to 1 with the witness: its image carries the shared shift.
  ModMatrix summed = ModMatrix::zeros(m, m);
  for (i64 b : blocks) summed = mat_add(R, summed, pm.mats[static_cast<size_t>(b)]);
  const ModMatrix K = kernel(R, summed);
  std::vector<i64> combo(static_cast<size_t>(K.rows), 0);
  i64 acc = 0;
  for (i64 i = 0; i < K.rows; ++i) {
    const i64 c = dot(R, K.row(i), w.dual);
    const Xgcd e = xgcd(acc, c);
    for (i64 j = 0; j < i; ++j)
      combo[static_cast<size_t>(j)] = R.mul(combo[static_cast<size_t>(j)], e.u);
    combo[static_cast<size_t>(i)] = R.r(e.v);
    acc = e.g;
  }
  if (!R.is_unit(acc))
    throw EngineError("extract: the witness pairing is degenerate");
  const i64 scale = R.inv(acc);
  for (i64& e : combo) e = R.mul(e, scale);
  const std::vector<i64> v_prime = vec_mat(R, combo, K);
  if (dot(R, v_prime, w.dual) != 1)
    throw EngineError("extract: witness pairing normalization failed");

  // Tracked operators: [0] carries the shared shift, [1 + idx] carries the
  // depth-p^{n-n'} clock for blocks[idx].  Phases are irrelevant here; only
  // the vectors are steered.
  std::vector<PauliOp> tracked;
  {
    PauliOp g_op = group_element(s, v_prime);
    g_op.gamma2 = 0;
    tracked.push_back(std::move(g_op));
  }
  std::vector<i64> target(w.dual.size());
  for (size_t i = 0; i < w.dual.size(); ++i) target[i] = R.mul(depth, w.dual[i]);
  for (i64 b : blocks) {
    const auto sol = solve(R, pm.mats[static_cast<size_t>(b)], target);
    if (!sol)
      throw EngineError("extract: a block pairing has no preimage at depth");
    PauliOp h = group_element(s, *sol);
    h.gamma2 = 0;
    tracked.push_back(std::move(h));
  }

  std::vector<GateOp> log;
  auto track_gate = [&](const GateOp& gate) {
    for (PauliOp& t : tracked) {
      switch (gate.kind) {
        case GateKind::rescale: {
          const size_t site = static_cast<size_t>(gate.sites.at(0));
          if (mod_floor(t.x[site], p) != 0)
            throw EngineError("extract: a tracked operator blocked a rescale");
          t.x[site] /= p;
          t.z[site] = mod_floor(t.z[site] * p, d);
          break;
        }
        case GateKind::pauli:
          break;  // phase-only on vectors
        case GateKind::swap_extract:
          throw EngineError("extract: unexpected swap during tracking");
        default:
          t = conjugate_by_gate(gate, t);
          t.gamma2 = 0;
      }
    }
  };
  auto emit = [&](const GateOp& gate) {
    s = conjugate_group(s, gate);
    track_gate(gate);
    log.push_back(gate);
  };
  auto absorb = [&](const std::vector<GateOp>& gates) {
    for (const GateOp& gate : gates) track_gate(gate);
    log.insert(log.end(), gates.begin(), gates.end());
  };

  std::vector<i64> anchors;
  for (i64 b : blocks) {
    const std::vector<i64>& sites = s.partition.blocks[static_cast<size_t>(b)];
    if (sites.empty())
      throw EngineError("extract: a participating block has no sites");
    anchors.push_back(sites[0]);
  }

  // Stage one: per block, rotate the clock member onto its anchor site as a
  // pure Z, then deepen it to exactly p^{n-n'} with rescales if it sits
  // deeper than the witness level asks.
  for (size_t idx = 0; idx < blocks.size(); ++idx) {
    // Copy: emit() replaces s wholesale, which would dangle a reference.
    const std::vector<i64> sites =
        s.partition.blocks[static_cast<size_t>(blocks[idx])];
    const i64 r = anchors[idx];
    PauliOp& h = tracked[1 + idx];
    const std::vector<i64> u_loc = restriction_vector(h, sites);
    const i64 ord = element_order(R, u_loc);
    if (ord <= 1)
      throw EngineError("extract: the clock member vanishes on its block");
    const i64 k = log_exact(p, ord);
    if (k < n_prime)
      throw EngineError("extract: the clock member is too shallow");
    for (const GateOp& gate : synth_map_to_z(d, sites, u_loc)) emit(gate);
    std::vector<i64> want(2 * sites.size(), 0);
    want[sites.size()] = ipow(p, n - k);
    if (restriction_vector(h, sites) != want)
      throw EngineError("extract: anchor synthesis missed its target");
    if (k > n_prime) {
      // One phase alignment of the deep central Z suffices: its pure-Z
      // powers inherit phase 0, which is exactly what each rescale needs.
      PauliOp deep = identity_op(d, s.n_sites);
      deep.z[static_cast<size_t>(r)] = ipow(p, n - (k - n_prime));
      absorb(pauli_frame_correction(s, {{deep, 0}}));
      for (i64 j = 0; j < k - n_prime; ++j) {
        const GateOp v_gate = apply_v_gate_to_group(s, r);
        track_gate(v_gate);
        log.push_back(v_gate);
      }
    }
    std::vector<i64> anchored(2 * sites.size(), 0);
    anchored[sites.size()] = depth;
    if (restriction_vector(h, sites) != anchored)
      throw EngineError("extract: depth alignment failed");
  }

  // Stage two: per block, the invariant pairing against the anchored clock
  // pins the shared operator's shift exponent at the anchor to 1 mod p^{n'},
  // so it can be rotated onto the bare anchor shift without moving the clock.
  for (size_t idx = 0; idx < blocks.size(); ++idx) {
    const std::vector<i64> sites =
        s.partition.blocks[static_cast<size_t>(blocks[idx])];
    const i64 pairing =
        restricted_commutation_phase(tracked[0], tracked[1 + idx], sites);
    if (pairing != R.r(depth))
      throw EngineError("extract: the witness pairing drifted");
    const std::vector<i64> w_loc = restriction_vector(tracked[0], sites);
    for (const GateOp& gate : synth_map_to_x_fixing_z(d, sites, w_loc, n_prime))
      emit(gate);
    std::vector<i64> want(2 * sites.size(), 0);
    want[0] = 1;
    if (restriction_vector(tracked[0], sites) != want)
      throw EngineError("extract: shift synthesis missed its target");
    std::vector<i64> anchored(2 * sites.size(), 0);
    anchored[sites.size()] = depth;
    if (restriction_vector(tracked[1 + idx], sites) != anchored)
      throw EngineError("extract: the anchored clock was disturbed");
  }

  // Stage three: the joint shift across all anchors and the anchor-to-anchor
  // clock differences are central, hence members up to phase; align them all
  // at +1 in one correction so the swap lands on the standard entangled state.
  {
    PauliOp joint = identity_op(d, s.n_sites);
    for (i64 r : anchors) joint.x[static_cast<size_t>(r)] = 1;
    std::vector<std::pair<PauliOp, i64>> targets;
    targets.emplace_back(std::move(joint), 0);
    for (size_t j = 1; j < anchors.size(); ++j) {
      PauliOp pair_op = identity_op(d, s.n_sites);
      pair_op.z[static_cast<size_t>(anchors[0])] = depth;
      pair_op.z[static_cast<size_t>(anchors[j])] = R.neg(depth);
      targets.emplace_back(std::move(pair_op), 0);
    }
    absorb(pauli_frame_correction(s, targets));
  }

  // The swap moves the bottom n' digits of every anchor onto fresh ancillas.
  GateOp sw;
  sw.kind = GateKind::swap_extract;
  sw.p = p;
  sw.level = n;
  sw.n_prime = n_prime;
  sw.sites = anchors;
  for (size_t i = 0; i < anchors.size(); ++i)
    sw.ancilla_sites.push_back(ancilla_base + static_cast<i64>(i));
  for (i64 b : blocks)
    sw.parties.push_back(s.partition.labels[static_cast<size_t>(b)]);
  log.push_back(sw);

  // Residual group on the original sites: the members whose anchor shifts
  // vanish mod p^{n'} keep their phases verbatim, and each anchor gains a
  // depth-p^{n-n'} Z stub for its now-zeroed bottom digits.
  ModMatrix constraint(static_cast<i64>(anchors.size()), m);
  for (size_t j = 0; j < anchors.size(); ++j)
    for (i64 i = 0; i < m; ++i)
      constraint.at(static_cast<i64>(j), i) = R.mul(
          depth,
          s.gens[static_cast<size_t>(i)].x[static_cast<size_t>(anchors[j])]);
  const ModMatrix closed = kernel(R, constraint);
  StabilizerGroup residual;
  residual.d = d;
  residual.n_sites = s.n_sites;
  residual.partition = s.partition;
  for (i64 i = 0; i < closed.rows; ++i) {
    PauliOp member = group_element(s, closed.row(i));
    if (vector_part_zero(member)) {
      if (member.gamma2 != 0)
        throw EngineError("extract: a phased identity appeared in the residual");
      continue;
    }
    residual.gens.push_back(std::move(member));
  }
  for (i64 r : anchors) {
    PauliOp stub = identity_op(d, s.n_sites);
    stub.z[static_cast<size_t>(r)] = depth;
    residual.gens.push_back(std::move(stub));
  }
  const ValidationReport vr = validate(residual);
  if (!vr.valid() || !vr.pure)
    throw EngineError("extract: the residual group failed validation");
  s = std::move(residual);

  ExtractionOutcome out;
  out.record.condition = w.condition;
  out.record.level = n_prime;
  out.record.sites = anchors;
  out.record.ancillas = sw.ancilla_sites;
  out.record.parties = sw.parties;
  out.log = std::move(log);
  return out;
}

FactorReport run_factor(StabilizerGroup s, const EngineConfig& cfg) {
  pad_partition(s);
  const PrimePower pp0 = as_prime_power(s.d);
  FactorReport fr;
  fr.p = pp0.p;
  fr.n = pp0.n;
  fr.d = pp0.d;
  const StabilizerGroup initial = s;
  const i64 budget =
      cfg.max_iter > 0 ? cfg.max_iter : pp0.n * (2 * s.n_sites + 1) + 4;
  i64 ancilla_count = 0;

  auto entropies = [&]() {
    std::vector<i64> e;
    for (i64 b = 0; b < static_cast<i64>(s.partition.size()); ++b)
      e.push_back(block_entropy(s, b));
    return e;
  };
  auto measure = [&]() {
    i64 total = 0;
    for (i64 e : entropies()) total += e;
    return std::pair<i64, i64>{as_prime_power(s.d).n, total};
  };

  std::pair<i64, i64> prev = measure();
  bool settled = false;
  while (!settled && fr.iterations < budget) {
    ++fr.iterations;
    try {
      const Classification cls = classify(phase_matrices(s));
      const i64 n_cur = as_prime_power(s.d).n;
      if (cfg.trace) {
        IterationTrace t;
        t.n = n_cur;
        t.condition = cls.condition;
        t.level = cls.level;
        t.witness = cls.dual;
        t.entropies = entropies();
        fr.trace.push_back(std::move(t));
      }
      if (cls.condition == 1) {
        if (n_cur == 1) {
          const std::vector<GateOp> tail = final_rotation(s);
          fr.log.insert(fr.log.end(), tail.begin(), tail.end());
          settled = true;
        } else {
          const std::vector<GateOp> step = reduce_level(s);
          fr.log.insert(fr.log.end(), step.begin(), step.end());
        }
      } else {
        ExtractionOutcome out =
            extract_entanglement(s, cls, s.n_sites + ancilla_count);
        fr.log.insert(fr.log.end(), out.log.begin(), out.log.end());
        if (cls.condition == 2) {
          fr.counts.n_ghz += out.record.level;
        } else {
          std::vector<i64> pr = cls.pair;
          std::sort(pr.begin(), pr.end());
          if (pr.size() != 2 || pr[0] < 0 || pr[1] > 2 || pr[0] == pr[1])
            throw EngineError("run: malformed pair witness");
          if (pr[0] == 0 && pr[1] == 1) fr.counts.n_ab += out.record.level;
          else if (pr[0] == 0 && pr[1] == 2) fr.counts.n_ac += out.record.level;
          else fr.counts.n_bc += out.record.level;
        }
        for (const std::string& party : out.record.parties)
          fr.ancillas.push_back(
              AncillaRecord{party, ipow(pp0.p, out.record.level)});
        ancilla_count += static_cast<i64>(out.record.ancillas.size());
        fr.extractions.push_back(std::move(out.record));
      }
    } catch (const EngineError&) {
      throw;
    } catch (const std::logic_error& e) {
      throw EngineError(std::string("run: engine step failed: ") + e.what());
    }
    if (!settled) {
      const std::pair<i64, i64> cur = measure();
      if (!(cur < prev))
        throw EngineError("run: no progress at iteration " +
                          std::to_string(fr.iterations));
      prev = cur;
    }
  }
  if (!settled)
    throw EngineError("run: iteration budget exhausted after " +
                      std::to_string(fr.iterations) + " steps");
  fr.final_group = s;

  // Unentangled tallies balance each party's level budget exactly.
  for (i64 b = 0; b < 3; ++b) {
    const i64 levels =
        pp0.n * static_cast<i64>(initial.partition.blocks[static_cast<size_t>(b)].size());
    i64 entangled = fr.counts.n_ghz;
    if (b == 0) entangled += fr.counts.n_ab + fr.counts.n_ac;
    if (b == 1) entangled += fr.counts.n_ab + fr.counts.n_bc;
    if (b == 2) entangled += fr.counts.n_ac + fr.counts.n_bc;
    const i64 local = levels - entangled;
    if (local < 0)
      throw EngineError("run: the entanglement tally exceeds a level budget");
    if (b == 0) fr.counts.n_a = local;
    else if (b == 1) fr.counts.n_b = local;
    else fr.counts.n_c = local;
  }

  if (cfg.verify) {
    try {
      DenseState st = state_from_group(initial, cfg.seed, cfg.amp_cap);
      apply_log(st, fr.log, cfg.amp_cap);
      std::vector<std::vector<i64>> groups;
      for (const ExtractionRecord& rec : fr.extractions)
        groups.push_back(rec.ancillas);
      const DenseState want = canonical_state(st.dims, groups);
      fr.fidelity = fidelity(st, want);
      if (fr.fidelity < 1.0 - kReplayTol)
        throw EngineError("run: replay fidelity " + std::to_string(fr.fidelity) +
                          " fell below tolerance");
      fr.verified = true;
    } catch (const CapExceeded&) {
      fr.verify_skipped = true;
    }
  }
  return fr;
}

}  // namespace

i64 block_entropy(const StabilizerGroup& s, i64 block) {
  const PrimePower pp = as_prime_power(s.d);
  const Ring R(s.d);
  const std::vector<i64>& sites = s.partition.blocks.at(static_cast<size_t>(block));
  const i64 m = static_cast<i64>(s.gens.size());
  const i64 weight = pp.n * static_cast<i64>(sites.size());
  if (m == 0) return weight;
  std::vector<char> outside(static_cast<size_t>(s.n_sites), 1);
  for (i64 q : sites) outside[static_cast<size_t>(q)] = 0;
  i64 outside_count = 0;
  for (char k : outside) outside_count += k;

  // log_p of the block-supported subgroup: coefficient vectors that vanish
  // outside the block, counted modulo the vectors that vanish everywhere.
  i64 e_supported;
  if (outside_count == 0) {
    e_supported = pp.n * m;
  } else {
    e_supported = span_exponent(R, pp.p, kernel(R, coordinate_matrix(s, outside)));
  }
  const std::vector<char> everywhere(static_cast<size_t>(s.n_sites), 1);
  const i64 e_relations =
      s.n_sites == 0 ? pp.n * m
                     : span_exponent(R, pp.p, kernel(R, coordinate_matrix(s, everywhere)));
  return weight - (e_supported - e_relations);
}

std::vector<GateOp> reduce_level(StabilizerGroup& s) {
  const ValidationReport vr = validate(s);
  if (!vr.valid() || !vr.pure)
    throw std::invalid_argument("reduce_level: a valid pure group is required");
  const PrimePower pp = as_prime_power(s.d);
  if (pp.n < 2)
    throw std::invalid_argument("reduce_level: the group is already at base level");
  const PhaseMatrixSet pm = phase_matrices(s);
  for (const ModMatrix& mat : pm.mats)
    for (i64 e : mat.a)
      if (mod_floor(e, pp.p) != 0)
        throw std::invalid_argument(
            "reduce_level: a cross-party pairing survives mod p");
  StabilizerGroup work = s;
  try {
    std::vector<GateOp> log = reduce_impl(work, pp);
    s = std::move(work);
    return log;
  } catch (const EngineError&) {
    throw;
  } catch (const std::logic_error& e) {
    throw EngineError(std::string("reduce_level: ") + e.what());
  }
}

std::vector<GateOp> final_rotation(StabilizerGroup& s) {
  const ValidationReport vr = validate(s);
  if (!vr.valid() || !vr.pure)
    throw std::invalid_argument("final_rotation: a valid pure group is required");
  const PrimePower pp = as_prime_power(s.d);
  if (pp.n != 1)
    throw std::invalid_argument(
        "final_rotation: the group must sit at its base level");
  const PhaseMatrixSet pm = phase_matrices(s);
  for (const ModMatrix& mat : pm.mats)
    for (i64 e : mat.a)
      if (e != 0)
        throw std::invalid_argument(
            "final_rotation: a cross-party pairing is still present");
  StabilizerGroup work = s;
  try {
    std::vector<GateOp> log = final_impl(work, pp);
    s = std::move(work);
    return log;
  } catch (const EngineError&) {
    throw;
  } catch (const std::logic_error& e) {
    throw EngineError(std::string("final_rotation: ") + e.what());
  }
}

ExtractionOutcome extract_entanglement(StabilizerGroup& s,
                                       const Classification& witness,
                                       i64 ancilla_base) {
  const ValidationReport vr = validate(s);
  if (!vr.valid() || !vr.pure)
    throw std::invalid_argument(
        "extract_entanglement: a valid pure group is required");
  const PrimePower pp = as_prime_power(s.d);
  if (witness.condition != 2 && witness.condition != 3)
    throw std::invalid_argument(
        "extract_entanglement: the witness must name condition 2 or 3");
  if (s.partition.size() != 3)
    throw std::invalid_argument(
        "extract_entanglement: exactly three parties are required");
  if (witness.dual.size() != s.gens.size())
    throw std::invalid_argument("extract_entanglement: witness length mismatch");
  if (witness.level < 1 || witness.level > pp.n)
    throw std::invalid_argument("extract_entanglement: witness level out of range");
  std::vector<i64> blocks;
  if (witness.condition == 2) {
    blocks = {0, 1, 2};
  } else {
    blocks = witness.pair;
    std::sort(blocks.begin(), blocks.end());
    if (blocks.size() != 2 || blocks[0] < 0 || blocks[1] > 2 ||
        blocks[0] == blocks[1])
      throw std::invalid_argument("extract_entanglement: malformed pair witness");
    if (witness.level != pp.n)
      throw std::invalid_argument(
          "extract_entanglement: a pair witness must be full level");
  }
  if (ancilla_base < s.n_sites)
    throw std::invalid_argument(
        "extract_entanglement: ancilla ids must come after the sites");
  StabilizerGroup work = s;
  try {
    ExtractionOutcome out = extract_impl(work, witness, blocks, ancilla_base, pp);
    s = std::move(work);
    return out;
  } catch (const EngineError&) {
    throw;
  } catch (const std::logic_error& e) {
    throw EngineError(std::string("extract_entanglement: ") + e.what());
  }
}

DecompositionReport run(const StabilizerGroup& s, const EngineConfig& config) {
  const ValidationReport vr = validate(s);
  if (!vr.valid()) {
    std::string msg = "run: the input is not a stabilizer group";
    if (!vr.problems.empty()) msg += ": " + vr.problems.front();
    throw std::invalid_argument(msg);
  }
  if (!vr.pure)
    throw std::invalid_argument("run: a pure (full-rank) group is required");
  {
    StabilizerGroup probe = s;
    pad_partition(probe);
  }
  DecompositionReport report;
  report.d = s.d;
  report.n_sites = s.n_sites;
  report.seed = config.seed;
  std::vector<StabilizerGroup> factors;
  if (factor_prime_powers(s.d).size() > 1) {
    factors = crt_split(s);
  } else {
    factors.push_back(s);
  }
  for (StabilizerGroup& f : factors) {
    FactorReport fr = run_factor(std::move(f), config);
    report.totals.n_ghz += fr.counts.n_ghz;
    report.totals.n_ab += fr.counts.n_ab;
    report.totals.n_ac += fr.counts.n_ac;
    report.totals.n_bc += fr.counts.n_bc;
    report.totals.n_a += fr.counts.n_a;
    report.totals.n_b += fr.counts.n_b;
    report.totals.n_c += fr.counts.n_c;
    report.factors.push_back(std::move(fr));
  }
  return report;
}

}  // namespace stabdec
