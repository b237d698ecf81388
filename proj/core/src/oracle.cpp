#include "stabdec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace stabdec {

namespace {

using cd = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

i64 checked_product(const std::vector<i64>& dims) {
  i64 total = 1;
  for (i64 dim : dims) {
    if (dim < 2) throw std::invalid_argument("state: site dimensions must be >= 2");
    if (total > (i64{1} << 40) / dim) throw std::invalid_argument("state: dimension overflow");
    total *= dim;
  }
  return total;
}

std::vector<i64> strides_of(const std::vector<i64>& dims) {
  std::vector<i64> s(dims.size(), 1);
  for (i64 q = static_cast<i64>(dims.size()) - 2; q >= 0; --q) s[q] = s[q + 1] * dims[q + 1];
  return s;
}

// exp(2*pi*i * num / den)
cd root_phase(i64 num, i64 den) {
  const double ang = 2.0 * kPi * static_cast<double>(mod_floor(num, den)) / static_cast<double>(den);
  return {std::cos(ang), std::sin(ang)};
}

double l2_norm(const std::vector<cd>& v) {
  double s = 0.0;
  for (const cd& a : v) s += std::norm(a);
  return std::sqrt(s);
}

// Smallest m with the exponent vectors of g^m all zero.
i64 vector_order(const PauliOp& g) {
  i64 m = 1;
  for (i64 q = 0; q < g.sites(); ++q) {
    m = std::lcm(m, g.d / std::gcd(g.x[q], g.d));
    m = std::lcm(m, g.d / std::gcd(g.z[q], g.d));
  }
  return m;
}

void check_gate_sites(const GateOp& g, i64 n_sites) {
  std::set<i64> seen;
  for (i64 q : g.sites) {
    if (q < 0 || q >= n_sites) throw std::invalid_argument("apply_gate: site out of range");
    if (!seen.insert(q).second) throw std::invalid_argument("apply_gate: repeated site");
  }
}

}  // namespace

i64 state_size(const std::vector<i64>& dims) { return checked_product(dims); }

DenseState zero_state(const std::vector<i64>& dims) {
  DenseState st;
  st.dims = dims;
  st.amp.assign(checked_product(dims), cd{0.0, 0.0});
  if (!st.amp.empty()) st.amp[0] = cd{1.0, 0.0};
  return st;
}

void apply_pauli(DenseState& st, const PauliOp& a) {
  if (a.sites() != static_cast<i64>(st.dims.size()))
    throw std::invalid_argument("apply_pauli: site count mismatch");
  for (i64 dim : st.dims)
    if (dim != a.d) throw std::invalid_argument("apply_pauli: state is not uniform at d");
  const i64 n = a.sites();
  const i64 size = st.size();
  const auto str = strides_of(st.dims);
  const cd global = root_phase(mod_floor(a.gamma2, 2 * a.d), 2 * a.d);
  std::vector<cd> out(size, cd{0.0, 0.0});
  for (i64 idx = 0; idx < size; ++idx) {
    if (st.amp[idx] == cd{0.0, 0.0}) continue;
    i64 zdot = 0;
    i64 target = idx;
    for (i64 q = 0; q < n; ++q) {
      const i64 m = (idx / str[q]) % a.d;
      zdot += a.z[q] * m;
      const i64 shifted = mod_floor(m + a.x[q], a.d);
      target += (shifted - m) * str[q];
    }
    out[target] += global * root_phase(zdot, a.d) * st.amp[idx];
  }
  st.amp = std::move(out);
}

double stabilization_residual(const StabilizerGroup& s, const DenseState& st) {
  double worst = 0.0;
  for (const PauliOp& g : s.gens) {
    DenseState moved = st;
    apply_pauli(moved, g);
    double diff = 0.0;
    for (i64 i = 0; i < st.size(); ++i) diff += std::norm(moved.amp[i] - st.amp[i]);
    worst = std::max(worst, std::sqrt(diff));
  }
  return worst;
}

DenseState state_from_group(const StabilizerGroup& s, std::uint64_t seed, i64 amp_cap) {
  std::vector<i64> dims(static_cast<size_t>(s.n_sites), s.d);
  const i64 size = checked_product(dims);
  if (size > amp_cap)
    throw CapExceeded("state_from_group: " + std::to_string(size) + " amplitudes exceed cap " +
                      std::to_string(amp_cap));
  for (const PauliOp& g : s.gens) {
    if (g.d != s.d || g.sites() != s.n_sites)
      throw std::invalid_argument("state_from_group: generator shape mismatch");
    if (!is_identity(pauli_power(g, vector_order(g))))
      throw std::invalid_argument(
          "state_from_group: generator power carries a nonvanishing phase");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 32; ++attempt) {
    DenseState v;
    v.dims = dims;
    v.amp.resize(size);
    for (cd& a : v.amp) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a = cd{re, im};
    }
    // Average each generator's cyclic group; the projectors commute, so the
    // sequential product is the projector onto the joint +1 eigenspace.
    for (const PauliOp& g : s.gens) {
      const i64 m0 = vector_order(g);
      DenseState cur = v;
      DenseState acc = v;
      for (i64 k = 1; k < m0; ++k) {
        apply_pauli(cur, g);
        for (i64 i = 0; i < size; ++i) acc.amp[i] += cur.amp[i];
      }
      const double inv = 1.0 / static_cast<double>(m0);
      for (cd& a : acc.amp) a *= inv;
      v = std::move(acc);
    }
    const double norm = l2_norm(v.amp);
    if (norm < 1e-8) continue;
    for (cd& a : v.amp) a /= norm;
    if (stabilization_residual(s, v) <= kOracleTol) return v;
  }
  throw std::runtime_error("state_from_group: projection never produced a stabilized vector");
}

void apply_gate(DenseState& st, const GateOp& g, i64 amp_cap) {
  const i64 n = static_cast<i64>(st.dims.size());
  check_gate_sites(g, n);
  const i64 comp = gate_dimension(g);
  for (i64 q : g.sites)
    if (st.dims[q] % comp != 0)
      throw std::invalid_argument("apply_gate: gate level exceeds the site dimension");
  const auto str = strides_of(st.dims);
  const i64 size = st.size();

  // Stride of one unit of the top p^level digit at site q.
  auto top_stride = [&](i64 q) { return str[q] * (st.dims[q] / comp); };
  auto top_digit = [&](i64 idx, i64 q) {
    return ((idx / str[q]) % st.dims[q]) / (st.dims[q] / comp);
  };

  switch (g.kind) {
    case GateKind::fourier: {
      if (g.sites.size() != 1) throw std::invalid_argument("apply_gate: fourier takes one site");
      const i64 q = g.sites[0];
      const double scale = 1.0 / std::sqrt(static_cast<double>(comp));
      std::vector<cd> out(size, cd{0.0, 0.0});
      for (i64 idx = 0; idx < size; ++idx) {
        if (st.amp[idx] == cd{0.0, 0.0}) continue;
        const i64 j = top_digit(idx, q);
        for (i64 k = 0; k < comp; ++k)
          out[idx + (k - j) * top_stride(q)] += scale * root_phase(j * k, comp) * st.amp[idx];
      }
      st.amp = std::move(out);
      return;
    }
    case GateKind::phase: {
      if (g.sites.size() != 1) throw std::invalid_argument("apply_gate: phase takes one site");
      const i64 q = g.sites[0];
      const i64 kappa = (comp % 2 == 0) ? 1 : comp + 1;
      for (i64 idx = 0; idx < size; ++idx) {
        const i64 j = top_digit(idx, q);
        st.amp[idx] *= root_phase(kappa * g.param % (2 * comp) * j * j, 2 * comp);
      }
      return;
    }
    case GateKind::cz: {
      if (g.sites.size() != 2) throw std::invalid_argument("apply_gate: cz takes two sites");
      for (i64 idx = 0; idx < size; ++idx) {
        const i64 j = top_digit(idx, g.sites[0]);
        const i64 k = top_digit(idx, g.sites[1]);
        st.amp[idx] *= root_phase(mod_floor(g.param, comp) * j * k, comp);
      }
      return;
    }
    case GateKind::mult: {
      if (g.sites.size() != 1) throw std::invalid_argument("apply_gate: mult takes one site");
      Ring R(comp);
      if (!R.is_unit(g.param))
        throw std::invalid_argument("apply_gate: mult parameter must be a unit");
      const i64 q = g.sites[0];
      std::vector<cd> out(size, cd{0.0, 0.0});
      for (i64 idx = 0; idx < size; ++idx) {
        const i64 j = top_digit(idx, q);
        out[idx + (R.mul(g.param, j) - j) * top_stride(q)] = st.amp[idx];
      }
      st.amp = std::move(out);
      return;
    }
    case GateKind::pauli: {
      if (g.pauli_x.size() != g.sites.size() || g.pauli_z.size() != g.sites.size())
        throw std::invalid_argument("apply_gate: pauli exponents misaligned with sites");
      std::vector<cd> out(size, cd{0.0, 0.0});
      for (i64 idx = 0; idx < size; ++idx) {
        if (st.amp[idx] == cd{0.0, 0.0}) continue;
        i64 zdot = 0;
        i64 target = idx;
        for (size_t i = 0; i < g.sites.size(); ++i) {
          const i64 q = g.sites[i];
          const i64 j = top_digit(idx, q);
          zdot += g.pauli_z[i] * j;
          const i64 shifted = mod_floor(j + g.pauli_x[i], comp);
          target += (shifted - j) * top_stride(q);
        }
        out[target] += root_phase(zdot, comp) * st.amp[idx];
      }
      st.amp = std::move(out);
      return;
    }
    case GateKind::rescale: {
      // |p*j + l>_top -> sum_k w_p^{k*l} |(comp/p)*k + j>_top / sqrt(p):
      // the lowest base-p digit of the top component Fourier-transforms into
      // the new leading digit and the rest shift down one place.
      if (g.sites.size() != 1) throw std::invalid_argument("apply_gate: rescale takes one site");
      const i64 q = g.sites[0];
      const i64 p = g.p;
      const double scale = 1.0 / std::sqrt(static_cast<double>(p));
      std::vector<cd> out(size, cd{0.0, 0.0});
      for (i64 idx = 0; idx < size; ++idx) {
        if (st.amp[idx] == cd{0.0, 0.0}) continue;
        const i64 m = top_digit(idx, q);
        const i64 j = m / p;
        const i64 l = m % p;
        for (i64 k = 0; k < p; ++k) {
          const i64 moved = (comp / p) * k + j;
          out[idx + (moved - m) * top_stride(q)] += scale * root_phase(k * l, p) * st.amp[idx];
        }
      }
      st.amp = std::move(out);
      return;
    }
    case GateKind::swap_extract: {
      if (g.n_prime < 1 || g.n_prime > g.level)
        throw std::invalid_argument("apply_gate: swap level out of range");
      if (g.ancilla_sites.size() != g.sites.size())
        throw std::invalid_argument("apply_gate: one ancilla per swapped site");
      i64 anc_dim = 1;
      for (i64 i = 0; i < g.n_prime; ++i) anc_dim *= g.p;
      for (size_t i = 0; i < g.ancilla_sites.size(); ++i)
        if (g.ancilla_sites[i] != n + static_cast<i64>(i))
          throw std::invalid_argument("apply_gate: ancillas must append to the site list");

      std::vector<i64> new_dims = st.dims;
      new_dims.insert(new_dims.end(), g.sites.size(), anc_dim);
      const i64 new_size = checked_product(new_dims);
      if (new_size > amp_cap)
        throw CapExceeded("apply_gate: " + std::to_string(new_size) +
                          " amplitudes exceed cap " + std::to_string(amp_cap));
      const i64 anc_total = new_size / size;
      std::vector<cd> grown(new_size, cd{0.0, 0.0});
      for (i64 idx = 0; idx < size; ++idx) grown[idx * anc_total] = st.amp[idx];
      st.dims = std::move(new_dims);
      st.amp = std::move(grown);

      const auto nstr = strides_of(st.dims);
      for (size_t i = 0; i < g.sites.size(); ++i) {
        const i64 r = g.sites[i];
        const i64 anc = n + static_cast<i64>(i);
        const i64 block = st.dims[r] / comp;
        std::vector<cd> out(new_size, cd{0.0, 0.0});
        for (i64 idx = 0; idx < new_size; ++idx) {
          if (st.amp[idx] == cd{0.0, 0.0}) continue;
          const i64 m_top = ((idx / nstr[r]) % st.dims[r]) / block;
          const i64 low = m_top % anc_dim;
          const i64 a = (idx / nstr[anc]) % anc_dim;
          const i64 swapped_top = (m_top / anc_dim) * anc_dim + a;
          const i64 target =
              idx + (swapped_top - m_top) * block * nstr[r] + (low - a) * nstr[anc];
          out[target] = st.amp[idx];
        }
        st.amp = std::move(out);
      }
      return;
    }
  }
  throw std::logic_error("apply_gate: unhandled kind");
}

void apply_log(DenseState& st, const std::vector<GateOp>& log, i64 amp_cap) {
  for (const GateOp& g : log) apply_gate(st, g, amp_cap);
}

double fidelity(const DenseState& a, const DenseState& b) {
  if (a.dims != b.dims) throw std::invalid_argument("fidelity: shapes differ");
  cd overlap{0.0, 0.0};
  for (i64 i = 0; i < a.size(); ++i) overlap += std::conj(a.amp[i]) * b.amp[i];
  return std::abs(overlap);
}

i64 reduced_rank(const DenseState& st, const std::vector<i64>& sites) {
  const i64 n = static_cast<i64>(st.dims.size());
  std::vector<bool> chosen(static_cast<size_t>(n), false);
  for (i64 q : sites) {
    if (q < 0 || q >= n) throw std::invalid_argument("reduced_rank: site out of range");
    if (chosen[q]) throw std::invalid_argument("reduced_rank: repeated site");
    chosen[q] = true;
  }
  const auto str = strides_of(st.dims);
  i64 rows = 1, cols = 1;
  for (i64 q = 0; q < n; ++q) (chosen[q] ? rows : cols) *= st.dims[q];
  Eigen::MatrixXcd m(rows, cols);
  for (i64 idx = 0; idx < st.size(); ++idx) {
    i64 r = 0, c = 0;
    for (i64 q = 0; q < n; ++q) {
      const i64 digit = (idx / str[q]) % st.dims[q];
      if (chosen[q])
        r = r * st.dims[q] + digit;
      else
        c = c * st.dims[q] + digit;
    }
    m(r, c) = st.amp[idx];
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  i64 rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol) ++rank;
  return rank;
}

DenseState canonical_state(const std::vector<i64>& dims,
                           const std::vector<std::vector<i64>>& equal_groups) {
  DenseState st = zero_state(dims);
  if (equal_groups.empty()) return st;
  const i64 n = static_cast<i64>(dims.size());
  const auto str = strides_of(dims);
  std::vector<bool> used(static_cast<size_t>(n), false);
  double weight = 1.0;
  for (const auto& group : equal_groups) {
    if (group.empty()) throw std::invalid_argument("canonical_state: empty group");
    for (i64 q : group) {
      if (q < 0 || q >= n) throw std::invalid_argument("canonical_state: site out of range");
      if (used[q]) throw std::invalid_argument("canonical_state: site in two groups");
      used[q] = true;
      if (dims[q] != dims[group[0]])
        throw std::invalid_argument("canonical_state: group dimensions differ");
    }
    weight /= std::sqrt(static_cast<double>(dims[group[0]]));
  }
  st.amp.assign(st.amp.size(), cd{0.0, 0.0});
  // Mixed-radix sweep over one shared value per group.
  std::vector<i64> value(equal_groups.size(), 0);
  while (true) {
    i64 idx = 0;
    for (size_t gi = 0; gi < equal_groups.size(); ++gi)
      for (i64 q : equal_groups[gi]) idx += value[gi] * str[q];
    st.amp[idx] = cd{weight, 0.0};
    size_t carry = 0;
    while (carry < value.size()) {
      if (++value[carry] < dims[equal_groups[carry][0]]) break;
      value[carry] = 0;
      ++carry;
    }
    if (carry == value.size()) break;
  }
  return st;
}

std::vector<std::vector<cd>> gate_matrix(const GateOp& g, const std::vector<i64>& target_dims) {
  if (target_dims.size() != g.sites.size())
    throw std::invalid_argument("gate_matrix: one dimension per gate site");
  GateOp local = g;
  for (size_t i = 0; i < local.sites.size(); ++i) local.sites[i] = static_cast<i64>(i);
  for (size_t i = 0; i < local.ancilla_sites.size(); ++i)
    local.ancilla_sites[i] = static_cast<i64>(target_dims.size() + i);
  const i64 in_size = checked_product(target_dims);
  std::vector<std::vector<cd>> out;
  for (i64 col = 0; col < in_size; ++col) {
    DenseState st;
    st.dims = target_dims;
    st.amp.assign(in_size, cd{0.0, 0.0});
    st.amp[col] = cd{1.0, 0.0};
    apply_gate(st, local);
    if (out.empty()) out.assign(st.amp.size(), std::vector<cd>(in_size, cd{0.0, 0.0}));
    for (i64 row = 0; row < st.size(); ++row) out[row][col] = st.amp[row];
  }
  return out;
}

StabilizerGroup random_stabilizer_group(const RandomGroupParams& params, std::uint64_t seed) {
  if (params.d < 2) throw std::invalid_argument("random_stabilizer_group: d must be >= 2");
  if (params.n_sites < 1)
    throw std::invalid_argument("random_stabilizer_group: need at least one site");
  Ring R(params.d);
  const auto& factors = R.factors();
  std::mt19937_64 rng(seed);
  auto draw = [&](i64 lo, i64 hi) {  // uniform-ish on [lo, hi], deterministic across builds
    return lo + static_cast<i64>(rng() % static_cast<u64>(hi - lo + 1));
  };
  auto pow_i = [](i64 b, i64 e) {
    i64 r = 1;
    for (i64 i = 0; i < e; ++i) r *= b;
    return r;
  };
  // CRT-combine per-factor exponents into one exponent mod d.
  auto crt_exp = [&](const std::vector<i64>& per_factor) {
    i64 x = 0;
    for (size_t f = 0; f < factors.size(); ++f) {
      const i64 q = factors[f].d;
      const i64 m = params.d / q;
      const i64 t = Ring(q).inv(mod_floor(m, q));
      x = R.add(x, R.mul(mod_floor(per_factor[f], q), R.mul(mod_floor(m, params.d), t)));
    }
    return x;
  };

  StabilizerGroup s;
  s.d = params.d;
  s.n_sites = params.n_sites;

  i64 built = 0;
  for (i64 site = 0; site < params.n_sites; ++site) {
    const i64 remaining_after = params.n_sites - site - 1;
    const bool skip = params.gens_max > 0 && built + 1 > params.gens_max;
    const bool single =
        !skip && params.gens_max > 0 && built + 2 + remaining_after > params.gens_max;
    if (skip) continue;
    std::vector<i64> ks(factors.size(), 0);
    if (single) {
      const bool z_side = (site == params.protect_site) ? true : (rng() % 2 == 0);
      for (size_t f = 0; f < factors.size(); ++f) ks[f] = z_side ? 0 : factors[f].n;
    } else {
      for (size_t f = 0; f < factors.size(); ++f)
        ks[f] = (site == params.protect_site) ? draw(0, factors[f].n - 1)
                                              : draw(0, factors[f].n);
    }
    std::vector<i64> ex(factors.size()), ez(factors.size());
    for (size_t f = 0; f < factors.size(); ++f) {
      ex[f] = mod_floor(pow_i(factors[f].p, factors[f].n - ks[f]), factors[f].d);
      ez[f] = mod_floor(pow_i(factors[f].p, ks[f]), factors[f].d);
    }
    const i64 x_exp = crt_exp(ex);
    const i64 z_exp = crt_exp(ez);
    if (x_exp != 0) {
      std::vector<i64> x(static_cast<size_t>(params.n_sites), 0);
      x[site] = x_exp;
      s.gens.push_back(make_pauli(params.d, x, std::vector<i64>(x.size(), 0), 0));
      ++built;
    }
    if (z_exp != 0) {
      std::vector<i64> z(static_cast<size_t>(params.n_sites), 0);
      z[site] = z_exp;
      s.gens.push_back(make_pauli(params.d, std::vector<i64>(z.size(), 0), z, 0));
      ++built;
    }
  }

  const i64 kinds = params.n_sites >= 2 ? 5 : 4;
  for (i64 t = 0; t < params.gate_count; ++t) {
    GateOp gate;
    gate.p = params.d;
    gate.level = 1;
    i64 roll = draw(0, kinds - 1);
    switch (roll) {
      case 0: {  // fourier, diverted to a phase gate on the protected site
        const i64 q = draw(0, params.n_sites - 1);
        if (q == params.protect_site) {
          gate.kind = GateKind::phase;
          gate.sites = {q};
          gate.param = draw(1, 2 * params.d - 1);
        } else {
          gate.kind = GateKind::fourier;
          gate.sites = {q};
        }
        break;
      }
      case 1: {
        gate.kind = GateKind::phase;
        gate.sites = {draw(0, params.n_sites - 1)};
        gate.param = draw(1, 2 * params.d - 1);
        break;
      }
      case 2: {
        gate.kind = GateKind::mult;
        gate.sites = {draw(0, params.n_sites - 1)};
        gate.param = 1;
        for (int tries = 0; tries < 64; ++tries) {
          const i64 a = draw(1, params.d - 1);
          if (R.is_unit(a)) {
            gate.param = a;
            break;
          }
        }
        break;
      }
      case 3: {
        gate.kind = GateKind::pauli;
        for (i64 q = 0; q < params.n_sites; ++q) {
          gate.sites.push_back(q);
          const bool frozen = (q == params.protect_site);
          gate.pauli_x.push_back(frozen ? 0 : draw(0, params.d - 1));
          gate.pauli_z.push_back(frozen ? 0 : draw(0, params.d - 1));
        }
        break;
      }
      default: {
        gate.kind = GateKind::cz;
        const i64 a = draw(0, params.n_sites - 1);
        i64 b = draw(0, params.n_sites - 2);
        if (b >= a) ++b;
        gate.sites = {a, b};
        gate.param = draw(1, params.d - 1);
        break;
      }
    }
    for (PauliOp& gen : s.gens) gen = conjugate_by_gate(gate, gen);
  }

  s.partition.labels = {"a", "b", "c"};
  s.partition.blocks.assign(3, {});
  for (i64 q = 0; q < params.n_sites; ++q)
    s.partition.blocks[static_cast<size_t>(draw(0, 2))].push_back(q);
  return s;
}

}  // namespace stabdec
