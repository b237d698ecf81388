#include "stabdec/clifford.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace stabdec {
namespace {

i64 ipow(i64 base, i64 exp) {
  i64 r = 1;
  for (i64 i = 0; i < exp; ++i) r *= base;
  return r;
}

GateOp make_gate(GateKind kind, i64 p, i64 level, std::vector<i64> sites, i64 param) {
  GateOp g;
  g.kind = kind;
  g.p = p;
  g.level = level;
  g.sites = std::move(sites);
  g.param = param;
  return g;
}

// Row action of elementary gate conjugations on stacked (x | z) coordinate
// rows.  Every method updates all rows of *mat and, when rec is set, appends
// the op in application order.  Derived actions are recorded through their
// elementary expansions so the matrix and the record never diverge.
struct ActionFrame {
  Ring R;
  i64 m = 0;
  ModMatrix* mat = nullptr;
  std::vector<GateOp>* rec = nullptr;
  i64 base = 2, level = 1;

  i64& at(i64 r, i64 c) const { return mat->at(r, c); }

  // (x_q, z_q) -> (-z_q, x_q): X -> Z, Z -> X^{-1}.
  void fourier(i64 q) {
    for (i64 r = 0; r < mat->rows; ++r) {
      i64 x = at(r, q), z = at(r, m + q);
      at(r, q) = R.neg(z);
      at(r, m + q) = x;
    }
    if (rec) rec->push_back(make_gate(GateKind::fourier, base, level, {q}, 0));
  }
  // (x_q, z_q) -> (a x_q, a^{-1} z_q).
  void mult(i64 q, i64 a) {
    a = R.r(a);
    if (a == 1) return;
    i64 ai = R.inv(a);
    for (i64 r = 0; r < mat->rows; ++r) {
      at(r, q) = R.mul(a, at(r, q));
      at(r, m + q) = R.mul(ai, at(r, m + q));
    }
    if (rec) rec->push_back(make_gate(GateKind::mult, base, level, {q}, a));
  }
  // z_q += c x_q.
  void phase(i64 q, i64 c) {
    c = R.r(c);
    if (c == 0) return;
    for (i64 r = 0; r < mat->rows; ++r)
      at(r, m + q) = R.add(at(r, m + q), R.mul(c, at(r, q)));
    if (rec) rec->push_back(make_gate(GateKind::phase, base, level, {q}, c));
  }
  // z_q += c x_t and z_t += c x_q.
  void cz(i64 q, i64 t, i64 c) {
    c = R.r(c);
    if (c == 0) return;
    for (i64 r = 0; r < mat->rows; ++r) {
      i64 xq = at(r, q), xt = at(r, t);
      at(r, m + q) = R.add(at(r, m + q), R.mul(c, xt));
      at(r, m + t) = R.add(at(r, m + t), R.mul(c, xq));
    }
    if (rec) rec->push_back(make_gate(GateKind::cz, base, level, {q, t}, c));
  }
  void fourier_inv(i64 q) {
    mult(q, R.d() - 1);
    fourier(q);
  }
  // x_j += c x_i, z_i -= c z_j.
  void cx(i64 i, i64 j, i64 c) {
    c = R.r(c);
    if (c == 0) return;
    fourier(j);
    cz(i, j, c);
    fourier(j);
    mult(j, R.d() - 1);
  }
  void swapq(i64 i, i64 j) {
    cx(i, j, 1);
    cx(j, i, R.d() - 1);
    cx(i, j, 1);
    mult(i, R.d() - 1);
  }
  // x_i += c z_j, x_j += c z_i.
  void xxshear(i64 i, i64 j, i64 c) {
    c = R.r(c);
    if (c == 0) return;
    fourier(i);
    fourier(j);
    cz(i, j, R.neg(c));
    fourier_inv(i);
    fourier_inv(j);
  }
  // x_q += c z_q.
  void ptilde(i64 q, i64 c) {
    c = R.r(c);
    if (c == 0) return;
    fourier(q);
    phase(q, R.neg(c));
    fourier_inv(q);
  }
};

i64 valuation(i64 p, i64 n, i64 v) {
  if (v == 0) return n;
  i64 t = 0;
  while (v % p == 0) {
    v /= p;
    ++t;
  }
  return t;
}

std::vector<i64> unit_row(i64 len, i64 pos) {
  std::vector<i64> v(static_cast<size_t>(len), 0);
  v[static_cast<size_t>(pos)] = 1;
  return v;
}

}  // namespace

ModMatrix symplectic_form(i64 m, i64 d) {
  ModMatrix om(2 * m, 2 * m);
  for (i64 i = 0; i < m; ++i) {
    om.at(i, m + i) = 1 % d;
    om.at(m + i, i) = d - 1;
  }
  return om;
}

bool is_symplectic(const Ring& R, const ModMatrix& m) {
  if (m.rows != m.cols || m.rows % 2 != 0) return false;
  ModMatrix om = symplectic_form(m.rows / 2, R.d());
  ModMatrix lhs = mat_mul(R, mat_mul(R, m, om), transpose(m));
  return lhs == om;
}

LocalClifford clifford_from_symplectic(std::string party, std::vector<i64> qudits,
                                       i64 d, ModMatrix symplectic) {
  i64 m = static_cast<i64>(qudits.size());
  if (symplectic.rows != 2 * m || symplectic.cols != 2 * m)
    throw std::invalid_argument("clifford_from_symplectic: shape mismatch");
  Ring R(d);
  for (i64& e : symplectic.a) e = R.r(e);
  if (!is_symplectic(R, symplectic))
    throw std::invalid_argument("clifford_from_symplectic: matrix is not symplectic");
  LocalClifford lc;
  lc.party = std::move(party);
  lc.qudits = std::move(qudits);
  lc.d = d;
  lc.symplectic = std::move(symplectic);
  auto image_of = [&](i64 row) {
    PauliOp op = identity_op(d, m);
    i64 dot = 0;
    for (i64 q = 0; q < m; ++q) {
      op.x[static_cast<size_t>(q)] = lc.symplectic.at(row, q);
      op.z[static_cast<size_t>(q)] = lc.symplectic.at(row, m + q);
      dot += op.x[static_cast<size_t>(q)] * op.z[static_cast<size_t>(q)];
    }
    op.gamma2 = ((d - 1) % 2) * (dot % 2);
    return op;
  };
  for (i64 i = 0; i < m; ++i) lc.image_x.push_back(image_of(i));
  for (i64 i = 0; i < m; ++i) lc.image_z.push_back(image_of(m + i));
  return lc;
}

std::vector<GateOp> compile_to_elementary(const LocalClifford& lc) {
  PrimePower pp = as_prime_power(lc.d);
  i64 m = static_cast<i64>(lc.qudits.size());
  Ring R(lc.d);
  const i64 D = lc.d;
  if (lc.symplectic.rows != 2 * m || lc.symplectic.cols != 2 * m)
    throw std::invalid_argument("compile_to_elementary: symplectic shape mismatch");
  if (!is_symplectic(R, lc.symplectic))
    throw std::invalid_argument("compile_to_elementary: matrix is not symplectic");
  if (static_cast<i64>(lc.image_x.size()) != m ||
      static_cast<i64>(lc.image_z.size()) != m)
    throw std::invalid_argument("compile_to_elementary: image count mismatch");
  for (i64 i = 0; i < m; ++i) {
    for (i64 side = 0; side < 2; ++side) {
      const PauliOp& img = side == 0 ? lc.image_x[static_cast<size_t>(i)]
                                     : lc.image_z[static_cast<size_t>(i)];
      i64 row = side == 0 ? i : m + i;
      if (img.d != D || img.sites() != m)
        throw std::invalid_argument("compile_to_elementary: image dimension mismatch");
      i64 dot = 0;
      for (i64 q = 0; q < m; ++q) {
        if (R.r(img.x[static_cast<size_t>(q)]) != lc.symplectic.at(row, q) ||
            R.r(img.z[static_cast<size_t>(q)]) != lc.symplectic.at(row, m + q))
          throw std::invalid_argument(
              "compile_to_elementary: image disagrees with symplectic row");
        dot += img.x[static_cast<size_t>(q)] * img.z[static_cast<size_t>(q)];
      }
      if (mod_floor(img.gamma2 - (D - 1) * dot, 2) != 0)
        throw std::invalid_argument("compile_to_elementary: image phase parity");
    }
  }
  if (m == 0) return {};

  // Reduce a copy of the symplectic matrix to the identity with elementary
  // row actions; the replayed circuit is then the reversed inverses.
  ModMatrix red = lc.symplectic;
  std::vector<GateOp> rec;
  ActionFrame f{R, m, &red, &rec, pp.p, pp.n};
  for (i64 i = 0; i < m; ++i) {
    i64 uj = -1;
    bool on_z = false;
    for (i64 j = i; j < m && uj < 0; ++j)
      if (R.is_unit(red.at(i, j))) uj = j;
    if (uj < 0)
      for (i64 j = i; j < m && uj < 0; ++j)
        if (R.is_unit(red.at(i, m + j))) {
          uj = j;
          on_z = true;
        }
    if (uj < 0) throw std::logic_error("compile_to_elementary: no unit pivot");
    if (on_z) f.fourier(uj);
    if (uj != i) f.swapq(i, uj);
    f.mult(i, R.inv(red.at(i, i)));
    for (i64 j = i + 1; j < m; ++j) f.cx(i, j, R.neg(red.at(i, j)));
    for (i64 j = i + 1; j < m; ++j) f.cz(i, j, R.neg(red.at(i, m + j)));
    f.phase(i, R.neg(red.at(i, m + i)));
    if (red.at(m + i, m + i) != 1)
      throw std::logic_error("compile_to_elementary: pairing invariant broken");
    for (i64 j = i + 1; j < m; ++j) f.cx(j, i, red.at(m + i, m + j));
    for (i64 j = i + 1; j < m; ++j) f.xxshear(i, j, R.neg(red.at(m + i, j)));
    f.ptilde(i, R.neg(red.at(m + i, i)));
  }
  if (!(red == ModMatrix::identity(2 * m)))
    throw std::logic_error("compile_to_elementary: reduction failed");

  std::vector<GateOp> out;
  for (auto it = rec.rbegin(); it != rec.rend(); ++it) {
    switch (it->kind) {
      case GateKind::fourier:
        out.push_back(make_gate(GateKind::fourier, pp.p, pp.n, it->sites, 0));
        if (D > 2)
          out.push_back(make_gate(GateKind::mult, pp.p, pp.n, it->sites, D - 1));
        break;
      case GateKind::mult:
        out.push_back(make_gate(GateKind::mult, pp.p, pp.n, it->sites, R.inv(it->param)));
        break;
      case GateKind::phase:
        out.push_back(
            make_gate(GateKind::phase, pp.p, pp.n, it->sites, mod_floor(-it->param, 2 * D)));
        break;
      case GateKind::cz:
        out.push_back(
            make_gate(GateKind::cz, pp.p, pp.n, it->sites, mod_floor(-it->param, D)));
        break;
      default:
        throw std::logic_error("compile_to_elementary: unexpected recorded op");
    }
  }

  // Phase reconciliation: the gate list realizes the right row action but
  // generally not the mandated image phases.  A prepended Pauli nu shifts
  // the phase of X_i by 2 z_nu[i] and of Z_i by -2 x_nu[i], and scalars pass
  // through conjugation, so the defect determines nu coordinate by
  // coordinate.
  auto conj_through = [&](const std::vector<GateOp>& gates, PauliOp op) {
    for (const GateOp& g : gates) op = conjugate_by_gate(g, op);
    return op;
  };
  std::vector<i64> xnu(static_cast<size_t>(m), 0), znu(static_cast<size_t>(m), 0);
  bool need = false;
  for (i64 i = 0; i < m; ++i) {
    PauliOp xi = identity_op(D, m);
    xi.x[static_cast<size_t>(i)] = 1;
    PauliOp img = conj_through(out, xi);
    const PauliOp& tx = lc.image_x[static_cast<size_t>(i)];
    if (img.x != tx.x || img.z != tx.z)
      throw std::logic_error("compile_to_elementary: image vector mismatch");
    i64 dg = mod_floor(tx.gamma2 - img.gamma2, 2 * D);
    if (dg % 2 != 0) throw std::logic_error("compile_to_elementary: odd phase defect");
    znu[static_cast<size_t>(i)] = R.r(dg / 2);

    PauliOp zi = identity_op(D, m);
    zi.z[static_cast<size_t>(i)] = 1;
    img = conj_through(out, zi);
    const PauliOp& tz = lc.image_z[static_cast<size_t>(i)];
    if (img.x != tz.x || img.z != tz.z)
      throw std::logic_error("compile_to_elementary: image vector mismatch");
    dg = mod_floor(tz.gamma2 - img.gamma2, 2 * D);
    if (dg % 2 != 0) throw std::logic_error("compile_to_elementary: odd phase defect");
    xnu[static_cast<size_t>(i)] = R.r(mod_floor(-dg / 2, D));
    if (xnu[static_cast<size_t>(i)] != 0 || znu[static_cast<size_t>(i)] != 0) need = true;
  }
  if (need) {
    GateOp nu = make_gate(GateKind::pauli, pp.p, pp.n, {}, 0);
    for (i64 q = 0; q < m; ++q) nu.sites.push_back(q);
    nu.pauli_x = xnu;
    nu.pauli_z = znu;
    out.insert(out.begin(), nu);
  }
  for (i64 i = 0; i < m; ++i) {
    PauliOp xi = identity_op(D, m);
    xi.x[static_cast<size_t>(i)] = 1;
    PauliOp zi = identity_op(D, m);
    zi.z[static_cast<size_t>(i)] = 1;
    if (!(conj_through(out, xi) == lc.image_x[static_cast<size_t>(i)]) ||
        !(conj_through(out, zi) == lc.image_z[static_cast<size_t>(i)]))
      throw std::logic_error("compile_to_elementary: reconciliation failed");
  }

  for (GateOp& g : out)
    for (i64& s : g.sites) s = lc.qudits[static_cast<size_t>(s)];
  return out;
}

std::vector<GateOp> synth_map_to_z(i64 d, const std::vector<i64>& qudits,
                                   const std::vector<i64>& u) {
  PrimePower pp = as_prime_power(d);
  i64 m = static_cast<i64>(qudits.size());
  if (static_cast<i64>(u.size()) != 2 * m)
    throw std::invalid_argument("synth_map_to_z: restriction length mismatch");
  Ring R(d);
  ModMatrix row(1, 2 * m);
  bool nonzero = false;
  for (i64 c = 0; c < 2 * m; ++c) {
    row.at(0, c) = R.r(u[static_cast<size_t>(c)]);
    if (row.at(0, c) != 0) nonzero = true;
  }
  if (!nonzero) throw std::invalid_argument("synth_map_to_z: zero restriction");

  std::vector<GateOp> rec;
  ActionFrame f{R, m, &row, &rec, pp.p, pp.n};
  auto val = [&](i64 v) { return valuation(pp.p, pp.n, v); };

  // Empty each x coordinate into its z partner; the lower p-valuation side
  // can absorb the other exactly.
  for (i64 q = 0; q < m; ++q) {
    i64 x = row.at(0, q), z = row.at(0, m + q);
    if (x == 0) continue;
    if (z == 0 || val(x) < val(z)) f.fourier(q);
    i64 xx = row.at(0, q), zz = row.at(0, m + q);
    if (xx != 0) {
      i64 t = val(zz);
      i64 c = R.neg(R.mul(R.r(xx / ipow(pp.p, t)), R.inv(R.r(zz / ipow(pp.p, t)))));
      f.ptilde(q, c);
    }
  }
  // Gather everything into z_0 and normalize it to the exact gcd power.
  i64 best = -1, bestv = pp.n + 1;
  for (i64 q = 0; q < m; ++q) {
    i64 zq = row.at(0, m + q);
    if (zq != 0 && val(zq) < bestv) {
      best = q;
      bestv = val(zq);
    }
  }
  if (best < 0) throw std::logic_error("synth_map_to_z: lost the restriction");
  if (best != 0) f.swapq(0, best);
  i64 pt = ipow(pp.p, bestv);
  for (i64 q = 1; q < m; ++q) {
    i64 zq = row.at(0, m + q);
    if (zq == 0) continue;
    i64 c = R.mul(R.r(zq / pt), R.inv(R.r(row.at(0, m) / pt)));
    f.cx(q, 0, c);
  }
  f.mult(0, R.r(row.at(0, m) / pt));
  std::vector<i64> want(static_cast<size_t>(2 * m), 0);
  want[static_cast<size_t>(m)] = pt;
  if (row.row(0) != want) throw std::logic_error("synth_map_to_z: normalization failed");

  for (GateOp& g : rec)
    for (i64& s : g.sites) s = qudits[static_cast<size_t>(s)];
  return rec;
}

std::vector<GateOp> synth_map_to_x_fixing_z(i64 d, const std::vector<i64>& qudits,
                                            const std::vector<i64>& w, i64 n_prime) {
  PrimePower pp = as_prime_power(d);
  i64 m = static_cast<i64>(qudits.size());
  if (static_cast<i64>(w.size()) != 2 * m)
    throw std::invalid_argument("synth_map_to_x_fixing_z: restriction length mismatch");
  if (n_prime < 1 || n_prime > pp.n)
    throw std::invalid_argument("synth_map_to_x_fixing_z: level out of range");
  if (m < 1) throw std::invalid_argument("synth_map_to_x_fixing_z: empty party");
  Ring R(d);
  i64 pn = ipow(pp.p, n_prime);
  i64 x0 = mod_floor(w[0], d);
  if (mod_floor(x0, pn) != 1)
    throw std::invalid_argument("synth_map_to_x_fixing_z: leading x residue is not 1");

  ModMatrix rows(2, 2 * m);
  for (i64 c = 0; c < 2 * m; ++c) rows.at(0, c) = R.r(w[static_cast<size_t>(c)]);
  std::vector<i64> fixed(static_cast<size_t>(2 * m), 0);
  fixed[static_cast<size_t>(m)] = ipow(pp.p, pp.n - n_prime);
  rows.set_row(1, fixed);

  std::vector<GateOp> rec;
  ActionFrame f{R, m, &rows, &rec, pp.p, pp.n};
  f.mult(0, R.inv(x0));
  for (i64 j = 1; j < m; ++j) f.cx(0, j, R.neg(rows.at(0, j)));
  for (i64 j = 1; j < m; ++j) f.cz(0, j, R.neg(rows.at(0, m + j)));
  f.phase(0, R.neg(rows.at(0, m)));

  if (rows.row(0) != unit_row(2 * m, 0))
    throw std::logic_error("synth_map_to_x_fixing_z: normalization failed");
  if (rows.row(1) != fixed)
    throw std::logic_error("synth_map_to_x_fixing_z: fixed row moved");

  for (GateOp& g : rec)
    for (i64& s : g.sites) s = qudits[static_cast<size_t>(s)];
  return rec;
}

ModMatrix diagonalize_local_group(i64 p, const ModMatrix& rows) {
  if (!is_prime(p)) throw std::invalid_argument("diagonalize_local_group: p must be prime");
  if (rows.cols % 2 != 0)
    throw std::invalid_argument("diagonalize_local_group: odd column count");
  i64 m = rows.cols / 2;
  Ring R(p);
  ModMatrix in(rows.rows, rows.cols);
  for (i64 r = 0; r < rows.rows; ++r)
    for (i64 c = 0; c < rows.cols; ++c) in.at(r, c) = R.r(rows.at(r, c));
  auto pair_of = [&](const std::vector<i64>& a, const std::vector<i64>& b) {
    i64 acc = 0;
    for (i64 q = 0; q < m; ++q) {
      acc = R.add(acc, R.mul(a[static_cast<size_t>(q)], b[static_cast<size_t>(m + q)]));
      acc = R.sub(acc, R.mul(a[static_cast<size_t>(m + q)], b[static_cast<size_t>(q)]));
    }
    return acc;
  };
  for (i64 i = 0; i < in.rows; ++i)
    for (i64 j = i + 1; j < in.rows; ++j)
      if (pair_of(in.row(i), in.row(j)) != 0)
        throw std::invalid_argument("diagonalize_local_group: rows do not commute mod p");

  HowellForm h = howell_form(R, in);
  i64 r = h.basis.rows;
  if (r > m) throw std::logic_error("diagonalize_local_group: isotropic rank exceeds m");

  ModMatrix stacked(r + 2 * m, 2 * m);
  for (i64 i = 0; i < r; ++i) stacked.set_row(i, h.basis.row(i));
  for (i64 i = 0; i < 2 * m; ++i) stacked.at(r + i, i) = 1;
  ActionFrame f{R, m, &stacked, nullptr, p, 1};

  i64 settled = 0;
  for (i64 b = 0; b < r; ++b) {
    // Reduce row b against the already settled e_{z_t} basis vectors; its
    // settled x entries vanish by isotropy.
    for (i64 t = 0; t < settled; ++t) {
      if (stacked.at(b, t) != 0)
        throw std::logic_error("diagonalize_local_group: settled x entry nonzero");
      stacked.at(b, m + t) = 0;
    }
    bool zero = true;
    for (i64 c = 0; c < 2 * m && zero; ++c)
      if (stacked.at(b, c) != 0) zero = false;
    if (zero) throw std::logic_error("diagonalize_local_group: dependent basis row");
    for (i64 q = 0; q < m; ++q) {
      i64 xq = stacked.at(b, q);
      if (xq == 0) continue;
      i64 zq = stacked.at(b, m + q);
      if (zq != 0)
        f.ptilde(q, R.neg(R.mul(xq, R.inv(zq))));
      else
        f.fourier(q);
    }
    i64 i = settled, pivot = -1;
    for (i64 q = 0; q < m && pivot < 0; ++q)
      if (stacked.at(b, m + q) != 0) pivot = q;
    if (pivot < 0) throw std::logic_error("diagonalize_local_group: no z pivot");
    if (pivot != i) f.swapq(i, pivot);
    f.mult(i, stacked.at(b, m + i));
    for (i64 q = 0; q < m; ++q) {
      if (q == i) continue;
      i64 c = stacked.at(b, m + q);
      if (c != 0) f.cx(q, i, c);
    }
    ++settled;
  }

  ModMatrix result(2 * m, 2 * m);
  for (i64 i = 0; i < 2 * m; ++i) result.set_row(i, stacked.row(r + i));
  if (!is_symplectic(R, result))
    throw std::logic_error("diagonalize_local_group: action is not symplectic");
  ModMatrix moved = mat_mul(R, in, result);
  for (i64 i = 0; i < moved.rows; ++i)
    for (i64 q = 0; q < m; ++q)
      if (moved.at(i, q) != 0)
        throw std::logic_error("diagonalize_local_group: x part survived");
  return result;
}

ModMatrix lift_symplectic(i64 p, i64 n, const ModMatrix& m) {
  if (!is_prime(p)) throw std::invalid_argument("lift_symplectic: p must be prime");
  if (n < 1) throw std::invalid_argument("lift_symplectic: level must be positive");
  if (m.rows != m.cols || m.rows % 2 != 0)
    throw std::invalid_argument("lift_symplectic: shape mismatch");
  i64 half = m.rows / 2;
  Ring Rp(p);
  ModMatrix seed = m;
  for (i64& e : seed.a) e = Rp.r(e);
  if (!is_symplectic(Rp, seed))
    throw std::invalid_argument("lift_symplectic: input is not symplectic mod p");
  i64 d = ipow(p, n);
  Ring R(d);
  ModMatrix cur = seed;
  ModMatrix om = symplectic_form(half, d);
  ModMatrix omp = symplectic_form(half, p);
  for (i64 k = 1; k < n; ++k) {
    ModMatrix prod = mat_mul(R, mat_mul(R, cur, om), transpose(cur));
    i64 pk = ipow(p, k);
    ModMatrix b(2 * half, 2 * half);
    for (i64 i = 0; i < 2 * half; ++i) {
      for (i64 j = 0; j < 2 * half; ++j) {
        i64 defect = mod_floor(om.at(i, j) - prod.at(i, j), d);
        if (defect % pk != 0) throw std::logic_error("lift_symplectic: defect valuation");
        if (i > j) b.at(i, j) = mod_floor(defect / pk, p);
      }
    }
    ModMatrix a = mat_scale(Rp, p - 1, mat_mul(Rp, b, omp));
    ModMatrix step = ModMatrix::identity(2 * half);
    for (i64 i = 0; i < 2 * half; ++i)
      for (i64 j = 0; j < 2 * half; ++j)
        step.at(i, j) = R.add(step.at(i, j), R.mul(pk, a.at(i, j)));
    cur = mat_mul(R, step, cur);
  }
  if (!is_symplectic(R, cur)) throw std::logic_error("lift_symplectic: lift not exact");
  for (i64 i = 0; i < 2 * half; ++i)
    for (i64 j = 0; j < 2 * half; ++j)
      if (mod_floor(cur.at(i, j), p) != seed.at(i, j))
        throw std::logic_error("lift_symplectic: congruence broken");
  return cur;
}

StabilizerGroup conjugate_group(const StabilizerGroup& s, const GateOp& g) {
  StabilizerGroup out = s;
  for (PauliOp& gen : out.gens) gen = conjugate_by_gate(g, gen);
  return out;
}

StabilizerGroup conjugate_group(const StabilizerGroup& s,
                                const std::vector<GateOp>& gates) {
  StabilizerGroup out = s;
  for (const GateOp& g : gates) out = conjugate_group(out, g);
  return out;
}

GateOp apply_v_gate_to_group(StabilizerGroup& s, i64 site) {
  PrimePower pp = as_prime_power(s.d);
  if (pp.n < 2)
    throw std::invalid_argument("apply_v_gate_to_group: level must be at least 2");
  if (site < 0 || site >= s.n_sites)
    throw std::invalid_argument("apply_v_gate_to_group: site out of range");
  i64 pn1 = ipow(pp.p, pp.n - 1);
  PauliOp member = identity_op(s.d, s.n_sites);
  member.z[static_cast<size_t>(site)] = pn1;
  if (commutant_phase_lookup(s, member) != 0)
    throw std::invalid_argument("apply_v_gate_to_group: member phase is nonzero");

  std::vector<PauliOp> gens;
  for (const PauliOp& g : s.gens) {
    i64 x = g.x[static_cast<size_t>(site)];
    if (x % pp.p != 0)
      throw std::logic_error("apply_v_gate_to_group: x exponent not divisible by p");
    PauliOp ng = g;
    ng.x[static_cast<size_t>(site)] = x / pp.p;
    ng.z[static_cast<size_t>(site)] = mod_floor(g.z[static_cast<size_t>(site)] * pp.p, s.d);
    bool zero = true;
    for (i64 q = 0; q < s.n_sites && zero; ++q)
      if (ng.x[static_cast<size_t>(q)] != 0 || ng.z[static_cast<size_t>(q)] != 0)
        zero = false;
    if (zero) {
      if (ng.gamma2 != 0)
        throw std::logic_error("apply_v_gate_to_group: trivialized generator kept a phase");
      continue;
    }
    gens.push_back(std::move(ng));
  }
  PauliOp fresh = identity_op(s.d, s.n_sites);
  fresh.x[static_cast<size_t>(site)] = pn1;
  gens.push_back(std::move(fresh));
  s.gens = std::move(gens);
  return make_gate(GateKind::rescale, pp.p, pp.n, {site}, 0);
}

std::vector<GateOp> pauli_frame_correction(
    StabilizerGroup& s, const std::vector<std::pair<PauliOp, i64>>& targets) {
  if (targets.empty()) return {};
  Ring R(s.d);
  i64 n = s.n_sites;
  i64 base = s.d, level = 1;
  auto factors = factor_prime_powers(s.d);
  if (factors.size() == 1) {
    base = factors[0].p;
    level = factors[0].n;
  }

  ModMatrix a(static_cast<i64>(targets.size()), 2 * n);
  std::vector<i64> b;
  for (size_t t = 0; t < targets.size(); ++t) {
    const PauliOp& op = targets[t].first;
    if (op.d != s.d || op.sites() != n)
      throw std::invalid_argument("pauli_frame_correction: target shape mismatch");
    PauliOp probe = identity_op(s.d, n);
    probe.x = op.x;
    probe.z = op.z;
    i64 cur = commutant_phase_lookup(s, probe);
    i64 delta = mod_floor(targets[t].second - cur, 2 * s.d);
    if (delta % 2 != 0)
      throw std::logic_error("pauli_frame_correction: phase parity mismatch");
    for (i64 q = 0; q < n; ++q) {
      a.at(static_cast<i64>(t), q) = R.neg(R.r(op.z[static_cast<size_t>(q)]));
      a.at(static_cast<i64>(t), n + q) = R.r(op.x[static_cast<size_t>(q)]);
    }
    b.push_back(R.r(delta / 2));
  }
  auto sol = solve(R, a, b);
  if (!sol) throw std::logic_error("pauli_frame_correction: no correcting operator");

  PauliOp nu = identity_op(s.d, n);
  bool nonzero = false;
  for (i64 q = 0; q < n; ++q) {
    nu.x[static_cast<size_t>(q)] = (*sol)[static_cast<size_t>(q)];
    nu.z[static_cast<size_t>(q)] = (*sol)[static_cast<size_t>(n + q)];
    if (nu.x[static_cast<size_t>(q)] != 0 || nu.z[static_cast<size_t>(q)] != 0)
      nonzero = true;
  }
  if (!nonzero) return {};
  s = conjugate_by_pauli(s, nu);

  std::vector<GateOp> logs;
  std::set<i64> covered;
  std::vector<std::vector<i64>> blocks = s.partition.blocks;
  if (blocks.empty()) {
    blocks.emplace_back();
    for (i64 q = 0; q < n; ++q) blocks.back().push_back(q);
  }
  for (const auto& block : blocks) {
    GateOp g = make_gate(GateKind::pauli, base, level, {}, 0);
    bool touched = false;
    for (i64 q : block) {
      covered.insert(q);
      g.sites.push_back(q);
      g.pauli_x.push_back(nu.x[static_cast<size_t>(q)]);
      g.pauli_z.push_back(nu.z[static_cast<size_t>(q)]);
      if (g.pauli_x.back() != 0 || g.pauli_z.back() != 0) touched = true;
    }
    if (touched) logs.push_back(std::move(g));
  }
  for (i64 q = 0; q < n; ++q)
    if (!covered.count(q) &&
        (nu.x[static_cast<size_t>(q)] != 0 || nu.z[static_cast<size_t>(q)] != 0))
      throw std::logic_error("pauli_frame_correction: correction outside partition");
  return logs;
}

}  // namespace stabdec
