#include "stabdec/phase_matrix.hpp"

#include <stdexcept>

namespace stabdec {

namespace {

bool zero_mod(const ModMatrix& m, i64 q) {
  for (i64 e : m.a)
    if (e % q != 0) return false;
  return true;
}

std::vector<i64> column_of(const ModMatrix& m, i64 j) {
  std::vector<i64> c(static_cast<size_t>(m.rows));
  for (i64 i = 0; i < m.rows; ++i) c[static_cast<size_t>(i)] = m.at(i, j);
  return c;
}

std::vector<i64> scaled_vec(const Ring& R, i64 s, const std::vector<i64>& v) {
  std::vector<i64> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = R.mul(s, v[i]);
  return out;
}

// L with L v = e_1, pivoting on the lowest unit entry of v.
ModMatrix unit_pivot_map(const Ring& R, const std::vector<i64>& v) {
  i64 m = static_cast<i64>(v.size());
  i64 piv = -1;
  for (i64 i = 0; i < m; ++i)
    if (R.is_unit(v[static_cast<size_t>(i)])) {
      piv = i;
      break;
    }
  if (piv < 0) throw std::logic_error("unit_pivot_map: vector has no unit entry");
  i64 inv = R.inv(v[static_cast<size_t>(piv)]);
  ModMatrix l(m, m);
  l.at(0, piv) = inv;
  i64 row = 1;
  for (i64 k = 0; k < m; ++k) {
    if (k == piv) continue;
    l.at(row, k) = 1;
    l.at(row, piv) = R.sub(l.at(row, piv), R.mul(v[static_cast<size_t>(k)], inv));
    ++row;
  }
  return l;
}

}  // namespace

PhaseMatrixSet phase_matrices(const StabilizerGroup& s) {
  PhaseMatrixSet pm;
  pm.d = s.d;
  i64 m = static_cast<i64>(s.gens.size());
  for (const auto& block : s.partition.blocks) {
    ModMatrix mat(m, m);
    for (i64 i = 0; i < m; ++i)
      for (i64 j = 0; j < m; ++j)
        mat.at(i, j) = restricted_commutation_phase(s.gens[static_cast<size_t>(i)],
                                                    s.gens[static_cast<size_t>(j)], block);
    pm.mats.push_back(std::move(mat));
  }
  return pm;
}

PhaseMatrixSet transform_phase_matrices(const PhaseMatrixSet& pm, const ModMatrix& l) {
  Ring R(pm.d);
  PhaseMatrixSet out;
  out.d = pm.d;
  ModMatrix lt = transpose(l);
  for (const ModMatrix& m : pm.mats) out.mats.push_back(mat_mul(R, mat_mul(R, l, m), lt));
  return out;
}

ModMatrix mat_mod(const ModMatrix& m, i64 q) {
  ModMatrix out(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) out.a[i] = mod_floor(m.a[i], q);
  return out;
}

Classification classify(const PhaseMatrixSet& pm) {
  if (pm.mats.size() != 3)
    throw std::invalid_argument("classify: exactly three partition blocks are required");
  PrimePower pp = as_prime_power(pm.d);
  Ring R(pm.d);
  i64 m = pm.mats[0].rows;
  for (const ModMatrix& mat : pm.mats)
    if (mat.rows != m || mat.cols != m)
      throw std::invalid_argument("classify: matrices must be square with equal sizes");

  bool all_vanish = true;
  for (const ModMatrix& mat : pm.mats)
    if (!zero_mod(mat, pp.p)) all_vanish = false;
  if (all_vanish) return Classification{1, {}, 0, {}};

  // Condition 2: a nontrivial intersection of the three row spans.
  ModMatrix inter =
      span_intersection(R, span_intersection(R, pm.mats[0], pm.mats[1]), pm.mats[2]);
  if (inter.rows > 0) {
    i64 best = 0;
    i64 best_order = element_order(R, inter.row(0));
    for (i64 r = 1; r < inter.rows; ++r) {
      i64 order = element_order(R, inter.row(r));
      if (order > best_order) {
        best = r;
        best_order = order;
      }
    }
    i64 level = 0;
    for (i64 q = best_order; q > 1; q /= pp.p) ++level;
    i64 divisor = pm.d / best_order;  // p^(n - n')
    std::vector<i64> dual = inter.row(best);
    for (i64& e : dual) {
      if (e % divisor != 0)
        throw std::logic_error("classify: intersection vector is not divisible to full order");
      e /= divisor;
    }
    return Classification{2, dual, level, {}};
  }

  // Condition 3.  Pick the first block whose matrix survives mod p, take its
  // first column with a unit-bearing entry, and pick the first other block
  // whose span rejects the p^{n-1} multiple; the remaining block completes
  // the pair.
  i64 a = -1;
  for (i64 alpha = 0; alpha < 3; ++alpha)
    if (!zero_mod(pm.mats[static_cast<size_t>(alpha)], pp.p)) {
      a = alpha;
      break;
    }
  const ModMatrix& ma = pm.mats[static_cast<size_t>(a)];
  std::vector<i64> v;
  for (i64 j = 0; j < m && v.empty(); ++j) {
    std::vector<i64> col = column_of(ma, j);
    for (i64 e : col)
      if (e % pp.p != 0) {
        v = col;
        break;
      }
  }
  i64 pn1 = pm.d / pp.p;
  std::vector<i64> pv = scaled_vec(R, pn1, v);
  i64 cslot = -1;
  for (i64 alpha = 0; alpha < 3; ++alpha) {
    if (alpha == a) continue;
    if (!span_membership(R, pv, pm.mats[static_cast<size_t>(alpha)])) {
      cslot = alpha;
      break;
    }
  }
  if (cslot < 0)
    throw std::logic_error("classify: all blocks absorb the scaled column; trichotomy violated");
  i64 bslot = 3 - a - cslot;

  // L1 sends v to e_1; after it the pair matrix for block a has e_1 in its
  // column span.
  ModMatrix l1 = unit_pivot_map(R, v);
  PhaseMatrixSet t1 = transform_phase_matrices(pm, l1);

  // L2 clears the first row and column of block c's matrix: writing it as
  // [[0, r^T], [-r, W]], a solution of W w = r makes [[1, w^T], [0, I]] do
  // the clearing exactly (w^T W w vanishes because W is alternating).
  const ModMatrix& mc1 = t1.mats[static_cast<size_t>(cslot)];
  ModMatrix w_mat(m - 1, m - 1);
  std::vector<i64> r_vec(static_cast<size_t>(m - 1));
  for (i64 i = 0; i < m - 1; ++i) {
    r_vec[static_cast<size_t>(i)] = mc1.at(0, i + 1);
    for (i64 j = 0; j < m - 1; ++j) w_mat.at(i, j) = mc1.at(i + 1, j + 1);
  }
  std::optional<std::vector<i64>> w_sol = solve(R, w_mat, r_vec);
  if (!w_sol)
    throw std::logic_error("classify: clearing system for the third block is unsolvable");
  ModMatrix l2 = ModMatrix::identity(m);
  for (i64 j = 0; j < m - 1; ++j) l2.at(0, j + 1) = (*w_sol)[static_cast<size_t>(j)];
  PhaseMatrixSet t2 = transform_phase_matrices(t1, l2);
  const ModMatrix& mc2 = t2.mats[static_cast<size_t>(cslot)];
  for (i64 j = 0; j < m; ++j)
    if (mc2.at(0, j) != 0 || mc2.at(j, 0) != 0)
      throw std::logic_error("classify: third-block clearing failed");

  // L3 maps block a's first-row tail to a unit vector so e_2 appears
  // explicitly in the transformed column span.
  std::vector<i64> s_tail(static_cast<size_t>(m - 1));
  for (i64 j = 0; j < m - 1; ++j)
    s_tail[static_cast<size_t>(j)] = t2.mats[static_cast<size_t>(a)].at(0, j + 1);
  ModMatrix l3 = ModMatrix::identity(m);
  {
    ModMatrix lp = unit_pivot_map(R, s_tail);
    for (i64 i = 0; i < m - 1; ++i)
      for (i64 j = 0; j < m - 1; ++j) l3.at(i + 1, j + 1) = lp.at(i, j);
  }

  ModMatrix total = mat_mul(R, l3, mat_mul(R, l2, l1));
  std::vector<i64> e2(static_cast<size_t>(m), 0);
  e2[1] = 1;
  std::optional<std::vector<i64>> vprime = solve(R, total, e2);
  if (!vprime) throw std::logic_error("classify: transform is not invertible");

  if (element_order(R, *vprime) != pm.d)
    throw std::logic_error("classify: pair dual vector does not have full order");
  if (!span_membership(R, *vprime, pm.mats[static_cast<size_t>(a)]) ||
      !span_membership(R, *vprime, pm.mats[static_cast<size_t>(bslot)]))
    throw std::logic_error("classify: pair dual vector left the pair column spans");
  if (span_membership(R, scaled_vec(R, pn1, *vprime), pm.mats[static_cast<size_t>(cslot)]))
    throw std::logic_error("classify: third block absorbs the scaled pair dual");

  std::vector<i64> pair{std::min(a, bslot), std::max(a, bslot)};
  return Classification{3, *vprime, pp.n, pair};
}

}  // namespace stabdec
