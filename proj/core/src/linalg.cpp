#include "stabdec/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace stabdec {

ModMatrix transpose(const ModMatrix& m) {
  ModMatrix t(m.cols, m.rows);
  for (i64 r = 0; r < m.rows; ++r)
    for (i64 c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
  return t;
}

ModMatrix mat_mul(const Ring& R, const ModMatrix& a, const ModMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  ModMatrix out(a.rows, b.cols);
  for (i64 r = 0; r < a.rows; ++r)
    for (i64 k = 0; k < a.cols; ++k) {
      i64 arc = a.at(r, k);
      if (arc == 0) continue;
      for (i64 c = 0; c < b.cols; ++c)
        out.at(r, c) = mod_floor(out.at(r, c) + arc * b.at(k, c), R.d());
    }
  return out;
}

std::vector<i64> mat_vec(const Ring& R, const ModMatrix& m, const std::vector<i64>& v) {
  if (static_cast<i64>(v.size()) != m.cols)
    throw std::invalid_argument("mat_vec: shape mismatch");
  std::vector<i64> out(static_cast<size_t>(m.rows), 0);
  for (i64 r = 0; r < m.rows; ++r) {
    i64 acc = 0;
    for (i64 c = 0; c < m.cols; ++c)
      acc = mod_floor(acc + m.at(r, c) * v[static_cast<size_t>(c)], R.d());
    out[static_cast<size_t>(r)] = acc;
  }
  return out;
}

std::vector<i64> vec_mat(const Ring& R, const std::vector<i64>& v, const ModMatrix& m) {
  if (static_cast<i64>(v.size()) != m.rows)
    throw std::invalid_argument("vec_mat: shape mismatch");
  std::vector<i64> out(static_cast<size_t>(m.cols), 0);
  for (i64 r = 0; r < m.rows; ++r) {
    i64 vr = v[static_cast<size_t>(r)];
    if (vr == 0) continue;
    for (i64 c = 0; c < m.cols; ++c)
      out[static_cast<size_t>(c)] =
          mod_floor(out[static_cast<size_t>(c)] + vr * m.at(r, c), R.d());
  }
  return out;
}

ModMatrix mat_add(const Ring& R, const ModMatrix& a, const ModMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("mat_add: shape mismatch");
  ModMatrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.a.size(); ++i) out.a[i] = mod_floor(a.a[i] + b.a[i], R.d());
  return out;
}

ModMatrix mat_scale(const Ring& R, i64 s, const ModMatrix& m) {
  ModMatrix out(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) out.a[i] = mod_floor(s * m.a[i], R.d());
  return out;
}

bool is_zero(const ModMatrix& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](i64 v) { return v == 0; });
}

ModMatrix stack_rows(const ModMatrix& top, const ModMatrix& bottom) {
  if (top.rows == 0) return bottom;
  if (bottom.rows == 0) return top;
  if (top.cols != bottom.cols) throw std::invalid_argument("stack_rows: shape mismatch");
  ModMatrix out(top.rows + bottom.rows, top.cols);
  std::copy(top.a.begin(), top.a.end(), out.a.begin());
  std::copy(bottom.a.begin(), bottom.a.end(), out.a.begin() + top.a.size());
  return out;
}

namespace {

// A working row: the vector itself plus the transform row expressing it as a
// combination of the original input rows.
struct WorkRow {
  std::vector<i64> v;
  std::vector<i64> t;
};

void axpy(const Ring& R, std::vector<i64>& dst, i64 s, const std::vector<i64>& src) {
  for (size_t i = 0; i < dst.size(); ++i)
    dst[i] = mod_floor(dst[i] + s * src[i], R.d());
}

void scale(const Ring& R, std::vector<i64>& v, i64 s) {
  for (auto& e : v) e = mod_floor(s * e, R.d());
}

bool all_zero(const std::vector<i64>& v) {
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

}  // namespace

HowellForm howell_form(const Ring& R, const ModMatrix& input) {
  const i64 n = R.d();
  const i64 cols = input.cols;
  const i64 m = input.rows;

  std::vector<WorkRow> pending;
  pending.reserve(static_cast<size_t>(m));
  for (i64 r = 0; r < m; ++r) {
    WorkRow w;
    w.v = input.row(r);
    for (auto& e : w.v) e = mod_floor(e, n);
    w.t.assign(static_cast<size_t>(m), 0);
    w.t[static_cast<size_t>(r)] = 1;
    pending.push_back(std::move(w));
  }

  std::vector<WorkRow> out;
  std::vector<i64> pivot_cols, pivot_divisors;

  // Triangularize column by column.  The invariant is that every pending row
  // is zero in all columns already processed.
  for (i64 c = 0; c < cols; ++c) {
    std::vector<WorkRow> zero_here, nz;
    for (auto& w : pending) {
      (w.v[static_cast<size_t>(c)] == 0 ? zero_here : nz).push_back(std::move(w));
    }
    pending = std::move(zero_here);
    if (nz.empty()) continue;

    // Fold every row with a nonzero entry at c into one accumulator via the
    // extended gcd; each fold leaves a byproduct row that is zero at c.
    WorkRow acc = std::move(nz[0]);
    for (size_t i = 1; i < nz.size(); ++i) {
      WorkRow& r2 = nz[i];
      i64 a = acc.v[static_cast<size_t>(c)];
      i64 b = r2.v[static_cast<size_t>(c)];
      Xgcd e = xgcd(a, b);
      // combined = u*acc + v*r2 has entry g at c; byproduct = (a/g)*r2 -
      // (b/g)*acc has entry 0 at c.
      WorkRow combined;
      combined.v = acc.v;
      combined.t = acc.t;
      scale(R, combined.v, e.u);
      scale(R, combined.t, e.u);
      axpy(R, combined.v, e.v, r2.v);
      axpy(R, combined.t, e.v, r2.t);
      WorkRow byproduct;
      byproduct.v = r2.v;
      byproduct.t = r2.t;
      scale(R, byproduct.v, a / e.g);
      scale(R, byproduct.t, a / e.g);
      axpy(R, byproduct.v, -(b / e.g), acc.v);
      axpy(R, byproduct.t, -(b / e.g), acc.t);
      if (!all_zero(byproduct.v)) pending.push_back(std::move(byproduct));
      acc = std::move(combined);
    }

    // Normalize the pivot to gcd(entry, n), a divisor of n.
    i64 u = R.unit_multiplier(acc.v[static_cast<size_t>(c)]);
    scale(R, acc.v, u);
    scale(R, acc.t, u);
    i64 piv = acc.v[static_cast<size_t>(c)];

    // Annihilator row: (n/piv) * acc is zero at c but may contribute later
    // columns; it keeps the span saturated.
    if (piv > 1) {
      WorkRow ann;
      ann.v = acc.v;
      ann.t = acc.t;
      scale(R, ann.v, n / piv);
      scale(R, ann.t, n / piv);
      if (!all_zero(ann.v)) pending.push_back(std::move(ann));
    }

    pivot_cols.push_back(c);
    pivot_divisors.push_back(piv);
    out.push_back(std::move(acc));
  }

  // Reduce entries above each pivot into [0, pivot).
  for (size_t j = 0; j < out.size(); ++j) {
    i64 cj = pivot_cols[j];
    i64 pj = pivot_divisors[j];
    for (size_t i = 0; i < j; ++i) {
      i64 e = out[i].v[static_cast<size_t>(cj)];
      i64 q = e / pj;
      if (q != 0) {
        axpy(R, out[i].v, -q, out[j].v);
        axpy(R, out[i].t, -q, out[j].t);
      }
    }
  }

  HowellForm h;
  h.basis = ModMatrix(static_cast<i64>(out.size()), cols);
  h.transform = ModMatrix(static_cast<i64>(out.size()), m);
  for (size_t i = 0; i < out.size(); ++i) {
    h.basis.set_row(static_cast<i64>(i), out[i].v);
    h.transform.set_row(static_cast<i64>(i), out[i].t);
  }
  h.pivot_cols = std::move(pivot_cols);
  h.pivot_divisors = std::move(pivot_divisors);
  return h;
}

RowReduction row_reduce(const Ring& R, const HowellForm& h, const std::vector<i64>& v) {
  RowReduction rr;
  rr.remainder = v;
  for (auto& e : rr.remainder) e = mod_floor(e, R.d());
  rr.coeffs.assign(static_cast<size_t>(h.basis.rows), 0);
  for (i64 j = 0; j < h.basis.rows; ++j) {
    i64 cj = h.pivot_cols[static_cast<size_t>(j)];
    i64 pj = h.pivot_divisors[static_cast<size_t>(j)];
    i64 q = rr.remainder[static_cast<size_t>(cj)] / pj;
    rr.coeffs[static_cast<size_t>(j)] = q;
    if (q != 0) {
      for (i64 c = 0; c < h.basis.cols; ++c)
        rr.remainder[static_cast<size_t>(c)] = mod_floor(
            rr.remainder[static_cast<size_t>(c)] - q * h.basis.at(j, c), R.d());
    }
  }
  return rr;
}

bool in_row_span(const Ring& R, const HowellForm& h, const std::vector<i64>& v) {
  return all_zero(row_reduce(R, h, v).remainder);
}

i64 span_size(const Ring& R, const HowellForm& h) {
  i64 size = 1;
  const i64 limit = i64{1} << 62;
  for (i64 p : h.pivot_divisors) {
    i64 factor = R.d() / p;
    if (factor != 0 && size > limit / factor)
      throw std::overflow_error("span_size: order exceeds 2^62");
    size *= factor;
  }
  return size;
}

std::map<i64, i64> span_size_factored(const Ring& R, const HowellForm& h) {
  std::map<i64, i64> out;
  for (i64 piv : h.pivot_divisors) {
    i64 factor = R.d() / piv;
    if (factor == 1) continue;
    for (const auto& pp : factor_prime_powers(factor)) out[pp.p] += pp.n;
  }
  return out;
}

ModMatrix kernel(const Ring& R, const ModMatrix& m) {
  // Howell of [M^T | I]: rows whose left block vanishes give left-kernel
  // combinations of M^T's rows, i.e. vectors x with M x = 0.
  ModMatrix mt = transpose(m);
  ModMatrix aug(mt.rows, mt.cols + mt.rows);
  for (i64 r = 0; r < mt.rows; ++r) {
    for (i64 c = 0; c < mt.cols; ++c) aug.at(r, c) = mod_floor(mt.at(r, c), R.d());
    aug.at(r, mt.cols + r) = 1;
  }
  HowellForm h = howell_form(R, aug);
  std::vector<std::vector<i64>> rows;
  for (i64 r = 0; r < h.basis.rows; ++r) {
    bool left_zero = true;
    for (i64 c = 0; c < mt.cols && left_zero; ++c)
      if (h.basis.at(r, c) != 0) left_zero = false;
    if (!left_zero) continue;
    std::vector<i64> x(static_cast<size_t>(mt.rows));
    for (i64 c = 0; c < mt.rows; ++c) x[static_cast<size_t>(c)] = h.basis.at(r, mt.cols + c);
    rows.push_back(std::move(x));
  }
  ModMatrix k(static_cast<i64>(rows.size()), mt.rows);
  for (size_t i = 0; i < rows.size(); ++i) k.set_row(static_cast<i64>(i), rows[i]);
  return howell_form(R, k).basis;
}

std::optional<std::vector<i64>> solve(const Ring& R, const ModMatrix& m,
                                      const std::vector<i64>& b) {
  if (static_cast<i64>(b.size()) != m.rows)
    throw std::invalid_argument("solve: shape mismatch");
  // Column span of M = row span of M^T; express b in that row space, then
  // pull the combination back through the transform.
  HowellForm h = howell_form(R, transpose(m));
  RowReduction rr = row_reduce(R, h, b);
  if (!all_zero(rr.remainder)) return std::nullopt;
  // x = transform^T * coeffs satisfies M x = b.
  std::vector<i64> x(static_cast<size_t>(m.cols), 0);
  for (i64 j = 0; j < h.transform.rows; ++j) {
    i64 cj = rr.coeffs[static_cast<size_t>(j)];
    if (cj == 0) continue;
    for (i64 c = 0; c < h.transform.cols; ++c)
      x[static_cast<size_t>(c)] =
          mod_floor(x[static_cast<size_t>(c)] + cj * h.transform.at(j, c), R.d());
  }
  // Canonicalize: reduce against the kernel's Howell basis so equal solution
  // sets produce identical representatives.
  ModMatrix k = kernel(R, m);
  if (k.rows > 0) {
    HowellForm hk = howell_form(R, k);
    x = row_reduce(R, hk, x).remainder;
  }
  return x;
}

bool span_membership(const Ring& R, const std::vector<i64>& v, const ModMatrix& m) {
  return solve(R, m, v).has_value();
}

ModMatrix span_intersection(const Ring& R, const ModMatrix& a, const ModMatrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("span_intersection: shape mismatch");
  const i64 c = a.cols;
  ModMatrix stacked(a.rows + b.rows, 2 * c);
  for (i64 r = 0; r < a.rows; ++r)
    for (i64 j = 0; j < c; ++j) {
      stacked.at(r, j) = mod_floor(a.at(r, j), R.d());
      stacked.at(r, c + j) = stacked.at(r, j);
    }
  for (i64 r = 0; r < b.rows; ++r)
    for (i64 j = 0; j < c; ++j) stacked.at(a.rows + r, j) = mod_floor(b.at(r, j), R.d());
  HowellForm h = howell_form(R, stacked);
  std::vector<std::vector<i64>> rows;
  for (i64 r = 0; r < h.basis.rows; ++r) {
    bool left_zero = true;
    for (i64 j = 0; j < c && left_zero; ++j)
      if (h.basis.at(r, j) != 0) left_zero = false;
    if (!left_zero) continue;
    std::vector<i64> v(static_cast<size_t>(c));
    for (i64 j = 0; j < c; ++j) v[static_cast<size_t>(j)] = h.basis.at(r, c + j);
    if (!all_zero(v)) rows.push_back(std::move(v));
  }
  ModMatrix inter(static_cast<i64>(rows.size()), c);
  for (size_t i = 0; i < rows.size(); ++i) inter.set_row(static_cast<i64>(i), rows[i]);
  return howell_form(R, inter).basis;
}

i64 element_order(const Ring& R, const std::vector<i64>& v) {
  i64 g = R.d();
  for (i64 e : v) g = std::gcd(g, mod_floor(e, R.d()));
  return R.d() / g;
}

bool is_invertible(const Ring& R, const ModMatrix& l) {
  if (l.rows != l.cols) return false;
  // Invertible over Z_d iff invertible modulo every prime of d.
  for (const auto& pp : R.factors()) {
    const i64 p = pp.p;
    ModMatrix w(l.rows, l.cols);
    for (size_t i = 0; i < l.a.size(); ++i) w.a[i] = mod_floor(l.a[i], p);
    i64 rank = 0;
    for (i64 c = 0; c < w.cols && rank < w.rows; ++c) {
      i64 pivot = -1;
      for (i64 r = rank; r < w.rows; ++r)
        if (w.at(r, c) % p != 0) { pivot = r; break; }
      if (pivot < 0) return false;  // square: any deficient column kills det
      for (i64 j = 0; j < w.cols; ++j) std::swap(w.at(rank, j), w.at(pivot, j));
      i64 inv = 0;
      // inverse of w(rank,c) mod p
      Xgcd e = xgcd(w.at(rank, c), p);
      inv = mod_floor(e.u, p);
      for (i64 j = 0; j < w.cols; ++j) w.at(rank, j) = mod_floor(w.at(rank, j) * inv, p);
      for (i64 r = 0; r < w.rows; ++r) {
        if (r == rank) continue;
        i64 f = w.at(r, c);
        if (f != 0)
          for (i64 j = 0; j < w.cols; ++j)
            w.at(r, j) = mod_floor(w.at(r, j) - f * w.at(rank, j), p);
      }
      ++rank;
    }
    if (rank != l.rows) return false;
  }
  return true;
}

ModMatrix mat_inverse(const Ring& R, const ModMatrix& l) {
  if (l.rows != l.cols) throw std::invalid_argument("mat_inverse: not square");
  if (!is_invertible(R, l)) throw std::invalid_argument("mat_inverse: not invertible");
  ModMatrix inv(l.rows, l.cols);
  for (i64 c = 0; c < l.cols; ++c) {
    std::vector<i64> e(static_cast<size_t>(l.rows), 0);
    e[static_cast<size_t>(c)] = 1;
    auto x = solve(R, l, e);
    // Invertibility guarantees a (unique) solution for each basis column.
    for (i64 r = 0; r < l.rows; ++r) inv.at(r, c) = (*x)[static_cast<size_t>(r)];
  }
  return inv;
}

}  // namespace stabdec
