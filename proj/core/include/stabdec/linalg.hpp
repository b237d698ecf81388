// Linear algebra over Z_N: Howell normal form with transform tracking,
// canonical linear solves, kernels, and row-span intersection.
//
// Z_N is not a field, so Gaussian elimination alone cannot decide span
// membership (over Z_4 the span of (2) is {0, 2}, which no echelon form over
// a field represents).  The Howell form is the canonical matrix whose rows
// generate a given row span: pivots divide N, every row's leading entry
// divides the entries above it, and annihilator multiples (N/pivot) of each
// row are re-inserted so that saturation is explicit.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "stabdec/ring.hpp"

namespace stabdec {

// Dense row-major matrix with entries in [0, d) (reduction is the caller's
// concern; all routines here reduce what they produce).
struct ModMatrix {
  i64 rows = 0, cols = 0;
  std::vector<i64> a;

  ModMatrix() = default;
  ModMatrix(i64 r, i64 c) : rows(r), cols(c), a(static_cast<size_t>(r * c), 0) {}

  i64& at(i64 r, i64 c) { return a[static_cast<size_t>(r * cols + c)]; }
  i64 at(i64 r, i64 c) const { return a[static_cast<size_t>(r * cols + c)]; }

  static ModMatrix zeros(i64 r, i64 c) { return ModMatrix(r, c); }
  static ModMatrix identity(i64 n) {
    ModMatrix m(n, n);
    for (i64 i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::vector<i64> row(i64 r) const {
    return std::vector<i64>(a.begin() + r * cols, a.begin() + (r + 1) * cols);
  }
  void set_row(i64 r, const std::vector<i64>& v) {
    for (i64 c = 0; c < cols; ++c) at(r, c) = v[static_cast<size_t>(c)];
  }
  bool operator==(const ModMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

ModMatrix transpose(const ModMatrix& m);
ModMatrix mat_mul(const Ring& R, const ModMatrix& a, const ModMatrix& b);
std::vector<i64> mat_vec(const Ring& R, const ModMatrix& m, const std::vector<i64>& v);
std::vector<i64> vec_mat(const Ring& R, const std::vector<i64>& v, const ModMatrix& m);
ModMatrix mat_add(const Ring& R, const ModMatrix& a, const ModMatrix& b);
ModMatrix mat_scale(const Ring& R, i64 s, const ModMatrix& m);
bool is_zero(const ModMatrix& m);
ModMatrix stack_rows(const ModMatrix& top, const ModMatrix& bottom);

// Howell normal form H of A with transform U such that H = U * A (mod d).
// pivot_cols[i] is the column of row i's leading entry; pivot_divisors[i] is
// that entry (a divisor of d).  Rows are sorted by pivot column; zero rows
// are dropped.  The form is canonical: two matrices have equal row spans iff
// their Howell forms are identical.
struct HowellForm {
  ModMatrix basis;
  std::vector<i64> pivot_cols;
  std::vector<i64> pivot_divisors;
  ModMatrix transform;  // basis = transform * input
};

HowellForm howell_form(const Ring& R, const ModMatrix& input);

// Expresses v as a combination of Howell basis rows greedily left-to-right.
// remainder is zero iff v lies in the row span; coeffs give the combination.
struct RowReduction {
  std::vector<i64> coeffs;
  std::vector<i64> remainder;
};
RowReduction row_reduce(const Ring& R, const HowellForm& h, const std::vector<i64>& v);

bool in_row_span(const Ring& R, const HowellForm& h, const std::vector<i64>& v);

// Number of elements in the row span; throws std::overflow_error beyond
// 2^62.  The factored variant reports the span order as prime -> exponent.
i64 span_size(const Ring& R, const HowellForm& h);
std::map<i64, i64> span_size_factored(const Ring& R, const HowellForm& h);

// Rows generate { x : M x = 0 (mod d) }.
ModMatrix kernel(const Ring& R, const ModMatrix& m);

// Canonical solution of M x = b (mod d), or nullopt when none exists.  The
// solution is reduced against the Howell basis of the kernel, making the
// returned representative unique and deterministic.
std::optional<std::vector<i64>> solve(const Ring& R, const ModMatrix& m,
                                      const std::vector<i64>& b);

// True iff v lies in the column span of M.
bool span_membership(const Ring& R, const std::vector<i64>& v, const ModMatrix& m);

// Howell basis of the intersection of the row spans of A and B (Zassenhaus:
// Howell of [A|A; B|0], rows with zero left block contribute right blocks).
ModMatrix span_intersection(const Ring& R, const ModMatrix& a, const ModMatrix& b);

// Additive order of v in Z_d^k: least t >= 1 with t*v = 0, i.e. d / gcd(d,
// all entries).  The zero vector has order 1.
i64 element_order(const Ring& R, const std::vector<i64>& v);

// True iff det(L) is a unit mod d, i.e. L is invertible over Z_d (checked by
// Gaussian elimination modulo every prime of d).
bool is_invertible(const Ring& R, const ModMatrix& l);

// Inverse of an invertible square matrix over Z_d.
ModMatrix mat_inverse(const Ring& R, const ModMatrix& l);

}  // namespace stabdec
