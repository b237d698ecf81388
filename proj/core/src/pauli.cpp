#include "stabdec/pauli.hpp"

#include <sstream>
#include <stdexcept>

namespace stabdec {

PauliOp identity_op(i64 d, i64 sites) {
  PauliOp p;
  p.d = d;
  p.x.assign(static_cast<size_t>(sites), 0);
  p.z.assign(static_cast<size_t>(sites), 0);
  p.gamma2 = 0;
  return p;
}

PauliOp make_pauli(i64 d, std::vector<i64> x, std::vector<i64> z, i64 gamma2) {
  if (d < 2) throw std::invalid_argument("make_pauli: d must be >= 2");
  if (x.size() != z.size()) throw std::invalid_argument("make_pauli: x/z size mismatch");
  PauliOp p;
  p.d = d;
  for (auto& e : x) e = mod_floor(e, d);
  for (auto& e : z) e = mod_floor(e, d);
  p.x = std::move(x);
  p.z = std::move(z);
  p.gamma2 = mod_floor(gamma2, 2 * d);
  if (d % 2 == 1 && p.gamma2 % 2 != 0)
    throw std::invalid_argument("make_pauli: odd d requires an even gamma2");
  return p;
}

bool is_identity(const PauliOp& p) {
  if (p.gamma2 != 0) return false;
  for (i64 e : p.x)
    if (e != 0) return false;
  for (i64 e : p.z)
    if (e != 0) return false;
  return true;
}

namespace {
void check_compatible(const PauliOp& a, const PauliOp& b, const char* who) {
  if (a.d != b.d || a.x.size() != b.x.size())
    throw std::invalid_argument(std::string(who) + ": operand shape mismatch");
}
i64 dot_mod(const std::vector<i64>& a, const std::vector<i64>& b, i64 m) {
  i64 acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc = mod_floor(acc + a[i] * b[i], m);
  return acc;
}
}  // namespace

PauliOp multiply(const PauliOp& a, const PauliOp& b) {
  check_compatible(a, b, "multiply");
  PauliOp r;
  r.d = a.d;
  r.x.resize(a.x.size());
  r.z.resize(a.z.size());
  for (size_t i = 0; i < a.x.size(); ++i) {
    r.x[i] = mod_floor(a.x[i] + b.x[i], a.d);
    r.z[i] = mod_floor(a.z[i] + b.z[i], a.d);
  }
  r.gamma2 = mod_floor(a.gamma2 + b.gamma2 + 2 * dot_mod(a.z, b.x, a.d), 2 * a.d);
  return r;
}

PauliOp pauli_power(const PauliOp& a, i64 k) {
  k = mod_floor(k, 2 * a.d);  // a^{2d} = I, phase included
  PauliOp r;
  r.d = a.d;
  r.x.resize(a.x.size());
  r.z.resize(a.z.size());
  for (size_t i = 0; i < a.x.size(); ++i) {
    r.x[i] = mod_floor(a.x[i] * k, a.d);
    r.z[i] = mod_floor(a.z[i] * k, a.d);
  }
  i64 zx = dot_mod(a.z, a.x, 2 * a.d);
  i64 kk = mod_floor(k * (k - 1), 2 * a.d);
  r.gamma2 = mod_floor(k * a.gamma2 + zx * kk, 2 * a.d);
  return r;
}

PauliOp pauli_inverse(const PauliOp& a) { return pauli_power(a, -1); }

i64 commutation_phase(const PauliOp& a, const PauliOp& b) {
  check_compatible(a, b, "commutation_phase");
  return mod_floor(dot_mod(a.z, b.x, a.d) - dot_mod(b.z, a.x, a.d), a.d);
}

bool pauli_commute(const PauliOp& a, const PauliOp& b) {
  return commutation_phase(a, b) == 0;
}

i64 restricted_commutation_phase(const PauliOp& a, const PauliOp& b,
                                 const std::vector<i64>& site_subset) {
  check_compatible(a, b, "restricted_commutation_phase");
  i64 acc = 0;
  for (i64 q : site_subset) {
    auto i = static_cast<size_t>(q);
    acc = mod_floor(acc + a.x[i] * b.z[i] - a.z[i] * b.x[i], a.d);
  }
  return acc;
}

std::vector<i64> restriction_vector(const PauliOp& a, const std::vector<i64>& site_subset) {
  std::vector<i64> v(2 * site_subset.size(), 0);
  for (size_t i = 0; i < site_subset.size(); ++i) {
    auto q = static_cast<size_t>(site_subset[i]);
    v[i] = a.x[q];
    v[site_subset.size() + i] = a.z[q];
  }
  return v;
}

std::string to_text(const PauliOp& p) {
  std::ostringstream os;
  bool any = false;
  if (p.gamma2 != 0) {
    if (p.gamma2 % 2 == 0)
      os << "w^" << p.gamma2 / 2;
    else
      os << "w^" << p.gamma2 << "/2";
    any = true;
  }
  auto emit = [&](char label, const std::vector<i64>& e) {
    for (size_t q = 0; q < e.size(); ++q) {
      if (e[q] == 0) continue;
      if (any) os << ' ';
      os << label << q;
      if (e[q] != 1) os << '^' << e[q];
      any = true;
    }
  };
  emit('X', p.x);
  emit('Z', p.z);
  if (!any) return "I";
  return os.str();
}

}  // namespace stabdec
