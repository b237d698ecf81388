#include "stabdec/gates.hpp"

#include <stdexcept>

namespace stabdec {

namespace {

i64 checked_pow(i64 base, i64 exp) {
  if (base < 2 || exp < 1) throw std::invalid_argument("gate: base must be >= 2 and level >= 1");
  i64 r = 1;
  for (i64 i = 0; i < exp; ++i) {
    if (r > (i64{1} << 40) / base) throw std::invalid_argument("gate: dimension overflow");
    r *= base;
  }
  return r;
}

PauliOp single_x(i64 d, i64 sites, i64 q, i64 e) {
  PauliOp p = identity_op(d, sites);
  p.x[q] = mod_floor(e, d);
  return p;
}

PauliOp single_z(i64 d, i64 sites, i64 q, i64 e) {
  PauliOp p = identity_op(d, sites);
  p.z[q] = mod_floor(e, d);
  return p;
}

}  // namespace

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::fourier: return "fourier";
    case GateKind::phase: return "phase";
    case GateKind::cz: return "cz";
    case GateKind::mult: return "mult";
    case GateKind::pauli: return "pauli";
    case GateKind::rescale: return "rescale";
    case GateKind::swap_extract: return "swap_extract";
  }
  throw std::logic_error("gate_kind_name: unknown kind");
}

i64 gate_dimension(const GateOp& g) { return checked_pow(g.p, g.level); }

PauliOp conjugate_by_gate(const GateOp& g, const PauliOp& a) {
  const i64 dim = gate_dimension(g);
  if (a.d != dim)
    throw std::invalid_argument("conjugate_by_gate: operator dimension must equal p^level");
  const i64 n = a.sites();
  for (i64 q : g.sites)
    if (q < 0 || q >= n) throw std::invalid_argument("conjugate_by_gate: site out of range");

  if (g.kind == GateKind::rescale || g.kind == GateKind::swap_extract)
    throw std::invalid_argument("conjugate_by_gate: gate has no Pauli-to-Pauli action");

  if (g.kind == GateKind::pauli) {
    if (g.pauli_x.size() != g.sites.size() || g.pauli_z.size() != g.sites.size())
      throw std::invalid_argument("conjugate_by_gate: pauli exponents misaligned with sites");
    PauliOp nu = identity_op(dim, n);
    for (size_t i = 0; i < g.sites.size(); ++i) {
      nu.x[g.sites[i]] = mod_floor(g.pauli_x[i], dim);
      nu.z[g.sites[i]] = mod_floor(g.pauli_z[i], dim);
    }
    PauliOp out = a;
    out.gamma2 = mod_floor(out.gamma2 + 2 * commutation_phase(nu, a), 2 * dim);
    return out;
  }

  // Images of X_q and Z_q under the gate; untouched sites keep X_q, Z_q.
  auto image_x = [&](i64 q) -> PauliOp {
    switch (g.kind) {
      case GateKind::fourier:
        return single_z(dim, n, q, 1);
      case GateKind::phase: {
        // P^c: X -> w_{2*dim}^{kappa*c} X Z^c with kappa = 1 (even) / dim+1 (odd).
        const i64 kappa = (dim % 2 == 0) ? 1 : dim + 1;
        PauliOp p = single_x(dim, n, q, 1);
        p.z[q] = mod_floor(g.param, dim);
        p.gamma2 = mod_floor(kappa * g.param, 2 * dim);
        return p;
      }
      case GateKind::cz: {
        if (g.sites.size() != 2 || g.sites[0] == g.sites[1])
          throw std::invalid_argument("conjugate_by_gate: cz needs two distinct sites");
        const i64 other = (q == g.sites[0]) ? g.sites[1] : g.sites[0];
        PauliOp p = single_x(dim, n, q, 1);
        p.z[other] = mod_floor(g.param, dim);
        return p;
      }
      case GateKind::mult: {
        Ring R(dim);
        if (!R.is_unit(g.param))
          throw std::invalid_argument("conjugate_by_gate: mult parameter must be a unit");
        return single_x(dim, n, q, g.param);
      }
      default:
        throw std::logic_error("conjugate_by_gate: unhandled kind");
    }
  };
  auto image_z = [&](i64 q) -> PauliOp {
    switch (g.kind) {
      case GateKind::fourier:
        return single_x(dim, n, q, -1);
      case GateKind::phase:
      case GateKind::cz:
        return single_z(dim, n, q, 1);
      case GateKind::mult: {
        Ring R(dim);
        return single_z(dim, n, q, R.inv(g.param));
      }
      default:
        throw std::logic_error("conjugate_by_gate: unhandled kind");
    }
  };

  auto targeted = [&](i64 q) {
    for (i64 s : g.sites)
      if (s == q) return true;
    return false;
  };

  // a = w^{gamma2/2} (prod_q X_q^{x_q}) (prod_q Z_q^{z_q}); conjugation maps the
  // ordered product to the ordered product of the images.
  PauliOp acc = identity_op(dim, n);
  acc.gamma2 = a.gamma2;
  for (i64 q = 0; q < n; ++q) {
    if (a.x[q] == 0) continue;
    PauliOp img = targeted(q) ? image_x(q) : single_x(dim, n, q, 1);
    acc = multiply(acc, pauli_power(img, a.x[q]));
  }
  for (i64 q = 0; q < n; ++q) {
    if (a.z[q] == 0) continue;
    PauliOp img = targeted(q) ? image_z(q) : single_z(dim, n, q, 1);
    acc = multiply(acc, pauli_power(img, a.z[q]));
  }
  return acc;
}

}  // namespace stabdec
