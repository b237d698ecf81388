#include "stabdec/stabilizer.hpp"

#include <sstream>
#include <stdexcept>

namespace stabdec {

namespace {

std::vector<i64> stacked_vector(const PauliOp& g) {
  std::vector<i64> v;
  v.reserve(static_cast<size_t>(2 * g.sites()));
  v.insert(v.end(), g.x.begin(), g.x.end());
  v.insert(v.end(), g.z.begin(), g.z.end());
  return v;
}

bool vector_part_is_zero(const PauliOp& g) {
  for (i64 e : g.x)
    if (e != 0) return false;
  for (i64 e : g.z)
    if (e != 0) return false;
  return true;
}

void check_member_shape(const StabilizerGroup& s, const PauliOp& g, const char* who) {
  if (g.d != s.d || g.sites() != s.n_sites) {
    std::ostringstream msg;
    msg << who << ": operator shape (d=" << g.d << ", sites=" << g.sites()
        << ") does not match group (d=" << s.d << ", sites=" << s.n_sites << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ModMatrix generator_matrix(const StabilizerGroup& s) {
  ModMatrix m(static_cast<i64>(s.gens.size()), 2 * s.n_sites);
  for (i64 i = 0; i < m.rows; ++i) m.set_row(i, stacked_vector(s.gens[static_cast<size_t>(i)]));
  return m;
}

ValidationReport validate(const StabilizerGroup& s) {
  ValidationReport rep;
  Ring R(s.d);

  rep.shape_ok = true;
  if (s.n_sites < 0) {
    rep.shape_ok = false;
    rep.problems.push_back("negative site count");
  }
  for (size_t i = 0; i < s.gens.size(); ++i) {
    const PauliOp& g = s.gens[i];
    if (g.d != s.d || g.sites() != s.n_sites) {
      std::ostringstream msg;
      msg << "generator " << i << " has shape (d=" << g.d << ", sites=" << g.sites()
          << "), expected (d=" << s.d << ", sites=" << s.n_sites << ")";
      rep.problems.push_back(msg.str());
      rep.shape_ok = false;
    }
  }
  if (!s.partition.blocks.empty()) {
    if (s.partition.labels.size() != s.partition.blocks.size()) {
      rep.problems.push_back("partition labels and blocks differ in count");
      rep.shape_ok = false;
    }
    std::vector<i64> seen(static_cast<size_t>(std::max<i64>(s.n_sites, 0)), 0);
    bool in_range = true;
    for (const auto& block : s.partition.blocks)
      for (i64 q : block) {
        if (q < 0 || q >= s.n_sites) {
          in_range = false;
        } else {
          ++seen[static_cast<size_t>(q)];
        }
      }
    if (!in_range) {
      rep.problems.push_back("partition refers to sites outside [0, n_sites)");
      rep.shape_ok = false;
    }
    for (size_t q = 0; q < seen.size(); ++q)
      if (seen[q] != 1) {
        std::ostringstream msg;
        msg << "site " << q << " appears " << seen[q] << " times across partition blocks";
        rep.problems.push_back(msg.str());
        rep.shape_ok = false;
        break;
      }
  }
  if (!rep.shape_ok) return rep;

  rep.commuting = true;
  for (size_t i = 0; i < s.gens.size(); ++i)
    for (size_t j = i + 1; j < s.gens.size(); ++j) {
      i64 c = commutation_phase(s.gens[i], s.gens[j]);
      if (c != 0) {
        std::ostringstream msg;
        msg << "generators " << i << " and " << j << " do not commute (phase exponent " << c
            << ")";
        rep.problems.push_back(msg.str());
        rep.commuting = false;
      }
    }

  // Phase consistency.  Every integer coefficient vector whose combination
  // vanishes modulo d must multiply out to exactly I.  The lattice of such
  // vectors is generated by d*e_i together with lifts of the kernel of the
  // transposed generator matrix, and (for commuting generators) the phase of
  // a combination is additive in the coefficients, so checking the lattice
  // generators suffices.
  if (rep.commuting) {
    rep.phases_consistent = true;
    for (size_t i = 0; i < s.gens.size(); ++i) {
      PauliOp p = pauli_power(s.gens[i], s.d);
      if (!is_identity(p)) {
        std::ostringstream msg;
        msg << "generator " << i << " raised to d carries phase exponent " << p.gamma2;
        rep.problems.push_back(msg.str());
        rep.phases_consistent = false;
      }
    }
    if (!s.gens.empty()) {
      ModMatrix relations = kernel(R, transpose(generator_matrix(s)));
      for (i64 r = 0; r < relations.rows; ++r) {
        PauliOp e = group_element(s, relations.row(r));
        if (!is_identity(e)) {
          std::ostringstream msg;
          msg << "vanishing combination of generators carries phase exponent " << e.gamma2;
          rep.problems.push_back(msg.str());
          rep.phases_consistent = false;
        }
      }
    }
  }

  HowellForm h = howell_form(R, generator_matrix(s));
  rep.order_factored = span_size_factored(R, h);
  std::map<i64, i64> full;
  for (const auto& pp : R.factors())
    if (s.n_sites > 0) full[pp.p] = pp.n * s.n_sites;
  rep.pure = rep.valid() && rep.order_factored == full;
  return rep;
}

PauliOp group_element(const StabilizerGroup& s, const std::vector<i64>& coeffs) {
  if (coeffs.size() != s.gens.size())
    throw std::invalid_argument("group_element: coefficient count does not match generator count");
  PauliOp acc = identity_op(s.d, s.n_sites);
  for (size_t i = 0; i < s.gens.size(); ++i)
    acc = multiply(acc, pauli_power(s.gens[i], coeffs[i]));
  return acc;
}

std::optional<std::vector<i64>> coefficients_of(const StabilizerGroup& s, const PauliOp& g) {
  check_member_shape(s, g, "coefficients_of");
  if (s.gens.empty()) {
    if (!vector_part_is_zero(g)) return std::nullopt;
    return std::vector<i64>{};
  }
  Ring R(s.d);
  return solve(R, transpose(generator_matrix(s)), stacked_vector(g));
}

i64 commutant_phase_lookup(const StabilizerGroup& s, const PauliOp& g) {
  check_member_shape(s, g, "commutant_phase_lookup");
  for (size_t i = 0; i < s.gens.size(); ++i)
    if (!pauli_commute(s.gens[i], g)) {
      std::ostringstream msg;
      msg << "commutant_phase_lookup: operator does not commute with generator " << i;
      throw std::invalid_argument(msg.str());
    }
  std::optional<std::vector<i64>> c = coefficients_of(s, g);
  if (!c)
    throw std::invalid_argument("commutant_phase_lookup: operator lies outside the group span");
  PauliOp member = group_element(s, *c);
  return mod_floor(member.gamma2 - g.gamma2, 2 * s.d);
}

StabilizerGroup change_generators(const StabilizerGroup& s, const ModMatrix& l) {
  i64 m = static_cast<i64>(s.gens.size());
  if (l.rows != m || l.cols != m)
    throw std::invalid_argument("change_generators: matrix shape does not match generator count");
  Ring R(s.d);
  if (!is_invertible(R, l))
    throw std::invalid_argument("change_generators: matrix is not invertible");
  StabilizerGroup out = s;
  out.gens.clear();
  for (i64 i = 0; i < m; ++i) out.gens.push_back(group_element(s, l.row(i)));
  return out;
}

StabilizerGroup conjugate_by_pauli(const StabilizerGroup& s, const PauliOp& nu) {
  check_member_shape(s, nu, "conjugate_by_pauli");
  StabilizerGroup out = s;
  for (PauliOp& g : out.gens)
    g.gamma2 = mod_floor(g.gamma2 + 2 * commutation_phase(nu, g), 2 * s.d);
  return out;
}

std::vector<StabilizerGroup> crt_split(const StabilizerGroup& s) {
  Ring R(s.d);
  const std::vector<PrimePower>& factors = R.factors();
  if (factors.size() < 2)
    throw std::invalid_argument("crt_split: dimension is already a prime power");

  std::vector<i64> t(factors.size());
  std::vector<StabilizerGroup> out;
  for (size_t i = 0; i < factors.size(); ++i) {
    i64 q = factors[i].d;
    Ring Rq(q);
    t[i] = Rq.inv(mod_floor(s.d / q, q));
    StabilizerGroup part;
    part.d = q;
    part.n_sites = s.n_sites;
    part.partition = s.partition;
    out.push_back(std::move(part));
  }

  for (const PauliOp& g : s.gens) {
    check_member_shape(s, g, "crt_split");
    std::vector<std::vector<i64>> xs(factors.size()), zs(factors.size());
    std::vector<i64> phase(factors.size());
    for (size_t i = 0; i < factors.size(); ++i) {
      i64 q = factors[i].d;
      xs[i].resize(static_cast<size_t>(s.n_sites));
      zs[i].resize(static_cast<size_t>(s.n_sites));
      for (i64 qd = 0; qd < s.n_sites; ++qd) {
        xs[i][static_cast<size_t>(qd)] = mod_floor(t[i] * g.x[static_cast<size_t>(qd)], q);
        zs[i][static_cast<size_t>(qd)] = mod_floor(g.z[static_cast<size_t>(qd)], q);
      }
      phase[i] = mod_floor(t[i] * g.gamma2, 2 * q);
      // Odd factors require an even doubled phase; adding q flips parity
      // while shifting the recombined phase by a full d.
      if (factors[i].p != 2 && phase[i] % 2 != 0) phase[i] = mod_floor(phase[i] + q, 2 * q);
    }
    i64 recombined = 0;
    for (size_t i = 0; i < factors.size(); ++i)
      recombined = mod_floor(recombined + phase[i] * (s.d / factors[i].d), 2 * s.d);
    i64 defect = mod_floor(recombined - g.gamma2, 2 * s.d);
    if (defect == s.d) {
      for (size_t i = 0; i < factors.size(); ++i)
        if (factors[i].p == 2) {
          phase[i] = mod_floor(phase[i] + factors[i].d, 2 * factors[i].d);
          defect = 0;
          break;
        }
    }
    if (defect != 0) throw std::logic_error("crt_split: phase distribution defect");
    for (size_t i = 0; i < factors.size(); ++i) {
      PauliOp part = make_pauli(factors[i].d, xs[i], zs[i], phase[i]);
      if (!is_identity(part)) out[i].gens.push_back(std::move(part));
    }
  }
  return out;
}

}  // namespace stabdec
