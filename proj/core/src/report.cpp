#include "stabdec/report.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "stabdec/groupfile.hpp"
#include "stabdec/linalg.hpp"

namespace stabdec {

namespace {

using nlohmann::json;

json gate_to_json(const GateOp& g) {
  json j;
  j["kind"] = gate_kind_name(g.kind);
  j["p"] = g.p;
  j["level"] = g.level;
  j["sites"] = g.sites;
  switch (g.kind) {
    case GateKind::phase:
    case GateKind::cz:
    case GateKind::mult:
      j["param"] = g.param;
      break;
    case GateKind::pauli:
      j["pauli_x"] = g.pauli_x;
      j["pauli_z"] = g.pauli_z;
      break;
    case GateKind::swap_extract:
      j["n_prime"] = g.n_prime;
      j["ancilla_sites"] = g.ancilla_sites;
      j["parties"] = g.parties;
      break;
    default:
      break;
  }
  return j;
}

GateKind kind_from_name(const std::string& name) {
  static constexpr GateKind kAll[] = {
      GateKind::fourier, GateKind::phase,   GateKind::cz,          GateKind::mult,
      GateKind::pauli,   GateKind::rescale, GateKind::swap_extract};
  for (GateKind k : kAll)
    if (name == gate_kind_name(k)) return k;
  throw std::invalid_argument("log JSON: unknown gate kind '" + name + "'");
}

GateOp gate_from_json(const json& j) {
  GateOp g;
  g.kind = kind_from_name(j.at("kind").get<std::string>());
  g.p = j.at("p").get<i64>();
  g.level = j.at("level").get<i64>();
  g.sites = j.at("sites").get<std::vector<i64>>();
  g.param = j.value("param", i64{0});
  g.pauli_x = j.value("pauli_x", std::vector<i64>{});
  g.pauli_z = j.value("pauli_z", std::vector<i64>{});
  g.n_prime = j.value("n_prime", i64{0});
  g.ancilla_sites = j.value("ancilla_sites", std::vector<i64>{});
  g.parties = j.value("parties", std::vector<std::string>{});
  return g;
}

json log_to_json_value(const std::vector<GateOp>& log) {
  json arr = json::array();
  for (const GateOp& g : log) arr.push_back(gate_to_json(g));
  return arr;
}

std::vector<GateOp> log_from_json_value(const json& arr) {
  if (!arr.is_array())
    throw std::invalid_argument("log JSON: expected an array of gates");
  std::vector<GateOp> log;
  for (const json& j : arr) log.push_back(gate_from_json(j));
  return log;
}

json counts_to_json(const Counts& c) {
  json j;
  j["n_ghz"] = c.n_ghz;
  j["n_ab"] = c.n_ab;
  j["n_ac"] = c.n_ac;
  j["n_bc"] = c.n_bc;
  j["n_a"] = c.n_a;
  j["n_b"] = c.n_b;
  j["n_c"] = c.n_c;
  return j;
}

json factor_to_json(const FactorReport& f) {
  json j;
  j["p"] = f.p;
  j["n"] = f.n;
  j["d"] = f.d;
  j["counts"] = counts_to_json(f.counts);
  j["iterations"] = f.iterations;
  j["verified"] = f.verified;
  j["verify_skipped"] = f.verify_skipped;
  j["fidelity"] = f.fidelity;
  json exts = json::array();
  for (const ExtractionRecord& rec : f.extractions) {
    json e;
    e["condition"] = rec.condition;
    e["level"] = rec.level;
    e["parties"] = rec.parties;
    e["sites"] = rec.sites;
    e["ancillas"] = rec.ancillas;
    exts.push_back(e);
  }
  j["extractions"] = exts;
  json ancs = json::array();
  for (const AncillaRecord& rec : f.ancillas) {
    json a;
    a["party"] = rec.party;
    a["dimension"] = rec.dimension;
    ancs.push_back(a);
  }
  j["ancillas"] = ancs;
  j["final_group"] = print_group(f.final_group);
  j["log"] = log_to_json_value(f.log);
  if (!f.trace.empty()) {
    json tr = json::array();
    for (const IterationTrace& it : f.trace) {
      json t;
      t["n"] = it.n;
      t["condition"] = it.condition;
      t["level"] = it.level;
      t["witness"] = it.witness;
      t["entropies"] = it.entropies;
      tr.push_back(t);
    }
    j["trace"] = tr;
  }
  return j;
}

std::string dump(const json& j, int indent) {
  return indent < 0 ? j.dump() : j.dump(indent);
}

}  // namespace

std::string log_to_json(const std::vector<GateOp>& log, int indent) {
  return dump(log_to_json_value(log), indent);
}

std::vector<GateOp> log_from_json(const std::string& text) {
  try {
    return log_from_json_value(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("log JSON: ") + e.what());
  }
}

std::string report_to_json(const DecompositionReport& report, int indent) {
  json j;
  j["schema"] = "stabdec-report-v1";
  j["d"] = report.d;
  j["n_sites"] = report.n_sites;
  j["seed"] = report.seed;
  j["totals"] = counts_to_json(report.totals);
  json factors = json::array();
  for (const FactorReport& f : report.factors) factors.push_back(factor_to_json(f));
  j["factors"] = factors;
  return dump(j, indent);
}

VerificationReport verify_report(const StabilizerGroup& s,
                                 const std::string& report_json, i64 amp_cap,
                                 std::uint64_t seed) {
  const ValidationReport vr = validate(s);
  if (!vr.valid() || !vr.pure) {
    std::string msg = "verify: the group must be valid and pure";
    for (const std::string& p : vr.problems) msg += "; " + p;
    throw std::invalid_argument(msg);
  }

  VerificationReport out;
  out.d = s.d;
  out.n_sites = s.n_sites;

  std::vector<StabilizerGroup> parts;
  if (factor_prime_powers(s.d).size() == 1)
    parts.push_back(s);
  else
    parts = crt_split(s);

  try {
    const json j = json::parse(report_json);
    if (j.at("d").get<i64>() != s.d ||
        j.at("n_sites").get<i64>() != s.n_sites)
      throw std::invalid_argument(
          "verify: the report was produced for a different group shape");
    const json& factors = j.at("factors");
    if (!factors.is_array() || factors.size() != parts.size())
      throw std::invalid_argument(
          "verify: the report's factor list does not match the dimension");

    double min_fid = 1.0;
    for (size_t i = 0; i < parts.size(); ++i) {
      const json& fj = factors[i];
      if (fj.at("d").get<i64>() != parts[i].d)
        throw std::invalid_argument(
            "verify: factor dimensions disagree with the group");
      FactorVerification fv;
      fv.p = fj.at("p").get<i64>();
      fv.n = fj.at("n").get<i64>();
      const std::vector<GateOp> log = log_from_json_value(fj.at("log"));
      std::vector<std::vector<i64>> equal_groups;
      for (const json& rec : fj.at("extractions"))
        equal_groups.push_back(rec.at("ancillas").get<std::vector<i64>>());
      try {
        DenseState st = state_from_group(parts[i], seed, amp_cap);
        apply_log(st, log, amp_cap);
        const DenseState want = canonical_state(st.dims, equal_groups);
        fv.fidelity = fidelity(st, want);
      } catch (const CapExceeded&) {
        fv.cap_exceeded = true;
        out.cap_exceeded = true;
      } catch (const std::exception&) {
        // A log that cannot even replay to the claimed shape (for instance
        // one chopped before its extraction) fails with fidelity zero.
      }
      min_fid = std::min(min_fid, fv.fidelity);
      out.factors.push_back(fv);
    }
    out.fidelity = min_fid;
    out.pass = !out.cap_exceeded && min_fid >= 1.0 - kVerifyTol;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report JSON: ") + e.what());
  }
  return out;
}

std::string verification_to_json(const VerificationReport& v, int indent) {
  json j;
  j["schema"] = "stabdec-verify-v1";
  j["d"] = v.d;
  j["n_sites"] = v.n_sites;
  j["pass"] = v.pass;
  j["cap_exceeded"] = v.cap_exceeded;
  j["fidelity"] = v.fidelity;
  json factors = json::array();
  for (const FactorVerification& f : v.factors) {
    json fj;
    fj["p"] = f.p;
    fj["n"] = f.n;
    fj["fidelity"] = f.fidelity;
    fj["cap_exceeded"] = f.cap_exceeded;
    factors.push_back(fj);
  }
  j["factors"] = factors;
  return dump(j, indent);
}

}  // namespace stabdec
