// Command-line front end.  Subcommands:
//
//   decompose  run the engine on a group file, print a JSON report
//   spm        print the subsystem phase matrices M and M mod p as JSON
//   verify     replay a report's logs against its group on a dense state
//   random     emit a seeded random group file for fuzzing pipelines
//
// Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 engine
// diagnostic, 4 amplitude cap exceeded.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stabdec/decompose.hpp"
#include "stabdec/groupfile.hpp"
#include "stabdec/linalg.hpp"
#include "stabdec/oracle.hpp"
#include "stabdec/phase_matrix.hpp"
#include "stabdec/report.hpp"

using namespace stabdec;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file '" + path + "'");
  out << text;
}

StabilizerGroup load_group(const std::string& path, bool require_pure) {
  StabilizerGroup s = parse_group(read_file(path));
  const ValidationReport vr = validate(s);
  const bool ok = vr.valid() && (!require_pure || vr.pure);
  if (!ok) {
    std::string msg = path + ": not a valid" +
                      std::string(require_pure ? " pure" : "") +
                      " stabilizer group";
    for (const std::string& p : vr.problems) msg += "\n  " + p;
    if (vr.valid() && !vr.pure)
      msg += "\n  the group does not determine a unique state";
    throw std::invalid_argument(msg);
  }
  return s;
}

std::vector<StabilizerGroup> split_factors(const StabilizerGroup& s) {
  if (factor_prime_powers(s.d).size() == 1) return {s};
  return crt_split(s);
}

nlohmann::json matrix_to_json(const ModMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (i64 r = 0; r < m.rows; ++r) rows.push_back(m.row(r));
  return rows;
}

int run_decompose(const std::string& group_path, const EngineConfig& cfg,
                  const std::string& out_path) {
  const StabilizerGroup s = load_group(group_path, /*require_pure=*/true);
  const DecompositionReport report = run(s, cfg);
  const std::string text = report_to_json(report);
  if (out_path.empty())
    std::cout << text << "\n";
  else
    write_file(out_path, text + "\n");
  return 0;
}

int run_spm(const std::string& group_path) {
  const StabilizerGroup s = load_group(group_path, /*require_pure=*/false);
  nlohmann::json out;
  out["schema"] = "stabdec-spm-v1";
  out["d"] = s.d;
  nlohmann::json factors = nlohmann::json::array();
  for (const StabilizerGroup& g : split_factors(s)) {
    const PrimePower pp = as_prime_power(g.d);
    const PhaseMatrixSet pm = phase_matrices(g);
    nlohmann::json fj;
    fj["p"] = pp.p;
    fj["n"] = pp.n;
    fj["d"] = g.d;
    nlohmann::json parties = nlohmann::json::array();
    for (size_t b = 0; b < pm.mats.size(); ++b) {
      nlohmann::json pj;
      pj["label"] = g.partition.labels[b];
      pj["m"] = matrix_to_json(pm.mats[b]);
      pj["m_mod_p"] = matrix_to_json(mat_mod(pm.mats[b], pp.p));
      parties.push_back(pj);
    }
    fj["parties"] = parties;
    factors.push_back(fj);
  }
  out["factors"] = factors;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_verify(const std::string& group_path, const std::string& report_path,
               i64 amp_cap, std::uint64_t seed) {
  const StabilizerGroup s = load_group(group_path, /*require_pure=*/true);
  const VerificationReport v =
      verify_report(s, read_file(report_path), amp_cap, seed);
  std::cout << verification_to_json(v) << "\n";
  if (v.cap_exceeded) {
    std::cerr << "error: the replay exceeded the amplitude cap (" << amp_cap
              << "); raise --cap to verify this group\n";
    return 4;
  }
  return v.pass ? 0 : 1;
}

int run_random(const RandomGroupParams& params, std::uint64_t seed) {
  std::cout << print_group(random_stabilizer_group(params, seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decompose tripartite stabilizer groups into EPR and GHZ units"};
  app.require_subcommand(1);

  std::string dec_group, dec_out;
  EngineConfig cfg;
  CLI::App* dec = app.add_subcommand(
      "decompose", "run the decomposition on a group file and report JSON");
  dec->add_option("group", dec_group, "group file to decompose")->required();
  dec->add_flag("--verify", cfg.verify, "replay the log on a dense state");
  dec->add_option("--seed", cfg.seed, "seed for the dense replay start vector");
  dec->add_option("--max-iter", cfg.max_iter,
                  "iteration budget override (0 = automatic)");
  dec->add_option("--cap", cfg.amp_cap, "amplitude cap for the dense replay");
  dec->add_flag("--trace", cfg.trace, "record per-iteration classification data");
  dec->add_option("--out", dec_out, "write the report here instead of stdout");

  std::string spm_group;
  CLI::App* spm = app.add_subcommand(
      "spm", "print the subsystem phase matrices per party as JSON");
  spm->add_option("group", spm_group, "group file to analyze")->required();

  std::string ver_group, ver_report;
  i64 ver_cap = kDefaultAmpCap;
  std::uint64_t ver_seed = 0;
  CLI::App* ver = app.add_subcommand(
      "verify", "replay a decomposition report against its group");
  ver->add_option("group", ver_group, "group file the report describes")->required();
  ver->add_option("report", ver_report, "report JSON from the decompose command")
      ->required();
  ver->add_option("--cap", ver_cap, "amplitude cap for the replay");
  ver->add_option("--seed", ver_seed, "seed for the dense start vector");

  RandomGroupParams params;
  std::uint64_t rnd_seed = 0;
  CLI::App* rnd = app.add_subcommand(
      "random", "emit a seeded random stabilizer group file");
  rnd->add_option("--d", params.d, "qudit dimension");
  rnd->add_option("--qudits", params.n_sites, "number of qudits");
  rnd->add_option("--seed", rnd_seed, "generator seed");
  rnd->add_option("--gates", params.gate_count, "scrambling gate count");
  rnd->add_option("--gens-max", params.gens_max,
                  "cap on emitted generators (0 = unlimited)");

  try {
    app.parse(argc, argv);
    if (dec->parsed()) return run_decompose(dec_group, cfg, dec_out);
    if (spm->parsed()) return run_spm(spm_group);
    if (ver->parsed()) return run_verify(ver_group, ver_report, ver_cap, ver_seed);
    if (rnd->parsed()) return run_random(params, rnd_seed);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const EngineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
