// JSON rendering of decomposition results and operation logs, plus the
// standalone replay check behind the verify subcommand.  The JSON library
// stays out of this header so installed consumers only see std types.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stabdec/decompose.hpp"
#include "stabdec/gates.hpp"
#include "stabdec/oracle.hpp"
#include "stabdec/stabilizer.hpp"

namespace stabdec {

// Replay fidelity at or above this passes verification.
inline constexpr double kVerifyTol = 1e-8;

// Operation logs as a JSON array.  indent < 0 renders compactly.
std::string log_to_json(const std::vector<GateOp>& log, int indent = -1);
std::vector<GateOp> log_from_json(const std::string& text);

// Full report, schema "stabdec-report-v1" (see README for the layout).
std::string report_to_json(const DecompositionReport& report, int indent = 2);

struct FactorVerification {
  i64 p = 2;
  i64 n = 1;
  double fidelity = 0.0;
  bool cap_exceeded = false;
};

struct VerificationReport {
  i64 d = 2;
  i64 n_sites = 0;
  bool pass = false;          // every factor replayed within kVerifyTol
  bool cap_exceeded = false;  // some factor outgrew amp_cap; its fidelity is 0
  double fidelity = 0.0;      // minimum over the factors
  std::vector<FactorVerification> factors;
};

// Replays the per-factor logs of a previously produced report JSON on the
// group's stabilized state and compares against the canonical product state
// implied by the extraction records.  The group must be valid, pure, and
// match the report's d and n_sites; malformed JSON, a shape mismatch, or an
// invalid group throw std::invalid_argument.
VerificationReport verify_report(const StabilizerGroup& s,
                                 const std::string& report_json,
                                 i64 amp_cap = kDefaultAmpCap,
                                 std::uint64_t seed = 0);

// Schema "stabdec-verify-v1".
std::string verification_to_json(const VerificationReport& v, int indent = 2);

}  // namespace stabdec
