#pragma once

// Entropy-based verification of schemes against the perfect and the
// generalized secrecy models, the A2 entropy-balance criterion, and the
// catalog feasibility table.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qss/schemes.hpp"
#include "qss/structures.hpp"

namespace qss {

enum class Model { kPerfect, kGeneralized };
enum class Verdict { kPerfect, kGeneralized, kFail };

const char* to_string(Model m);
const char* to_string(Verdict v);
Model parse_model(const std::string& s);

struct VerifyOptions {
  double tolerance = 1e-9;
  /// Secret distribution; verdicts are defined at the maximally mixed point.
  std::array<double, 2> secret = {0.5, 0.5};
  int max_qubits = kMaxQubits;
};

struct SubsetRecord {
  PlayerSubset subset;
  SubsetClass classification = SubsetClass::kAuthorized;
  double s_a = 0;
  double s_ra = 0;
  double i_ra = 0;
  /// Generalized-model condition: authorized => I(R:A) = I(R:S),
  /// unauthorized => I(R:A) <= S(S).
  bool condition_pass = false;
};

struct VerificationReport {
  std::string scheme;
  Model model = Model::kGeneralized;
  double i_rs = 0;
  double s_s = 0;
  double s_r = 0;
  std::vector<SubsetRecord> records;  // one per nonempty player subset, by mask
  Verdict verdict = Verdict::kFail;
  bool meets_model = false;
  /// First record violating the requested model.
  std::optional<PlayerSubset> witness;
  bool theorem7_balanced = false;
  double theorem7_worst = 0;
  std::vector<std::string> deviations;
};

/// Throws StructuralMismatch when the scheme's players or induced structure
/// disagree with gamma, ResourceLimit past the qubit budget, InputError for
/// non-admissible gamma.
VerificationReport verify(const SchemeSpec& scheme, const AccessStructure& gamma, Model model,
                          const VerifyOptions& options = {});

struct BalanceCheck {
  bool balanced = true;
  double worst = 0;  // max |S(A) - S(~A)| over A2
  std::optional<PlayerSubset> worst_subset;
  /// balanced agrees with the generalized verdict of verify.
  bool agrees_with_verify = true;
  bool generalized = false;
};

BalanceCheck check_theorem7(const SchemeSpec& scheme, const AccessStructure& gamma,
                             const VerifyOptions& options = {});

/// SchemeAcceptor that runs verify(..., kGeneralized) and checks the verdict.
SchemeAcceptor generalized_acceptor(const VerifyOptions& options = {});

/// Short stable digest (FNV-1a, hex) of a report's verdict and records.
std::string report_digest(const VerificationReport& report);

struct TableRow {
  int number = 0;
  AccessStructure structure;
  PerfectFeasibility pqss;
  bool gqss_verified = false;
  std::string route;  // "direct", "printed", "search" or "none"
  std::string scheme_name;
  std::optional<Assignment> assignment;
  std::string report_hash;
  std::vector<std::string> deviations;
};

struct TableReport {
  std::vector<TableRow> rows;
  std::vector<std::string> deviations;
};

/// Base schemes for assignment search: the b-family on 3..7 particles with
/// b = {1..k}, k = 1..floor(N/2).
std::vector<ConstructedScheme> search_bases();

/// PQSS/GQSS verdicts for every catalog row with at most max_n players.
TableReport reproduce_tables(int max_n = 5, const VerifyOptions& options = {});

}  // namespace qss
