#pragma once

// JSON and CSV serialization for structures, schemes, reports and traces.
// Readers throw InputError with a field path (and line/column for syntax errors).

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qss/protocols.hpp"
#include "qss/schemes.hpp"
#include "qss/structures.hpp"
#include "qss/verifier.hpp"

namespace qss {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become InputError "<source>:<line>:<col>: ...".
Json parse_json(const std::string& text, const std::string& source = "<input>");

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Rounds to 1e-12 absolute and clears negative zero, so printed reports are stable.
double clean_number(double x);
/// 12 significant digits, '.' separator.
std::string format_number(double x);

Json subset_to_json(const PlayerSubset& s);

// {"players": n, "minimal_authorized": [[1,2,3],[1,4]]}
Json structure_to_json(const AccessStructure& gamma);
AccessStructure structure_from_json(const Json& j);
AccessStructure load_structure(const std::string& path);

// {"name", "num_particles", "secret_dim": 2, "basis_images": {"0": [{"ket","re","im"}], "1": [...]},
//  "assignment": {"P1": [1], ..., "DEALER": []}, "particle_structure": [[..]]}
Json scheme_to_json(const SchemeSpec& scheme);
/// Normalizes images whose norm is off by more than 1e-12; a deviation above
/// 1e-6 adds a warning. Rejects non-isometries and invalid assignments.
SchemeSpec scheme_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);
SchemeSpec load_scheme(const std::string& path, std::vector<std::string>* warnings = nullptr);

Json partition_to_json(const AccessStructure& gamma);

Json report_to_json(const VerificationReport& report);
/// subset,class,s_a,s_ra,i_ra,pass
std::string report_to_csv(const VerificationReport& report);

Json trace_to_json(const ReconstructionProtocol& protocol, const ProtocolOutcome& outcome);

Json table_to_json(const TableReport& table);
/// No.,structure,PQSS,GQSS,evidence
std::string table_to_csv(const TableReport& table);

std::string csv_field(const std::string& s);

}  // namespace qss
