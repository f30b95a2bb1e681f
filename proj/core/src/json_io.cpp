#include "qss/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qss/error.hpp"

namespace qss {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw InputError(field + ": " + msg);
}

const Json& require(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

int require_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(require_int(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<int>> set_list(const Json& j, int n, const std::string& path,
                                       const char* what) {
  if (!j.is_array()) fail(path, "expected an array of sets");
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    auto s = int_list(j[i], p);
    if (s.empty()) fail(p, "empty set");
    for (int x : s) {
      if (x < 1 || x > n) {
        fail(p, std::string(what) + " " + std::to_string(x) + " outside 1.." + std::to_string(n));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

AccessStructure structure_from_sets(int n, const std::vector<std::vector<int>>& sets,
                                    const std::string& path) {
  std::vector<PlayerSubset> subsets;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto s = PlayerSubset::from_players(n, sets[i]);
    if (s.size() != static_cast<int>(sets[i].size())) {
      fail(path + "[" + std::to_string(i) + "]", "repeated entry in {" + s.label() + "}");
    }
    subsets.push_back(s);
  }
  try {
    return AccessStructure(n, subsets);
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

Json sets_to_json(const AccessStructure& gamma) {
  Json arr = Json::array();
  for (const auto& s : gamma.minimal_sets()) arr.push_back(s.players());
  return arr;
}

Json optional_subset(const std::optional<PlayerSubset>& s) {
  return s ? subset_to_json(*s) : Json(nullptr);
}

Json terms_to_json(const PureState& st) {
  Json arr = Json::array();
  for (const auto& [ket, amp] : nonzero_terms(st)) {
    arr.push_back({{"ket", ket}, {"re", clean_number(amp.real())}, {"im", clean_number(amp.imag())}});
  }
  return arr;
}

// Residual of a branch whose output register factorizes: the output's pure
// state is the top eigenvector of its reduced density, phase fixed so the
// first nonzero residual amplitude is real and positive.
std::optional<PureState> branch_residual(const PureState& st, const std::string& output) {
  const auto eig = eigendecompose_hermitian(partial_trace(st, {output}));
  const Eigen::Vector2cd v = eig.vectors.col(0);
  auto res = residual_state(st, output, v(0), v(1));
  auto& amps = res.mutable_amplitudes();
  for (const auto& a : amps) {
    if (std::abs(a) > 1e-12) {
      const Complex phase = std::conj(a) / std::abs(a);
      for (auto& b : amps) b *= phase;
      break;
    }
  }
  return res;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write file");
  out << text;
}

double clean_number(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", clean_number(x));
  return buf;
}

Json subset_to_json(const PlayerSubset& s) { return Json(s.players()); }

Json structure_to_json(const AccessStructure& gamma) {
  return Json{{"players", gamma.n()}, {"minimal_authorized", sets_to_json(gamma)}};
}

AccessStructure structure_from_json(const Json& j) {
  const int n = require_int(require(j, "players", "$"), "$.players");
  if (n < 1 || n > kMaxPlayers) {
    fail("$.players", "must be in 1.." + std::to_string(kMaxPlayers));
  }
  const auto sets = set_list(require(j, "minimal_authorized", "$"), n, "$.minimal_authorized",
                             "player");
  return structure_from_sets(n, sets, "$.minimal_authorized");
}

AccessStructure load_structure(const std::string& path) {
  try {
    return structure_from_json(parse_json(read_text_file(path), path));
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw InputError(path + ": " + msg);
  }
}

Json scheme_to_json(const SchemeSpec& scheme) {
  Json j;
  j["name"] = scheme.name;
  j["num_particles"] = scheme.num_particles;
  j["secret_dim"] = 2;
  Json images = Json::object();
  for (int s = 0; s < 2; ++s) {
    Json terms = Json::array();
    const auto& img = scheme.basis_images[s];
    for (std::size_t x = 0; x < img.size(); ++x) {
      if (std::abs(img[x]) <= 1e-15) continue;
      terms.push_back({{"ket", basis_label(x, scheme.num_particles)},
                       {"re", img[x].real()},
                       {"im", img[x].imag()}});
    }
    images[std::to_string(s)] = terms;
  }
  j["basis_images"] = images;
  Json assignment = Json::object();
  for (int p = 1; p <= scheme.num_players(); ++p) {
    assignment["P" + std::to_string(p)] = scheme.assignment.particles_of(p);
  }
  assignment["DEALER"] = scheme.assignment.particles_of(kDealer);
  j["assignment"] = assignment;
  if (scheme.particle_structure) j["particle_structure"] = sets_to_json(*scheme.particle_structure);
  return j;
}

SchemeSpec scheme_from_json(const Json& j, std::vector<std::string>* warnings) {
  SchemeSpec scheme;
  scheme.name = "scheme";
  if (j.is_object() && j.contains("name")) {
    if (!j["name"].is_string()) fail("$.name", "expected a string");
    scheme.name = j["name"].get<std::string>();
  }
  const int n = require_int(require(j, "num_particles", "$"), "$.num_particles");
  if (n < 1 || n > kMaxSchemeParticles) {
    fail("$.num_particles", "must be in 1.." + std::to_string(kMaxSchemeParticles));
  }
  scheme.num_particles = n;
  if (j.contains("secret_dim") && require_int(j["secret_dim"], "$.secret_dim") != 2) {
    fail("$.secret_dim", "only qubit secrets (2) are supported");
  }

  const auto& images = require(j, "basis_images", "$");
  const std::size_t dim = std::size_t{1} << n;
  for (int s = 0; s < 2; ++s) {
    const std::string key = std::to_string(s);
    const std::string path = "$.basis_images." + key;
    const auto& terms = require(images, key.c_str(), "$.basis_images");
    if (!terms.is_array() || terms.empty()) fail(path, "expected a nonempty array of terms");
    std::vector<Complex> img(dim);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tp = path + "[" + std::to_string(i) + "]";
      const auto& ket_j = require(terms[i], "ket", tp);
      if (!ket_j.is_string()) fail(tp + ".ket", "expected a bit string");
      const auto ket = ket_j.get<std::string>();
      if (static_cast<int>(ket.size()) != n || ket.find_first_not_of("01") != std::string::npos) {
        fail(tp + ".ket", "'" + ket + "' is not a " + std::to_string(n) + "-bit string");
      }
      if (!seen.insert(ket).second) fail(tp + ".ket", "duplicate ket '" + ket + "'");
      const auto& re = require(terms[i], "re", tp);
      if (!re.is_number()) fail(tp + ".re", "expected a number");
      double im = 0;
      if (terms[i].contains("im")) {
        if (!terms[i]["im"].is_number()) fail(tp + ".im", "expected a number");
        im = terms[i]["im"].get<double>();
      }
      img[std::stoull(ket, nullptr, 2)] = Complex(re.get<double>(), im);
    }
    double norm = 0;
    for (const auto& a : img) norm += std::norm(a);
    norm = std::sqrt(norm);
    if (norm == 0) fail(path, "zero image");
    if (std::abs(norm - 1.0) > 1e-6 && warnings) {
      std::ostringstream os;
      os << path << ": norm " << norm << " normalized to 1";
      warnings->push_back(os.str());
    }
    if (std::abs(norm - 1.0) > 1e-12) {
      for (auto& a : img) a /= norm;
    }
    scheme.basis_images[s] = std::move(img);
  }
  try {
    check_isometry({scheme.basis_images[0], scheme.basis_images[1]});
  } catch (const InputError& e) {
    fail("$.basis_images", e.what());
  }

  const auto& assignment = require(j, "assignment", "$");
  if (!assignment.is_object()) fail("$.assignment", "expected an object");
  int players = 0;
  for (const auto& [key, value] : assignment.items()) {
    if (key == "DEALER") continue;
    if (key.size() < 2 || key[0] != 'P' || key.find_first_not_of("0123456789", 1) != std::string::npos) {
      fail("$.assignment." + key, "expected keys P1..Pn and DEALER");
    }
    players = std::max(players, std::stoi(key.substr(1)));
  }
  if (players < 1) fail("$.assignment", "no players");
  std::vector<std::vector<int>> per_player;
  for (int p = 1; p <= players; ++p) {
    const std::string key = "P" + std::to_string(p);
    if (!assignment.contains(key)) fail("$.assignment", "missing " + key);
    per_player.push_back(int_list(assignment[key], "$.assignment." + key));
  }
  std::vector<int> dealer;
  if (assignment.contains("DEALER")) dealer = int_list(assignment["DEALER"], "$.assignment.DEALER");
  try {
    scheme.assignment = Assignment::from_lists(n, per_player, dealer);
  } catch (const InputError& e) {
    fail("$.assignment", e.what());
  }

  if (j.contains("particle_structure")) {
    const auto sets = set_list(j["particle_structure"], n, "$.particle_structure", "particle");
    scheme.particle_structure = structure_from_sets(n, sets, "$.particle_structure");
  }
  return scheme;
}

SchemeSpec load_scheme(const std::string& path, std::vector<std::string>* warnings) {
  try {
    return scheme_from_json(parse_json(read_text_file(path), path), warnings);
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw InputError(path + ": " + msg);
  }
}

Json partition_to_json(const AccessStructure& gamma) {
  const auto part = adversary_partition(gamma);
  const auto lemma = check_lemma3(gamma);
  const auto perfect = perfect_feasibility(gamma);
  Json a1 = Json::array();
  for (const auto& s : part.a1) a1.push_back(subset_to_json(s));
  Json a2 = Json::array();
  for (const auto& s : part.a2) a2.push_back(subset_to_json(s));
  Json j;
  j["structure"] = structure_to_json(gamma);
  j["admissible"] = true;
  j["hyperstar"] = is_hyperstar(gamma);
  j["a1"] = a1;
  j["a2"] = a2;
  j["complement_law"] = {{"holds", lemma.holds}, {"counterexample", optional_subset(lemma.counterexample)}};
  j["perfect"] = {{"feasible", perfect.feasible}, {"witness", optional_subset(perfect.witness)}};
  return j;
}

Json report_to_json(const VerificationReport& report) {
  Json j;
  j["scheme"] = report.scheme;
  j["model"] = to_string(report.model);
  j["i_rs"] = clean_number(report.i_rs);
  j["s_s"] = clean_number(report.s_s);
  j["s_r"] = clean_number(report.s_r);
  j["verdict"] = to_string(report.verdict);
  j["meets_model"] = report.meets_model;
  j["witness"] = optional_subset(report.witness);
  j["theorem7_balanced"] = report.theorem7_balanced;
  j["theorem7_worst"] = clean_number(report.theorem7_worst);
  Json records = Json::array();
  for (const auto& r : report.records) {
    records.push_back({{"subset", subset_to_json(r.subset)},
                       {"class", to_string(r.classification)},
                       {"s_a", clean_number(r.s_a)},
                       {"s_ra", clean_number(r.s_ra)},
                       {"i_ra", clean_number(r.i_ra)},
                       {"pass", r.condition_pass}});
  }
  j["records"] = records;
  j["deviations"] = report.deviations;
  return j;
}

std::string report_to_csv(const VerificationReport& report) {
  std::string out = "subset,class,s_a,s_ra,i_ra,pass\n";
  for (const auto& r : report.records) {
    out += csv_field("{" + r.subset.label() + "}") + "," + to_string(r.classification) + "," +
           format_number(r.s_a) + "," + format_number(r.s_ra) + "," + format_number(r.i_ra) + "," +
           (r.condition_pass ? "true" : "false") + "\n";
  }
  return out;
}

Json trace_to_json(const ReconstructionProtocol& protocol, const ProtocolOutcome& outcome) {
  Json j;
  j["protocol"] = protocol.name;
  j["acting_set"] = subset_to_json(protocol.acting_set);
  j["output_register"] = outcome.output_register;
  Json steps = Json::array();
  for (const auto& s : protocol.steps) steps.push_back(describe(s));
  j["steps"] = steps;
  j["fidelity"] = clean_number(outcome.fidelity);
  j["residual_factorized"] = outcome.residual_factorized;
  Json branches = Json::array();
  for (const auto& b : outcome.branches) {
    Json bj;
    bj["outcomes"] = Json(b.outcomes);
    bj["probability"] = clean_number(b.probability);
    if (b.state) {
      bj["fidelity"] = clean_number(b.fidelity);
      bj["residual_factorized"] = b.residual_factorized;
      bj["residual"] = b.residual_factorized
                           ? terms_to_json(*branch_residual(*b.state, outcome.output_register))
                           : Json(nullptr);
    }
    branches.push_back(bj);
  }
  j["branches"] = branches;
  j["notes"] = outcome.notes;
  return j;
}

Json table_to_json(const TableReport& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row;
    row["number"] = r.number;
    row["structure"] = r.structure.label();
    row["minimal_authorized"] = sets_to_json(r.structure);
    row["pqss"] = {{"feasible", r.pqss.feasible}, {"witness", optional_subset(r.pqss.witness)}};
    row["gqss"] = r.gqss_verified ? "verified" : "unknown";
    row["route"] = r.route;
    row["scheme"] = r.scheme_name.empty() ? Json(nullptr) : Json(r.scheme_name);
    row["assignment"] = r.assignment ? Json(r.assignment->describe()) : Json(nullptr);
    row["report_hash"] = r.report_hash.empty() ? Json(nullptr) : Json(r.report_hash);
    row["deviations"] = r.deviations;
    rows.push_back(row);
  }
  return Json{{"rows", rows}, {"deviations", table.deviations}};
}

std::string table_to_csv(const TableReport& table) {
  std::string out = "No.,structure,PQSS,GQSS,evidence\n";
  for (const auto& r : table.rows) {
    const std::string pqss =
        r.pqss.feasible ? "feasible" : "infeasible (A2 witness {" + r.pqss.witness->label() + "})";
    std::string evidence;
    if (r.gqss_verified) {
      evidence = r.route + ": " + r.scheme_name + " " + r.assignment->describe() + " digest " +
                 r.report_hash;
    } else {
      evidence = "exhaustive search found no realization";
    }
    out += std::to_string(r.number) + "," + csv_field(r.structure.label()) + "," + csv_field(pqss) +
           "," + (r.gqss_verified ? "verified" : "unknown") + "," + csv_field(evidence) + "\n";
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace qss
