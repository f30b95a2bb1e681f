#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qss/error.hpp"
#include "qss/json_io.hpp"
#include "qss/protocols.hpp"
#include "qss/schemes.hpp"
#include "qss/structures.hpp"
#include "qss/verifier.hpp"

namespace qsslab {

namespace {

using qss::Json;

struct Config {
  double tolerance = 1e-9;
  std::string format = "text";
  std::uint64_t seed = 42;
  int max_qubits = qss::kMaxQubits;
};

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw qss::InputError(flag + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw qss::InputError(flag + ": empty list");
  return out;
}

qss::PlayerSubset parse_subset(int n, const std::string& text, const std::string& flag) {
  const auto players = parse_int_list(text, flag);
  for (int p : players) {
    if (p < 1 || p > n) {
      throw qss::InputError(flag + ": player " + std::to_string(p) + " outside 1.." +
                            std::to_string(n));
    }
  }
  return qss::PlayerSubset::from_players(n, players);
}

std::string set_text(const qss::PlayerSubset& s) { return "{" + s.label() + "}"; }

std::string subsets_text(const std::vector<qss::PlayerSubset>& sets) {
  std::string out;
  for (const auto& s : sets) out += (out.empty() ? "" : " ") + set_text(s);
  return out.empty() ? "(none)" : out;
}

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// Key,value CSV for results without a natural table shape.
void emit_kv_csv(std::ostream& out, const Json& j) {
  out << "key,value\n";
  for (const auto& [k, v] : j.items()) {
    std::string value = v.is_string() ? v.get<std::string>() : v.dump();
    if (v.is_number_float()) value = qss::format_number(v.get<double>());
    out << qss::csv_field(k) << "," << qss::csv_field(value) << "\n";
  }
}

qss::VerifyOptions verify_options(const Config& cfg) {
  qss::VerifyOptions opt;
  opt.tolerance = cfg.tolerance;
  opt.max_qubits = cfg.max_qubits;
  return opt;
}

// Two uniform angles give a uniformly random pure qubit. The 53-bit
// conversion keeps draws identical across standard libraries.
std::pair<qss::Complex, qss::Complex> random_secret(std::mt19937_64& rng) {
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double theta = std::acos(1.0 - 2.0 * uniform());
  const double phi = 2.0 * std::numbers::pi * uniform();
  return {qss::Complex(std::cos(theta / 2), 0.0), std::polar(std::sin(theta / 2), phi)};
}

// ---------------------------------------------------------------------------
// structure check

int cmd_structure_check(const Config& cfg, const std::string& path, std::ostream& out) {
  const auto gamma = qss::load_structure(path);
  if (!qss::is_quantum_admissible(gamma)) {
    const auto& m = gamma.minimal_sets();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (!m[i].intersects(m[j])) {
          throw qss::InputError(path + ": disjoint authorized sets " + set_text(m[i]) + " and " +
                                set_text(m[j]) + " (not a quantum access structure)");
        }
      }
    }
  }
  const auto part = qss::adversary_partition(gamma);
  const auto lemma = qss::check_lemma3(gamma);
  const auto perfect = qss::perfect_feasibility(gamma);
  if (cfg.format == "json") {
    emit_json(out, qss::partition_to_json(gamma));
  } else if (cfg.format == "csv") {
    out << "subset,class\n";
    for (std::uint32_t bits = 1; bits < (1u << gamma.n()); ++bits) {
      qss::PlayerSubset s(gamma.n(), bits);
      out << qss::csv_field(set_text(s)) << "," << qss::to_string(qss::classify(gamma, s)) << "\n";
    }
  } else {
    out << "structure " << gamma.label() << " on " << gamma.n() << " players\n";
    out << "admissible; |A1|=" << part.a1.size() << " |A2|=" << part.a2.size()
        << "; perfect: " << (perfect.feasible ? "feasible" : "infeasible") << "\n";
    out << "A1: " << subsets_text(part.a1) << "\n";
    out << "A2: " << subsets_text(part.a2) << "\n";
    out << "complement law: " << (lemma.holds ? "holds" : "fails at " + set_text(*lemma.counterexample))
        << "\n";
    if (perfect.witness) out << "perfect witness: " << set_text(*perfect.witness) << "\n";
    out << "hyperstar: " << (qss::is_hyperstar(gamma) ? "yes" : "no") << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// scheme verify

void print_report_text(const qss::VerificationReport& rep, std::ostream& out) {
  char buf[160];
  out << "scheme " << rep.scheme << " (" << qss::to_string(rep.model) << " model)\n";
  out << "I(R:S)=" << qss::format_number(rep.i_rs) << " S(S)=" << qss::format_number(rep.s_s)
      << " S(R)=" << qss::format_number(rep.s_r) << "\n";
  out << "subset      class       S(A)      S(RA)     I(R:A)    pass\n";
  for (const auto& r : rep.records) {
    std::snprintf(buf, sizeof buf, "%-11s %-11s %-9.6f %-9.6f %-9.6f %s\n",
                  set_text(r.subset).c_str(), qss::to_string(r.classification),
                  qss::clean_number(r.s_a), qss::clean_number(r.s_ra), qss::clean_number(r.i_ra),
                  r.condition_pass ? "yes" : "no");
    out << buf;
  }
  out << "A2 entropy balance: " << (rep.theorem7_balanced ? "holds" : "fails")
      << " (worst " << qss::format_number(rep.theorem7_worst) << ")\n";
  out << "verdict: " << qss::to_string(rep.verdict) << "\n";
  for (const auto& d : rep.deviations) out << "deviation: " << d << "\n";
}

int cmd_scheme_verify(const Config& cfg, const std::string& scheme_path,
                      const std::string& structure_path, const std::string& model,
                      std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto scheme = qss::load_scheme(scheme_path, &warnings);
  for (const auto& w : warnings) err << "warning: " << scheme_path << ": " << w << "\n";
  const auto gamma = qss::load_structure(structure_path);
  const auto rep = qss::verify(scheme, gamma, qss::parse_model(model), verify_options(cfg));
  if (cfg.format == "json") {
    emit_json(out, qss::report_to_json(rep));
  } else if (cfg.format == "csv") {
    out << qss::report_to_csv(rep);
  } else {
    print_report_text(rep, out);
  }
  if (rep.meets_model) return kOk;
  const auto& w = *std::find_if(rep.records.begin(), rep.records.end(),
                                [&](const auto& r) { return r.subset == *rep.witness; });
  err << "verification failed (" << model << "): witness " << set_text(w.subset) << " ["
      << qss::to_string(w.classification) << "] I(R:A)=" << qss::format_number(w.i_ra)
      << " I(R:S)=" << qss::format_number(rep.i_rs) << " S(S)=" << qss::format_number(rep.s_s)
      << "\n";
  return kVerificationFailure;
}

// ---------------------------------------------------------------------------
// build

struct BuildArgs {
  std::string family;
  int n = 0;
  std::string b;
  int center = 1;
  std::string out;
  std::string structure_out;
};

qss::ConstructedScheme build_family(const BuildArgs& a) {
  if (a.family == "example1") {
    auto s = qss::build_example1();
    return {s, *s.particle_structure};
  }
  if (a.n == 0) throw qss::InputError("--n is required for " + a.family);
  if (a.family == "result1") {
    if (a.b.empty()) throw qss::InputError("--b is required for result1");
    if (a.n < 3 || a.n > qss::kMaxSearchParticles) {
      throw qss::InputError("--n must be in 3.." + std::to_string(qss::kMaxSearchParticles));
    }
    return qss::build_result1(a.n, parse_subset(a.n, a.b, "--b"));
  }
  if (a.family == "star") return qss::build_star(a.n, a.center);
  throw qss::InputError("unknown family '" + a.family + "' (expected example1, result1 or star)");
}

int cmd_build(const Config& cfg, const BuildArgs& a, std::ostream& out) {
  const auto built = build_family(a);
  const Json scheme_json = qss::scheme_to_json(built.scheme);
  if (!a.out.empty()) qss::write_text_file(a.out, scheme_json.dump(2) + "\n");
  if (!a.structure_out.empty()) {
    qss::write_text_file(a.structure_out, qss::structure_to_json(built.gamma).dump(2) + "\n");
  }
  Json summary;
  summary["scheme"] = built.scheme.name;
  summary["num_particles"] = built.scheme.num_particles;
  summary["structure"] = qss::structure_to_json(built.gamma);
  summary["out"] = a.out.empty() ? Json(nullptr) : Json(a.out);
  if (cfg.format == "json") {
    if (a.out.empty()) summary["scheme_json"] = scheme_json;
    emit_json(out, summary);
  } else if (cfg.format == "csv") {
    out << "minimal_authorized\n";
    for (const auto& s : built.gamma.minimal_sets()) out << qss::csv_field(set_text(s)) << "\n";
  } else {
    out << built.scheme.name << ": " << built.scheme.num_particles << " particles, minimal authorized "
        << built.gamma.label() << "\n";
    if (!a.out.empty()) {
      out << "wrote " << a.out << "\n";
    } else {
      out << scheme_json.dump(2) << "\n";
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// assign

qss::AccessStructure particle_structure_of(const qss::SchemeSpec& scheme,
                                           const std::string& override_path) {
  if (!override_path.empty()) {
    auto base = qss::load_structure(override_path);
    if (base.n() != scheme.num_particles) {
      throw qss::InputError(override_path + ": base structure has " + std::to_string(base.n()) +
                            " entries, scheme has " + std::to_string(scheme.num_particles) +
                            " particles");
    }
    return base;
  }
  if (!scheme.particle_structure) {
    throw qss::InputError("scheme has no particle_structure; pass --base");
  }
  return *scheme.particle_structure;
}

int cmd_assign_induce(const Config& cfg, const std::string& scheme_path, const std::string& base,
                      std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto scheme = qss::load_scheme(scheme_path, &warnings);
  for (const auto& w : warnings) err << "warning: " << scheme_path << ": " << w << "\n";
  const auto induced = qss::induce_structure(scheme, particle_structure_of(scheme, base));
  Json j;
  j["scheme"] = scheme.name;
  j["assignment"] = scheme.assignment.describe();
  j["induced"] = qss::structure_to_json(induced.structure);
  if (cfg.format == "json") {
    emit_json(out, j);
  } else if (cfg.format == "csv") {
    out << "minimal_authorized\n";
    for (const auto& s : induced.structure.minimal_sets()) out << qss::csv_field(set_text(s)) << "\n";
  } else {
    out << scheme.assignment.describe() << "\n";
    out << "induced " << induced.structure.label() << " on " << induced.target_n << " players\n";
  }
  return kOk;
}

int cmd_assign_search(const Config& cfg, const std::string& scheme_path,
                      const std::string& target_path, const std::string& base, bool no_dealer,
                      const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  auto scheme = qss::load_scheme(scheme_path, &warnings);
  for (const auto& w : warnings) err << "warning: " << scheme_path << ": " << w << "\n";
  const auto particles = particle_structure_of(scheme, base);
  scheme.particle_structure = particles;
  const auto target = qss::load_structure(target_path);
  if (target.n() > scheme.num_particles) {
    throw qss::InputError("target has more players than the scheme has particles");
  }
  if (scheme.num_particles > qss::kMaxSearchParticles) {
    throw qss::ResourceLimit("assignment search is limited to " +
                             std::to_string(qss::kMaxSearchParticles) + " particles");
  }
  const auto opts = verify_options(cfg);
  const auto found = qss::search_assignment(scheme, particles, target, !no_dealer,
                                            qss::generalized_acceptor(opts));
  Json j;
  j["scheme"] = scheme.name;
  j["target"] = qss::structure_to_json(target);
  j["found"] = found.has_value();
  j["assignment"] = found ? Json(found->describe()) : Json(nullptr);
  std::optional<qss::VerificationReport> rep;
  if (found) {
    auto assigned = qss::with_assignment(scheme, *found);
    rep = qss::verify(assigned, target, qss::Model::kGeneralized, opts);
    j["verdict"] = qss::to_string(rep->verdict);
    j["report_hash"] = qss::report_digest(*rep);
    if (!out_path.empty()) qss::write_text_file(out_path, qss::scheme_to_json(assigned).dump(2) + "\n");
  }
  if (cfg.format == "json") {
    emit_json(out, j);
  } else if (cfg.format == "csv") {
    emit_kv_csv(out, j);
  } else if (found) {
    out << "found " << found->describe() << " (verdict " << qss::to_string(rep->verdict) << ")\n";
  } else {
    out << "no assignment of " << scheme.name << " induces " << target.label() << "\n";
  }
  if (!found) {
    err << "no assignment found\n";
    return kVerificationFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// enumerate

std::optional<int> catalog_number(const qss::AccessStructure& gamma) {
  for (const auto& e : qss::hyperstar_catalog()) {
    if (e.structure.n() == gamma.n() && qss::are_isomorphic(e.structure, gamma)) return e.number;
  }
  return std::nullopt;
}

Json enumeration_json(int max_n) {
  const auto classes = qss::enumerate_hyperstars(max_n);
  Json list = Json::array();
  Json beyond = Json::array();
  std::map<int, int> counts;
  std::vector<int> seen;
  for (const auto& c : classes) {
    ++counts[c.n];
    const auto no = catalog_number(c.canonical);
    if (no) seen.push_back(*no);
    Json item;
    item["n"] = c.n;
    item["structure"] = c.canonical.label();
    item["minimal_authorized"] = qss::structure_to_json(c.canonical)["minimal_authorized"];
    item["catalog_no"] = no ? Json(*no) : Json(nullptr);
    item["catalog_structure"] =
        no ? Json(qss::hyperstar_catalog()[*no - 1].structure.label()) : Json(nullptr);
    list.push_back(item);
    if (!no && c.n <= 5) beyond.push_back(c.canonical.label());
  }
  Json count_json = Json::object();
  for (const auto& [n, k] : counts) count_json[std::to_string(n)] = k;
  std::sort(seen.begin(), seen.end());
  Json missing = Json::array();
  for (const auto& e : qss::hyperstar_catalog()) {
    if (e.structure.n() <= max_n && !std::binary_search(seen.begin(), seen.end(), e.number)) {
      missing.push_back(e.number);
    }
  }
  return Json{{"max_n", max_n},
              {"counts", count_json},
              {"classes", list},
              {"beyond_catalog", beyond},
              {"catalog_missing", missing}};
}

int cmd_enumerate(const Config& cfg, int max_n, std::ostream& out) {
  if (max_n < 2 || max_n > qss::kMaxEnumerationPlayers) {
    throw qss::InputError("--max-n must be in 2.." + std::to_string(qss::kMaxEnumerationPlayers));
  }
  const Json j = enumeration_json(max_n);
  if (cfg.format == "json") {
    emit_json(out, j);
  } else if (cfg.format == "csv") {
    out << "n,structure,catalog_no\n";
    for (const auto& c : j["classes"]) {
      out << c["n"].get<int>() << "," << qss::csv_field(c["structure"].get<std::string>()) << ","
          << (c["catalog_no"].is_null() ? "" : std::to_string(c["catalog_no"].get<int>())) << "\n";
    }
  } else {
    for (const auto& [n, k] : j["counts"].items()) out << "n=" << n << ": " << k.get<int>() << " classes\n";
    for (const auto& c : j["classes"]) {
      if (c["catalog_no"].is_null()) continue;
      out << "No." << c["catalog_no"].get<int>() << "  n=" << c["n"].get<int>() << "  "
          << c["structure"].get<std::string>() << "  (catalog form "
          << c["catalog_structure"].get<std::string>() << ")\n";
    }
    out << "beyond catalog (n <= 5):\n";
    for (const auto& s : j["beyond_catalog"]) out << "  " << s.get<std::string>() << "\n";
    if (!j["catalog_missing"].empty()) out << "catalog rows not found: " << j["catalog_missing"].dump() << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// reconstruct

struct ReconstructArgs {
  std::string scheme;
  std::string set;
  std::string protocol = "auto";
  int trials = 20;
  int n = 0;
  std::string b;
  int center = 1;
};

int cmd_reconstruct(const Config& cfg, const ReconstructArgs& a, std::ostream& out,
                    std::ostream& err) {
  if (a.trials < 1 || a.trials > 100000) throw qss::InputError("--trials must be in 1..100000");
  if (a.set.empty()) throw qss::InputError("--set is required");

  // Resolve the scheme: a built-in family name or a scheme JSON file.
  qss::SchemeSpec scheme;
  std::optional<qss::PlayerSubset> family_b;
  if (a.scheme == "example1" || a.scheme == "result1" || a.scheme == "star") {
    BuildArgs ba;
    ba.family = a.scheme;
    ba.n = a.n;
    ba.b = a.b;
    ba.center = a.center;
    scheme = build_family(ba).scheme;
    if (a.scheme == "result1") family_b = parse_subset(a.n, a.b, "--b");
    if (a.scheme == "star") family_b = qss::PlayerSubset::from_players(a.n, {a.center});
  } else {
    std::vector<std::string> warnings;
    scheme = qss::load_scheme(a.scheme, &warnings);
    for (const auto& w : warnings) err << "warning: " << a.scheme << ": " << w << "\n";
  }
  if (scheme.num_particles + 1 > cfg.max_qubits) {
    throw qss::ResourceLimit("scheme needs " + std::to_string(scheme.num_particles + 1) +
                             " qubits, budget is " + std::to_string(cfg.max_qubits));
  }
  const auto set = parse_subset(scheme.num_players(), a.set, "--set");

  std::string protocol = a.protocol;
  if (protocol == "auto") {
    if (a.scheme == "example1") {
      protocol = "circuit";
    } else if (family_b && family_b->is_subset_of(set) && set.size() == family_b->size() + 1) {
      protocol = "measure";
    } else {
      protocol = "decoder";
    }
  }
  if (protocol != "circuit" && protocol != "measure" && protocol != "decoder") {
    throw qss::InputError("--protocol must be circuit, measure or decoder");
  }
  if (protocol == "circuit" && a.scheme != "example1") {
    throw qss::InputError("the circuit protocol applies to example1 only");
  }
  if (protocol == "measure" && !family_b) {
    throw qss::InputError("the measure protocol applies to result1 and star only");
  }

  std::mt19937_64 rng(cfg.seed);
  Json trials = Json::array();
  double min_fid = 1.0;
  Json details;
  double threshold = 1.0 - 1e-9;
  std::optional<qss::ReconstructionProtocol> proto;
  std::optional<qss::DecoderResult> decoder;
  if (protocol == "circuit") {
    proto = qss::example1_circuit(set);
  } else if (protocol == "measure") {
    proto = qss::result1_measure_protocol(a.n, *family_b, set);
  } else {
    threshold = 1.0 - qss::kDecoderFidelityThreshold;
    const std::array<double, 2> mixed = {0.5, 0.5};
    const auto global = qss::share_state(scheme, mixed);
    try {
      decoder = qss::decoupling_decoder(global, scheme.registers_of(set), {"R"});
    } catch (const qss::DecouplingError& e) {
      err << "set " << set_text(set) << " cannot decode: " << e.what() << "\n";
      return kVerificationFailure;
    }
    details = {{"junk_dim", decoder->junk_dim},
               {"i_re", qss::clean_number(decoder->i_re)},
               {"entanglement_fidelity", qss::clean_number(decoder->fidelity)}};
  }

  for (int t = 0; t < a.trials; ++t) {
    const auto [alpha, beta] = random_secret(rng);
    double fid = 0;
    if (proto) {
      const auto initial = qss::encode_secret(scheme, alpha, beta);
      const auto target = qss::PureState(qss::RegisterLayout({proto->output_register}), {alpha, beta});
      const auto outcome = qss::run_protocol(*proto, initial, target);
      fid = outcome.fidelity;
      if (t == 0) {
        details = qss::trace_to_json(*proto, outcome);
        if (protocol == "circuit") {
          details["notes"] = qss::run_example1_circuit(alpha, beta, set).notes;
        }
      }
    } else {
      fid = qss::decoder_secret_fidelity(scheme, *decoder, alpha, beta);
    }
    min_fid = std::min(min_fid, fid);
    trials.push_back({{"trial", t + 1},
                      {"alpha", {qss::clean_number(alpha.real()), qss::clean_number(alpha.imag())}},
                      {"beta", {qss::clean_number(beta.real()), qss::clean_number(beta.imag())}},
                      {"fidelity", qss::clean_number(fid)}});
  }
  const bool ok = min_fid >= threshold;

  Json j;
  j["scheme"] = scheme.name;
  j["set"] = qss::subset_to_json(set);
  j["protocol"] = protocol;
  j["seed"] = cfg.seed;
  j["threshold"] = threshold;
  j["min_fidelity"] = qss::clean_number(min_fid);
  j["pass"] = ok;
  j["trials"] = trials;
  j[protocol == "decoder" ? "decoder" : "trace"] = details;
  if (cfg.format == "json") {
    emit_json(out, j);
  } else if (cfg.format == "csv") {
    out << "trial,alpha_re,alpha_im,beta_re,beta_im,fidelity\n";
    for (const auto& t : trials) {
      out << t["trial"].get<int>() << "," << qss::format_number(t["alpha"][0].get<double>()) << ","
          << qss::format_number(t["alpha"][1].get<double>()) << ","
          << qss::format_number(t["beta"][0].get<double>()) << ","
          << qss::format_number(t["beta"][1].get<double>()) << ","
          << qss::format_number(t["fidelity"].get<double>()) << "\n";
    }
  } else {
    out << scheme.name << " set " << set_text(set) << " protocol " << protocol << "\n";
    if (proto) {
      for (const auto& s : proto->steps) out << "  step: " << qss::describe(s) << "\n";
      for (const auto& note : details["notes"]) out << "  note: " << note.get<std::string>() << "\n";
    } else {
      out << "  junk dimension " << decoder->junk_dim << ", I(R:E)="
          << qss::format_number(decoder->i_re) << "\n";
    }
    char buf[96];
    for (const auto& t : trials) {
      std::snprintf(buf, sizeof buf, "trial %d: fidelity %.12f\n", t["trial"].get<int>(),
                    t["fidelity"].get<double>());
      out << buf;
    }
    out << "min fidelity " << qss::format_number(min_fid) << (ok ? " (pass)" : " (FAIL)") << "\n";
  }
  return ok ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------------------
// tables

int cmd_tables(const Config& cfg, int max_n, const std::string& out_dir, std::ostream& out) {
  if (max_n < 2 || max_n > 5) throw qss::InputError("--max-n must be in 2..5 for tables");
  const auto table = qss::reproduce_tables(max_n, verify_options(cfg));
  const Json table_json = qss::table_to_json(table);
  const std::string csv = qss::table_to_csv(table);
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw qss::InputError(out_dir + ": " + ec.message());
    const auto dir = std::filesystem::path(out_dir);
    qss::write_text_file((dir / "feasibility.json").string(), table_json.dump(2) + "\n");
    qss::write_text_file((dir / "feasibility.csv").string(), csv);
    const Json enumeration = enumeration_json(max_n);
    qss::write_text_file((dir / "catalog_classes.json").string(), enumeration.dump(2) + "\n");
    std::string t1 = "No.,structure,hyperstar,class_found\n";
    for (const auto& e : qss::hyperstar_catalog()) {
      if (e.structure.n() > max_n) continue;
      bool found = false;
      for (const auto& c : enumeration["classes"]) {
        found = found || (!c["catalog_no"].is_null() && c["catalog_no"].get<int>() == e.number);
      }
      t1 += std::to_string(e.number) + "," + qss::csv_field(e.structure.label()) + "," +
            (qss::is_hyperstar(e.structure) ? "yes" : "no") + "," + (found ? "yes" : "no") + "\n";
    }
    qss::write_text_file((dir / "catalog_classes.csv").string(), t1);
  }
  if (cfg.format == "json") {
    emit_json(out, table_json);
  } else if (cfg.format == "csv") {
    out << csv;
  } else {
    for (const auto& r : table.rows) {
      out << "No." << r.number << " " << r.structure.label() << "  PQSS "
          << (r.pqss.feasible ? "feasible" : "infeasible (witness " + set_text(*r.pqss.witness) + ")")
          << "  GQSS " << (r.gqss_verified ? "verified via " + r.route : "unknown") << "\n";
      if (r.gqss_verified) out << "    " << r.scheme_name << " " << r.assignment->describe() << "\n";
    }
    for (const auto& d : table.deviations) out << "deviation: " << d << "\n";
    if (!out_dir.empty()) out << "wrote catalog_classes and feasibility artifacts to " << out_dir << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum secret sharing lab: access structures, schemes and entropy verification",
               "qsslab"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--tolerance", cfg.tolerance, "Absolute tolerance for entropy comparisons")
      ->check(CLI::Range(1e-12, 1e-6));
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized trials");
  app.add_option("--max-qubits", cfg.max_qubits, "Qubit budget including the reference")
      ->check(CLI::Range(2, qss::kMaxQubits));

  std::function<int()> action;

  auto* structure = app.add_subcommand("structure", "Access-structure analyses");
  structure->require_subcommand(1);
  auto* check = structure->add_subcommand("check", "Admissibility, adversary partition, perfect feasibility");
  std::string structure_path;
  check->add_option("path", structure_path, "Access-structure JSON")->required();
  check->callback([&] { action = [&] { return cmd_structure_check(cfg, structure_path, out); }; });

  auto* scheme = app.add_subcommand("scheme", "Scheme analyses");
  scheme->require_subcommand(1);
  auto* verify = scheme->add_subcommand("verify", "Entropy verification against a structure");
  std::string scheme_path;
  std::string verify_structure;
  std::string model = "generalized";
  verify->add_option("scheme", scheme_path, "Scheme JSON")->required();
  verify->add_option("structure", verify_structure, "Access-structure JSON")->required();
  verify->add_option("--model", model, "Secrecy model")->check(CLI::IsMember({"perfect", "generalized"}));
  verify->callback([&] {
    action = [&] { return cmd_scheme_verify(cfg, scheme_path, verify_structure, model, out, err); };
  });

  auto* build = app.add_subcommand("build", "Build a scheme family");
  BuildArgs ba;
  build->add_option("family", ba.family, "example1, result1 or star")
      ->required()
      ->check(CLI::IsMember({"example1", "result1", "star"}));
  build->add_option("--n", ba.n, "Number of particles");
  build->add_option("--b", ba.b, "Comma-separated subset b (result1)");
  build->add_option("--center", ba.center, "Star center");
  build->add_option("--out", ba.out, "Write scheme JSON here");
  build->add_option("--structure-out", ba.structure_out, "Write the access structure JSON here");
  build->callback([&] { action = [&] { return cmd_build(cfg, ba, out); }; });

  auto* assign = app.add_subcommand("assign", "Particle-to-player assignments");
  assign->require_subcommand(1);
  std::string assign_scheme;
  std::string assign_base;
  auto* induce = assign->add_subcommand("induce", "Structure induced by the scheme's assignment");
  induce->add_option("scheme", assign_scheme, "Scheme JSON")->required();
  induce->add_option("--base", assign_base, "Particle-level structure JSON (default: from scheme)");
  induce->callback([&] {
    action = [&] { return cmd_assign_induce(cfg, assign_scheme, assign_base, out, err); };
  });
  auto* search = assign->add_subcommand("search", "Search assignments realizing a target structure");
  std::string search_target;
  std::string search_out;
  bool no_dealer = false;
  search->add_option("scheme", assign_scheme, "Base scheme JSON")->required();
  search->add_option("target", search_target, "Target access-structure JSON")->required();
  search->add_option("--base", assign_base, "Particle-level structure JSON (default: from scheme)");
  search->add_flag("--no-dealer", no_dealer, "Do not let the dealer keep particles");
  search->add_option("--out", search_out, "Write the assigned scheme JSON here");
  search->callback([&] {
    action = [&] {
      return cmd_assign_search(cfg, assign_scheme, search_target, assign_base, no_dealer, search_out,
                               out, err);
    };
  });

  auto* enumerate = app.add_subcommand("enumerate", "Hyperstar isomorphism classes");
  int enum_max_n = 5;
  enumerate->add_option("--max-n", enum_max_n, "Largest player count");
  enumerate->callback([&] { action = [&] { return cmd_enumerate(cfg, enum_max_n, out); }; });

  auto* reconstruct = app.add_subcommand("reconstruct", "Secret reconstruction trials");
  ReconstructArgs ra;
  reconstruct->add_option("scheme", ra.scheme, "example1, result1, star or a scheme JSON path")->required();
  reconstruct->add_option("--set", ra.set, "Comma-separated acting players");
  reconstruct->add_option("--protocol", ra.protocol, "circuit, measure, decoder or auto")
      ->check(CLI::IsMember({"auto", "circuit", "measure", "decoder"}));
  reconstruct->add_option("--trials", ra.trials, "Number of random secrets");
  reconstruct->add_option("--n", ra.n, "Particles (result1, star)");
  reconstruct->add_option("--b", ra.b, "Subset b (result1)");
  reconstruct->add_option("--center", ra.center, "Star center");
  reconstruct->callback([&] { action = [&] { return cmd_reconstruct(cfg, ra, out, err); }; });

  auto* tables = app.add_subcommand("tables", "Catalog feasibility tables");
  std::string out_dir;
  int tables_max_n = 5;
  tables->add_option("--out-dir", out_dir, "Directory for the catalog and feasibility JSON/CSV artifacts");
  tables->add_option("--max-n", tables_max_n, "Largest player count");
  tables->callback([&] { action = [&] { return cmd_tables(cfg, tables_max_n, out_dir, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    return action ? action() : kInputError;
  } catch (const qss::StructuralMismatch& e) {
    err << "structural mismatch: " << e.what() << "\n";
    return kStructuralMismatch;
  } catch (const qss::ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const qss::DecouplingError& e) {
    err << "decoding failed: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const qss::InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace qsslab
