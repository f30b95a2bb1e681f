#include "qss/structures.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "qss/error.hpp"

namespace qss {

namespace {

std::string list_label(const std::vector<int>& players) {
  std::ostringstream os;
  bool wide = !players.empty() && players.back() >= 10;
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (wide && i > 0) os << ',';
    os << players[i];
  }
  return os.str();
}

std::uint32_t permute_bits(std::uint32_t bits, const Permutation& perm) {
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if ((bits >> i) & 1u) out |= 1u << perm[i];
  }
  return out;
}

// Calls fn(masks) for every antichain of subsets of an m-element ground set,
// skipping the empty family. Subsets are visited in increasing mask order.
void for_each_antichain(int m, bool allow_empty_member,
                        const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  const std::uint32_t count = 1u << m;
  std::vector<std::uint32_t> current;
  std::function<void(std::uint32_t)> rec = [&](std::uint32_t next) {
    if (next == count) {
      if (!current.empty()) fn(current);
      return;
    }
    rec(next + 1);
    if (next == 0 && !allow_empty_member) return;
    for (std::uint32_t c : current) {
      if ((c & next) == c || (c & next) == next) return;
    }
    current.push_back(next);
    rec(next + 1);
    current.pop_back();
  };
  rec(0);
}

void check_player_count(int n) {
  if (n < 1 || n > kMaxPlayers) {
    throw InputError("player count " + std::to_string(n) + " outside [1, " +
                     std::to_string(kMaxPlayers) + "]");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PlayerSubset

PlayerSubset::PlayerSubset(int n, std::uint32_t bits) : n_(n), bits_(bits) {
  check_player_count(n);
  if (n < 32 && (bits >> n) != 0) {
    throw InputError("subset mask " + std::to_string(bits) + " exceeds " + std::to_string(n) +
                     " players");
  }
}

PlayerSubset PlayerSubset::from_players(int n, const std::vector<int>& players) {
  check_player_count(n);
  std::uint32_t bits = 0;
  for (int p : players) {
    if (p < 1 || p > n) {
      throw InputError("player index " + std::to_string(p) + " outside 1.." + std::to_string(n));
    }
    bits |= 1u << (p - 1);
  }
  return PlayerSubset(n, bits);
}

PlayerSubset PlayerSubset::full(int n) {
  check_player_count(n);
  return PlayerSubset(n, (1u << n) - 1u);
}

bool PlayerSubset::contains(int player) const {
  return player >= 1 && player <= n_ && ((bits_ >> (player - 1)) & 1u);
}

int PlayerSubset::size() const { return std::popcount(bits_); }

std::vector<int> PlayerSubset::players() const {
  std::vector<int> out;
  for (int i = 0; i < n_; ++i) {
    if ((bits_ >> i) & 1u) out.push_back(i + 1);
  }
  return out;
}

PlayerSubset PlayerSubset::complement() const {
  return PlayerSubset(n_, ~bits_ & ((1u << n_) - 1u));
}

void PlayerSubset::check_same_n(const PlayerSubset& o) const {
  if (n_ != o.n_) {
    throw InputError("player-count mismatch: " + std::to_string(n_) + " vs " +
                     std::to_string(o.n_));
  }
}

PlayerSubset PlayerSubset::operator|(const PlayerSubset& o) const {
  check_same_n(o);
  return PlayerSubset(n_, bits_ | o.bits_);
}

PlayerSubset PlayerSubset::operator&(const PlayerSubset& o) const {
  check_same_n(o);
  return PlayerSubset(n_, bits_ & o.bits_);
}

bool PlayerSubset::is_subset_of(const PlayerSubset& o) const {
  check_same_n(o);
  return (bits_ & o.bits_) == bits_;
}

bool PlayerSubset::intersects(const PlayerSubset& o) const {
  check_same_n(o);
  return (bits_ & o.bits_) != 0;
}

std::string PlayerSubset::label() const { return list_label(players()); }

// ---------------------------------------------------------------------------
// AccessStructure

AccessStructure::AccessStructure(int n, std::vector<PlayerSubset> minimal_sets) : n_(n) {
  check_player_count(n);
  for (const auto& s : minimal_sets) {
    if (s.n() != n) {
      throw InputError("set {" + s.label() + "} built for " + std::to_string(s.n()) +
                       " players, structure has " + std::to_string(n));
    }
    if (s.is_empty()) throw InputError("empty authorized set");
  }
  std::sort(minimal_sets.begin(), minimal_sets.end());
  for (std::size_t i = 0; i < minimal_sets.size(); ++i) {
    for (std::size_t j = 0; j < minimal_sets.size(); ++j) {
      if (i == j) continue;
      if (minimal_sets[i] == minimal_sets[j]) {
        throw InputError("duplicate authorized set {" + minimal_sets[i].label() + "}");
      }
      if (minimal_sets[i].is_subset_of(minimal_sets[j])) {
        throw InputError("not an antichain: {" + minimal_sets[j].label() + "} contains {" +
                         minimal_sets[i].label() + "}");
      }
    }
  }
  minimal_ = std::move(minimal_sets);
}

AccessStructure AccessStructure::from_family(int n, std::vector<PlayerSubset> family) {
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<PlayerSubset> minimal;
  for (const auto& s : family) {
    bool dominated = std::any_of(family.begin(), family.end(), [&](const PlayerSubset& t) {
      return t != s && t.is_subset_of(s);
    });
    if (!dominated) minimal.push_back(s);
  }
  return AccessStructure(n, std::move(minimal));
}

AccessStructure AccessStructure::from_lists(int n, const std::vector<std::vector<int>>& sets) {
  std::vector<PlayerSubset> subsets;
  subsets.reserve(sets.size());
  for (const auto& s : sets) subsets.push_back(PlayerSubset::from_players(n, s));
  return AccessStructure(n, std::move(subsets));
}

std::vector<std::vector<int>> AccessStructure::as_lists() const {
  std::vector<std::vector<int>> out;
  out.reserve(minimal_.size());
  for (const auto& s : minimal_) out.push_back(s.players());
  return out;
}

bool AccessStructure::contains(const PlayerSubset& s) const {
  if (s.n() != n_) {
    throw InputError("player-count mismatch: subset over " + std::to_string(s.n()) +
                     " players, structure over " + std::to_string(n_));
  }
  return std::any_of(minimal_.begin(), minimal_.end(),
                     [&](const PlayerSubset& m) { return m.is_subset_of(s); });
}

std::string AccessStructure::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < minimal_.size(); ++i) {
    if (i > 0) out += ',';
    out += minimal_[i].label();
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Predicates and structural checks

const char* to_string(SubsetClass c) {
  switch (c) {
    case SubsetClass::kAuthorized: return "authorized";
    case SubsetClass::kA1: return "A1";
    case SubsetClass::kA2: return "A2";
  }
  return "?";
}

bool monotone_closure_contains(const AccessStructure& gamma, const PlayerSubset& s) {
  return gamma.contains(s);
}

bool is_quantum_admissible(const AccessStructure& gamma) {
  const auto& sets = gamma.minimal_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (!sets[i].intersects(sets[j])) return false;
    }
  }
  return true;
}

SubsetClass classify(const AccessStructure& gamma, const PlayerSubset& s) {
  if (gamma.contains(s)) return SubsetClass::kAuthorized;
  // A minimal authorized set disjoint from s exists iff any authorized set is.
  for (const auto& b : gamma.minimal_sets()) {
    if (!b.intersects(s)) return SubsetClass::kA1;
  }
  return SubsetClass::kA2;
}

AdversaryPartition adversary_partition(const AccessStructure& gamma) {
  if (!is_quantum_admissible(gamma)) {
    throw InputError("access structure " + gamma.label() + " has disjoint authorized sets");
  }
  AdversaryPartition out;
  const int n = gamma.n();
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
    PlayerSubset s(n, bits);
    switch (classify(gamma, s)) {
      case SubsetClass::kA1: out.a1.push_back(s); break;
      case SubsetClass::kA2: out.a2.push_back(s); break;
      case SubsetClass::kAuthorized: break;
    }
  }
  return out;
}

ComplementLawCheck check_lemma3(const AccessStructure& gamma) {
  const auto partition = adversary_partition(gamma);
  for (const auto& a : partition.a1) {
    if (!gamma.contains(a.complement())) return {false, a};
  }
  for (const auto& a : partition.a2) {
    const auto c = a.complement();
    if (c.is_empty() || classify(gamma, c) != SubsetClass::kA2) return {false, a};
  }
  return {};
}

PerfectFeasibility perfect_feasibility(const AccessStructure& gamma) {
  const auto partition = adversary_partition(gamma);
  if (partition.a2.empty()) return {true, std::nullopt};
  return {false, partition.a2.front()};
}

AccessStructure threshold_structure(int k, int n) {
  check_player_count(n);
  if (k < 1 || k > n) {
    throw InputError("threshold k=" + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
  if (n >= 2 * k) {
    throw InputError("((" + std::to_string(k) + "," + std::to_string(n) +
                     ")) is not a quantum access structure: two disjoint " + std::to_string(k) +
                     "-subsets exist");
  }
  std::vector<PlayerSubset> sets;
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
    if (std::popcount(bits) == k) sets.emplace_back(n, bits);
  }
  return AccessStructure(n, std::move(sets));
}

bool is_hyperstar(const Hypergraph& h) {
  if (h.edges.empty()) throw InputError("hypergraph has no edges");
  std::uint32_t common = PlayerSubset::full(h.n).bits();
  for (const auto& e : h.edges) common &= e.bits();
  return common != 0;
}

bool is_hyperstar(const AccessStructure& gamma) {
  return is_hyperstar(Hypergraph{gamma.n(), gamma.minimal_sets()});
}

// ---------------------------------------------------------------------------
// Isomorphism

PlayerSubset permute(const PlayerSubset& s, const Permutation& perm) {
  if (static_cast<int>(perm.size()) != s.n()) throw InputError("permutation size mismatch");
  return PlayerSubset(s.n(), permute_bits(s.bits(), perm));
}

AccessStructure permute(const AccessStructure& gamma, const Permutation& perm) {
  std::vector<PlayerSubset> sets;
  for (const auto& s : gamma.minimal_sets()) sets.push_back(permute(s, perm));
  return AccessStructure(gamma.n(), std::move(sets));
}

Permutation inverse(const Permutation& perm) {
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

std::optional<Permutation> are_isomorphic(const AccessStructure& g1, const AccessStructure& g2) {
  if (g1.n() != g2.n()) {
    throw InputError("isomorphism test needs equal player counts (" + std::to_string(g1.n()) +
                     " vs " + std::to_string(g2.n()) + ")");
  }
  const int n = g1.n();
  if (n > kMaxIsomorphismPlayers) {
    throw InputError("isomorphism search limited to " + std::to_string(kMaxIsomorphismPlayers) +
                     " players");
  }
  if (g1.minimal_sets().size() != g2.minimal_sets().size()) return std::nullopt;

  std::vector<std::uint32_t> target;
  for (const auto& s : g2.minimal_sets()) target.push_back(s.bits());
  std::vector<std::uint32_t> mapped(target.size());

  Permutation perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      mapped[i] = permute_bits(g1.minimal_sets()[i].bits(), perm);
    }
    std::sort(mapped.begin(), mapped.end());
    if (mapped == target) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

namespace {

std::vector<std::uint32_t> canonical_masks(const std::vector<std::uint32_t>& masks,
                                           const std::vector<Permutation>& perms) {
  std::vector<std::uint32_t> best;
  std::vector<std::uint32_t> mapped(masks.size());
  for (const auto& perm : perms) {
    for (std::size_t i = 0; i < masks.size(); ++i) mapped[i] = permute_bits(masks[i], perm);
    std::sort(mapped.begin(), mapped.end());
    if (best.empty() || mapped < best) best = mapped;
  }
  return best;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> perms;
  Permutation perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return perms;
}

AccessStructure structure_from_masks(int n, const std::vector<std::uint32_t>& masks) {
  std::vector<PlayerSubset> sets;
  for (auto m : masks) sets.emplace_back(n, m);
  return AccessStructure(n, std::move(sets));
}

}  // namespace

AccessStructure canonical_form(const AccessStructure& gamma) {
  const int n = gamma.n();
  if (n > kMaxIsomorphismPlayers) {
    throw InputError("canonical form limited to " + std::to_string(kMaxIsomorphismPlayers) +
                     " players");
  }
  std::vector<std::uint32_t> masks;
  for (const auto& s : gamma.minimal_sets()) masks.push_back(s.bits());
  return structure_from_masks(n, canonical_masks(masks, all_permutations(n)));
}

std::vector<HyperstarClass> enumerate_hyperstars(int max_n) {
  if (max_n < 2 || max_n > kMaxEnumerationPlayers) {
    throw InputError("enumeration bound max_n=" + std::to_string(max_n) + " outside 2.." +
                     std::to_string(kMaxEnumerationPlayers));
  }
  std::vector<HyperstarClass> out;
  for (int n = 2; n <= max_n; ++n) {
    // Up to relabeling, player 1 lies in the common core, so every edge is
    // {1} plus a member of an antichain on the remaining n-1 players that
    // covers them.
    const int m = n - 1;
    const std::uint32_t cover = (1u << m) - 1u;
    const auto perms = all_permutations(n);
    std::set<std::vector<std::uint32_t>> classes;
    for_each_antichain(m, true, [&](const std::vector<std::uint32_t>& tails) {
      std::uint32_t u = 0;
      for (auto t : tails) u |= t;
      if (u != cover) return;
      std::vector<std::uint32_t> masks;
      for (auto t : tails) masks.push_back(1u | (t << 1));
      classes.insert(canonical_masks(masks, perms));
    });
    for (const auto& c : classes) out.push_back({n, structure_from_masks(n, c)});
  }
  return out;
}

std::vector<AccessStructure> all_antichains(int n) {
  if (n < 1 || n > 5) throw InputError("antichain listing limited to 1..5 players");
  std::vector<AccessStructure> out;
  for_each_antichain(n, false, [&](const std::vector<std::uint32_t>& masks) {
    out.push_back(structure_from_masks(n, masks));
  });
  return out;
}

const std::vector<CatalogEntry>& hyperstar_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    const std::vector<std::vector<std::vector<int>>> rows = {
        {{1, 2}},
        {{1, 2}, {1, 3}},
        {{1, 2, 3}},
        {{1, 2}, {1, 3}, {1, 4}},
        {{1, 2, 3}, {1, 4}},
        {{1, 2, 3}, {1, 2, 4}},
        {{1, 2, 3, 4}},
        {{1, 2}, {1, 3}, {1, 4}, {1, 5}},
        {{1, 2}, {1, 3}, {1, 4, 5}},
        {{1, 2}, {1, 3, 4}, {1, 3, 5}},
        {{1, 2}, {1, 3, 4, 5}},
        {{1, 2, 3}, {1, 2, 4}, {1, 2, 5}},
        {{1, 2, 3}, {1, 4, 5}},
        {{1, 2, 3}, {1, 2, 4, 5}},
        {{1, 2, 3, 4}, {1, 2, 3, 5}},
        {{1, 2, 3, 4, 5}},
    };
    std::vector<CatalogEntry> entries;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      int n = 0;
      for (const auto& s : rows[i]) n = std::max(n, *std::max_element(s.begin(), s.end()));
      entries.push_back({static_cast<int>(i) + 1, AccessStructure::from_lists(n, rows[i])});
    }
    return entries;
  }();
  return catalog;
}

}  // namespace qss
