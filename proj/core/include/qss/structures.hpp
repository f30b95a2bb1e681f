#pragma once

// Combinatorics of quantum access structures.
//
// Players are numbered 1..n externally; bit (i-1) of a PlayerSubset mask
// stands for player P_i. An access structure is stored as the antichain of
// its minimal authorized sets; closure membership is computed on demand.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qss {

inline constexpr int kMaxPlayers = 16;
inline constexpr int kMaxIsomorphismPlayers = 8;
inline constexpr int kMaxEnumerationPlayers = 6;

class PlayerSubset {
 public:
  PlayerSubset() = default;
  PlayerSubset(int n, std::uint32_t bits);

  /// Builds a subset from 1-based player indices.
  static PlayerSubset from_players(int n, const std::vector<int>& players);
  static PlayerSubset empty(int n) { return PlayerSubset(n, 0); }
  static PlayerSubset full(int n);

  int n() const { return n_; }
  std::uint32_t bits() const { return bits_; }
  bool contains(int player) const;  // 1-based
  bool is_empty() const { return bits_ == 0; }
  int size() const;

  /// 1-based player indices in ascending order.
  std::vector<int> players() const;

  PlayerSubset complement() const;
  PlayerSubset operator|(const PlayerSubset& o) const;
  PlayerSubset operator&(const PlayerSubset& o) const;
  bool is_subset_of(const PlayerSubset& o) const;
  bool intersects(const PlayerSubset& o) const;

  /// Compact label like "123" (players below 10) or "1,2,13".
  std::string label() const;

  friend bool operator==(const PlayerSubset&, const PlayerSubset&) = default;
  friend auto operator<=>(const PlayerSubset& a, const PlayerSubset& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  void check_same_n(const PlayerSubset& o) const;

  int n_ = 0;
  std::uint32_t bits_ = 0;
};

class AccessStructure {
 public:
  AccessStructure() = default;

  /// Takes an antichain of nonempty minimal sets. Throws InputError naming the
  /// offending set when a set is empty, out of range, duplicated or contains
  /// another one.
  AccessStructure(int n, std::vector<PlayerSubset> minimal_sets);

  /// Reduces an arbitrary family of authorized sets to its minimal antichain.
  static AccessStructure from_family(int n, std::vector<PlayerSubset> family);
  /// Convenience: 1-based player lists, must already form an antichain.
  static AccessStructure from_lists(int n, const std::vector<std::vector<int>>& sets);

  int n() const { return n_; }
  /// Sorted ascending by bitmask.
  const std::vector<PlayerSubset>& minimal_sets() const { return minimal_; }
  std::vector<std::vector<int>> as_lists() const;

  /// Monotone closure membership: some minimal set is contained in s.
  bool contains(const PlayerSubset& s) const;

  /// e.g. {123,14}
  std::string label() const;

  friend bool operator==(const AccessStructure&, const AccessStructure&) = default;

 private:
  int n_ = 0;
  std::vector<PlayerSubset> minimal_;
};

struct AdversaryPartition {
  std::vector<PlayerSubset> a1;  // disjoint from some authorized set
  std::vector<PlayerSubset> a2;  // meets every authorized set
};

struct Hypergraph {
  int n = 0;
  std::vector<PlayerSubset> edges;
};

enum class SubsetClass { kAuthorized, kA1, kA2 };
const char* to_string(SubsetClass c);

struct ComplementLawCheck {
  bool holds = true;
  std::optional<PlayerSubset> counterexample;
};

struct PerfectFeasibility {
  bool feasible = true;
  std::optional<PlayerSubset> witness;  // member of A2 when infeasible
};

/// Player permutation: image[i] is the 0-based image of player i+1.
using Permutation = std::vector<int>;

struct HyperstarClass {
  int n = 0;
  AccessStructure canonical;
};

bool monotone_closure_contains(const AccessStructure& gamma, const PlayerSubset& s);
bool is_quantum_admissible(const AccessStructure& gamma);

/// Classifies a nonempty subset. Authorized if in the closure, else A1/A2.
SubsetClass classify(const AccessStructure& gamma, const PlayerSubset& s);

/// Throws InputError if gamma is not quantum-admissible.
AdversaryPartition adversary_partition(const AccessStructure& gamma);

ComplementLawCheck check_lemma3(const AccessStructure& gamma);
PerfectFeasibility perfect_feasibility(const AccessStructure& gamma);

/// All k-subsets of n players. Requires 1 <= k <= n and n < 2k.
AccessStructure threshold_structure(int k, int n);

bool is_hyperstar(const Hypergraph& h);
bool is_hyperstar(const AccessStructure& gamma);

PlayerSubset permute(const PlayerSubset& s, const Permutation& perm);
AccessStructure permute(const AccessStructure& gamma, const Permutation& perm);
Permutation inverse(const Permutation& perm);

/// Brute force over all n! player permutations; n <= 8.
std::optional<Permutation> are_isomorphic(const AccessStructure& g1, const AccessStructure& g2);

/// Lexicographically least sorted bitmask list over all player permutations.
AccessStructure canonical_form(const AccessStructure& gamma);

/// Isomorphism classes of covering hyperstar antichains for 2 <= n <= max_n,
/// ordered by n then by canonical bitmask list.
std::vector<HyperstarClass> enumerate_hyperstars(int max_n);

/// Every nonempty antichain on n players (n <= 5), in a fixed order.
std::vector<AccessStructure> all_antichains(int n);

struct CatalogEntry {
  int number = 0;
  AccessStructure structure;
};

/// The 16 reference hyperstar structures on at most five players, numbered 1..16.
const std::vector<CatalogEntry>& hyperstar_catalog();

}  // namespace qss
