#pragma once

// Share-distribution schemes: an isometry from one secret qubit onto
// particle qubits p1..pN, plus an assignment of particles to holders.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qss/qstate.hpp"
#include "qss/structures.hpp"

namespace qss {

inline constexpr int kDealer = 0;
inline constexpr int kMaxSearchParticles = 7;
inline constexpr int kMaxSchemeParticles = kMaxQubits - 1;

/// Particle -> holder map. holder(p) is 1..num_players, or kDealer.
class Assignment {
 public:
  Assignment() = default;
  /// holders[i] is the holder of particle i+1.
  Assignment(int num_players, std::vector<int> holders);

  static Assignment identity(int num_particles);
  /// 1-based particle lists per player (index 0 = P1); remaining particles go
  /// to `dealer`. Throws InputError unless this is a partition of 1..num_particles.
  static Assignment from_lists(int num_particles, const std::vector<std::vector<int>>& per_player,
                               const std::vector<int>& dealer = {});

  int num_players() const { return num_players_; }
  int num_particles() const { return static_cast<int>(holders_.size()); }
  int holder(int particle) const { return holders_.at(particle - 1); }
  const std::vector<int>& holders() const { return holders_; }

  /// 1-based particle indices held by a player (or kDealer).
  std::vector<int> particles_of(int holder) const;
  /// Bitmask over particles (bit p-1) held jointly by the players in s.
  std::uint32_t particle_mask(const PlayerSubset& s) const;

  /// e.g. "P1<-{1,4} P2<-{2} DEALER<-{}".
  std::string describe() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  int num_players_ = 0;
  std::vector<int> holders_;
};

struct SchemeSpec {
  std::string name;
  int num_particles = 0;
  /// Dense images of |0> and |1> over p1..pN (p1 is the most significant bit).
  std::array<std::vector<Complex>, 2> basis_images;
  Assignment assignment;
  /// Particle-level structure the construction guarantees, if known.
  std::optional<AccessStructure> particle_structure;

  int num_players() const { return assignment.num_players(); }
  std::vector<std::string> particle_labels() const;
  IsometryImages isometry() const;
  /// Registers (p labels) held by the players in s; dealer particles never included.
  std::vector<std::string> registers_of(const PlayerSubset& s) const;
  std::vector<std::string> dealer_registers() const;

  friend bool operator==(const SchemeSpec&, const SchemeSpec&) = default;
};

struct ConstructedScheme {
  SchemeSpec scheme;
  AccessStructure gamma;
};

struct InducedStructure {
  int target_n = 0;
  AccessStructure structure;
};

/// Four particles: |0> -> (|0000>+|1111>)/sqrt2, |1> -> (|0011>+|1100>)/sqrt2.
SchemeSpec build_example1();

/// The b-family on n particles (3 <= n <= 7, b a nonempty proper subset):
/// |0> -> (|0..0>+|1..1>)/sqrt2, |1> -> (|x>+|~x>)/sqrt2 with x the indicator of b.
/// The structure is {b+l : l not in b} u {~b+l : l in b}, reduced to minimal sets.
ConstructedScheme build_result1(int n, const PlayerSubset& b);

/// Star on n players around center: the b-family with b = {center}.
ConstructedScheme build_star(int n, int center);

/// Player subset authorized iff its particles contain a base authorized set.
InducedStructure induce_structure(const AccessStructure& base, const Assignment& assignment);
InducedStructure induce_structure(const SchemeSpec& scheme, const AccessStructure& base);

/// Same scheme with a new assignment; the particle structure carries over.
SchemeSpec with_assignment(const SchemeSpec& scheme, Assignment assignment);

/// Moves particle i+1 to position perm[i]+1 in the images and particle structure;
/// the assignment stays attached to positions.
SchemeSpec permute_particles(const SchemeSpec& scheme, const Permutation& perm);

/// |RS> for the given secret distribution pushed through the scheme; registers (R, p1..pN).
PureState share_state(const SchemeSpec& scheme, std::span<const double> probabilities);
/// alpha U|0> + beta U|1> over p1..pN.
PureState encode_secret(const SchemeSpec& scheme, Complex alpha, Complex beta);

/// Accepts or rejects a fully assigned candidate scheme against the target structure.
using SchemeAcceptor = std::function<bool(const SchemeSpec&, const AccessStructure&)>;

/// Exhaustive search over particle -> holder maps, particle 1 varying slowest,
/// holder order P1..Pn then DEALER. Returns the first assignment whose induced
/// structure equals target and that `accept` approves.
std::optional<Assignment> search_assignment(const SchemeSpec& base_scheme,
                                            const AccessStructure& base_gamma,
                                            const AccessStructure& target, bool allow_dealer,
                                            const SchemeAcceptor& accept);

}  // namespace qss
