#include "qss/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <sstream>

#include "qss/error.hpp"

namespace qss {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<Complex> ket_pair(int n, std::uint32_t a, std::uint32_t b) {
  std::vector<Complex> v(std::size_t{1} << n);
  v[a] += kInvSqrt2;
  v[b] += kInvSqrt2;
  return v;
}

// Ket index with particle p (1-based) as bit n-p.
std::uint32_t ket_of_mask(int n, std::uint32_t particle_mask) {
  std::uint32_t k = 0;
  for (int p = 0; p < n; ++p) {
    if ((particle_mask >> p) & 1u) k |= 1u << (n - 1 - p);
  }
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Assignment

Assignment::Assignment(int num_players, std::vector<int> holders)
    : num_players_(num_players), holders_(std::move(holders)) {
  if (num_players < 1 || num_players > kMaxPlayers) {
    throw InputError("assignment player count " + std::to_string(num_players) + " out of range");
  }
  if (holders_.empty()) throw InputError("assignment covers no particles");
  for (std::size_t i = 0; i < holders_.size(); ++i) {
    if (holders_[i] < kDealer || holders_[i] > num_players) {
      throw InputError("particle " + std::to_string(i + 1) + " assigned to unknown holder " +
                       std::to_string(holders_[i]));
    }
  }
}

Assignment Assignment::identity(int num_particles) {
  std::vector<int> h(num_particles);
  for (int i = 0; i < num_particles; ++i) h[i] = i + 1;
  return Assignment(num_particles, std::move(h));
}

Assignment Assignment::from_lists(int num_particles, const std::vector<std::vector<int>>& per_player,
                                  const std::vector<int>& dealer) {
  std::vector<int> h(num_particles, -1);
  auto place = [&](int particle, int holder) {
    if (particle < 1 || particle > num_particles) {
      throw InputError("particle index " + std::to_string(particle) + " outside 1.." +
                       std::to_string(num_particles));
    }
    if (h[particle - 1] != -1) {
      throw InputError("particle " + std::to_string(particle) + " assigned twice");
    }
    h[particle - 1] = holder;
  };
  for (std::size_t i = 0; i < per_player.size(); ++i) {
    for (int p : per_player[i]) place(p, static_cast<int>(i) + 1);
  }
  for (int p : dealer) place(p, kDealer);
  for (int i = 0; i < num_particles; ++i) {
    if (h[i] == -1) throw InputError("particle " + std::to_string(i + 1) + " is not assigned");
  }
  return Assignment(static_cast<int>(per_player.size()), std::move(h));
}

std::vector<int> Assignment::particles_of(int holder) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < holders_.size(); ++i) {
    if (holders_[i] == holder) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

std::uint32_t Assignment::particle_mask(const PlayerSubset& s) const {
  if (s.n() != num_players_) throw InputError("subset player count differs from assignment");
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < holders_.size(); ++i) {
    if (holders_[i] != kDealer && s.contains(holders_[i])) mask |= 1u << i;
  }
  return mask;
}

std::string Assignment::describe() const {
  std::ostringstream os;
  auto list = [&](int holder) {
    os << "{";
    auto ps = particles_of(holder);
    for (std::size_t i = 0; i < ps.size(); ++i) os << (i ? "," : "") << ps[i];
    os << "}";
  };
  for (int p = 1; p <= num_players_; ++p) {
    os << (p > 1 ? " " : "") << "P" << p << "<-";
    list(p);
  }
  if (!particles_of(kDealer).empty()) {
    os << " DEALER<-";
    list(kDealer);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SchemeSpec

std::vector<std::string> SchemeSpec::particle_labels() const {
  std::vector<std::string> out;
  for (int i = 1; i <= num_particles; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

IsometryImages SchemeSpec::isometry() const {
  return {particle_labels(), {basis_images[0], basis_images[1]}};
}

std::vector<std::string> SchemeSpec::registers_of(const PlayerSubset& s) const {
  std::vector<std::string> out;
  const auto mask = assignment.particle_mask(s);
  for (int p = 0; p < num_particles; ++p) {
    if ((mask >> p) & 1u) out.push_back("p" + std::to_string(p + 1));
  }
  return out;
}

std::vector<std::string> SchemeSpec::dealer_registers() const {
  std::vector<std::string> out;
  for (int p : assignment.particles_of(kDealer)) out.push_back("p" + std::to_string(p));
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

SchemeSpec build_example1() {
  SchemeSpec s;
  s.name = "example1";
  s.num_particles = 4;
  s.basis_images[0] = ket_pair(4, 0b0000, 0b1111);
  s.basis_images[1] = ket_pair(4, 0b0011, 0b1100);
  s.assignment = Assignment::identity(4);
  s.particle_structure = threshold_structure(3, 4);
  return s;
}

ConstructedScheme build_result1(int n, const PlayerSubset& b) {
  if (n < 3 || n > kMaxSearchParticles) {
    throw InputError("b-family needs 3 <= n <= " + std::to_string(kMaxSearchParticles) +
                     ", got " + std::to_string(n));
  }
  if (b.n() != n) throw InputError("subset b is not over n players");
  const auto full = PlayerSubset::full(n);
  if (b.is_empty() || b == full) throw InputError("b must be a nonempty proper subset");

  const auto b_bar = b.complement();
  std::vector<PlayerSubset> family;
  for (int l = 1; l <= n; ++l) {
    const auto single = PlayerSubset::from_players(n, {l});
    family.push_back(b.contains(l) ? (b_bar | single) : (b | single));
  }

  ConstructedScheme out;
  out.gamma = AccessStructure::from_family(n, std::move(family));
  auto& s = out.scheme;
  s.name = "result1(n=" + std::to_string(n) + ",b={" + b.label() + "})";
  s.num_particles = n;
  const std::uint32_t all = (1u << n) - 1u;
  const std::uint32_t x = ket_of_mask(n, b.bits());
  s.basis_images[0] = ket_pair(n, 0, all);
  s.basis_images[1] = ket_pair(n, x, all ^ x);
  s.assignment = Assignment::identity(n);
  s.particle_structure = out.gamma;
  return out;
}

ConstructedScheme build_star(int n, int center) {
  if (center < 1 || center > n) throw InputError("star center outside 1..n");
  auto out = build_result1(n, PlayerSubset::from_players(n, {center}));
  out.scheme.name = "star(n=" + std::to_string(n) + ",center=" + std::to_string(center) + ")";
  return out;
}

InducedStructure induce_structure(const AccessStructure& base, const Assignment& assignment) {
  if (base.n() != assignment.num_particles()) {
    throw InputError("base structure has " + std::to_string(base.n()) + " particles, assignment " +
                     std::to_string(assignment.num_particles()));
  }
  const int n = assignment.num_players();
  std::vector<PlayerSubset> family;
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
    PlayerSubset s(n, bits);
    if (base.contains(PlayerSubset(base.n(), assignment.particle_mask(s)))) family.push_back(s);
  }
  return {n, AccessStructure::from_family(n, std::move(family))};
}

InducedStructure induce_structure(const SchemeSpec& scheme, const AccessStructure& base) {
  if (base.n() != scheme.num_particles) {
    throw InputError("base structure is not over the scheme's particles");
  }
  return induce_structure(base, scheme.assignment);
}

SchemeSpec with_assignment(const SchemeSpec& scheme, Assignment assignment) {
  if (assignment.num_particles() != scheme.num_particles) {
    throw InputError("assignment particle count differs from scheme");
  }
  SchemeSpec out = scheme;
  out.assignment = std::move(assignment);
  return out;
}

SchemeSpec permute_particles(const SchemeSpec& scheme, const Permutation& perm) {
  const int n = scheme.num_particles;
  if (static_cast<int>(perm.size()) != n) throw InputError("permutation size mismatch");
  SchemeSpec out = scheme;
  for (int i = 0; i < 2; ++i) {
    std::vector<Complex> img(scheme.basis_images[i].size());
    for (std::uint32_t k = 0; k < img.size(); ++k) {
      std::uint32_t moved = 0;
      for (int p = 0; p < n; ++p) {
        if ((k >> (n - 1 - p)) & 1u) moved |= 1u << (n - 1 - perm[p]);
      }
      img[moved] = scheme.basis_images[i][k];
    }
    out.basis_images[i] = std::move(img);
  }
  if (scheme.particle_structure) out.particle_structure = permute(*scheme.particle_structure, perm);
  return out;
}

PureState share_state(const SchemeSpec& scheme, std::span<const double> probabilities) {
  if (scheme.num_particles + 1 > kMaxQubits) {
    throw ResourceLimit("scheme needs " + std::to_string(scheme.num_particles + 1) +
                        " qubits, limit is " + std::to_string(kMaxQubits));
  }
  return apply_isometry(purify_secret(probabilities), "S", scheme.isometry());
}

PureState encode_secret(const SchemeSpec& scheme, Complex alpha, Complex beta) {
  const auto& i0 = scheme.basis_images[0];
  const auto& i1 = scheme.basis_images[1];
  std::vector<Complex> amps(i0.size());
  for (std::size_t k = 0; k < amps.size(); ++k) amps[k] = alpha * i0[k] + beta * i1[k];
  return PureState::normalized(RegisterLayout(scheme.particle_labels()), std::move(amps));
}

std::optional<Assignment> search_assignment(const SchemeSpec& base_scheme,
                                            const AccessStructure& base_gamma,
                                            const AccessStructure& target, bool allow_dealer,
                                            const SchemeAcceptor& accept) {
  const int particles = base_scheme.num_particles;
  if (particles > kMaxSearchParticles) {
    throw ResourceLimit("assignment search limited to " + std::to_string(kMaxSearchParticles) +
                        " particles");
  }
  if (base_gamma.n() != particles) throw InputError("base structure is not over the particles");
  const int n = target.n();
  if (n > particles) return std::nullopt;

  // Holder digits: 0..n-1 are P1..Pn, n is the dealer.
  const int radix = n + (allow_dealer ? 1 : 0);
  std::vector<int> digits(particles, 0);
  std::vector<std::uint32_t> player_mask(n);
  std::vector<std::uint32_t> base_masks;
  for (const auto& s : base_gamma.minimal_sets()) base_masks.push_back(s.bits());
  const std::uint32_t subsets = 1u << n;
  std::vector<std::uint32_t> union_of(subsets);
  std::vector<char> want(subsets, 0);
  for (std::uint32_t s = 1; s < subsets; ++s) want[s] = target.contains(PlayerSubset(n, s));

  while (true) {
    std::fill(player_mask.begin(), player_mask.end(), 0u);
    for (int p = 0; p < particles; ++p) {
      if (digits[p] < n) player_mask[digits[p]] |= 1u << p;
    }
    bool match = true;
    union_of[0] = 0;
    for (std::uint32_t s = 1; s < subsets && match; ++s) {
      const int low = std::countr_zero(s);
      union_of[s] = union_of[s & (s - 1)] | player_mask[low];
      const std::uint32_t u = union_of[s];
      const bool authorized = std::any_of(base_masks.begin(), base_masks.end(),
                                          [u](std::uint32_t m) { return (m & u) == m; });
      match = authorized == static_cast<bool>(want[s]);
    }
    if (match) {
      std::vector<int> holders(particles);
      for (int p = 0; p < particles; ++p) holders[p] = digits[p] < n ? digits[p] + 1 : kDealer;
      Assignment candidate(n, std::move(holders));
      auto scheme = with_assignment(base_scheme, candidate);
      scheme.particle_structure = base_gamma;
      if (!accept || accept(scheme, target)) return candidate;
    }
    // Increment with the last particle varying fastest.
    int pos = particles - 1;
    while (pos >= 0 && ++digits[pos] == radix) digits[pos--] = 0;
    if (pos < 0) break;
  }
  return std::nullopt;
}

}  // namespace qss
