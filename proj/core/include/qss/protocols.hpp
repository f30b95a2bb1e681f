#pragma once

// Reconstruction and attack simulation on exact state vectors.
//
// Gates here are classical reversible maps on the computational basis:
// U0 = U2 = identity and U1 = bit flip. Measurements are projective in the
// computational basis and every branch is enumerated, not sampled.

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qss/qstate.hpp"
#include "qss/schemes.hpp"
#include "qss/structures.hpp"

namespace qss {

/// Control |i> applies U_i to every target: flip iff the control is 1.
struct SingleControlled {
  std::string control;
  std::vector<std::string> targets;
};

/// Controls |i>|j> apply U_k with k = 2 - (i xor j): flip iff the controls differ.
struct DoubleControlled {
  std::array<std::string, 2> controls;
  std::string target;
};

struct Cnot {
  std::string control;
  std::string target;
};

struct PauliX {
  std::string target;
};

using GateStep = std::variant<SingleControlled, DoubleControlled, Cnot, PauliX>;

struct MeasureZ {
  std::string reg;
  bool broadcast = true;
};

/// Gates applied after the outcome of an earlier MeasureZ on `measured` is known.
struct ConditionalCorrection {
  std::string measured;
  std::array<std::vector<GateStep>, 2> on_outcome;
};

using ProtocolStep = std::variant<GateStep, MeasureZ, ConditionalCorrection>;

struct ReconstructionProtocol {
  std::string name;
  PlayerSubset acting_set;
  std::map<std::string, int> owner;  // register -> player
  std::vector<ProtocolStep> steps;
  std::string output_register;

  /// Throws InputError if a step touches a register outside the acting set or
  /// a gate's controls and targets overlap.
  void validate() const;
};

struct ProtocolBranch {
  std::map<std::string, int> outcomes;
  double probability = 0;
  double fidelity = 0;
  bool residual_factorized = false;
  /// Final state, normalized within the branch (empty for zero-probability branches).
  std::optional<PureState> state;
};

struct ProtocolOutcome {
  std::string output_register;
  double fidelity = 0;  // minimum over branches with nonzero probability
  bool residual_factorized = false;
  std::map<std::string, double> branch_probabilities;  // e.g. "p3=0"
  std::vector<ProtocolBranch> branches;
  std::vector<std::string> notes;
};

std::string describe(const GateStep& g);
std::string describe(const ProtocolStep& s);
std::vector<std::string> registers_of(const GateStep& g);

/// Applies a gate in place.
void apply_gate(PureState& state, const GateStep& g);

/// Projects onto outcome of a computational-basis measurement. Returns the
/// outcome probability; the state is renormalized when it is nonzero.
double project(PureState& state, const std::string& reg, int outcome);

/// Runs every branch. Fidelity is <target|rho|target> with rho the reduced
/// state of the registers target is defined on.
ProtocolOutcome run_protocol(const ReconstructionProtocol& protocol, const PureState& initial,
                             const PureState& target);

/// Two-gate circuit for an authorized triple of the ((3,4)) scheme: the
/// interior player controls the two outer particles, then the outer two
/// jointly control the interior particle.
ReconstructionProtocol example1_circuit(const PlayerSubset& acting_set);
ProtocolOutcome run_example1_circuit(Complex alpha, Complex beta, const PlayerSubset& acting_set);

/// Measure-and-correct protocol for acting sets b u {l} of the b-family:
/// l measures and broadcasts; on outcome 1 every b particle is flipped; CNOTs
/// from the first b particle clear the others, leaving the secret there.
ReconstructionProtocol result1_measure_protocol(int n, const PlayerSubset& b,
                                                const PlayerSubset& acting_set);
ProtocolOutcome run_result1_measure_protocol(int n, const PlayerSubset& b,
                                             const PlayerSubset& acting_set, Complex alpha,
                                             Complex beta);

/// State of the registers other than `output` after a factorized output.
/// Computed as <psi|_output applied to the state; normalized.
PureState residual_state(const PureState& state, const std::string& output, Complex alpha,
                         Complex beta);

class DecouplingError : public std::runtime_error {
 public:
  DecouplingError(const std::string& what, double i_re)
      : std::runtime_error(what), i_re_(i_re) {}
  double i_re() const { return i_re_; }

 private:
  double i_re_;
};

inline constexpr double kDecouplingTolerance = 1e-9;
inline constexpr double kDecoderFidelityThreshold = 1e-6;

struct DecoderResult {
  /// Isometry from A (rows: out x junk, cols: A basis).
  Eigen::MatrixXcd isometry;
  int out_dim = 2;
  int junk_dim = 1;
  std::vector<std::string> a_regs;
  double fidelity = 0;  // entanglement fidelity of R with the output
  double i_re = 0;
};

/// Builds an isometry on A mapping the global state to (R-output canonical
/// purification) x junk by matching purifications. Requires I(R:E) <= 1e-9
/// where E is everything outside R and A, else throws DecouplingError.
DecoderResult decoupling_decoder(const PureState& state, const std::vector<std::string>& a_regs,
                                 const std::vector<std::string>& r_regs, int out_dim = 2);

/// Applies a decoder to a state holding a_regs and returns the reduced state
/// on keep (in layout order) followed by the output register.
Eigen::MatrixXcd decoded_density(const PureState& state, const DecoderResult& decoder,
                                 const std::vector<std::string>& keep);

/// Fidelity of the decoder output with alpha|0> + beta|1> for the scheme's encoding.
double decoder_secret_fidelity(const SchemeSpec& scheme, const DecoderResult& decoder,
                               Complex alpha, Complex beta);

struct AttackP1P2Report {
  double p_outcome0 = 0;
  double p_outcome1 = 0;
  PureState residual0;  // over (p1, p3, p4)
  std::optional<PureState> residual1;
  /// |<expected|residual0>|^2 with the expected collapse state
  /// (a|0>+b|1>)|00> + (a|1>+b|0>)|11>, normalized.
  double expected_overlap = 0;
  bool outcome1_vacuous = false;
  /// S(p1) inside residual0; > 0 means P1's particle is still entangled.
  double p1_entropy = 0;
};

/// P1 applies CNOT onto P2's particle, then P2 measures.
AttackP1P2Report attack_example1_p1p2(Complex alpha, Complex beta);

struct AttackP2P3Report {
  Eigen::MatrixXcd rho;         // rho_{p2 p3} for (alpha, beta)
  Eigen::MatrixXcd rho_phased;  // rho_{p2 p3} for (alpha, beta e^{i phi})
  double max_phase_difference = 0;
  bool phase_blind = false;
  std::vector<double> diagonal;  // basis order 00, 01, 10, 11
  double i_r_p2p3 = 0;           // for the maximally mixed secret
  double s_s = 0;
};

AttackP2P3Report attack_example1_p2p3(Complex alpha, Complex beta, double phi);

}  // namespace qss
