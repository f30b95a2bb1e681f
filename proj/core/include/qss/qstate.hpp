#pragma once

// Exact state-vector engine over labeled qubit registers.
//
// Basis index convention: the first label in a layout is the most
// significant bit. Entropies are in bits (log base 2).

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qss {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 14;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kDensityTolerance = 1e-10;
inline constexpr double kEigenFloor = 1e-12;

class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  int total_qubits() const { return static_cast<int>(labels_.size()); }
  std::size_t dimension() const { return std::size_t{1} << labels_.size(); }

  /// Position of label in the layout; throws InputError for unknown names.
  int index_of(const std::string& label) const;
  bool has(const std::string& label) const;
  /// Bit position inside a basis index (MSB-first layout).
  int bit_of(const std::string& label) const { return total_qubits() - 1 - index_of(label); }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

 private:
  std::vector<std::string> labels_;
};

class PureState {
 public:
  PureState() = default;
  /// Requires |amplitudes| = 2^qubits and unit norm within kNormTolerance.
  PureState(RegisterLayout layout, std::vector<Complex> amplitudes);

  /// Normalizes first; throws on a zero vector.
  static PureState normalized(RegisterLayout layout, std::vector<Complex> amplitudes);
  /// Computational basis state from a bit string over the layout.
  static PureState basis(RegisterLayout layout, const std::string& bits);

  const RegisterLayout& layout() const { return layout_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::vector<Complex>& mutable_amplitudes() { return amplitudes_; }
  Complex amplitude(const std::string& bits) const;

  double norm() const;

 private:
  RegisterLayout layout_;
  std::vector<Complex> amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Checks shape, hermiticity and unit trace within kDensityTolerance.
  DensityMatrix(std::vector<std::string> labels, Eigen::MatrixXcd entries);

  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

  /// Also checks eigenvalues >= -kDensityTolerance.
  bool is_valid() const;

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXcd entries_;
};

struct IsometryImages {
  std::vector<std::string> outputs;          // registers replacing the target
  std::vector<std::vector<Complex>> images;  // images[i] = image of |i>, length 2^|outputs|
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Eigen::MatrixXcd vectors;    // column i pairs with values[i]
};

struct EntropyRecord {
  std::vector<std::string> subset;
  double s_a = 0;
  double s_ra = 0;
  double i_ra = 0;
};

/// |RS> = sum_i sqrt(p_i)|i>_R|i>_S over registers (R, S). Accepts one or two
/// probabilities summing to 1.
PureState purify_secret(std::span<const double> probabilities);

/// Replaces `target` with images.outputs by linear extension. Throws InputError
/// if the Gram matrix of the images differs from the identity by more than 1e-10.
PureState apply_isometry(const PureState& state, const std::string& target,
                         const IsometryImages& images);

/// Throws InputError if the images are not orthonormal within tol.
void check_isometry(const std::vector<std::vector<Complex>>& images, double tol = 1e-10);

/// Reduced state on `keep`, ordered as in the source layout.
DensityMatrix partial_trace(const PureState& state, const std::vector<std::string>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

EigenDecomposition eigendecompose_hermitian(const Eigen::MatrixXcd& m);
EigenDecomposition eigendecompose_hermitian(const DensityMatrix& m);

double entropy_from_spectrum(std::span<const double> eigenvalues);
double von_neumann_entropy(const DensityMatrix& m);

/// S of the reduced state on regs. Uses the complementary side when it is
/// smaller (equal spectra for a pure global state).
double subsystem_entropy(const PureState& state, const std::vector<std::string>& regs);

/// I(R:A) = S(R) + S(A) - S(RA). Throws InputError on overlapping lists.
double mutual_information(const PureState& state, const std::vector<std::string>& ref_regs,
                          const std::vector<std::string>& a_regs);

EntropyRecord entropy_record(const PureState& state, const std::vector<std::string>& ref_regs,
                             const std::vector<std::string>& a_regs);

/// Registers of the layout not listed in regs, in layout order.
std::vector<std::string> complement_registers(const RegisterLayout& layout,
                                              const std::vector<std::string>& regs);

/// |<a|b>|^2 for states over identical layouts.
double overlap_probability(const PureState& a, const PureState& b);

/// Nonzero terms as (bit string, amplitude), in basis order.
std::vector<std::pair<std::string, Complex>> nonzero_terms(const PureState& state,
                                                           double cutoff = 1e-12);

std::string basis_label(std::uint64_t index, int qubits);

}  // namespace qss
