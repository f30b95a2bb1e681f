#include "qss/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "qss/error.hpp"

namespace qss {

namespace {

// Maps every basis index of a layout to (kept index, traced index).
struct IndexSplit {
  std::vector<std::uint32_t> kept;
  std::vector<std::uint32_t> traced;
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

std::vector<int> positions_in(const std::vector<std::string>& labels,
                              const std::vector<std::string>& keep) {
  std::set<std::string> seen;
  std::vector<int> pos;
  for (const auto& k : keep) {
    if (!seen.insert(k).second) throw InputError("register '" + k + "' listed twice");
    auto it = std::find(labels.begin(), labels.end(), k);
    if (it == labels.end()) throw InputError("unknown register '" + k + "'");
    pos.push_back(static_cast<int>(it - labels.begin()));
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

IndexSplit split_indices(int qubits, const std::vector<int>& kept_positions) {
  std::vector<bool> is_kept(qubits, false);
  for (int p : kept_positions) is_kept[p] = true;
  IndexSplit s;
  const std::size_t dim = std::size_t{1} << qubits;
  s.kept.resize(dim);
  s.traced.resize(dim);
  const int nk = static_cast<int>(kept_positions.size());
  s.kept_dim = std::size_t{1} << nk;
  s.traced_dim = std::size_t{1} << (qubits - nk);
  for (std::size_t x = 0; x < dim; ++x) {
    std::uint32_t k = 0, t = 0;
    for (int q = 0; q < qubits; ++q) {
      const std::uint32_t bit = (x >> (qubits - 1 - q)) & 1u;
      if (is_kept[q]) {
        k = (k << 1) | bit;
      } else {
        t = (t << 1) | bit;
      }
    }
    s.kept[x] = k;
    s.traced[x] = t;
  }
  return s;
}

std::vector<std::string> labels_at(const std::vector<std::string>& labels,
                                   const std::vector<int>& positions) {
  std::vector<std::string> out;
  for (int p : positions) out.push_back(labels[p]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

RegisterLayout::RegisterLayout(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw InputError("empty register label");
    if (!seen.insert(l).second) throw InputError("duplicate register label '" + l + "'");
  }
  if (total_qubits() > kMaxQubits) {
    throw ResourceLimit("layout has " + std::to_string(total_qubits()) + " qubits, limit is " +
                        std::to_string(kMaxQubits));
  }
}

int RegisterLayout::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InputError("unknown register '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

bool RegisterLayout::has(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

PureState::PureState(RegisterLayout layout, std::vector<Complex> amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.dimension()) {
    throw InputError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                     ", layout needs " + std::to_string(layout_.dimension()));
  }
  if (std::abs(norm() - 1.0) > kNormTolerance) {
    throw InputError("state is not normalized (norm " + std::to_string(norm()) + ")");
  }
}

PureState PureState::normalized(RegisterLayout layout, std::vector<Complex> amplitudes) {
  double sq = 0;
  for (const auto& a : amplitudes) sq += std::norm(a);
  if (sq <= 0) throw InputError("cannot normalize the zero vector");
  const double scale = 1.0 / std::sqrt(sq);
  for (auto& a : amplitudes) a *= scale;
  return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(RegisterLayout layout, const std::string& bits) {
  if (static_cast<int>(bits.size()) != layout.total_qubits()) {
    throw InputError("basis string '" + bits + "' does not match layout width");
  }
  std::vector<Complex> amps(layout.dimension());
  amps[std::stoull(bits, nullptr, 2)] = 1.0;
  return PureState(std::move(layout), std::move(amps));
}

Complex PureState::amplitude(const std::string& bits) const {
  if (static_cast<int>(bits.size()) != layout_.total_qubits() ||
      bits.find_first_not_of("01") != std::string::npos) {
    throw InputError("bad basis string '" + bits + "'");
  }
  return amplitudes_[std::stoull(bits, nullptr, 2)];
}

double PureState::norm() const {
  double sq = 0;
  for (const auto& a : amplitudes_) sq += std::norm(a);
  return std::sqrt(sq);
}

DensityMatrix::DensityMatrix(std::vector<std::string> labels, Eigen::MatrixXcd entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  const Eigen::Index expected = Eigen::Index{1} << labels_.size();
  if (entries_.rows() != expected || entries_.cols() != expected) {
    throw InputError("density matrix shape does not match its registers");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) {
    throw InputError("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > kDensityTolerance) {
    throw InputError("density matrix trace differs from 1");
  }
}

bool DensityMatrix::is_valid() const {
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) return false;
  if (std::abs(entries_.trace() - Complex(1.0)) > kDensityTolerance) return false;
  const auto eig = eigendecompose_hermitian(entries_);
  return eig.values.empty() || eig.values.back() >= -kDensityTolerance;
}

// ---------------------------------------------------------------------------

PureState purify_secret(std::span<const double> probabilities) {
  if (probabilities.empty() || probabilities.size() > 2) {
    throw InputError("secret distribution must have one or two entries");
  }
  double sum = 0;
  for (double p : probabilities) {
    if (!(p >= 0) || !std::isfinite(p)) throw InputError("negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) throw InputError("probabilities do not sum to 1");
  std::vector<Complex> amps(4);
  amps[0b00] = std::sqrt(probabilities[0]);
  if (probabilities.size() == 2) amps[0b11] = std::sqrt(probabilities[1]);
  return PureState(RegisterLayout({"R", "S"}), std::move(amps));
}

void check_isometry(const std::vector<std::vector<Complex>>& images, double tol) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i; j < images.size(); ++j) {
      if (images[i].size() != images[j].size()) throw InputError("image lengths differ");
      Complex g = 0;
      for (std::size_t k = 0; k < images[i].size(); ++k) g += std::conj(images[i][k]) * images[j][k];
      const Complex expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - expected) > tol) {
        throw InputError("images are not an isometry: <" + std::to_string(i) + "|" +
                         std::to_string(j) + "> = " + std::to_string(g.real()) +
                         (g.imag() != 0 ? "+" + std::to_string(g.imag()) + "i" : ""));
      }
    }
  }
}

PureState apply_isometry(const PureState& state, const std::string& target,
                         const IsometryImages& images) {
  const auto& labels = state.layout().labels();
  const int t = state.layout().index_of(target);
  const std::size_t out_dim = std::size_t{1} << images.outputs.size();
  if (images.images.size() != 2) throw InputError("target register is a qubit: need 2 images");
  for (const auto& img : images.images) {
    if (img.size() != out_dim) throw InputError("image length does not match output registers");
  }
  check_isometry(images.images);

  std::vector<std::string> new_labels(labels.begin(), labels.begin() + t);
  new_labels.insert(new_labels.end(), images.outputs.begin(), images.outputs.end());
  new_labels.insert(new_labels.end(), labels.begin() + t + 1, labels.end());
  RegisterLayout layout(std::move(new_labels));

  const int total = state.layout().total_qubits();
  const int post_bits = total - 1 - t;
  const std::size_t post_dim = std::size_t{1} << post_bits;
  const std::size_t pre_dim = std::size_t{1} << t;
  const int out_bits = static_cast<int>(images.outputs.size());

  std::vector<Complex> amps(layout.dimension());
  const auto src = state.amplitudes();
  for (std::size_t pre = 0; pre < pre_dim; ++pre) {
    for (std::size_t post = 0; post < post_dim; ++post) {
      for (std::size_t i = 0; i < 2; ++i) {
        const Complex a = src[(((pre << 1) | i) << post_bits) | post];
        if (a == Complex(0)) continue;
        for (std::size_t o = 0; o < out_dim; ++o) {
          amps[(((pre << out_bits) | o) << post_bits) | post] += a * images.images[i][o];
        }
      }
    }
  }
  return PureState::normalized(std::move(layout), std::move(amps));
}

DensityMatrix partial_trace(const PureState& state, const std::vector<std::string>& keep) {
  const auto& labels = state.layout().labels();
  const auto pos = positions_in(labels, keep);
  const auto split = split_indices(state.layout().total_qubits(), pos);
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(split.kept_dim, split.traced_dim);
  const auto amps = state.amplitudes();
  for (std::size_t x = 0; x < amps.size(); ++x) psi(split.kept[x], split.traced[x]) = amps[x];
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  return DensityMatrix(labels_at(labels, pos), 0.5 * (rho + Eigen::MatrixXcd(rho.adjoint())));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  const auto& labels = rho.labels();
  const auto pos = positions_in(labels, keep);
  const int qubits = static_cast<int>(labels.size());
  const auto split = split_indices(qubits, pos);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(split.kept_dim, split.kept_dim);
  const auto& m = rho.entries();
  const std::size_t dim = std::size_t{1} << qubits;
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t y = 0; y < dim; ++y) {
      if (split.traced[x] != split.traced[y]) continue;
      out(split.kept[x], split.kept[y]) += m(x, y);
    }
  }
  return DensityMatrix(labels_at(labels, pos), std::move(out));
}

EigenDecomposition eigendecompose_hermitian(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw InputError("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.size() > 0 && (m - m.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance * scale) {
    throw InputError("matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw InputError("eigendecomposition did not converge");
  const Eigen::Index dim = m.rows();
  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a) > vals(b); });
  EigenDecomposition out;
  out.vectors.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.values.push_back(vals(order[i]));
    out.vectors.col(i) = solver.eigenvectors().col(order[i]);
  }
  return out;
}

EigenDecomposition eigendecompose_hermitian(const DensityMatrix& m) {
  return eigendecompose_hermitian(m.entries());
}

double entropy_from_spectrum(std::span<const double> eigenvalues) {
  double s = 0;
  for (double l : eigenvalues) {
    if (l > kEigenFloor) s -= l * std::log2(l);
  }
  const double cap = eigenvalues.empty() ? 0.0 : std::log2(static_cast<double>(eigenvalues.size()));
  return std::clamp(s, 0.0, cap);
}

double von_neumann_entropy(const DensityMatrix& m) {
  return entropy_from_spectrum(eigendecompose_hermitian(m).values);
}

std::vector<std::string> complement_registers(const RegisterLayout& layout,
                                              const std::vector<std::string>& regs) {
  for (const auto& r : regs) layout.index_of(r);
  std::vector<std::string> out;
  for (const auto& l : layout.labels()) {
    if (std::find(regs.begin(), regs.end(), l) == regs.end()) out.push_back(l);
  }
  return out;
}

double subsystem_entropy(const PureState& state, const std::vector<std::string>& regs) {
  auto other = complement_registers(state.layout(), regs);
  if (regs.empty() || other.empty()) return 0.0;
  const auto& side = other.size() < regs.size() ? other : regs;
  return von_neumann_entropy(partial_trace(state, side));
}

double mutual_information(const PureState& state, const std::vector<std::string>& ref_regs,
                          const std::vector<std::string>& a_regs) {
  return entropy_record(state, ref_regs, a_regs).i_ra;
}

EntropyRecord entropy_record(const PureState& state, const std::vector<std::string>& ref_regs,
                             const std::vector<std::string>& a_regs) {
  for (const auto& a : a_regs) {
    if (std::find(ref_regs.begin(), ref_regs.end(), a) != ref_regs.end()) {
      throw InputError("register '" + a + "' appears in both the reference and the subset");
    }
  }
  std::vector<std::string> ra = ref_regs;
  ra.insert(ra.end(), a_regs.begin(), a_regs.end());
  EntropyRecord rec;
  rec.subset = a_regs;
  const double s_r = subsystem_entropy(state, ref_regs);
  rec.s_a = subsystem_entropy(state, a_regs);
  rec.s_ra = subsystem_entropy(state, ra);
  rec.i_ra = s_r + rec.s_a - rec.s_ra;
  return rec;
}

double overlap_probability(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) throw InputError("overlap needs identical layouts");
  Complex ip = 0;
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
    ip += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return std::norm(ip);
}

std::string basis_label(std::uint64_t index, int qubits) {
  std::string s(qubits, '0');
  for (int q = 0; q < qubits; ++q) {
    if ((index >> (qubits - 1 - q)) & 1u) s[q] = '1';
  }
  return s;
}

std::vector<std::pair<std::string, Complex>> nonzero_terms(const PureState& state, double cutoff) {
  std::vector<std::pair<std::string, Complex>> out;
  const auto amps = state.amplitudes();
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (std::abs(amps[x]) > cutoff) {
      out.emplace_back(basis_label(x, state.layout().total_qubits()), amps[x]);
    }
  }
  return out;
}

}  // namespace qss
