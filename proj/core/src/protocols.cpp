#include "qss/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "qss/error.hpp"

namespace qss {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}

// Bit positions (inside a basis index) of regs, in the order given.
std::vector<int> bit_positions(const RegisterLayout& layout, const std::vector<std::string>& regs) {
  std::vector<int> out;
  for (const auto& r : regs) out.push_back(layout.bit_of(r));
  return out;
}

// Packs the bits of x at `positions` into an index, first position most significant.
std::uint32_t gather(std::uint64_t x, const std::vector<int>& positions) {
  std::uint32_t v = 0;
  for (int p : positions) v = (v << 1) | static_cast<std::uint32_t>((x >> p) & 1u);
  return v;
}

double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

PureState single_qubit(const std::string& label, Complex alpha, Complex beta) {
  return PureState::normalized(RegisterLayout({label}), {alpha, beta});
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
  const auto eig = eigendecompose_hermitian(m);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    const double l = std::max(0.0, eig.values[i]);
    out += std::sqrt(l) * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  }
  return out;
}

// Orthonormal basis of the eigenspace of a PSD matrix with eigenvalues below cutoff.
Eigen::MatrixXcd null_basis(const Eigen::MatrixXcd& psd, double cutoff) {
  const auto eig = eigendecompose_hermitian(psd);
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] < cutoff) cols.push_back(static_cast<Eigen::Index>(i));
  }
  Eigen::MatrixXcd out(psd.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(j) = eig.vectors.col(cols[j]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Steps

std::string describe(const GateStep& g) {
  return std::visit(
      Overloaded{
          [](const SingleControlled& s) {
            return "CU(" + s.control + " -> " + join(s.targets) + ")";
          },
          [](const DoubleControlled& d) {
            return "CCU(" + d.controls[0] + "," + d.controls[1] + " -> " + d.target +
                   "; k=2-i^j)";
          },
          [](const Cnot& c) { return "CNOT(" + c.control + " -> " + c.target + ")"; },
          [](const PauliX& x) { return "X(" + x.target + ")"; },
      },
      g);
}

std::string describe(const ProtocolStep& s) {
  return std::visit(
      Overloaded{
          [](const GateStep& g) { return describe(g); },
          [](const MeasureZ& m) {
            return "MEASURE_Z(" + m.reg + ")" + (m.broadcast ? " broadcast" : "");
          },
          [](const ConditionalCorrection& c) {
            std::string out;
            for (int o = 0; o < 2; ++o) {
              if (c.on_outcome[o].empty()) continue;
              std::vector<std::string> parts;
              for (const auto& g : c.on_outcome[o]) parts.push_back(describe(g));
              out += (out.empty() ? "" : "; ") + ("IF " + c.measured + "==" + std::to_string(o) +
                                                  ": " + join(parts));
            }
            return out.empty() ? "IF " + c.measured + ": none" : out;
          },
      },
      s);
}

std::vector<std::string> registers_of(const GateStep& g) {
  return std::visit(
      Overloaded{
          [](const SingleControlled& s) {
            std::vector<std::string> r{s.control};
            r.insert(r.end(), s.targets.begin(), s.targets.end());
            return r;
          },
          [](const DoubleControlled& d) {
            return std::vector<std::string>{d.controls[0], d.controls[1], d.target};
          },
          [](const Cnot& c) { return std::vector<std::string>{c.control, c.target}; },
          [](const PauliX& x) { return std::vector<std::string>{x.target}; },
      },
      g);
}

void ReconstructionProtocol::validate() const {
  auto check_reg = [&](const std::string& r) {
    auto it = owner.find(r);
    if (it == owner.end()) throw InputError("register '" + r + "' has no owner");
    if (!acting_set.contains(it->second)) {
      throw InputError("register '" + r + "' belongs to P" + std::to_string(it->second) +
                       ", outside the acting set {" + acting_set.label() + "}");
    }
  };
  auto check_gate = [&](const GateStep& g) {
    const auto regs = registers_of(g);
    std::set<std::string> unique(regs.begin(), regs.end());
    if (unique.size() != regs.size()) {
      throw InputError("gate " + describe(g) + " reuses a register");
    }
    for (const auto& r : regs) check_reg(r);
  };
  for (const auto& step : steps) {
    std::visit(Overloaded{
                   [&](const GateStep& g) { check_gate(g); },
                   [&](const MeasureZ& m) { check_reg(m.reg); },
                   [&](const ConditionalCorrection& c) {
                     for (const auto& branch : c.on_outcome) {
                       for (const auto& g : branch) check_gate(g);
                     }
                   },
               },
               step);
  }
  check_reg(output_register);
}

void apply_gate(PureState& state, const GateStep& g) {
  const auto& layout = state.layout();
  auto bit = [&](const std::string& r) { return std::uint64_t{1} << layout.bit_of(r); };
  std::function<std::uint64_t(std::uint64_t)> f = std::visit(
      Overloaded{
          [&](const SingleControlled& s) -> std::function<std::uint64_t(std::uint64_t)> {
            const auto c = bit(s.control);
            std::uint64_t t = 0;
            for (const auto& r : s.targets) t |= bit(r);
            return [c, t](std::uint64_t x) { return (x & c) ? x ^ t : x; };
          },
          [&](const DoubleControlled& d) -> std::function<std::uint64_t(std::uint64_t)> {
            const auto c0 = bit(d.controls[0]);
            const auto c1 = bit(d.controls[1]);
            const auto t = bit(d.target);
            return [=](std::uint64_t x) { return (((x & c0) != 0) != ((x & c1) != 0)) ? x ^ t : x; };
          },
          [&](const Cnot& c) -> std::function<std::uint64_t(std::uint64_t)> {
            const auto ctl = bit(c.control);
            const auto t = bit(c.target);
            return [=](std::uint64_t x) { return (x & ctl) ? x ^ t : x; };
          },
          [&](const PauliX& p) -> std::function<std::uint64_t(std::uint64_t)> {
            const auto t = bit(p.target);
            return [=](std::uint64_t x) { return x ^ t; };
          },
      },
      g);
  auto& amps = state.mutable_amplitudes();
  std::vector<Complex> out(amps.size());
  for (std::uint64_t x = 0; x < amps.size(); ++x) out[f(x)] = amps[x];
  amps = std::move(out);
}

double project(PureState& state, const std::string& reg, int outcome) {
  const std::uint64_t b = std::uint64_t{1} << state.layout().bit_of(reg);
  auto& amps = state.mutable_amplitudes();
  double p = 0;
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    if (((x & b) != 0) != (outcome == 1)) {
      amps[x] = 0;
    } else {
      p += std::norm(amps[x]);
    }
  }
  if (p > 1e-15) {
    const double s = 1.0 / std::sqrt(p);
    for (auto& a : amps) a *= s;
  }
  return p;
}

ProtocolOutcome run_protocol(const ReconstructionProtocol& protocol, const PureState& initial,
                             const PureState& target) {
  protocol.validate();
  const auto& target_regs = target.layout().labels();
  {
    std::vector<int> idx;
    for (const auto& r : target_regs) idx.push_back(initial.layout().index_of(r));
    if (!std::is_sorted(idx.begin(), idx.end())) {
      throw InputError("target registers must follow the state's layout order");
    }
  }
  const Eigen::VectorXcd psi = Eigen::Map<const Eigen::VectorXcd>(
      target.amplitudes().data(), static_cast<Eigen::Index>(target.amplitudes().size()));

  ProtocolOutcome out;
  out.output_register = protocol.output_register;

  std::function<void(std::size_t, PureState, double, std::map<std::string, int>)> run =
      [&](std::size_t i, PureState st, double prob, std::map<std::string, int> outcomes) {
        for (; i < protocol.steps.size(); ++i) {
          const auto& step = protocol.steps[i];
          if (const auto* g = std::get_if<GateStep>(&step)) {
            apply_gate(st, *g);
          } else if (const auto* m = std::get_if<MeasureZ>(&step)) {
            for (int o = 0; o < 2; ++o) {
              PureState copy = st;
              const double p = project(copy, m->reg, o);
              auto next = outcomes;
              next[m->reg] = o;
              if (p <= 1e-15) {
                ProtocolBranch b;
                b.outcomes = next;
                out.branches.push_back(b);
                continue;
              }
              run(i + 1, std::move(copy), prob * p, std::move(next));
            }
            return;
          } else {
            const auto& c = std::get<ConditionalCorrection>(step);
            auto it = outcomes.find(c.measured);
            if (it == outcomes.end()) {
              throw InputError("correction depends on unmeasured register '" + c.measured + "'");
            }
            for (const auto& g : c.on_outcome[it->second]) apply_gate(st, g);
          }
        }
        ProtocolBranch b;
        b.outcomes = std::move(outcomes);
        b.probability = prob;
        const auto rho = partial_trace(st, target_regs).entries();
        b.fidelity = std::clamp((psi.adjoint() * rho * psi)(0, 0).real(), 0.0, 1.0);
        const auto rho_out = partial_trace(st, {protocol.output_register}).entries();
        b.residual_factorized = purity(rho_out) >= 1.0 - 1e-9;
        b.state = std::move(st);
        out.branches.push_back(std::move(b));
      };
  run(0, initial, 1.0, {});

  out.fidelity = 1.0;
  out.residual_factorized = true;
  for (const auto& b : out.branches) {
    std::string key;
    for (const auto& [reg, o] : b.outcomes) key += (key.empty() ? "" : ",") + reg + "=" + std::to_string(o);
    out.branch_probabilities[key.empty() ? "none" : key] = b.probability;
    if (!b.state) continue;
    out.fidelity = std::min(out.fidelity, b.fidelity);
    out.residual_factorized = out.residual_factorized && b.residual_factorized;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Explicit protocols

ReconstructionProtocol example1_circuit(const PlayerSubset& acting_set) {
  if (acting_set.n() != 4 || acting_set.size() != 3) {
    throw InputError("acting set {" + acting_set.label() +
                     "} is not an authorized triple of the ((3,4)) scheme");
  }
  // Particles pair up as {1,2} and {3,4}. The absent player's partner keeps
  // the secret; the lower member of the other pair is interior.
  const int missing = acting_set.complement().players().front();
  const int partner = (missing % 2 == 1) ? missing + 1 : missing - 1;
  const int interior = missing <= 2 ? 3 : 1;
  const int other = interior + 1;
  auto p = [](int i) { return "p" + std::to_string(i); };

  ReconstructionProtocol proto;
  proto.name = "example1-circuit";
  proto.acting_set = acting_set;
  for (int i = 1; i <= 4; ++i) proto.owner[p(i)] = i;
  proto.steps.push_back(GateStep{SingleControlled{p(interior), {p(partner), p(other)}}});
  proto.steps.push_back(GateStep{DoubleControlled{{p(partner), p(other)}, p(interior)}});
  proto.output_register = p(partner);
  return proto;
}

ProtocolOutcome run_example1_circuit(Complex alpha, Complex beta, const PlayerSubset& acting_set) {
  const auto proto = example1_circuit(acting_set);
  const auto scheme = build_example1();
  const auto initial = encode_secret(scheme, alpha, beta);
  auto out = run_protocol(proto, initial, single_qubit(proto.output_register, alpha, beta));
  if (acting_set == PlayerSubset::from_players(4, {1, 3, 4}) && !out.branches.empty() &&
      out.branches.front().state) {
    const auto res = residual_state(*out.branches.front().state, proto.output_register, alpha, beta);
    std::ostringstream os;
    os << "residual on (p2,p3,p4):";
    for (const auto& [ket, amp] : nonzero_terms(res)) os << " " << amp.real() << "|" << ket << ">";
    os << "; the printed residual (|010>+|110>) differs, factorization and fidelity hold";
    out.notes.push_back(os.str());
  }
  return out;
}

ReconstructionProtocol result1_measure_protocol(int n, const PlayerSubset& b,
                                                const PlayerSubset& acting_set) {
  const auto gamma = build_result1(n, b).gamma;
  if (acting_set.n() != n) throw InputError("acting set is not over n players");
  if (!gamma.contains(acting_set)) {
    throw InputError("acting set {" + acting_set.label() + "} is not authorized");
  }
  const auto extra = acting_set & b.complement();
  if (!b.is_subset_of(acting_set) || extra.size() != 1 || acting_set.size() != b.size() + 1) {
    throw InputError("acting set {" + acting_set.label() + "} is not of the form b+{l}; use the "
                     "decoupling decoder");
  }
  auto p = [](int i) { return "p" + std::to_string(i); };
  const int measurer = extra.players().front();
  const auto members = b.players();

  ReconstructionProtocol proto;
  proto.name = "result1-measure";
  proto.acting_set = acting_set;
  for (int i = 1; i <= n; ++i) proto.owner[p(i)] = i;
  proto.steps.push_back(MeasureZ{p(measurer), true});
  ConditionalCorrection corr;
  corr.measured = p(measurer);
  for (int m : members) corr.on_outcome[1].push_back(PauliX{p(m)});
  proto.steps.push_back(corr);
  for (std::size_t i = 1; i < members.size(); ++i) {
    proto.steps.push_back(GateStep{Cnot{p(members.front()), p(members[i])}});
  }
  proto.output_register = p(members.front());
  return proto;
}

ProtocolOutcome run_result1_measure_protocol(int n, const PlayerSubset& b,
                                             const PlayerSubset& acting_set, Complex alpha,
                                             Complex beta) {
  const auto proto = result1_measure_protocol(n, b, acting_set);
  const auto initial = encode_secret(build_result1(n, b).scheme, alpha, beta);
  return run_protocol(proto, initial, single_qubit(proto.output_register, alpha, beta));
}

PureState residual_state(const PureState& state, const std::string& output, Complex alpha,
                         Complex beta) {
  const auto rest = complement_registers(state.layout(), {output});
  RegisterLayout layout(rest);
  const int ob = state.layout().bit_of(output);
  const auto rest_bits = bit_positions(state.layout(), rest);
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  const Complex psi[2] = {alpha / norm, beta / norm};
  std::vector<Complex> amps(layout.dimension());
  const auto src = state.amplitudes();
  for (std::uint64_t x = 0; x < src.size(); ++x) {
    amps[gather(x, rest_bits)] += std::conj(psi[(x >> ob) & 1u]) * src[x];
  }
  return PureState::normalized(std::move(layout), std::move(amps));
}

// ---------------------------------------------------------------------------
// Decoder

DecoderResult decoupling_decoder(const PureState& state, const std::vector<std::string>& a_regs,
                                 const std::vector<std::string>& r_regs, int out_dim) {
  const auto& layout = state.layout();
  std::vector<std::string> ra = r_regs;
  ra.insert(ra.end(), a_regs.begin(), a_regs.end());
  const auto e_regs = complement_registers(layout, ra);
  if (a_regs.empty()) throw InputError("decoder needs at least one register in A");

  DecoderResult res;
  res.a_regs = a_regs;
  res.out_dim = out_dim;
  res.i_re = e_regs.empty() ? 0.0 : mutual_information(state, r_regs, e_regs);
  if (res.i_re > kDecouplingTolerance) {
    std::ostringstream os;
    os << "decoupling fails: I(R:E) = " << res.i_re << " for E = {" << join(e_regs) << "}";
    throw DecouplingError(os.str(), res.i_re);
  }

  const auto r_bits = bit_positions(layout, r_regs);
  const auto e_bits = bit_positions(layout, e_regs);
  const auto a_bits = bit_positions(layout, a_regs);
  const Eigen::Index d_r = Eigen::Index{1} << r_regs.size();
  const Eigen::Index d_e = Eigen::Index{1} << e_regs.size();
  const Eigen::Index d_a = Eigen::Index{1} << a_regs.size();
  if (d_r != out_dim) throw InputError("output dimension must match the reference dimension");

  // psi[(r,e), a]
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(d_r * d_e, d_a);
  const auto amps = state.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    psi(gather(x, r_bits) * d_e + gather(x, e_bits), gather(x, a_bits)) = amps[x];
  }
  const Eigen::MatrixXcd rho_re = psi * psi.adjoint();
  Eigen::MatrixXcd rho_r = Eigen::MatrixXcd::Zero(d_r, d_r);
  Eigen::MatrixXcd rho_e = Eigen::MatrixXcd::Zero(d_e, d_e);
  for (Eigen::Index r = 0; r < d_r; ++r) {
    for (Eigen::Index r2 = 0; r2 < d_r; ++r2) {
      for (Eigen::Index e = 0; e < d_e; ++e) rho_r(r, r2) += rho_re(r * d_e + e, r2 * d_e + e);
    }
  }
  for (Eigen::Index e = 0; e < d_e; ++e) {
    for (Eigen::Index e2 = 0; e2 < d_e; ++e2) {
      for (Eigen::Index r = 0; r < d_r; ++r) rho_e(e, e2) += rho_re(r * d_e + e, r * d_e + e2);
    }
  }

  // Target purification: canonical R-output pair times a purification of rho_E.
  const Eigen::MatrixXcd tau = hermitian_sqrt(rho_r);
  const auto eig_e = eigendecompose_hermitian(rho_e);
  Eigen::Index rank_e = 0;
  for (double v : eig_e.values) rank_e += v > kEigenFloor ? 1 : 0;
  const Eigen::Index junk = std::max<Eigen::Index>(std::max<Eigen::Index>(rank_e, 1), d_a);
  Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(d_e, junk);
  for (Eigen::Index k = 0; k < rank_e; ++k) {
    phi.col(k) = std::sqrt(eig_e.values[k]) * eig_e.vectors.col(k);
  }
  const Eigen::Index d_oj = out_dim * junk;
  Eigen::MatrixXcd target = Eigen::MatrixXcd::Zero(d_r * d_e, d_oj);
  for (Eigen::Index r = 0; r < d_r; ++r) {
    for (Eigen::Index e = 0; e < d_e; ++e) {
      for (Eigen::Index o = 0; o < out_dim; ++o) {
        for (Eigen::Index k = 0; k < junk; ++k) target(r * d_e + e, o * junk + k) = tau(r, o) * phi(e, k);
      }
    }
  }

  // psi = U S W^*, target = U S X^*  =>  target = psi W X^* on the support.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10) ++rank;
  const Eigen::MatrixXcd u = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXcd w = svd.matrixV().leftCols(rank);
  const Eigen::MatrixXcd x =
      target.adjoint() * u * sv.head(rank).cwiseInverse().asDiagonal();
  const Eigen::MatrixXcd k_map = w * x.adjoint();  // d_a x d_oj
  Eigen::MatrixXcd v = k_map.transpose();          // d_oj x d_a

  // Complete the partial isometry on the kernel of psi.
  if (rank < d_a) {
    const Eigen::MatrixXcd q = null_basis(v.adjoint() * v, 0.5);
    const Eigen::MatrixXcd y = null_basis(v * v.adjoint(), 0.5).leftCols(q.cols());
    v += y * q.adjoint();
  }
  res.isometry = v;
  res.junk_dim = static_cast<int>(junk);

  const Eigen::MatrixXcd rho_ro = decoded_density(state, res, r_regs);
  Eigen::VectorXcd tau_vec(d_r * out_dim);
  for (Eigen::Index r = 0; r < d_r; ++r) {
    for (Eigen::Index o = 0; o < out_dim; ++o) tau_vec(r * out_dim + o) = tau(r, o);
  }
  res.fidelity = std::clamp((tau_vec.adjoint() * rho_ro * tau_vec)(0, 0).real(), 0.0, 1.0);
  return res;
}

Eigen::MatrixXcd decoded_density(const PureState& state, const DecoderResult& decoder,
                                 const std::vector<std::string>& keep) {
  const auto& layout = state.layout();
  std::vector<std::string> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end(), [&](const auto& a, const auto& b) {
    return layout.index_of(a) < layout.index_of(b);
  });
  std::vector<std::string> used = keep_sorted;
  used.insert(used.end(), decoder.a_regs.begin(), decoder.a_regs.end());
  const auto rest = complement_registers(layout, used);

  const auto k_bits = bit_positions(layout, keep_sorted);
  const auto t_bits = bit_positions(layout, rest);
  const auto a_bits = bit_positions(layout, decoder.a_regs);
  const Eigen::Index d_k = Eigen::Index{1} << keep_sorted.size();
  const Eigen::Index d_t = Eigen::Index{1} << rest.size();
  const Eigen::Index d_a = Eigen::Index{1} << decoder.a_regs.size();
  if (decoder.isometry.cols() != d_a) throw InputError("decoder does not match register set");

  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(d_k * d_t, d_a);
  const auto amps = state.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    psi(gather(x, k_bits) * d_t + gather(x, t_bits), gather(x, a_bits)) = amps[x];
  }
  const Eigen::MatrixXcd f = psi * decoder.isometry.transpose();  // [(k,t), (o,j)]
  const Eigen::Index out = decoder.out_dim;
  const Eigen::Index junk = decoder.junk_dim;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d_k * out, d_k * out);
  for (Eigen::Index k = 0; k < d_k; ++k) {
    for (Eigen::Index o = 0; o < out; ++o) {
      for (Eigen::Index k2 = 0; k2 < d_k; ++k2) {
        for (Eigen::Index o2 = 0; o2 < out; ++o2) {
          Complex acc = 0;
          for (Eigen::Index t = 0; t < d_t; ++t) {
            for (Eigen::Index j = 0; j < junk; ++j) {
              acc += f(k * d_t + t, o * junk + j) * std::conj(f(k2 * d_t + t, o2 * junk + j));
            }
          }
          rho(k * out + o, k2 * out + o2) = acc;
        }
      }
    }
  }
  return rho;
}

double decoder_secret_fidelity(const SchemeSpec& scheme, const DecoderResult& decoder,
                               Complex alpha, Complex beta) {
  const auto st = encode_secret(scheme, alpha, beta);
  const auto rho = decoded_density(st, decoder, {});
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  Eigen::Vector2cd psi(alpha / norm, beta / norm);
  return std::clamp((psi.adjoint() * rho * psi)(0, 0).real(), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Attack scenarios

AttackP1P2Report attack_example1_p1p2(Complex alpha, Complex beta) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (std::abs(norm - 1.0) > 1e-9) throw InputError("secret is not normalized");
  auto st = encode_secret(build_example1(), alpha, beta);
  apply_gate(st, Cnot{"p1", "p2"});

  auto drop_p2 = [](const PureState& s) {
    RegisterLayout layout({"p1", "p3", "p4"});
    std::vector<Complex> amps(8);
    const auto bits = bit_positions(s.layout(), {"p1", "p3", "p4"});
    const auto src = s.amplitudes();
    for (std::uint64_t x = 0; x < src.size(); ++x) amps[gather(x, bits)] += src[x];
    return PureState::normalized(std::move(layout), std::move(amps));
  };

  AttackP1P2Report rep;
  PureState s0 = st;
  rep.p_outcome0 = project(s0, "p2", 0);
  rep.residual0 = drop_p2(s0);
  PureState s1 = st;
  rep.p_outcome1 = project(s1, "p2", 1);
  if (rep.p_outcome1 > 1e-15) rep.residual1 = drop_p2(s1);
  rep.outcome1_vacuous = rep.p_outcome1 <= 1e-12;

  // (a|0>+b|1>)|00> + (a|1>+b|0>)|11> over (p1, p3, p4)
  std::vector<Complex> expected(8);
  expected[0b000] = alpha;
  expected[0b100] = beta;
  expected[0b111] = alpha;
  expected[0b011] = beta;
  const auto exp_state = PureState::normalized(RegisterLayout({"p1", "p3", "p4"}), expected);
  rep.expected_overlap = overlap_probability(exp_state, rep.residual0);
  rep.p1_entropy = subsystem_entropy(rep.residual0, {"p1"});
  return rep;
}

AttackP2P3Report attack_example1_p2p3(Complex alpha, Complex beta, double phi) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (std::abs(norm - 1.0) > 1e-9) throw InputError("secret is not normalized");
  const auto scheme = build_example1();
  AttackP2P3Report rep;
  rep.rho = partial_trace(encode_secret(scheme, alpha, beta), {"p2", "p3"}).entries();
  rep.rho_phased =
      partial_trace(encode_secret(scheme, alpha, beta * std::polar(1.0, phi)), {"p2", "p3"})
          .entries();
  rep.max_phase_difference = (rep.rho - rep.rho_phased).cwiseAbs().maxCoeff();
  rep.phase_blind = rep.max_phase_difference <= 1e-12;
  for (Eigen::Index i = 0; i < 4; ++i) rep.diagonal.push_back(rep.rho(i, i).real());
  const std::array<double, 2> mixed = {0.5, 0.5};
  const auto global = share_state(scheme, mixed);
  rep.i_r_p2p3 = mutual_information(global, {"R"}, {"p2", "p3"});
  rep.s_s = subsystem_entropy(purify_secret(mixed), {"S"});
  return rep;
}

}  // namespace qss
