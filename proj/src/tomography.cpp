// Copyright 2026 The qnft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qnft/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qnft/errors.hpp"

namespace qnft::tomography {

namespace {

using Complex = std::complex<double>;

void check_width(int n) {
  if (n < 1 || n > kMaxTomographyQubits) {
    throw TomographyError("tomography supports 1.." + std::to_string(kMaxTomographyQubits) + " qubits, got " +
                          std::to_string(n));
  }
}

/// Element (r, c) of a single-qubit Pauli.
Complex pauli_element(char p, int r, int c) {
  switch (p) {
    case 'I': return r == c ? 1.0 : 0.0;
    case 'X': return r != c ? 1.0 : 0.0;
    case 'Y': return r == c ? Complex(0.0) : (r == 1 ? Complex(0, 1) : Complex(0, -1));
    case 'Z': return r != c ? 0.0 : (r == 0 ? 1.0 : -1.0);
    default: throw TomographyError(std::string("bad Pauli label '") + p + "'");
  }
}

std::vector<std::string> strings_over(std::string_view alphabet, int n) {
  std::size_t total = 1;
  for (int q = 0; q < n; ++q) total *= alphabet.size();
  std::vector<std::string> out(total, std::string(static_cast<std::size_t>(n), ' '));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int j = 0; j < n; ++j) {
      out[idx][static_cast<std::size_t>(j)] = alphabet[rest % alphabet.size()];
      rest /= alphabet.size();
    }
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

std::vector<std::string> all_settings(int n_qubits) {
  check_width(n_qubits);
  return strings_over("XYZ", n_qubits);
}

std::vector<std::uint64_t> sample_setting(const sim::DensityMatrix& rho, const TomographySetting& setting,
                                          Rng& rng) {
  if (static_cast<int>(setting.pauli.size()) != rho.num_qubits()) {
    throw TomographyError("setting '" + setting.pauli + "' does not match a " +
                          std::to_string(rho.num_qubits()) + "-qubit state");
  }
  std::vector<double> probs;
  try {
    probs = rho.measurement_probabilities(setting.pauli);
  } catch (const ParameterError& e) {
    throw TomographyError(e.what());
  }
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  const double total = cdf.back();
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::size_t s = 0; s < setting.shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  return counts;
}

MeasurementData collect(const sim::DensityMatrix& rho, std::size_t shots, Rng& rng) {
  if (shots == 0) throw TomographyError("tomography needs at least one shot per setting");
  MeasurementData data;
  data.n_qubits = rho.num_qubits();
  data.shots = shots;
  const auto settings = all_settings(data.n_qubits);
  const std::uint64_t base = rng.next_u64();
  for (std::size_t i = 0; i < settings.size(); ++i) {
    Rng local(Rng::derive_seed(base, i));
    const auto counts = sample_setting(rho, {settings[i], shots}, local);
    std::vector<double> freq(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
      freq[k] = static_cast<double>(counts[k]) / static_cast<double>(shots);
    }
    data.frequencies.emplace(settings[i], std::move(freq));
  }
  return data;
}

MeasurementData exact_data(const sim::DensityMatrix& rho) {
  MeasurementData data;
  data.n_qubits = rho.num_qubits();
  for (const auto& s : all_settings(data.n_qubits)) data.frequencies.emplace(s, rho.measurement_probabilities(s));
  return data;
}

std::map<std::string, double> pauli_expectations(const MeasurementData& data) {
  const int n = data.n_qubits;
  check_width(n);
  for (const auto& s : all_settings(n)) {
    if (!data.frequencies.contains(s)) throw TomographyError("missing tomography setting " + s);
  }
  std::map<std::string, double> out;
  for (const auto& p : strings_over("IXYZ", n)) {
    double sum = 0.0;
    int used = 0;
    for (const auto& [setting, freq] : data.frequencies) {
      bool compatible = true;
      for (int j = 0; j < n && compatible; ++j) {
        const char pj = p[static_cast<std::size_t>(j)];
        compatible = pj == 'I' || pj == setting[static_cast<std::size_t>(j)];
      }
      if (!compatible) continue;
      double e = 0.0;
      for (std::size_t k = 0; k < freq.size(); ++k) {
        int parity = 0;
        for (int j = 0; j < n; ++j) {
          if (p[static_cast<std::size_t>(j)] != 'I') parity ^= static_cast<int>((k >> j) & 1U);
        }
        e += parity ? -freq[k] : freq[k];
      }
      sum += e;
      ++used;
    }
    out.emplace(p, sum / used);
  }
  return out;
}

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& hermitian, double* clipped_mass) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (hermitian + hermitian.adjoint()));
  Eigen::VectorXd values = eig.eigenvalues();
  if (clipped_mass) {
    *clipped_mass = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) *clipped_mass += std::max(0.0, -values(i));
  }
  // Euclidean projection of the spectrum onto the probability simplex: shift
  // by a common tau, clip at zero. This is the Frobenius-nearest density matrix.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = std::max(0.0, values(i) - tau);
  values /= values.sum();
  Eigen::MatrixXcd out = eig.eigenvectors() * values.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

Reconstruction reconstruct(const MeasurementData& data) {
  const int n = data.n_qubits;
  const auto expectations = pauli_expectations(data);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd raw = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, value] : expectations) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        Complex element = 1.0;
        for (int j = 0; j < n && element != 0.0; ++j) {
          element *= pauli_element(p[static_cast<std::size_t>(j)], static_cast<int>((r >> j) & 1),
                                   static_cast<int>((c >> j) & 1));
        }
        raw(r, c) += value * element;
      }
    }
  }
  raw /= static_cast<double>(dim);
  double clipped = 0.0;
  auto rho = sim::DensityMatrix::from_matrix(project_psd(raw, &clipped));
  return {std::move(raw), std::move(rho), clipped};
}

nlohmann::json TomographyResult::to_json() const {
  return {{"n", rho.num_qubits()},
          {"shots_per_setting", shots},
          {"settings", static_cast<std::size_t>(std::pow(3, rho.num_qubits()))},
          {"noise", {{"channel", "depolarizing"}, {"p", noise_p}}},
          {"fidelity", fidelity},
          {"clipped_mass", clipped_mass}};
}

sim::DensityMatrix noisy_chain_state(const ledger::ChainState& chain, double p) {
  if (chain.empty()) throw TomographyError("tomography needs a non-empty chain");
  check_width(2 * chain.size());
  const auto circuit = ledger::chain_circuit(chain.blocks(), chain.options());
  if (p == 0.0) return circuit.simulate_density();
  return circuit.simulate_density(sim::NoiseChannel::depolarizing(p));
}

TomographyResult run_tomography(const ledger::ChainState& chain, double p, std::size_t shots, Rng& rng) {
  const auto rho = noisy_chain_state(chain, p);
  auto rec = reconstruct(collect(rho, shots, rng));
  TomographyResult out;
  out.fidelity = sim::fidelity_pure(rec.rho, *chain.register_state());
  out.rho = std::move(rec.rho);
  out.shots = shots;
  out.noise_p = p;
  out.clipped_mass = rec.clipped_mass;
  return out;
}

bool fidelity_monotone(std::vector<CalibrationStep> trace) {
  std::sort(trace.begin(), trace.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].mean_fidelity > trace[i - 1].mean_fidelity) return false;
  }
  return true;
}

nlohmann::json CalibrationResult::to_json() const {
  auto steps = nlohmann::json::array();
  for (const auto& s : trace) {
    steps.push_back({{"p", s.p}, {"mean_fidelity", s.mean_fidelity}, {"fidelities", s.fidelities}});
  }
  return {{"target", target}, {"p", p},         {"mean_fidelity", mean_fidelity},
          {"seeds", seeds},   {"trace", steps}, {"monotone", monotone}};
}

CalibrationResult calibrate_noise_to_fidelity(double target, const ledger::ChainState& chain, std::size_t shots,
                                              Rng& rng, const CalibrationOptions& options) {
  if (!(target > 0.0 && target <= 1.0)) throw ParameterError("fidelity target must be in (0, 1]");
  if (options.seeds < 1 || !(options.p_max > 0.0 && options.p_max <= 1.0) || !(options.tolerance > 0.0)) {
    throw ParameterError("invalid calibration options");
  }
  CalibrationResult result;
  result.target = target;
  for (int s = 0; s < options.seeds; ++s) result.seeds.push_back(rng.next_u64());

  auto evaluate = [&](double p) {
    CalibrationStep step;
    step.p = p;
    const auto rho = noisy_chain_state(chain, p);
    for (auto seed : result.seeds) {
      Rng local(seed);
      auto rec = reconstruct(collect(rho, shots, local));
      step.fidelities.push_back(sim::fidelity_pure(rec.rho, *chain.register_state()));
    }
    step.mean_fidelity = mean(step.fidelities);
    result.trace.push_back(step);
    return step.mean_fidelity;
  };
  auto finish = [&](double p, double f) {
    result.p = p;
    result.mean_fidelity = f;
    result.monotone = fidelity_monotone(result.trace);
    return result;
  };

  const double f_lo = evaluate(0.0);
  if (std::abs(f_lo - target) <= options.tolerance) return finish(0.0, f_lo);
  if (target > f_lo) {
    throw CalibrationError("target " + std::to_string(target) + " exceeds the noiseless fidelity " +
                           std::to_string(f_lo));
  }
  const double f_hi = evaluate(options.p_max);
  if (std::abs(f_hi - target) <= options.tolerance) return finish(options.p_max, f_hi);
  if (target < f_hi) {
    throw CalibrationError("target " + std::to_string(target) + " is below the fidelity " + std::to_string(f_hi) +
                           " reached at p = " + std::to_string(options.p_max));
  }
  double lo = 0.0;
  double hi = options.p_max;
  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = evaluate(mid);
    if (std::abs(f - target) <= options.tolerance) return finish(mid, f);
    (f > target ? lo : hi) = mid;
  }
  throw CalibrationError("bisection did not reach the target within " + std::to_string(options.max_iterations) +
                         " steps");
}

std::vector<std::string> basis_labels(int n_qubits) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < (std::size_t{1} << n_qubits); ++i) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int j = 0; j < n_qubits; ++j) {
      if ((i >> j) & 1U) s[static_cast<std::size_t>(n_qubits - 1 - j)] = '1';
    }
    labels.push_back(std::move(s));
  }
  return labels;
}

nlohmann::json export_city(const sim::DensityMatrix& rho) {
  const auto& m = rho.matrix();
  auto re = nlohmann::json::array();
  auto im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> rr;
    std::vector<double> ii;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"schema", "qnft.city/1"},
          {"n", rho.num_qubits()},
          {"labels", basis_labels(rho.num_qubits())},
          {"real", std::move(re)},
          {"imag", std::move(im)}};
}

nlohmann::json export_hinton(const sim::DensityMatrix& rho) {
  const auto& m = rho.matrix();
  auto cells = [&](bool imag) {
    auto out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double v = imag ? m(r, c).imag() : m(r, c).real();
        out.push_back({{"row", r}, {"col", c}, {"value", v}, {"magnitude", std::abs(v)},
                       {"sign", v > 0 ? 1 : (v < 0 ? -1 : 0)}});
      }
    }
    return out;
  };
  return {{"schema", "qnft.hinton/1"},
          {"n", rho.num_qubits()},
          {"labels", basis_labels(rho.num_qubits())},
          {"real", cells(false)},
          {"imag", cells(true)}};
}

}  // namespace qnft::tomography
