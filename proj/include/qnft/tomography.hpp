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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnft/ledger.hpp"
#include "qnft/rng.hpp"
#include "qnft/sim/density_matrix.hpp"
#include "qnft/sim/state_vector.hpp"

namespace qnft::tomography {

inline constexpr int kMaxTomographyQubits = 4;

/// Character j of `pauli` is the basis (X, Y or Z) for qubit j.
struct TomographySetting {
  std::string pauli;
  std::size_t shots = 0;
};

/// All 3^n basis strings, qubit 0 varying fastest.
std::vector<std::string> all_settings(int n_qubits);

/// Counts over the 2^n computational outcomes after rotating into the
/// setting's basis (outcome bit j belongs to qubit j).
std::vector<std::uint64_t> sample_setting(const sim::DensityMatrix& rho, const TomographySetting& setting,
                                          Rng& rng);

/// Outcome frequencies per setting. Exact data stores Born probabilities.
struct MeasurementData {
  int n_qubits = 0;
  std::size_t shots = 0;  // 0 for exact data
  std::map<std::string, std::vector<double>> frequencies;
};

/// Samples every setting; setting i draws from Rng(derive_seed(base, i)) so
/// the result does not depend on evaluation order.
MeasurementData collect(const sim::DensityMatrix& rho, std::size_t shots, Rng& rng);

/// Infinite-shot data.
MeasurementData exact_data(const sim::DensityMatrix& rho);

/// <P> for each of the 4^n Pauli strings (I, X, Y, Z per qubit), averaging
/// every setting that agrees with P on its non-identity positions.
std::map<std::string, double> pauli_expectations(const MeasurementData& data);

struct Reconstruction {
  Eigen::MatrixXcd raw;     // linear inversion, Hermitian, trace 1
  sim::DensityMatrix rho;   // after PSD projection
  double clipped_mass = 0;  // sum of |negative eigenvalues| of `raw`
};

/// Linear inversion followed by projection onto the density matrices.
/// TomographyError when a setting is missing.
Reconstruction reconstruct(const MeasurementData& data);

/// Nearest PSD, trace-1 matrix (Frobenius norm): the spectrum is shifted
/// and clipped onto the probability simplex.
Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& hermitian, double* clipped_mass = nullptr);

struct TomographyResult {
  sim::DensityMatrix rho{1};
  double fidelity = 0.0;
  std::size_t shots = 0;
  double noise_p = 0.0;
  double clipped_mass = 0.0;

  nlohmann::json to_json() const;
};

/// Prepares the chain with per-gate depolarizing noise `p` in density-matrix
/// mode, runs full tomography and scores it against the ideal register.
/// TomographyError for an empty chain or more than 4 qubits.
TomographyResult run_tomography(const ledger::ChainState& chain, double p, std::size_t shots, Rng& rng);

/// Noisy density matrix of the chain's preparation circuit.
sim::DensityMatrix noisy_chain_state(const ledger::ChainState& chain, double p);

struct CalibrationOptions {
  int seeds = 5;
  double tolerance = 0.02;
  double p_max = 0.5;
  int max_iterations = 40;
};

struct CalibrationStep {
  double p = 0.0;
  double mean_fidelity = 0.0;
  std::vector<double> fidelities;  // one per seed
};

struct CalibrationResult {
  double target = 0.0;
  double p = 0.0;
  double mean_fidelity = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<CalibrationStep> trace;  // evaluation order
  bool monotone = true;                // fidelity non-increasing in p over the trace

  nlohmann::json to_json() const;
};

/// Bisection on p in [0, p_max] until the seed-averaged fidelity is within
/// tolerance of `target`. Every evaluation reuses the same seeds.
/// CalibrationError when the target is out of reach.
CalibrationResult calibrate_noise_to_fidelity(double target, const ledger::ChainState& chain, std::size_t shots,
                                              Rng& rng, const CalibrationOptions& options = {});

/// True when mean fidelity never increases with p (steps sorted by p).
bool fidelity_monotone(std::vector<CalibrationStep> trace);

/// Basis labels |q_{n-1} ... q_0> for rows and columns.
std::vector<std::string> basis_labels(int n_qubits);

/// {"schema":"qnft.city/1","n","labels","real":[[..]],"imag":[[..]]}
nlohmann::json export_city(const sim::DensityMatrix& rho);

/// {"schema":"qnft.hinton/1","n","labels","real":[cell..],"imag":[cell..]}
/// with cell = {"row","col","value","magnitude","sign"}.
nlohmann::json export_hinton(const sim::DensityMatrix& rho);

}  // namespace qnft::tomography
