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

#include <string>
#include <vector>

#include <json.hpp>

#include "qnft/sim/state_vector.hpp"

namespace qnft::hypergraph {

/// Local phase weights of one vertex (class A qubit, class B qubit).
struct VertexWeight {
  double theta_a = 0.0;
  double theta_b = 0.0;
};

/// Weighted double hypergraph. Vertex v owns qubits 2v (class A) and 2v+1
/// (class B); each hyperedge entangles its vertices' class-A qubits with one
/// multi-controlled phase and their class-B qubits with another.
struct DoubleHypergraph {
  int n_vertices = 0;
  std::vector<std::vector<int>> hyperedges;
  std::vector<VertexWeight> weights;  // empty means all zero
  double edge_phase = 0.0;            // defaults to pi/2 via make()

  static DoubleHypergraph make(int n_vertices, std::vector<std::vector<int>> hyperedges = {},
                               std::vector<VertexWeight> weights = {});

  /// Throws IndexError / ConstraintError / CapacityError.
  void validate() const;

  double weight_sum() const;
};

enum class QubitClass { A, B };

inline int qubit_of(int vertex, QubitClass which) {
  return 2 * vertex + (which == QubitClass::B ? 1 : 0);
}

/// Running total of weight phases applied to a register; must stay < pi.
class WeightBudget {
 public:
  double spent() const noexcept { return spent_; }
  /// Throws ConstraintError if adding `theta` reaches pi.
  void charge(double theta);

 private:
  double spent_ = 0.0;
};

/// P(theta) on the chosen qubit of `vertex`, charged against `budget`.
void apply_weight(sim::StateVector& state, int vertex, QubitClass which, double theta,
                  WeightBudget& budget);

/// Bell pair per vertex, per-class MCP over every hyperedge, then weights.
sim::StateVector build_state(const DoubleHypergraph& graph);

/// Structured text form:
///   {"vertices": N, "edges": [[0,1],[1,2,3]], "weights": [[ta, tb], ...],
///    "edge_phase": 1.5707963267948966}
/// "weights" and "edge_phase" are optional; angles are numbers or strings
/// such as "pi/16" or "3pi/16".
DoubleHypergraph from_json(const nlohmann::json& doc);
nlohmann::json to_json(const DoubleHypergraph& graph);

}  // namespace qnft::hypergraph
