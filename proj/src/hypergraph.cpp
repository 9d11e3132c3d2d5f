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

#include "qnft/hypergraph.hpp"

#include <algorithm>
#include <numbers>

#include "qnft/angle.hpp"
#include "qnft/errors.hpp"

namespace qnft::hypergraph {

using std::numbers::pi;

DoubleHypergraph DoubleHypergraph::make(int n_vertices, std::vector<std::vector<int>> hyperedges,
                                        std::vector<VertexWeight> weights) {
  DoubleHypergraph g;
  g.n_vertices = n_vertices;
  g.hyperedges = std::move(hyperedges);
  g.weights = std::move(weights);
  g.edge_phase = pi / 2;
  return g;
}

double DoubleHypergraph::weight_sum() const {
  double total = 0.0;
  for (const auto& w : weights) total += w.theta_a + w.theta_b;
  return total;
}

void DoubleHypergraph::validate() const {
  if (n_vertices < 1 || 2 * n_vertices > sim::kMaxStateQubits) {
    throw CapacityError("double hypergraph needs 1.." + std::to_string(sim::kMaxStateQubits / 2) +
                        " vertices, got " + std::to_string(n_vertices));
  }
  if (!weights.empty() && static_cast<int>(weights.size()) != n_vertices) {
    throw IndexError("weights list must have one entry per vertex");
  }
  for (std::size_t e = 0; e < hyperedges.size(); ++e) {
    const auto& edge = hyperedges[e];
    if (edge.size() < 2) throw IndexError("hyperedge " + std::to_string(e) + " has fewer than 2 vertices");
    std::vector<int> sorted = edge;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw IndexError("hyperedge " + std::to_string(e) + " repeats a vertex");
    }
    if (sorted.front() < 0 || sorted.back() >= n_vertices) {
      throw IndexError("hyperedge " + std::to_string(e) + " references a missing vertex");
    }
  }
  for (const auto& w : weights) {
    if (w.theta_a < 0.0 || w.theta_b < 0.0) throw ConstraintError("weights must be non-negative");
  }
  if (!(weight_sum() < pi)) {
    throw ConstraintError("sum of vertex weights must be < pi, got " + std::to_string(weight_sum()));
  }
}

void WeightBudget::charge(double theta) {
  if (theta < 0.0) throw ConstraintError("weight phases must be non-negative");
  if (!(spent_ + theta < pi)) {
    throw ConstraintError("weight budget exhausted: " + std::to_string(spent_ + theta) + " >= pi");
  }
  spent_ += theta;
}

void apply_weight(sim::StateVector& state, int vertex, QubitClass which, double theta,
                  WeightBudget& budget) {
  const int q = qubit_of(vertex, which);
  if (vertex < 0 || q >= state.num_qubits()) {
    throw IndexError("vertex " + std::to_string(vertex) + " outside the register");
  }
  budget.charge(theta);
  if (theta != 0.0) state.apply(sim::Gate::phase(theta), {q});
}

sim::StateVector build_state(const DoubleHypergraph& graph) {
  graph.validate();
  sim::StateVector state(2 * graph.n_vertices);
  for (int v = 0; v < graph.n_vertices; ++v) {
    sim::bell_pair(state, qubit_of(v, QubitClass::A), qubit_of(v, QubitClass::B));
  }
  for (const auto& edge : graph.hyperedges) {
    const auto gate = sim::Gate::mcphase(graph.edge_phase, static_cast<int>(edge.size()) - 1);
    for (QubitClass cls : {QubitClass::A, QubitClass::B}) {
      std::vector<int> qubits;
      qubits.reserve(edge.size());
      for (int v : edge) qubits.push_back(qubit_of(v, cls));
      state.apply(gate, qubits);
    }
  }
  WeightBudget budget;
  for (std::size_t v = 0; v < graph.weights.size(); ++v) {
    const int vertex = static_cast<int>(v);
    apply_weight(state, vertex, QubitClass::A, graph.weights[v].theta_a, budget);
    apply_weight(state, vertex, QubitClass::B, graph.weights[v].theta_b, budget);
  }
  return state;
}

DoubleHypergraph from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "graph document must be an object");
  if (!doc.contains("vertices") || !doc["vertices"].is_number_integer()) {
    throw ConfigError("vertices", "required integer");
  }
  DoubleHypergraph g = DoubleHypergraph::make(doc["vertices"].get<int>());
  if (doc.contains("edges")) {
    const auto& edges = doc["edges"];
    if (!edges.is_array()) throw ConfigError("edges", "must be an array of vertex lists");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string path = "edges[" + std::to_string(e) + "]";
      if (!edges[e].is_array()) throw ConfigError(path, "must be an array of vertex indices");
      std::vector<int> edge;
      for (const auto& v : edges[e]) {
        if (!v.is_number_integer()) throw ConfigError(path, "vertex indices must be integers");
        edge.push_back(v.get<int>());
      }
      g.hyperedges.push_back(std::move(edge));
    }
  }
  if (doc.contains("weights")) {
    const auto& ws = doc["weights"];
    if (!ws.is_array()) throw ConfigError("weights", "must be an array of [theta_a, theta_b]");
    for (std::size_t v = 0; v < ws.size(); ++v) {
      const std::string path = "weights[" + std::to_string(v) + "]";
      if (!ws[v].is_array() || ws[v].size() != 2) throw ConfigError(path, "must be [theta_a, theta_b]");
      try {
        g.weights.push_back({angle_from_json(ws[v][0]), angle_from_json(ws[v][1])});
      } catch (const ParameterError& e) {
        throw ConfigError(path, e.what());
      }
    }
  }
  if (doc.contains("edge_phase")) {
    try {
      g.edge_phase = angle_from_json(doc["edge_phase"]);
    } catch (const ParameterError& e) {
      throw ConfigError("edge_phase", e.what());
    }
  }
  return g;
}

nlohmann::json to_json(const DoubleHypergraph& graph) {
  nlohmann::json doc;
  doc["vertices"] = graph.n_vertices;
  doc["edges"] = graph.hyperedges;
  auto weights = nlohmann::json::array();
  for (const auto& w : graph.weights) weights.push_back({w.theta_a, w.theta_b});
  doc["weights"] = std::move(weights);
  doc["edge_phase"] = graph.edge_phase;
  return doc;
}

}  // namespace qnft::hypergraph
