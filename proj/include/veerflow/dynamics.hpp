#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "veerflow/bignum.hpp"
#include "veerflow/bsurf.hpp"

namespace veerflow {

struct WEdge {
    int from;
    int to;
    std::int64_t weight;  // >= 0
};

// Directed multigraph with nonnegative integer edge weights. Parallel edges and
// self-loops allowed.
struct WeightedDigraph {
    int num_vertices = 0;
    std::vector<WEdge> edges;

    std::string to_json() const;
    static WeightedDigraph from_json(const std::string& text);
};

enum class GrowthMode { unit, weighted };

struct GrowthResult {
    double lambda = 1.0;
    double t_star = 1.0;
    std::vector<double> right_vec;  // positive eigenvector estimates at t_star
    std::vector<double> left_vec;
    std::int64_t iterations = 0;
    double residual = 0.0;
    bool empty_core = false;  // translation case, set by wrappers
    int max_component = -1;   // SCC achieving the growth (unit mode)
};

// strongly connected components; returns component id per vertex
std::vector<int> strongly_connected_components(const WeightedDigraph& g, int* count = nullptr);

// edges lying on directed cycles (endpoints in one SCC); vertex ids preserved
WeightedDigraph dynamical_core(const WeightedDigraph& g);

// flow-graph versions keyed to carried classes
FlowGraph cut(const FlowGraph& phi, const std::vector<std::int64_t>& eta, const BranchMatrix& B);
FlowGraph dynamical_core(const FlowGraph& phi);

// components of the undirected dual graph after deleting faces with eta > 0
std::vector<int> cut_components(const VeeringTriangulation& T, const std::vector<std::int64_t>& eta,
                                const BranchMatrix& B, int* count = nullptr);

// subgraph of phi_eta supported in the chosen component: owning tetrahedron,
// source host tetrahedron, and both sides of every crossed face must lie in it
FlowGraph restrict_phi_n(const VeeringTriangulation& T, const FlowGraph& phi_eta,
                         const std::vector<int>& component_of_tet, int component);

// table-driven variant for hand-built flow graphs: tet_below_edge maps each
// vertex (tau-edge) to its host tetrahedron, face_sides each face class to its
// (below, above) tetrahedra
FlowGraph restrict_phi_n(const FlowGraph& phi_eta, const std::vector<int>& component_of_tet,
                         int component, const std::vector<int>& tet_below_edge,
                         const std::vector<std::pair<int, int>>& face_sides);

// weighting of a flow graph: unit, or the pairing with a face class
WeightedDigraph unit_weighting(const FlowGraph& phi);
WeightedDigraph pairing_weighting(const FlowGraph& phi, const std::vector<std::int64_t>& xi);

// a directed cycle through weight-0 edges, if any (vertex sequence)
std::optional<std::vector<int>> find_zero_weight_cycle(const WeightedDigraph& g);

// Perron growth of the dynamical core. Unit mode: spectral radius of the count
// matrix. Weighted mode: 1/t* with rho(A(t*)) = 1, A(t)[u][v] = sum of t^w over
// parallel edges, solved by monotone bisection on (0,1] with power-iteration
// rho evaluations. Throws DomainError on an empty core or a weight-0 cycle,
// ConvergenceError past the iteration cap.
GrowthResult growth_rate(const WeightedDigraph& g, GrowthMode mode);

std::string growth_result_to_json(const GrowthResult& r);

// Exact counts of closed directed walks of total length (unit) or total weight
// (weighted) exactly n, for n = 1..n_max. Dynamic programming, big-integer.
std::vector<BigNat> cycle_count_oracle(const WeightedDigraph& g, GrowthMode mode, int n_max,
                                       int cap = 256);

// max over source vertices of (sum_j of n-step path counts)^(1/n), exact counts
// under the hood; converges to lambda from above for strongly connected graphs
double row_sum_growth(const WeightedDigraph& g, int n_max);

// least-squares slope of log(values) over n in [lo, hi], zero entries skipped;
// returns 0 when fewer than two usable points
double log_slope(const std::vector<BigNat>& values, int lo, int hi);

}  // namespace veerflow
