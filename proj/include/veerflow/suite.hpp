#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veerflow/bsurf.hpp"
#include "veerflow/dynamics.hpp"
#include "veerflow/tri.hpp"

namespace veerflow::suite {

struct Options {
    std::uint64_t seed = 20240817;
    int nmax = 40;
    double oracle_tol = 0.05;      // criterion 2
    double row_sum_tol = 0.02;     // criterion 3
    double pipeline_tol = 1e-8;    // criterion 5
    double intersect_tol = 0.02;   // criterion 7
    double intersect_excess = 0.01;
    double homogeneity_tol = 1e-9;  // criterion 8
    double convexity_tol = 1e-6;
    double continuity_tol = 0.01;
};

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;  // deterministic given (inputs, seed)
    std::string timing;  // wall-clock diagnostics, reported separately
};

std::vector<CriterionResult> run_acceptance(const Options& opt);

// prints one line per criterion; returns the number of failures
int report(const std::vector<CriterionResult>& results);

// deterministic PRNG shared by the randomized suites
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    int uniform(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next() % std::uint64_t(hi - lo + 1));
    }
};

// strongly connected random multigraph: a spanning cycle plus extra edges
WeightedDigraph random_strongly_connected(Rng& rng, int max_vertices, int max_edges,
                                          std::int64_t max_weight, int min_extra = 0);

// canonical-side and opposite-side pairings agree for every closed walk of
// length <= max_len against an integer basis of branch-equation solutions
bool pairing_well_defined(const VeeringTriangulation& T, const FlowGraph& phi, int max_len,
                          std::string* detail = nullptr);

// closed directed edge walks (as edge index sequences) of length <= max_len
std::vector<std::vector<int>> closed_walks(const FlowGraph& phi, int max_len);

}  // namespace veerflow::suite
