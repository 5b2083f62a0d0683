#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veerflow/dynamics.hpp"

namespace veerflow {

// A branch end is (branch id, end 0/1); each branch has exactly two ends, each
// attached to one side of one switch. Side lists are ordered.
struct BranchEnd {
    int branch;
    int end;
    bool operator==(const BranchEnd&) const = default;
};

struct Switch {
    std::vector<BranchEnd> side_a;
    std::vector<BranchEnd> side_b;
};

struct TrainTrack {
    int num_branches = 0;
    std::vector<Switch> switches;
    bool large_ok = true;  // caller accepts large branches (not lowest position)

    std::string to_json() const;
    static TrainTrack from_json(const std::string& text);
};

struct TrackReport {
    bool ok = false;
    std::vector<std::string> problems;
    std::vector<int> large_branches;  // both ends alone on their side
};

TrackReport validate_track(const TrainTrack& v);

// Elementary fold: drag an end of `branch` across the adjacent ends of the
// branches in `over`, in order. Transition matrix is the identity plus one unit
// per target in the branch's row.
struct FoldMove {
    int branch = -1;
    std::vector<int> over;
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct FoldResult {
    TrainTrack track;
    IntMatrix matrix;  // elementary transition matrix of the move
};

FoldResult apply_fold(const TrainTrack& v, const FoldMove& move);

// Eventually-periodic folding presentation: moves act on the core; ray chains
// model the periodic end tails (each branch maps simply to the next, the last
// one is truncated out of the window).
struct FoldingCycle {
    TrainTrack track;
    std::vector<FoldMove> moves;
    std::vector<int> relabel;            // bijection of branches closing the cycle
    std::vector<std::vector<int>> rays;  // disjoint chains of ray branches

    std::string to_json() const;
    static FoldingCycle from_json(const std::string& text);
};

struct TransitionGraph {
    WeightedDigraph gf;            // unit-weight edges, one per unit of w1
    IntMatrix w1;                  // composed transition counts after relabeling
    std::vector<bool> simple_row;  // row sums equal to 1
    std::vector<bool> ray_branch;
    std::vector<bool> truncated;   // last branches of ray chains
};

TransitionGraph transition_graph(const FoldingCycle& cycle);

// exact transition count powers w^(n) = (w^(1))^n
std::vector<std::vector<BigNat>> transition_power(const IntMatrix& w1, int n);

// growth of G_f: unit-mode growth of the dynamical core, with the translation
// case (empty core) reported as lambda = 1
GrowthResult gf_growth(const TransitionGraph& tg);

// carried curve: weights satisfying every switch condition of the track
bool satisfies_switch_conditions(const TrainTrack& v, const std::vector<std::int64_t>& c);

struct IntersectionGrowth {
    std::vector<BigNat> counts;  // i_1..i_{n_max}
    double slope;                // log-slope over the trailing half
};

// i_n = sum_j d_j sum_i c_i w^(n)_ij, exact
IntersectionGrowth intersection_growth(const FoldingCycle& cycle,
                                       const std::vector<std::int64_t>& carried,
                                       const std::vector<std::int64_t>& transverse, int n_max,
                                       int cap = 256);

}  // namespace veerflow
