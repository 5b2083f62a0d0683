#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veerflow/tri.hpp"

namespace veerflow {

// Dual graph: one vertex per tetrahedron (its triple point), one directed edge
// per face class, oriented from the tetrahedron below the face to the one above.
struct DualGraph {
    int num_vertices = 0;
    struct Edge {
        int face;
        int from;
        int to;
    };
    std::vector<Edge> edges;  // indexed by face class
};

// One sector of the unstable branched surface per tau-edge. The boundary walk
// follows the edge link in its canonical orientation starting at the source
// corner; side A is the arc walked first.
struct Sector {
    int edge = -1;
    int bottom_tet = -1;                  // source corner (edge is its top edge)
    int top_tet = -1;                     // sink corner (edge is its bottom edge)
    std::array<int, 2> side_tets{-1, -1};  // corners adjacent to the source
    std::vector<int> interior_top_tets;   // remaining corners, includes the sink
    struct Step {
        int face;      // face class of the boundary Gamma-edge
        bool forward;  // true when walked from below to above
    };
    std::vector<Step> boundary;  // cyclic from the source corner
};

struct SectorComplex {
    std::vector<Sector> sectors;   // indexed by edge class
    std::vector<EdgeLink> links;   // the links they were traced from
};

struct Crossing {
    int face;
    int coeff;  // +1 in canonical words; signed in opposite-side debug words
    bool operator==(const Crossing&) const = default;
};

struct FlowEdge {
    enum class Kind { from_bottom, from_equatorial };
    int src = -1;
    int dst = -1;
    int tet = -1;                     // owning tetrahedron
    Kind kind = Kind::from_bottom;
    std::vector<Crossing> crossings;  // canonical word, all +1
    int link_pos = -1;                // target corner position in link(src); -1 for hand-built graphs
};

struct FlowGraph {
    int num_vertices = 0;
    std::vector<FlowEdge> edges;

    std::string to_json() const;
    static FlowGraph from_json(const std::string& text);
};

// Integer face-weight vector; a carried class additionally has all weights >= 0.
struct FaceClass {
    std::vector<std::int64_t> weights;
};

using BranchMatrix = std::vector<std::vector<std::int64_t>>;  // rows = edges, cols = faces

DualGraph dual_graph(const VeeringTriangulation& T);

// Traces every sector from the edge links and checks the rectangle model
// (unique source and sink corner, nonempty sides, monotone boundary walk).
SectorComplex build_sectors(const VeeringTriangulation& T, const DualGraph& gamma);

// Flow graph in dual position, reconciled against the standard-position count
// (three edges per tetrahedron into its top edge: one from the bottom edge,
// two from equatorial edges).
FlowGraph flow_graph(const VeeringTriangulation& T, const SectorComplex& sectors);

// Crossing word for the flow edge from tau-edge src into the top edge of
// target_tet: the contiguous positively-crossed arc of faces around link(src)
// from a top face of the source corner's tetrahedron to a bottom face of
// target_tet, on the canonical side.
std::vector<Crossing> crossing_word(const VeeringTriangulation& T, const EdgeLink& link,
                                    int target_tet);

// Debug variant: the complementary walk around link(src). Signed; pairs equally
// with every branch-equation solution.
std::vector<Crossing> opposite_crossing_word(const VeeringTriangulation& T, const EdgeLink& link,
                                             int target_pos);

BranchMatrix branch_equations(const VeeringTriangulation& T);

bool satisfies_branch_equations(const BranchMatrix& B, const std::vector<std::int64_t>& w);
bool is_carried(const BranchMatrix& B, const std::vector<std::int64_t>& w);

std::int64_t pairing_of_edge(const FlowEdge& e, const std::vector<std::int64_t>& w);

// Pairing of a closed directed edge walk (indices into phi.edges) with a
// branch-equation solution w.
std::int64_t pairing(const FlowGraph& phi, const std::vector<int>& cycle,
                     const std::vector<std::int64_t>& w, const BranchMatrix& B);

std::string face_class_to_json(const FaceClass& w);
FaceClass face_class_from_json(const std::string& text);

}  // namespace veerflow
