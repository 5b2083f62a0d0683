#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "veerflow/errors.hpp"

namespace veerflow {

// Local indexing conventions, fixed across the project:
//   vertices 0..3; face i is the face opposite vertex i;
//   local edges 0..5 are the vertex pairs 01,02,03,12,13,23.
//
// Taut structure: pi_pair p in {0,1,2} selects the opposite edge pair carrying
// angle pi (p=0: edges {01,23}, p=1: {02,13}, p=2: {03,12}). The pi-edge
// incident to vertex 0 is the top edge of the tetrahedron, the opposite one the
// bottom edge; top faces are the two faces containing the top edge. Input data
// must be labeled so all tetrahedra are coherently (positively) oriented, i.e.
// all face gluings are odd permutations.

inline constexpr std::array<std::array<int, 2>, 6> kEdgeVerts = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int e = 0; e < 6; ++e)
        if (kEdgeVerts[e][0] == a && kEdgeVerts[e][1] == b) return e;
    throw DomainError("bad edge vertex pair");
}

inline int opposite_edge(int e) { return 5 - e; }

// the two faces containing local edge e (faces opposite the complement pair)
inline std::array<int, 2> edge_faces(int e) {
    std::array<int, 2> f{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != kEdgeVerts[e][0] && v != kEdgeVerts[e][1]) f[k++] = v;
    return f;
}

struct Perm4 {
    std::array<int, 4> img{0, 1, 2, 3};

    int operator[](int i) const { return img[i]; }
    Perm4 inverse() const {
        Perm4 r;
        for (int i = 0; i < 4; ++i) r.img[img[i]] = i;
        return r;
    }
    bool is_odd() const {
        int inv = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (img[i] > img[j]) ++inv;
        return inv % 2 == 1;
    }
    bool operator==(const Perm4&) const = default;
};

struct Tetrahedron {
    struct Glue {
        int tet = -1;
        int face = -1;
        Perm4 perm;  // vertex map into the target tet
    };
    std::array<Glue, 4> glue;
    int pi_pair = 0;

    int top_edge_local() const { return pi_pair; }           // edges 01,02,03
    int bottom_edge_local() const { return 5 - pi_pair; }    // opposite pair member
    bool is_pi_edge(int e) const { return e == pi_pair || e == 5 - pi_pair; }
    bool is_top_face(int f) const {
        int te = top_edge_local();
        return f != kEdgeVerts[te][0] && f != kEdgeVerts[te][1];
    }
    std::array<int, 2> top_faces() const { return edge_faces(top_edge_local()); }
    std::array<int, 2> bottom_faces() const { return edge_faces(bottom_edge_local()); }
    std::array<int, 4> equatorial_edges() const {
        std::array<int, 4> r{};
        int k = 0;
        for (int e = 0; e < 6; ++e)
            if (!is_pi_edge(e)) r[k++] = e;
        return r;
    }
};

enum class Color { red, blue };

inline const char* color_name(Color c) { return c == Color::red ? "red" : "blue"; }

struct VeeringTriangulation {
    std::vector<Tetrahedron> tets;
    int num_edges = 0;
    int num_faces = 0;
    std::vector<int> edge_class;  // 6*T slots -> class id (first-seen order)
    std::vector<int> face_class;  // 4*T slots -> class id
    std::vector<Color> colors;    // per edge class; empty until inferred/supplied
    bool colors_supplied = false;

    int tet_count() const { return static_cast<int>(tets.size()); }
    int edge_class_of(int tet, int local_edge) const { return edge_class[tet * 6 + local_edge]; }
    int face_class_of(int tet, int local_face) const { return face_class[tet * 4 + local_face]; }

    // edge class -> tet having it as top/bottom edge (-1 if none; validated to exist uniquely)
    std::vector<int> tet_below_edge() const;  // edge is the top edge of this tet
    std::vector<int> tet_above_edge() const;  // edge is the bottom edge of this tet

    // face class -> slots; below = tet whose top face it is, above = tet whose bottom face
    struct FaceSlots {
        int tet_a, face_a, tet_b, face_b;
    };
    FaceSlots face_slots(int face) const;
    int tet_below_face(int face) const;
    int tet_above_face(int face) const;
};

struct EdgeCorner {
    int tet = -1;
    int local_edge = -1;
    int enter_face = -1;  // local face of tet crossed to arrive here (walk order)
    int leave_face = -1;  // local face crossed when leaving
};

// Closed corner cycle around an edge class, in the canonical orientation
// induced by the global orientation (see edge_link).
struct EdgeLink {
    int edge = -1;
    std::vector<EdgeCorner> corners;
    int below_pos = -1;  // corner where the edge is the top edge of its tet
    int above_pos = -1;  // corner where the edge is the bottom edge of its tet

    int degree() const { return static_cast<int>(corners.size()); }
    // face class crossed between corners i and i+1 (cyclic): leave_face of corner i
    // side A: corners strictly between below_pos and above_pos in cyclic order;
    // side B: the complementary arc.
    std::vector<int> side_a_positions() const;
    std::vector<int> side_b_positions() const;
};

struct ValidationReport {
    struct EdgeEntry {
        int edge;
        int pi_count;
        int top_count;
        int bottom_count;
        bool ok() const { return pi_count == 2 && top_count == 1 && bottom_count == 1; }
    };
    std::vector<EdgeEntry> edges;
    bool face_coorientation_ok = true;
    std::vector<int> bad_faces;
    bool edge_count_ok = true;  // |edge classes| == |tets|
    bool ok = false;

    std::string to_json() const;
};

VeeringTriangulation parse_triangulation(const std::string& text);
std::string serialize_triangulation(const VeeringTriangulation& T);

ValidationReport validate_taut(const VeeringTriangulation& T);

// 2-coloring satisfying the per-tetrahedron alternation rule: the two non-pi
// opposite edge pairs each share a color and the pairs differ. Deterministic up
// to global swap; normalized so the lowest edge id in each constraint component
// is red. Throws DomainError when no coloring exists (taut but not veering) or
// when supplied colors violate the rule.
std::vector<Color> infer_colors(const VeeringTriangulation& T);

EdgeLink edge_link(const VeeringTriangulation& T, int edge);

// all edge links, computed once (index = edge class id)
std::vector<EdgeLink> all_edge_links(const VeeringTriangulation& T);

}  // namespace veerflow
