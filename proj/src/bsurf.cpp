#include "veerflow/bsurf.hpp"

#include <algorithm>

#include <json.hpp>

namespace veerflow {

using Json = nlohmann::ordered_json;

DualGraph dual_graph(const VeeringTriangulation& T) {
    auto rep = validate_taut(T);
    if (!rep.ok) throw DomainError("dual_graph requires a validated taut triangulation");
    DualGraph g;
    g.num_vertices = T.tet_count();
    g.edges.resize(T.num_faces);
    for (int f = 0; f < T.num_faces; ++f) g.edges[f] = {f, T.tet_below_face(f), T.tet_above_face(f)};
    return g;
}

SectorComplex build_sectors(const VeeringTriangulation& T, const DualGraph&) {
    SectorComplex sc;
    sc.links = all_edge_links(T);
    sc.sectors.resize(T.num_edges);
    for (int e = 0; e < T.num_edges; ++e) {
        const EdgeLink& link = sc.links[e];
        int n = link.degree();
        if (link.below_pos < 0 || link.above_pos < 0)
            throw DomainError("sector tracing failed: edge " + std::to_string(e) +
                              " lacks a source or sink corner");
        int lo = link.below_pos, hi = link.above_pos;
        if ((lo + 1) % n == hi || (hi + 1) % n == lo)
            throw DomainError("sector tracing failed: edge " + std::to_string(e) +
                              " has an empty fan side (input not veering)");
        Sector& s = sc.sectors[e];
        s.edge = e;
        s.bottom_tet = link.corners[lo].tet;
        s.top_tet = link.corners[hi].tet;
        s.side_tets = {link.corners[(lo + 1) % n].tet, link.corners[(lo + n - 1) % n].tet};
        for (int i = (lo + 2) % n; i != (lo + n - 1) % n; i = (i + 1) % n)
            s.interior_top_tets.push_back(link.corners[i].tet);

        // boundary walk: the Gamma-edge after corner i points upward exactly on
        // the arc from the source to the sink
        for (int i = 0; i < n; ++i) {
            int pos = (lo + i) % n;
            const auto& c = link.corners[pos];
            bool fwd = T.tets[c.tet].is_top_face(c.leave_face);
            bool ascending = (hi - lo + n) % n > i;  // steps lo..hi-1 ascend
            if (fwd != ascending)
                throw DomainError("sector tracing failed: non-monotone boundary at edge " +
                                  std::to_string(e));
            s.boundary.push_back({T.face_class_of(c.tet, c.leave_face), fwd});
        }
    }
    return sc;
}

namespace {

// word for the walk from the source corner to target position, in the given
// rotational direction; coefficients +1 when the face is crossed upward
std::vector<Crossing> walk_word(const VeeringTriangulation& T, const EdgeLink& link,
                                int target_pos, bool ccw) {
    std::vector<Crossing> word;
    int n = link.degree();
    int pos = link.below_pos;
    while (pos != target_pos) {
        if (ccw) {
            const auto& c = link.corners[pos];
            int face = T.face_class_of(c.tet, c.leave_face);
            word.push_back({face, T.tets[c.tet].is_top_face(c.leave_face) ? 1 : -1});
            pos = (pos + 1) % n;
        } else {
            int prev = (pos + n - 1) % n;
            const auto& c = link.corners[prev];
            int face = T.face_class_of(c.tet, c.leave_face);
            // walking against the link orientation crosses the step face the
            // other way round
            word.push_back({face, T.tets[c.tet].is_top_face(c.leave_face) ? -1 : 1});
            pos = prev;
        }
    }
    return word;
}

bool on_side_a(const EdgeLink& link, int pos) {
    int n = link.degree();
    int d_a = (pos - link.below_pos + n) % n;
    int d_sink = (link.above_pos - link.below_pos + n) % n;
    return d_a > 0 && d_a < d_sink;
}

std::vector<Crossing> canonical_word_at(const VeeringTriangulation& T, const EdgeLink& link,
                                        int pos) {
    // targets on side A and the sink are reached ascending the canonical (link
    // orientation) side; side-B targets ascend the other way
    bool ccw = on_side_a(link, pos) || pos == link.above_pos;
    auto word = walk_word(T, link, pos, ccw);
    for (const auto& c : word)
        if (c.coeff != 1) throw DomainError("canonical crossing word not positively transverse");
    return word;
}

}  // namespace

std::vector<Crossing> opposite_crossing_word(const VeeringTriangulation& T, const EdgeLink& link,
                                             int target_pos) {
    bool ccw = on_side_a(link, target_pos) || target_pos == link.above_pos;
    return walk_word(T, link, target_pos, !ccw);
}

std::vector<Crossing> crossing_word(const VeeringTriangulation& T, const EdgeLink& link,
                                    int target_tet) {
    int n = link.degree();
    // nearest corner of target_tet reachable by a positive arc: scan the
    // canonical side first, then the other
    int d_sink = (link.above_pos - link.below_pos + n) % n;
    for (int d = 1; d <= d_sink; ++d) {
        int pos = (link.below_pos + d) % n;
        if (link.corners[pos].tet == target_tet) return walk_word(T, link, pos, true);
    }
    for (int d = 1; d < n - d_sink; ++d) {
        int pos = (link.below_pos + n - d) % n;
        if (link.corners[pos].tet == target_tet) return walk_word(T, link, pos, false);
    }
    throw DomainError("malformed flow edge: tetrahedron " + std::to_string(target_tet) +
                      " is not incident to edge " + std::to_string(link.edge));
}

FlowGraph flow_graph(const VeeringTriangulation& T, const SectorComplex& sc) {
    FlowGraph phi;
    phi.num_vertices = T.num_edges;
    std::vector<int> per_tet(T.tet_count(), 0), bottom_per_tet(T.tet_count(), 0);
    for (const Sector& s : sc.sectors) {
        const EdgeLink& link = sc.links[s.edge];
        int n = link.degree();
        int lo = link.below_pos;
        for (int i = (lo + 2) % n; i != (lo + n - 1) % n; i = (i + 1) % n) {
            const auto& c = link.corners[i];
            FlowEdge fe;
            fe.src = s.edge;
            fe.tet = c.tet;
            fe.dst = T.edge_class_of(c.tet, T.tets[c.tet].top_edge_local());
            fe.kind = (i == link.above_pos) ? FlowEdge::Kind::from_bottom
                                            : FlowEdge::Kind::from_equatorial;
            fe.link_pos = i;
            fe.crossings = canonical_word_at(T, link, i);
            ++per_tet[c.tet];
            if (fe.kind == FlowEdge::Kind::from_bottom) ++bottom_per_tet[c.tet];
            phi.edges.push_back(std::move(fe));
        }
    }
    for (int t = 0; t < T.tet_count(); ++t)
        if (per_tet[t] != 3 || bottom_per_tet[t] != 1)
            throw DomainError(
                "flow graph reconciliation failure: tetrahedron " + std::to_string(t) + " owns " +
                std::to_string(per_tet[t]) + " edges (" + std::to_string(bottom_per_tet[t]) +
                " from the bottom edge), expected 3 (1)");
    return phi;
}

std::string FlowGraph::to_json() const {
    Json doc;
    doc["vertices"] = num_vertices;
    doc["edges"] = Json::array();
    for (const auto& e : edges) {
        Json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["tet"] = e.tet;
        je["kind"] = e.kind == FlowEdge::Kind::from_bottom ? "from-bottom" : "from-equatorial";
        Json cr = Json::array();
        for (const auto& c : e.crossings) cr.push_back(c.face);
        je["crossings"] = cr;
        doc["edges"].push_back(je);
    }
    return doc.dump(2);
}

FlowGraph FlowGraph::from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed flow graph: ") + e.what());
    }
    FlowGraph g;
    if (!doc.contains("vertices") || !doc.contains("edges"))
        throw ParseError("malformed flow graph: missing vertices/edges");
    g.num_vertices = doc["vertices"].get<int>();
    for (const auto& je : doc["edges"]) {
        FlowEdge e;
        e.src = je["src"].get<int>();
        e.dst = je["dst"].get<int>();
        e.tet = je.value("tet", -1);
        std::string k = je.value("kind", "from-equatorial");
        e.kind = k == "from-bottom" ? FlowEdge::Kind::from_bottom : FlowEdge::Kind::from_equatorial;
        if (je.contains("crossings"))
            for (const auto& f : je["crossings"]) e.crossings.push_back({f.get<int>(), 1});
        if (e.src < 0 || e.src >= g.num_vertices || e.dst < 0 || e.dst >= g.num_vertices)
            throw ParseError("malformed flow graph: edge endpoint out of range");
        g.edges.push_back(std::move(e));
    }
    return g;
}

BranchMatrix branch_equations(const VeeringTriangulation& T) {
    BranchMatrix B(T.num_edges, std::vector<std::int64_t>(T.num_faces, 0));
    auto links = all_edge_links(T);
    for (int e = 0; e < T.num_edges; ++e) {
        const EdgeLink& link = links[e];
        int n = link.degree();
        int lo = link.below_pos, hi = link.above_pos;
        if (lo < 0 || hi < 0) throw DomainError("branch equations need a taut structure");
        for (int i = lo; i != hi; i = (i + 1) % n) {
            const auto& c = link.corners[i];
            B[e][T.face_class_of(c.tet, c.leave_face)] += 1;  // side A faces
        }
        for (int i = hi; i != lo; i = (i + 1) % n) {
            const auto& c = link.corners[i];
            B[e][T.face_class_of(c.tet, c.leave_face)] -= 1;  // side B faces
        }
    }
    return B;
}

bool satisfies_branch_equations(const BranchMatrix& B, const std::vector<std::int64_t>& w) {
    for (const auto& row : B) {
        if (row.size() != w.size()) throw DomainError("weight vector has wrong dimension");
        std::int64_t s = 0;
        for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * w[i];
        if (s != 0) return false;
    }
    return true;
}

bool is_carried(const BranchMatrix& B, const std::vector<std::int64_t>& w) {
    return std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x >= 0; }) &&
           satisfies_branch_equations(B, w);
}

std::int64_t pairing_of_edge(const FlowEdge& e, const std::vector<std::int64_t>& w) {
    std::int64_t s = 0;
    for (const auto& c : e.crossings) {
        if (c.face < 0 || c.face >= static_cast<int>(w.size()))
            throw DomainError("crossing face out of range for weight vector");
        s += c.coeff * w[c.face];
    }
    return s;
}

std::int64_t pairing(const FlowGraph& phi, const std::vector<int>& cycle,
                     const std::vector<std::int64_t>& w, const BranchMatrix& B) {
    if (cycle.empty()) throw DomainError("pairing needs a nonempty closed walk");
    if (!satisfies_branch_equations(B, w))
        throw DomainError("weight vector violates the branch equations");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        int a = cycle[i], b = cycle[(i + 1) % cycle.size()];
        if (a < 0 || a >= static_cast<int>(phi.edges.size()))
            throw DomainError("cycle edge index out of range");
        if (phi.edges[a].dst != phi.edges[b].src) throw DomainError("walk is not closed");
    }
    std::int64_t s = 0;
    for (int idx : cycle) s += pairing_of_edge(phi.edges[idx], w);
    return s;
}

std::string face_class_to_json(const FaceClass& w) {
    Json doc;
    doc["weights"] = w.weights;
    return doc.dump();
}

FaceClass face_class_from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed face class: ") + e.what());
    }
    FaceClass w;
    if (!doc.contains("weights") || !doc["weights"].is_array())
        throw ParseError("malformed face class: missing weights");
    for (const auto& x : doc["weights"]) w.weights.push_back(x.get<std::int64_t>());
    return w;
}

}  // namespace veerflow
