#include "veerflow/tri.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

namespace veerflow {

using Json = nlohmann::ordered_json;

namespace {

// union-find over slot indices
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<int> number_classes(Dsu& dsu, int n, int& count) {
    std::vector<int> id(n, -1);
    count = 0;
    for (int i = 0; i < n; ++i) {
        int r = dsu.find(i);
        if (id[r] < 0) id[r] = count++;
        id[i] = id[r];
    }
    return id;
}

}  // namespace

std::vector<int> VeeringTriangulation::tet_below_edge() const {
    std::vector<int> below(num_edges, -1);
    for (int t = 0; t < tet_count(); ++t) {
        int e = edge_class_of(t, tets[t].top_edge_local());
        below[e] = t;
    }
    return below;
}

std::vector<int> VeeringTriangulation::tet_above_edge() const {
    std::vector<int> above(num_edges, -1);
    for (int t = 0; t < tet_count(); ++t) {
        int e = edge_class_of(t, tets[t].bottom_edge_local());
        above[e] = t;
    }
    return above;
}

VeeringTriangulation::FaceSlots VeeringTriangulation::face_slots(int face) const {
    FaceSlots s{-1, -1, -1, -1};
    for (int t = 0; t < tet_count(); ++t)
        for (int f = 0; f < 4; ++f)
            if (face_class_of(t, f) == face) {
                if (s.tet_a < 0) {
                    s.tet_a = t;
                    s.face_a = f;
                } else {
                    s.tet_b = t;
                    s.face_b = f;
                }
            }
    return s;
}

int VeeringTriangulation::tet_below_face(int face) const {
    FaceSlots s = face_slots(face);
    bool a_top = tets[s.tet_a].is_top_face(s.face_a);
    bool b_top = tets[s.tet_b].is_top_face(s.face_b);
    if (a_top == b_top) return -1;
    return a_top ? s.tet_a : s.tet_b;
}

int VeeringTriangulation::tet_above_face(int face) const {
    FaceSlots s = face_slots(face);
    bool a_top = tets[s.tet_a].is_top_face(s.face_a);
    bool b_top = tets[s.tet_b].is_top_face(s.face_b);
    if (a_top == b_top) return -1;
    return a_top ? s.tet_b : s.tet_a;
}

VeeringTriangulation parse_triangulation(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("tets") || !doc["tets"].is_array())
        throw ParseError("malformed document: missing tets array");
    const Json& jtets = doc["tets"];
    if (jtets.empty()) throw ParseError("malformed document: empty tetrahedron list");

    VeeringTriangulation T;
    int n = static_cast<int>(jtets.size());
    T.tets.resize(n);
    for (int t = 0; t < n; ++t) {
        const Json& jt = jtets[t];
        if (!jt.is_object() || !jt.contains("glue") || !jt.contains("pi_pair"))
            throw ParseError("malformed document: tet missing glue/pi_pair");
        int pp = jt["pi_pair"].get<int>();
        if (pp < 0 || pp > 2) throw ParseError("malformed document: pi_pair out of range");
        T.tets[t].pi_pair = pp;
        const Json& jg = jt["glue"];
        if (!jg.is_array() || jg.size() != 4)
            throw ParseError("malformed document: glue must have 4 entries");
        for (int f = 0; f < 4; ++f) {
            const Json& e = jg[f];
            if (!e.is_array() || e.size() != 3 || !e[2].is_array() || e[2].size() != 4)
                throw ParseError("malformed document: bad glue entry");
            Tetrahedron::Glue g;
            g.tet = e[0].get<int>();
            g.face = e[1].get<int>();
            for (int i = 0; i < 4; ++i) g.perm.img[i] = e[2][i].get<int>();
            if (g.tet < 0 || g.tet >= n || g.face < 0 || g.face > 3)
                throw ParseError("dangling gluing: target out of range");
            std::array<bool, 4> seen{};
            for (int i = 0; i < 4; ++i) {
                if (g.perm.img[i] < 0 || g.perm.img[i] > 3 || seen[g.perm.img[i]])
                    throw ParseError("malformed document: glue map is not a permutation");
                seen[g.perm.img[i]] = true;
            }
            if (g.perm[f] != g.face)
                throw ParseError("malformed document: glue permutation does not carry face to face");
            if (g.tet == t && g.face == f) throw ParseError("malformed document: face glued to itself");
            if (!g.perm.is_odd())
                throw ParseError(
                    "malformed document: face gluing must be orientation-reversing "
                    "(odd permutation); relabel tetrahedra coherently");
            T.tets[t].glue[f] = g;
        }
    }
    // involutivity
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.tets[t].glue[f];
            const auto& back = T.tets[g.tet].glue[g.face];
            if (back.tet != t || back.face != f || !(back.perm == g.perm.inverse()))
                throw ParseError("non-involutive gluing at tet " + std::to_string(t) + " face " +
                                 std::to_string(f));
        }

    // face classes
    Dsu fdsu(4 * n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.tets[t].glue[f];
            fdsu.unite(t * 4 + f, g.tet * 4 + g.face);
        }
    T.face_class = number_classes(fdsu, 4 * n, T.num_faces);

    // edge classes: identify edges across each face gluing
    Dsu edsu(6 * n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.tets[t].glue[f];
            for (int e = 0; e < 6; ++e) {
                auto [a, b] = kEdgeVerts[e];
                if (a == f || b == f) continue;  // edge not on this face
                int e2 = edge_index(g.perm[a], g.perm[b]);
                edsu.unite(t * 6 + e, g.tet * 6 + e2);
            }
        }
    T.edge_class = number_classes(edsu, 6 * n, T.num_edges);

    if (doc.contains("colors")) {
        const Json& jc = doc["colors"];
        if (!jc.is_object()) throw ParseError("malformed document: colors must be an object");
        T.colors.assign(T.num_edges, Color::red);
        std::vector<bool> set(T.num_edges, false);
        for (auto it = jc.begin(); it != jc.end(); ++it) {
            int e;
            try {
                e = std::stoi(it.key());
            } catch (...) {
                throw ParseError("malformed document: bad edge id in colors");
            }
            if (e < 0 || e >= T.num_edges) throw ParseError("malformed document: color for unknown edge");
            std::string v = it.value().get<std::string>();
            if (v != "red" && v != "blue") throw ParseError("malformed document: color must be red or blue");
            T.colors[e] = v == "red" ? Color::red : Color::blue;
            set[e] = true;
        }
        if (std::find(set.begin(), set.end(), false) != set.end())
            throw ParseError("malformed document: colors must cover every edge class");
        T.colors_supplied = true;
    }
    return T;
}

std::string serialize_triangulation(const VeeringTriangulation& T) {
    Json doc;
    doc["tets"] = Json::array();
    for (const auto& tet : T.tets) {
        Json jt;
        jt["glue"] = Json::array();
        for (int f = 0; f < 4; ++f) {
            const auto& g = tet.glue[f];
            jt["glue"].push_back(Json::array({g.tet, g.face, g.perm.img}));
        }
        jt["pi_pair"] = tet.pi_pair;
        doc["tets"].push_back(jt);
    }
    if (!T.colors.empty()) {
        Json jc = Json::object();
        for (int e = 0; e < T.num_edges; ++e) jc[std::to_string(e)] = color_name(T.colors[e]);
        doc["colors"] = jc;
    }
    return doc.dump(2);
}

ValidationReport validate_taut(const VeeringTriangulation& T) {
    ValidationReport rep;
    int n = T.tet_count();
    std::vector<int> pi_count(T.num_edges, 0), top_count(T.num_edges, 0), bot_count(T.num_edges, 0);
    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e) {
            int c = T.edge_class_of(t, e);
            if (T.tets[t].is_pi_edge(e)) ++pi_count[c];
            if (e == T.tets[t].top_edge_local()) ++top_count[c];
            if (e == T.tets[t].bottom_edge_local()) ++bot_count[c];
        }
    for (int e = 0; e < T.num_edges; ++e)
        rep.edges.push_back({e, pi_count[e], top_count[e], bot_count[e]});

    for (int f = 0; f < T.num_faces; ++f) {
        auto s = T.face_slots(f);
        bool a_top = T.tets[s.tet_a].is_top_face(s.face_a);
        bool b_top = T.tets[s.tet_b].is_top_face(s.face_b);
        if (a_top == b_top) {
            rep.face_coorientation_ok = false;
            rep.bad_faces.push_back(f);
        }
    }
    rep.edge_count_ok = T.num_edges == n;
    rep.ok = rep.face_coorientation_ok && rep.edge_count_ok &&
             std::all_of(rep.edges.begin(), rep.edges.end(),
                         [](const auto& e) { return e.ok(); });
    return rep;
}

std::string ValidationReport::to_json() const {
    Json doc;
    doc["ok"] = ok;
    doc["edge_count_ok"] = edge_count_ok;
    doc["face_coorientation_ok"] = face_coorientation_ok;
    if (!bad_faces.empty()) doc["bad_faces"] = bad_faces;
    doc["edges"] = Json::array();
    for (const auto& e : edges) {
        Json je;
        je["id"] = e.edge;
        je["angle_sum_ok"] = e.pi_count == 2;
        je["pi_count"] = e.pi_count;
        je["top_of_one_tet"] = e.top_count == 1;
        je["bottom_of_one_tet"] = e.bottom_count == 1;
        doc["edges"].push_back(je);
    }
    return doc.dump(2);
}

namespace {

// parity-annotated union-find for the 2-coloring
struct ParityDsu {
    std::vector<int> parent;
    std::vector<int> rel;  // parity of node relative to parent
    explicit ParityDsu(int n) : parent(n), rel(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
    std::pair<int, int> find(int x) {
        if (parent[x] == x) return {x, 0};
        auto [r, p] = find(parent[x]);
        parent[x] = r;
        rel[x] = (rel[x] + p) % 2;
        return {r, rel[x]};
    }
    // relate a and b with given parity (0 = same color); false on conflict
    bool relate(int a, int b, int parity) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa + pb) % 2 == parity % 2;
        parent[ra] = rb;
        rel[ra] = (parity + pa + pb) % 2;
        return true;
    }
};

}  // namespace

std::vector<Color> infer_colors(const VeeringTriangulation& T) {
    // constraints per tetrahedron: the two non-pi opposite edge pairs each have
    // matching colors, and the two pairs carry different colors
    struct Constraint {
        int a, b, parity;
    };
    std::vector<Constraint> cons;
    static constexpr std::array<std::array<int, 2>, 3> kPairs = {{{0, 5}, {1, 4}, {2, 3}}};
    for (int t = 0; t < T.tet_count(); ++t) {
        const auto& tet = T.tets[t];
        std::array<std::array<int, 2>, 2> eq{};
        int k = 0;
        for (int p = 0; p < 3; ++p)
            if (p != tet.pi_pair) eq[k++] = kPairs[p];
        int a1 = T.edge_class_of(t, eq[0][0]), a2 = T.edge_class_of(t, eq[0][1]);
        int b1 = T.edge_class_of(t, eq[1][0]), b2 = T.edge_class_of(t, eq[1][1]);
        cons.push_back({a1, a2, 0});
        cons.push_back({b1, b2, 0});
        cons.push_back({a1, b1, 1});
    }

    if (T.colors_supplied) {
        for (const auto& c : cons) {
            bool same = T.colors[c.a] == T.colors[c.b];
            if (same != (c.parity == 0))
                throw DomainError("supplied colors violate the veering condition at edges " +
                                  std::to_string(c.a) + "," + std::to_string(c.b));
        }
        return T.colors;
    }

    ParityDsu dsu(T.num_edges);
    for (const auto& c : cons)
        if (!dsu.relate(c.a, c.b, c.parity))
            throw DomainError("not veering: no consistent edge coloring exists");

    // normalize: lowest edge id in each component is red
    std::vector<Color> col(T.num_edges, Color::red);
    std::map<int, int> anchor_parity;  // root -> parity of lowest member
    for (int e = 0; e < T.num_edges; ++e) {
        auto [r, p] = dsu.find(e);
        auto it = anchor_parity.find(r);
        if (it == anchor_parity.end()) {
            anchor_parity[r] = p;  // e is the lowest member of its component
            col[e] = Color::red;
        } else {
            col[e] = (p == it->second) ? Color::red : Color::blue;
        }
    }
    return col;
}

EdgeLink edge_link(const VeeringTriangulation& T, int edge) {
    if (edge < 0 || edge >= T.num_edges) throw DomainError("invalid edge id");
    // canonical start: lowest slot of the class
    int t0 = -1, e0 = -1;
    for (int s = 0; s < 6 * T.tet_count() && t0 < 0; ++s)
        if (T.edge_class[s] == edge) {
            t0 = s / 6;
            e0 = s % 6;
        }

    // orientation-induced initial direction: with the edge directed u -> v
    // (u < v) and complement {w, x} ordered so (u,v,w,x) is even, leave through
    // the face opposite x
    auto [u, v] = kEdgeVerts[e0];
    auto fcs = edge_faces(e0);
    int w = fcs[0], x = fcs[1];
    {
        std::array<int, 4> arr{u, v, w, x};
        int inv = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (arr[i] > arr[j]) ++inv;
        if (inv % 2 != 0) std::swap(w, x);
    }
    int start_leave = x;  // face opposite x contains {u,v,w}; local face index x

    EdgeLink link;
    link.edge = edge;
    int t = t0, e = e0, leave = start_leave;
    int guard = 0;
    while (true) {
        if (++guard > 6 * T.tet_count() + 1) throw DomainError("edge link fails to close");
        EdgeCorner c;
        c.tet = t;
        c.local_edge = e;
        c.leave_face = leave;
        auto faces = edge_faces(e);
        c.enter_face = faces[0] == leave ? faces[1] : faces[0];
        link.corners.push_back(c);

        const auto& g = T.tets[t].glue[leave];
        auto [a, b] = kEdgeVerts[e];
        int t2 = g.tet;
        int e2 = edge_index(g.perm[a], g.perm[b]);
        int enter2 = g.face;
        auto faces2 = edge_faces(e2);
        int leave2 = faces2[0] == enter2 ? faces2[1] : faces2[0];
        if (t2 == t0 && e2 == e0 && leave2 == start_leave) break;
        t = t2;
        e = e2;
        leave = leave2;
    }
    for (std::size_t i = 0; i < link.corners.size(); ++i) {
        const auto& c = link.corners[i];
        if (c.local_edge == T.tets[c.tet].top_edge_local()) link.below_pos = static_cast<int>(i);
        if (c.local_edge == T.tets[c.tet].bottom_edge_local()) link.above_pos = static_cast<int>(i);
    }
    return link;
}

std::vector<int> EdgeLink::side_a_positions() const {
    std::vector<int> r;
    int n = degree();
    for (int i = (below_pos + 1) % n; i != above_pos; i = (i + 1) % n) r.push_back(i);
    return r;
}

std::vector<int> EdgeLink::side_b_positions() const {
    std::vector<int> r;
    int n = degree();
    for (int i = (above_pos + 1) % n; i != below_pos; i = (i + 1) % n) r.push_back(i);
    return r;
}

std::vector<EdgeLink> all_edge_links(const VeeringTriangulation& T) {
    std::vector<EdgeLink> links;
    links.reserve(T.num_edges);
    for (int e = 0; e < T.num_edges; ++e) links.push_back(edge_link(T, e));
    return links;
}

}  // namespace veerflow
