#include "veerflow/bundles.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>

#include <json.hpp>

#include "veerflow/bsurf.hpp"
#include "veerflow/tri.hpp"

namespace veerflow {

using Json = nlohmann::ordered_json;

namespace {

using Vec = std::array<std::int64_t, 2>;

Vec add(Vec a, Vec b) { return {a[0] + b[0], a[1] + b[1]}; }
Vec sub(Vec a, Vec b) { return {a[0] - b[0], a[1] - b[1]}; }
std::int64_t det(Vec a, Vec b) { return a[0] * b[1] - a[1] * b[0]; }

struct Mat {
    std::int64_t a, b, c, d;  // rows (a b; c d)
    Vec apply(Vec v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }
    std::int64_t det() const { return a * d - b * c; }
};

using Tri = std::array<Vec, 3>;

// translation t with A = B + t as corner sets, if any
std::optional<Vec> match_translate(const Tri& a, const Tri& b) {
    for (int j = 0; j < 3; ++j) {
        Vec t = sub(a[0], b[j]);
        std::array<bool, 3> used{};
        int found = 0;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                if (!used[k] && add(b[k], t) == a[i]) {
                    used[k] = true;
                    ++found;
                    break;
                }
        if (found == 3) return t;
    }
    return std::nullopt;
}

struct Level {
    Vec u, v;
    Tri t1() const { return {Vec{0, 0}, u, v}; }
    Tri t2() const { return {u, add(u, v), v}; }
    Tri tri(int which) const { return which == 0 ? t1() : t2(); }
};

struct TetLayer {
    std::array<Vec, 4> corners;  // geometric corner points
    Vec top_a, top_b;            // top edge endpoints
    Vec bot_a, bot_b;
    // triangle hosting data: tri(level, which) + translation = face corner set
    std::array<Vec, 2> bottom_shift;  // for (T1, T2) of this level
    std::array<Vec, 2> top_shift;     // for (T1, T2) of the next level
};

struct Layered {
    std::vector<Level> levels;  // m+1 entries
    std::vector<TetLayer> tets;
};

Layered run_word(const std::string& word) {
    Layered lay;
    Level cur{{1, 0}, {0, 1}};
    lay.levels.push_back(cur);
    for (char ch : word) {
        Vec u = cur.u, v = cur.v;
        TetLayer t;
        if (ch == 'D') {
            t.corners = {Vec{0, 0}, u, add(u, v), v};
            t.bot_a = u;
            t.bot_b = v;
            t.top_a = {0, 0};
            t.top_b = add(u, v);
            t.bottom_shift = {Vec{0, 0}, Vec{0, 0}};
            t.top_shift = {Vec{0, 0}, Vec{-u[0], -u[1]}};
            cur = {u, add(u, v)};
        } else if (ch == 'U') {
            t.corners = {v, Vec{0, 0}, sub(u, v), u};
            t.bot_a = {0, 0};
            t.bot_b = u;
            t.top_a = v;
            t.top_b = sub(u, v);
            t.bottom_shift = {Vec{0, 0}, Vec{-v[0], -v[1]}};
            t.top_shift = {Vec{0, 0}, Vec{0, 0}};
            cur = {sub(u, v), v};
        } else if (ch == 'V') {
            t.corners = {u, Vec{0, 0}, sub(v, u), v};
            t.bot_a = {0, 0};
            t.bot_b = v;
            t.top_a = u;
            t.top_b = sub(v, u);
            t.bottom_shift = {Vec{0, 0}, Vec{-u[0], -u[1]}};
            t.top_shift = {Vec{0, 0}, Vec{0, 0}};
            cur = {u, sub(v, u)};
        } else {
            throw DomainError("flip word must be over D/U/V");
        }
        lay.tets.push_back(t);
        lay.levels.push_back(cur);
    }
    return lay;
}

struct Labeled {
    std::array<Vec, 4> point_of_label;
    int label_of(const Vec& p) const {
        for (int i = 0; i < 4; ++i)
            if (point_of_label[i] == p) return i;
        throw DomainError("point is not a tet corner");
    }
};

Labeled label_tet(const TetLayer& t) {
    Vec x0 = t.top_a, x1 = t.top_b;
    if (x1 < x0) std::swap(x0, x1);
    Vec x2 = t.bot_a, x3 = t.bot_b;
    if (det(sub(x1, x0), sub(x3, x2)) < 0) std::swap(x2, x3);
    return Labeled{{x0, x1, x2, x3}};
}

struct GlueEntry {
    int tet = -1, face = -1;
    std::array<int, 4> perm{};
};

// record the identification of the 3 matched corners plus the opposite vertices
void set_gluing(std::vector<std::array<GlueEntry, 4>>& glue, const Labeled& la, int ta,
                const Tri& ca, const Labeled& lb, int tb, const Tri& cb) {
    std::array<int, 4> perm{-1, -1, -1, -1};
    for (int i = 0; i < 3; ++i) perm[la.label_of(ca[i])] = lb.label_of(cb[i]);
    int fa = -1, fb = -1;
    for (int i = 0; i < 4; ++i)
        if (perm[i] < 0) fa = i;
    std::array<bool, 4> used{};
    for (int i = 0; i < 4; ++i)
        if (perm[i] >= 0) used[perm[i]] = true;
    for (int i = 0; i < 4; ++i)
        if (!used[i]) fb = i;
    perm[fa] = fb;
    GlueEntry ea{tb, fb, perm};
    std::array<int, 4> inv{};
    for (int i = 0; i < 4; ++i) inv[perm[i]] = i;
    GlueEntry eb{ta, fa, inv};
    glue[ta][fa] = ea;
    glue[tb][fb] = eb;
}

std::string emit_json(const Layered& lay, const Mat& closing) {
    int m = static_cast<int>(lay.tets.size());
    std::vector<Labeled> labels;
    for (const auto& t : lay.tets) labels.push_back(label_tet(t));
    std::vector<std::array<GlueEntry, 4>> glue(m);

    // internal levels: triangle X at level j is a top face of tet j-1 and a
    // bottom face of tet j
    for (int j = 1; j < m; ++j)
        for (int x = 0; x < 2; ++x) {
            Tri canon = lay.levels[j].tri(x);
            Vec s = lay.tets[j - 1].top_shift[x];
            Vec t = lay.tets[j].bottom_shift[x];
            Tri top_face, bottom_face;
            for (int i = 0; i < 3; ++i) {
                top_face[i] = add(canon[i], s);
                bottom_face[i] = add(canon[i], t);
            }
            set_gluing(glue, labels[j - 1], j - 1, top_face, labels[j], j, bottom_face);
        }

    // closing: level-m triangles map by the monodromy onto level-0 triangles
    for (int x = 0; x < 2; ++x) {
        Tri canon = lay.levels[m].tri(x);
        Vec s = lay.tets[m - 1].top_shift[x];
        Tri top_face, image;
        for (int i = 0; i < 3; ++i) {
            top_face[i] = add(canon[i], s);
            image[i] = closing.apply(top_face[i]);
        }
        int y = -1;
        Vec r{0, 0};
        for (int cand = 0; cand < 2 && y < 0; ++cand) {
            if (auto t = match_translate(image, lay.levels[0].tri(cand))) {
                y = cand;
                r = *t;
            }
        }
        if (y < 0) throw DomainError("closing map does not respect the triangulation");
        Vec t = lay.tets[0].bottom_shift[y];
        Tri bottom_face;
        for (int i = 0; i < 3; ++i) bottom_face[i] = add(sub(image[i], r), t);
        set_gluing(glue, labels[m - 1], m - 1, top_face, labels[0], 0, bottom_face);
    }

    for (int t = 0; t < m; ++t)
        for (int f = 0; f < 4; ++f)
            if (glue[t][f].tet < 0) throw DomainError("unglued face in layered construction");

    Json doc;
    doc["tets"] = Json::array();
    for (int t = 0; t < m; ++t) {
        Json jt;
        jt["glue"] = Json::array();
        for (int f = 0; f < 4; ++f)
            jt["glue"].push_back(Json::array({glue[t][f].tet, glue[t][f].face, glue[t][f].perm}));
        jt["pi_pair"] = 0;  // labels put the top edge at 01, bottom at 23
        doc["tets"].push_back(jt);
    }
    return doc.dump();
}

}  // namespace

std::vector<std::string> layered_bundle_fixtures(const std::string& flip_word) {
    if (flip_word.empty()) throw DomainError("flip word must be nonempty");
    Layered lay = run_word(flip_word);
    const Level& last = lay.levels.back();
    const Level fst = lay.levels.front();
    std::array<Vec, 3> src{last.u, last.v, sub(last.v, last.u)};
    std::array<Vec, 3> dst{fst.u, fst.v, sub(fst.v, fst.u)};

    std::vector<std::string> out;
    static constexpr std::array<std::array<int, 3>, 6> kPerms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (const auto& p : kPerms)
        for (int s1 : {1, -1})
            for (int s2 : {1, -1}) {
                // solve M u_m = s1 dst[p0], M v_m = s2 dst[p1]
                Vec t1{s1 * dst[p[0]][0], s1 * dst[p[0]][1]};
                Vec t2{s2 * dst[p[1]][0], s2 * dst[p[1]][1]};
                std::int64_t dbase = det(src[0], src[1]);
                // M [u v] = [t1 t2]  =>  M = [t1 t2] [u v]^{-1}
                Mat inv{src[1][1], -src[1][0], -src[0][1], src[0][0]};
                if (dbase == -1) inv = {-inv.a, -inv.b, -inv.c, -inv.d};
                Mat M{t1[0] * inv.a + t2[0] * inv.c, t1[0] * inv.b + t2[0] * inv.d,
                      t1[1] * inv.a + t2[1] * inv.c, t1[1] * inv.b + t2[1] * inv.d};
                if (M.det() != 1) continue;
                Vec im3 = M.apply(src[2]);
                Vec d3 = dst[p[2]];
                if (!(im3 == d3 || im3 == Vec{-d3[0], -d3[1]})) continue;
                try {
                    std::string json = emit_json(lay, M);
                    auto T = parse_triangulation(json);
                    if (!validate_taut(T).ok) continue;
                    infer_colors(T);
                    build_sectors(T, dual_graph(T));
                    out.push_back(json);
                } catch (const std::exception&) {
                    continue;
                }
            }
    return out;
}

const char* figure_eight_json() {
    // hand-derived from the layered RL presentation; see docs/fixtures notes
    return R"({
  "tets": [
    {"glue": [[1,3,[3,1,2,0]], [1,2,[0,2,1,3]], [1,0,[2,1,0,3]], [1,1,[0,3,2,1]]], "pi_pair": 0},
    {"glue": [[0,2,[2,1,0,3]], [0,3,[0,3,2,1]], [0,1,[0,2,1,3]], [0,0,[3,1,2,0]]], "pi_pair": 0}
  ]
})";
}

}  // namespace veerflow
