#include <doctest.h>

#include <json.hpp>
#include <set>

#include "veerflow/bundles.hpp"
#include "veerflow/tri.hpp"

using namespace veerflow;
using Json = nlohmann::ordered_json;

namespace {

Json fig8_doc() { return Json::parse(figure_eight_json()); }

// independent check of the alternation rule, for brute-forcing colorings
bool coloring_ok(const VeeringTriangulation& T, unsigned mask) {
    auto color = [&](int edge) { return (mask >> edge) & 1u; };
    static constexpr std::array<std::array<int, 2>, 3> kPairs = {{{0, 5}, {1, 4}, {2, 3}}};
    for (int t = 0; t < T.tet_count(); ++t) {
        std::vector<std::array<int, 2>> eq;
        for (int p = 0; p < 3; ++p)
            if (p != T.tets[t].pi_pair) eq.push_back(kPairs[p]);
        unsigned a1 = color(T.edge_class_of(t, eq[0][0])), a2 = color(T.edge_class_of(t, eq[0][1]));
        unsigned b1 = color(T.edge_class_of(t, eq[1][0])), b2 = color(T.edge_class_of(t, eq[1][1]));
        if (a1 != a2 || b1 != b2 || a1 == b1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("figure-eight parses with the expected class counts") {
    auto T = parse_triangulation(figure_eight_json());
    CHECK(T.tet_count() == 2);
    CHECK(T.num_edges == 2);
    CHECK(T.num_faces == 4);
}

TEST_CASE("parse errors: involution, empty list, dangling") {
    Json doc = fig8_doc();
    // tet 0 face 0 points at tet 1 face 3, but rewire tet 1 face 3 elsewhere
    doc["tets"][1]["glue"][3] = Json::array({0, 1, Json::array({0, 3, 2, 1})});
    CHECK_THROWS_WITH_AS(parse_triangulation(doc.dump()), doctest::Contains("non-involutive"),
                         ParseError);

    CHECK_THROWS_AS(parse_triangulation(R"({"tets": []})"), ParseError);
    CHECK_THROWS_AS(parse_triangulation("not json at all"), ParseError);

    doc = fig8_doc();
    doc["tets"][0]["glue"][0][0] = 7;  // out of range target
    CHECK_THROWS_AS(parse_triangulation(doc.dump()), ParseError);

    doc = fig8_doc();
    doc["tets"][0]["glue"][0][2] = Json::array({0, 1, 2, 3});  // even permutation
    CHECK_THROWS_AS(parse_triangulation(doc.dump()), ParseError);
}

TEST_CASE("taut validation on the census fixture and broken variants") {
    auto T = parse_triangulation(figure_eight_json());
    auto rep = validate_taut(T);
    CHECK(rep.ok);
    CHECK(rep.edge_count_ok);
    CHECK(rep.face_coorientation_ok);

    SUBCASE("pi pair changed") {
        Json doc = fig8_doc();
        doc["tets"][0]["pi_pair"] = 1;
        auto T2 = parse_triangulation(doc.dump());
        auto rep2 = validate_taut(T2);
        CHECK_FALSE(rep2.ok);
        bool some_edge_flagged = false;
        for (const auto& e : rep2.edges) some_edge_flagged |= !e.ok();
        CHECK(some_edge_flagged);
    }
    SUBCASE("edge that is bottom of two tets is flagged") {
        Json doc = fig8_doc();
        doc["tets"][1]["pi_pair"] = 1;
        auto T2 = parse_triangulation(doc.dump());
        auto rep2 = validate_taut(T2);
        CHECK_FALSE(rep2.ok);
        bool multiplicity = false;
        for (const auto& e : rep2.edges) multiplicity |= e.top_count != 1 || e.bottom_count != 1;
        CHECK(multiplicity);
    }
}

TEST_CASE("color inference matches brute force, normalized red at edge 0") {
    auto T = parse_triangulation(figure_eight_json());
    auto colors = infer_colors(T);
    CHECK(colors[0] == Color::red);
    CHECK(colors[1] == Color::blue);

    std::set<unsigned> valid;
    for (unsigned mask = 0; mask < 4; ++mask)
        if (coloring_ok(T, mask)) valid.insert(mask);
    unsigned inferred = 0;
    for (int e = 0; e < T.num_edges; ++e)
        if (colors[e] == Color::blue) inferred |= 1u << e;
    CHECK(valid == std::set<unsigned>{inferred, ~inferred & 3u});  // swap symmetry
}

TEST_CASE("supplied colors are validated, not re-inferred") {
    Json doc = fig8_doc();
    doc["colors"] = Json{{"0", "blue"}, {"1", "red"}};  // the swapped coloring
    auto T = parse_triangulation(doc.dump());
    auto colors = infer_colors(T);
    CHECK(colors[0] == Color::blue);

    doc["colors"] = Json{{"0", "red"}, {"1", "red"}};
    auto T2 = parse_triangulation(doc.dump());
    CHECK_THROWS_AS(infer_colors(T2), DomainError);
}

TEST_CASE("inference reports taut-but-not-veering constraint systems") {
    // synthetic one-tet class assignment forcing a same-pair contradiction
    VeeringTriangulation T;
    T.tets.resize(1);
    T.tets[0].pi_pair = 0;
    T.num_edges = 2;
    T.num_faces = 0;
    T.edge_class = {0, 0, 0, 1, 1, 1};  // classes of edges 01,02,03,12,13,23
    // pairs {02,13} and {03,12} both mix classes 0 and 1: same-color constraints
    // 0=1 clash with the different-pair constraint
    CHECK_THROWS_WITH_AS(infer_colors(T), doctest::Contains("not veering"), DomainError);
}

TEST_CASE("edge links: degree six, closure, two pi corners, slot partition") {
    auto T = parse_triangulation(figure_eight_json());
    auto links = all_edge_links(T);
    std::set<std::pair<int, int>> slots;
    int total = 0;
    for (const auto& link : links) {
        CHECK(link.degree() == 6);
        CHECK(link.below_pos >= 0);
        CHECK(link.above_pos >= 0);
        int pi = 0;
        for (int i = 0; i < link.degree(); ++i) {
            const auto& c = link.corners[i];
            if (T.tets[c.tet].is_pi_edge(c.local_edge)) ++pi;
            slots.insert({c.tet, c.local_edge});
            // leaving face is glued onto the next corner's entering face
            const auto& g = T.tets[c.tet].glue[c.leave_face];
            const auto& nxt = link.corners[(i + 1) % link.degree()];
            CHECK(g.tet == nxt.tet);
            CHECK(g.face == nxt.enter_face);
        }
        CHECK(pi == 2);
        total += link.degree();
    }
    CHECK(total == 6 * T.tet_count());
    CHECK(slots.size() == std::size_t(6 * T.tet_count()));
    CHECK_THROWS_AS(edge_link(T, 5), DomainError);
}

TEST_CASE("parse/serialize round trip is the identity") {
    auto T = parse_triangulation(figure_eight_json());
    T.colors = infer_colors(T);
    auto T2 = parse_triangulation(serialize_triangulation(T));
    CHECK(T2.tet_count() == T.tet_count());
    CHECK(T2.edge_class == T.edge_class);
    CHECK(T2.face_class == T.face_class);
    CHECK(T2.colors == T.colors);
    for (int t = 0; t < T.tet_count(); ++t) {
        CHECK(T2.tets[t].pi_pair == T.tets[t].pi_pair);
        for (int f = 0; f < 4; ++f) {
            CHECK(T2.tets[t].glue[f].tet == T.tets[t].glue[f].tet);
            CHECK(T2.tets[t].glue[f].face == T.tets[t].glue[f].face);
            CHECK(T2.tets[t].glue[f].perm == T.tets[t].glue[f].perm);
        }
    }
    CHECK(serialize_triangulation(T2) == serialize_triangulation(T));
}
