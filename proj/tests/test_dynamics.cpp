#include <doctest.h>

#include <cmath>
#include <queue>
#include <set>

#include "veerflow/bundles.hpp"
#include "veerflow/dynamics.hpp"
#include "veerflow/suite.hpp"

using namespace veerflow;

namespace {

WeightedDigraph golden_graph() {
    WeightedDigraph g;
    g.num_vertices = 2;
    g.edges = {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}};
    return g;
}

struct Fig8Pipeline {
    VeeringTriangulation T;
    FlowGraph phi;
    BranchMatrix B;
    Fig8Pipeline()
        : T(parse_triangulation(figure_eight_json())),
          phi(flow_graph(T, build_sectors(T, dual_graph(T)))),
          B(branch_equations(T)) {}
};

// independent reachability oracle over zero-weight faces
std::vector<int> bfs_components(const VeeringTriangulation& T,
                                const std::vector<std::int64_t>& eta) {
    int n = T.tet_count();
    std::vector<std::vector<int>> adj(n);
    for (int f = 0; f < T.num_faces; ++f) {
        if (eta[f] > 0) continue;
        int a = T.tet_below_face(f), b = T.tet_above_face(f);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> comp(n, -1);
    int c = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::queue<int> q;
        q.push(s);
        comp[s] = c;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = c;
                    q.push(w);
                }
        }
        ++c;
    }
    return comp;
}

}  // namespace

TEST_CASE("cut: identity at zero, empty at strictly positive, pairing zero survivors") {
    Fig8Pipeline p;
    std::vector<std::int64_t> zero(4, 0), ones(4, 1), fiber = {1, 1, 0, 0};
    CHECK(cut(p.phi, zero, p.B).edges.size() == p.phi.edges.size());
    CHECK(cut(p.phi, ones, p.B).edges.empty());

    FlowGraph survivors = cut(p.phi, fiber, p.B);
    for (const auto& e : p.phi.edges) {
        bool kept = false;
        for (const auto& s : survivors.edges)
            kept |= s.src == e.src && s.dst == e.dst && s.crossings == e.crossings;
        CHECK(kept == (pairing_of_edge(e, fiber) == 0));
    }
    CHECK_THROWS_AS(cut(p.phi, {1, 1, -1, -1}, p.B), DomainError);  // not carried
}

TEST_CASE("dynamical core basics") {
    WeightedDigraph dag;
    dag.num_vertices = 3;
    dag.edges = {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}};
    CHECK(dynamical_core(dag).edges.empty());

    WeightedDigraph loop;
    loop.num_vertices = 1;
    loop.edges = {{0, 0, 2}};
    CHECK(dynamical_core(loop).edges.size() == 1);

    WeightedDigraph bridged;
    bridged.num_vertices = 4;
    bridged.edges = {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 3, 1}, {3, 2, 1}};
    auto core = dynamical_core(bridged);
    CHECK(core.edges.size() == 4);
    for (const auto& e : core.edges) CHECK(!(e.from == 1 && e.to == 2));

    // idempotence
    auto again = dynamical_core(core);
    CHECK(again.edges.size() == core.edges.size());
}

TEST_CASE("cut components against a breadth-first oracle") {
    Fig8Pipeline p;
    std::vector<std::int64_t> zero(4, 0), ones(4, 1), fiber = {1, 1, 0, 0};
    for (const auto& eta : {zero, ones, fiber}) {
        int count = 0;
        auto comp = cut_components(p.T, eta, p.B, &count);
        auto oracle = bfs_components(p.T, eta);
        CHECK(comp == oracle);
    }
    int count = 0;
    cut_components(p.T, zero, p.B, &count);
    CHECK(count == 1);
    cut_components(p.T, ones, p.B, &count);
    CHECK(count == p.T.tet_count());
}

TEST_CASE("restriction partitions a two-component hand-built flow graph") {
    // four fictional tetrahedra; faces 0..5 with (below, above) sides; the cut
    // removes faces 4 and 5, splitting {0,1} from {2,3}
    FlowGraph phi;
    phi.num_vertices = 4;  // vertex i hosted by tet i
    auto mk = [](int s, int d, int tet, std::vector<int> faces) {
        FlowEdge e;
        e.src = s;
        e.dst = d;
        e.tet = tet;
        for (int f : faces) e.crossings.push_back({f, 1});
        return e;
    };
    phi.edges = {mk(0, 1, 1, {0}), mk(1, 0, 0, {1}), mk(2, 3, 3, {2}), mk(3, 2, 2, {3}),
                 mk(0, 2, 2, {4})};
    std::vector<std::pair<int, int>> face_sides = {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {0, 2}, {1, 3}};
    std::vector<int> tet_below_edge = {0, 1, 2, 3};
    std::vector<int> comp = {0, 0, 1, 1};

    // drop the bridge edge crossing the cut face, as cut() would
    FlowGraph phi_eta = phi;
    phi_eta.edges.pop_back();

    FlowGraph r0 = restrict_phi_n(phi_eta, comp, 0, tet_below_edge, face_sides);
    FlowGraph r1 = restrict_phi_n(phi_eta, comp, 1, tet_below_edge, face_sides);
    CHECK(r0.edges.size() == 2);
    CHECK(r1.edges.size() == 2);
    CHECK(r0.edges.size() + r1.edges.size() == phi_eta.edges.size());
    for (const auto& e : r0.edges) CHECK(comp[e.tet] == 0);
    for (const auto& e : r1.edges) CHECK(comp[e.tet] == 1);
    CHECK_THROWS_AS(restrict_phi_n(phi_eta, comp, 9, tet_below_edge, face_sides), DomainError);

    // single-component restriction is the identity
    Fig8Pipeline p;
    std::vector<std::int64_t> zero(4, 0);
    auto comps = cut_components(p.T, zero, p.B);
    CHECK(restrict_phi_n(p.T, p.phi, comps, 0).edges.size() == p.phi.edges.size());
}

TEST_CASE("growth rate fixtures") {
    double golden = (1.0 + std::sqrt(5.0)) / 2.0;

    WeightedDigraph two_loops;
    two_loops.num_vertices = 1;
    two_loops.edges = {{0, 0, 1}, {0, 0, 1}};
    CHECK(growth_rate(two_loops, GrowthMode::unit).lambda == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(growth_rate(golden_graph(), GrowthMode::unit).lambda ==
          doctest::Approx(golden).epsilon(1e-11));

    WeightedDigraph fib_loops;
    fib_loops.num_vertices = 1;
    fib_loops.edges = {{0, 0, 1}, {0, 0, 2}};
    auto r = growth_rate(fib_loops, GrowthMode::weighted);
    CHECK(r.lambda == doctest::Approx(golden).epsilon(1e-11));
    CHECK(r.t_star == doctest::Approx(1.0 / golden).epsilon(1e-11));
    CHECK(std::abs(r.residual) <= 1e-11);

    // disjoint simple loops: bounded counts, lambda exactly one
    WeightedDigraph loops;
    loops.num_vertices = 3;
    loops.edges = {{0, 0, 2}, {1, 2, 1}, {2, 1, 3}};
    CHECK(growth_rate(loops, GrowthMode::weighted).lambda == 1.0);

    WeightedDigraph empty;
    empty.num_vertices = 2;
    empty.edges = {{0, 1, 1}};
    CHECK_THROWS_AS(growth_rate(empty, GrowthMode::unit), DomainError);
}

TEST_CASE("weight homogeneity and monotonicity") {
    suite::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedDigraph g = suite::random_strongly_connected(rng, 5, 10, 3);
        double base = std::log(growth_rate(g, GrowthMode::weighted).lambda);
        for (int k = 2; k <= 4; ++k) {
            WeightedDigraph gk = g;
            for (auto& e : gk.edges) e.weight *= k;
            double scaled = std::log(growth_rate(gk, GrowthMode::weighted).lambda);
            CHECK(std::abs(scaled * k - base) <= 1e-9 * std::max(1.0, base));
        }
        // an extra edge never decreases growth
        WeightedDigraph plus = g;
        plus.edges.push_back({rng.uniform(0, g.num_vertices - 1),
                              rng.uniform(0, g.num_vertices - 1), 2});
        CHECK(growth_rate(plus, GrowthMode::weighted).lambda >=
              growth_rate(g, GrowthMode::weighted).lambda - 1e-10);
        // a heavier edge never increases growth
        WeightedDigraph heavier = g;
        heavier.edges[0].weight += 1;
        CHECK(growth_rate(heavier, GrowthMode::weighted).lambda <=
              growth_rate(g, GrowthMode::weighted).lambda + 1e-10);
    }
}

TEST_CASE("zero-weight cycle detection with witness") {
    WeightedDigraph g;
    g.num_vertices = 3;
    g.edges = {{0, 1, 0}, {1, 0, 0}, {1, 2, 1}, {2, 1, 2}};
    auto cyc = find_zero_weight_cycle(g);
    REQUIRE(cyc.has_value());
    CHECK(cyc->size() >= 2);
    CHECK_THROWS_WITH_AS(growth_rate(g, GrowthMode::weighted), doctest::Contains("weight-0"),
                         DomainError);

    WeightedDigraph ok;
    ok.num_vertices = 2;
    ok.edges = {{0, 1, 0}, {1, 0, 1}};  // zero edge but no zero cycle
    CHECK_FALSE(find_zero_weight_cycle(ok).has_value());
    CHECK(growth_rate(ok, GrowthMode::weighted).lambda > 1.0 - 1e-12);
}

TEST_CASE("cycle count oracle: exact sequences") {
    auto lucas = cycle_count_oracle(golden_graph(), GrowthMode::unit, 6);
    std::vector<std::uint64_t> expect = {1, 3, 4, 7, 11, 18};
    REQUIRE(lucas.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(lucas[i] == BigNat(expect[i]));

    WeightedDigraph loop;
    loop.num_vertices = 1;
    loop.edges = {{0, 0, 1}};
    for (const auto& c : cycle_count_oracle(loop, GrowthMode::unit, 10)) CHECK(c == BigNat(1));

    WeightedDigraph empty;
    empty.num_vertices = 2;
    for (const auto& c : cycle_count_oracle(empty, GrowthMode::unit, 5)) CHECK(c.is_zero());

    WeightedDigraph fib_loops;
    fib_loops.num_vertices = 1;
    fib_loops.edges = {{0, 0, 1}, {0, 0, 2}};
    auto fib = cycle_count_oracle(fib_loops, GrowthMode::weighted, 5);
    std::vector<std::uint64_t> fexpect = {1, 2, 3, 5, 8};
    for (int i = 0; i < 5; ++i) CHECK(fib[i] == BigNat(fexpect[i]));

    CHECK_THROWS_AS(cycle_count_oracle(golden_graph(), GrowthMode::unit, 500), DomainError);

    // zero-weight edges thread through the weighted count correctly
    WeightedDigraph zmid;
    zmid.num_vertices = 2;
    zmid.edges = {{0, 1, 0}, {1, 0, 2}};
    auto zc = cycle_count_oracle(zmid, GrowthMode::weighted, 6);
    std::vector<std::uint64_t> zexpect = {0, 2, 0, 2, 0, 2};
    for (int i = 0; i < 6; ++i) CHECK(zc[i] == BigNat(zexpect[i]));

    WeightedDigraph zcyc;
    zcyc.num_vertices = 2;
    zcyc.edges = {{0, 1, 0}, {1, 0, 0}};
    CHECK_THROWS_AS(cycle_count_oracle(zcyc, GrowthMode::weighted, 5), DomainError);
}

TEST_CASE("oracle agreement on a randomized mini-suite") {
    suite::Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        WeightedDigraph g = suite::random_strongly_connected(rng, 6, 12, 3, 2);
        double lam = growth_rate(g, GrowthMode::weighted).lambda;
        auto counts = cycle_count_oracle(g, GrowthMode::weighted, 40);
        CHECK(std::abs(std::log(lam) - log_slope(counts, 20, 40)) <= 0.05);
    }
}

TEST_CASE("row sum growth estimates") {
    CHECK(std::abs(row_sum_growth(golden_graph(), 30) - (1.0 + std::sqrt(5.0)) / 2.0) < 0.01);

    WeightedDigraph loop;
    loop.num_vertices = 1;
    loop.edges = {{0, 0, 1}};
    CHECK(row_sum_growth(loop, 17) == 1.0);

    WeightedDigraph two_cycles;  // disjoint loops of lengths 1 and 2
    two_cycles.num_vertices = 3;
    two_cycles.edges = {{0, 0, 1}, {1, 2, 1}, {2, 1, 1}};
    CHECK(row_sum_growth(two_cycles, 40) == 1.0);
}

TEST_CASE("weighted digraph json round trip") {
    auto g = golden_graph();
    auto g2 = WeightedDigraph::from_json(g.to_json());
    CHECK(g2.num_vertices == g.num_vertices);
    CHECK(g2.edges.size() == g.edges.size());
    CHECK_THROWS_AS(WeightedDigraph::from_json("{}"), ParseError);
    CHECK_THROWS_AS(WeightedDigraph::from_json(R"({"edges":[[0,-1,1]]})"), ParseError);
}
