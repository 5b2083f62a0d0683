#include <doctest.h>

#include <cmath>
#include <set>

#include "veerflow/bundles.hpp"
#include "veerflow/cones.hpp"

using namespace veerflow;

namespace {

IntVec iv(std::initializer_list<std::int64_t> xs) {
    IntVec v;
    for (auto x : xs) v.push_back(BigInt(x));
    return v;
}

RatVec rv(std::initializer_list<std::int64_t> xs) {
    RatVec v;
    for (auto x : xs) v.push_back(Rational(x));
    return v;
}

std::set<std::vector<std::int64_t>> ray_set(const RationalCone& c) {
    std::set<std::vector<std::int64_t>> s;
    for (const auto& r : c.rays) {
        std::vector<std::int64_t> v;
        for (const auto& x : r) v.push_back(x.to_i64());
        s.insert(v);
    }
    return s;
}

// scalar oracle for the growth of a one-vertex graph with two loops: the
// positive root of t^w1 + t^w2 = 1, solved independently of the matrix code
double two_loop_entropy(double w1, double w2) {
    double lo = 0, hi = 1;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        // t^w1 + t^w2 increases in t; the root is left of mid when above one
        (std::pow(mid, w1) + std::pow(mid, w2) >= 1.0 ? hi : lo) = mid;
    }
    return -std::log(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("carried cone of the figure-eight fixture") {
    auto T = parse_triangulation(figure_eight_json());
    RationalCone c = carried_cone(T);
    CHECK(c.dim == 4);
    CHECK(c.pointed());
    CHECK_FALSE(c.trivial());
    CHECK(ray_set(c) == std::set<std::vector<std::int64_t>>{{1, 1, 0, 0}, {0, 0, 1, 1}});

    // the fiber representative sits in the relative interior of the span
    CHECK(membership(c, rv({1, 1, 1, 1})) == Membership::interior);
    CHECK(membership(c, rv({1, 1, 0, 0})) == Membership::boundary);
    CHECK(membership(c, rv({1, 0, 0, 0})) == Membership::outside);

    // every returned ray satisfies the branch equations exactly
    BranchMatrix B = branch_equations(T);
    for (const auto& ray : c.rays) {
        std::vector<std::int64_t> w;
        for (const auto& x : ray) w.push_back(x.to_i64());
        CHECK(satisfies_branch_equations(B, w));
    }
}

TEST_CASE("trivial cones are flagged and the dimension cap enforced") {
    BranchMatrix only_zero = {{1, -1}, {1, 1}};
    RationalCone c = cone_from_branch_matrix(only_zero, 2);
    CHECK(c.trivial());

    BranchMatrix wide(1, std::vector<std::int64_t>(25, 1));
    CHECK_THROWS_AS(cone_from_branch_matrix(wide, 25), DomainError);
}

TEST_CASE("membership on a full-dimensional pointed cone") {
    RationalCone orthant = RationalCone::from_inequalities(
        2, {}, {iv({1, 0}), iv({0, 1})});
    CHECK(orthant.pointed());
    CHECK(orthant.full_dim());
    CHECK(ray_set(orthant) == std::set<std::vector<std::int64_t>>{{1, 0}, {0, 1}});
    CHECK(membership(orthant, rv({1, 1})) == Membership::interior);  // sum of rays
    CHECK(membership(orthant, rv({1, 0})) == Membership::boundary);
    CHECK(membership(orthant, rv({-1, -1})) == Membership::outside);
}

TEST_CASE("image cones: identity, zero, projection, composition") {
    auto T = parse_triangulation(figure_eight_json());
    RationalCone c = carried_cone(T);

    RestrictionMap id{4, 4, {}};
    id.m.assign(4, RatVec(4, Rational(0)));
    for (int i = 0; i < 4; ++i) id.m[i][i] = Rational(1);
    CHECK(ray_set(image_cone(c, id)) == ray_set(c));

    RestrictionMap zero{2, 4, {}};
    zero.m.assign(2, RatVec(4, Rational(0)));
    CHECK(image_cone(c, zero).trivial());

    // planar cone onto a line, both rays positive
    RationalCone plane = RationalCone::from_generators(2, {iv({1, 0}), iv({1, 2})});
    RestrictionMap line{1, 2, {}};
    line.m = {rv({1, 1})};
    RationalCone img = image_cone(plane, line);
    CHECK(ray_set(img) == std::set<std::vector<std::int64_t>>{{1}});

    // a map collapsing the cone onto a full line produces lineality
    RationalCone quad = RationalCone::from_generators(2, {iv({1, 0}), iv({-1, 1})});
    RestrictionMap proj{1, 2, {}};
    proj.m = {rv({1, 0})};
    RationalCone img2 = image_cone(quad, proj);
    CHECK_FALSE(img2.pointed());

    RestrictionMap r1{3, 4, {}};
    r1.m = {rv({1, 1, 0, 0}), rv({0, 1, 1, 0}), rv({0, 0, 1, 1})};
    RestrictionMap r2{2, 3, {}};
    r2.m = {rv({1, 0, 1}), rv({0, 1, -1})};
    r1.declared_kernel_dim = 1;
    CHECK(r1.kernel_dimension() == 1);
    CHECK(r1.kernel_consistent());
    r1.declared_kernel_dim = 2;
    CHECK_FALSE(r1.kernel_consistent());
    r1.declared_kernel_dim = -1;

    RationalCone lhs = image_cone(image_cone(c, r1), r2);
    RationalCone rhs = image_cone(c, RestrictionMap::compose(r2, r1));
    CHECK(ray_set(lhs) == ray_set(rhs));
    CHECK_THROWS_AS(image_cone(c, r2), DomainError);  // dimension mismatch
}

TEST_CASE("double description round trips between views") {
    // a 3d cone with a non-simplicial facet structure
    std::vector<IntVec> gens = {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1}), iv({1, 1, 1})};
    RationalCone c = RationalCone::from_generators(3, gens);
    CHECK(c.pointed());
    CHECK(c.full_dim());
    // the interior generator is not an extreme ray
    CHECK(ray_set(c) == std::set<std::vector<std::int64_t>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    RationalCone c2 = RationalCone::from_inequalities(3, {}, c.ineqs);
    CHECK(ray_set(c2) == ray_set(c));

    RationalCone parsed = RationalCone::from_json(c.to_json());
    CHECK(parsed.dim == 3);
    CHECK(ray_set(parsed) == ray_set(c));
}

TEST_CASE("entropy sampler on the figure-eight fixture") {
    auto T = parse_triangulation(figure_eight_json());
    FlowGraph phi = flow_graph(T, build_sectors(T, dual_graph(T)));
    std::vector<std::int64_t> eta(4, 0);
    EntropySampler sampler(T, phi, eta, 0);
    CHECK_FALSE(sampler.empty_core());

    double expect = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    auto s = sampler.sample(rv({1, 1, 0, 0}));
    CHECK(s.status == EntropyStatus::interior_ok);
    CHECK(std::abs(s.ent - expect) < 1e-8);

    // degree -1 homogeneity, including genuinely rational classes
    auto half = sampler.sample({Rational(1, 2), Rational(1, 2), Rational(0), Rational(0)});
    CHECK(std::abs(half.ent - 2 * expect) < 1e-8);

    // zero class: every cycle has weight zero
    auto z = sampler.sample(rv({0, 0, 0, 0}));
    CHECK(z.status == EntropyStatus::zero_weight_cycle);

    // cutting along the fiber leaves an empty core: the translation case
    EntropySampler empty(T, phi, {1, 1, 0, 0}, 0);
    CHECK(empty.empty_core());
    auto e = empty.sample(rv({1, 1, 0, 0}));
    CHECK(e.status == EntropyStatus::empty_core);
    CHECK(e.ent == 0.0);
}

TEST_CASE("convexity probe: degenerate and constant-entropy segments") {
    auto T = parse_triangulation(figure_eight_json());
    FlowGraph phi = flow_graph(T, build_sectors(T, dual_graph(T)));
    EntropySampler sampler(T, phi, {0, 0, 0, 0}, 0);

    auto rep = convexity_probe(sampler, rv({2, 2, 1, 1}), rv({2, 2, 1, 1}), 5);
    CHECK(rep.ok);
    CHECK(rep.max_violation <= 1e-12);

    // the fiber ray to its mirror: entropy is constant along this segment
    auto rep2 = convexity_probe(sampler, rv({1, 1, 0, 0}), rv({0, 0, 1, 1}), 9);
    CHECK(rep2.ok);

    // a genuinely varying segment stays convex
    auto rep3 = convexity_probe(sampler, rv({1, 1, 0, 0}), rv({3, 3, 2, 2}), 9);
    CHECK(rep3.ok);

    CHECK_THROWS_AS(convexity_probe(sampler, rv({0, 0, 0, 0}), rv({1, 1, 0, 0}), 5), DomainError);
}

TEST_CASE("two-loop entropy matches the scalar oracle and is convex") {
    for (int w1 = 1; w1 <= 5; ++w1)
        for (int w2 = w1; w2 <= 6; ++w2) {
            WeightedDigraph g;
            g.num_vertices = 1;
            g.edges = {{0, 0, w1}, {0, 0, w2}};
            double ent = std::log(growth_rate(g, GrowthMode::weighted).lambda);
            CHECK(std::abs(ent - two_loop_entropy(w1, w2)) < 1e-9);
        }
    // midpoint convexity along the lattice segment (k, k+1)
    auto ent_k = [](int k) { return two_loop_entropy(k, k + 1); };
    for (int k = 1; k <= 6; ++k)
        CHECK(ent_k(k + 1) <= 0.5 * (ent_k(k) + ent_k(k + 2)) + 1e-6);
}

TEST_CASE("double description on random systems: containment and extremality") {
    std::uint64_t s = 123456789;
    auto rnd = [&](int lo, int hi) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return lo + int(s % std::uint64_t(hi - lo + 1));
    };
    for (int trial = 0; trial < 40; ++trial) {
        int dim = rnd(2, 5);
        int n_ineq = rnd(1, 2 * dim);
        std::vector<IntVec> ineqs;
        for (int i = 0; i < n_ineq; ++i) {
            IntVec row(dim);
            for (int j = 0; j < dim; ++j) row[j] = BigInt(rnd(-3, 3));
            ineqs.push_back(row);
        }
        // anchor with the orthant so the cone is pointed and nontrivial
        for (int j = 0; j < dim; ++j) {
            IntVec e(dim, BigInt(0));
            e[j] = BigInt(1);
            ineqs.push_back(e);
        }
        RationalCone c = RationalCone::from_inequalities(dim, {}, ineqs);
        CHECK(c.pointed());
        for (const auto& r : c.rays) {
            // every ray satisfies every defining inequality...
            for (const auto& a : ineqs) {
                BigInt dotv(0);
                for (int j = 0; j < dim; ++j) dotv += a[j] * r[j];
                CHECK(dotv.sign() >= 0);
            }
            // ...and is extreme: its tight facets cut it down to a single line
            std::vector<IntVec> tight = c.eqs;
            for (const auto& a : c.ineqs) {
                BigInt dotv(0);
                for (int j = 0; j < dim; ++j) dotv += a[j] * r[j];
                if (dotv.is_zero()) tight.push_back(a);
            }
            auto line = integer_kernel_basis(tight, dim);
            CHECK(line.size() == 1);
        }
        // nonnegative combinations of rays stay inside
        if (!c.rays.empty()) {
            RatVec x(dim, Rational(0));
            for (const auto& r : c.rays) {
                Rational coef(rnd(0, 3));
                for (int j = 0; j < dim; ++j) x[j] += coef * Rational(r[j], BigInt(1));
            }
            CHECK(membership(c, x) != Membership::outside);
        }
    }
}
