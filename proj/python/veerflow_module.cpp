#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "veerflow/bundles.hpp"
#include "veerflow/cones.hpp"
#include "veerflow/suite.hpp"
#include "veerflow/track.hpp"

namespace py = pybind11;
using namespace veerflow;

namespace {

VeeringTriangulation parse_checked(const std::string& tri_json) {
    auto T = parse_triangulation(tri_json);
    auto rep = validate_taut(T);
    if (!rep.ok) throw DomainError("triangulation failed taut validation");
    T.colors = infer_colors(T);
    return T;
}

WeightedDigraph graph_from(const std::vector<std::tuple<int, int, std::int64_t>>& edges,
                           int num_vertices) {
    WeightedDigraph g;
    int max_v = -1;
    for (auto [u, v, w] : edges) {
        g.edges.push_back({u, v, w});
        max_v = std::max({max_v, u, v});
    }
    g.num_vertices = std::max(num_vertices, max_v + 1);
    return g;
}

py::dict growth_dict(const GrowthResult& r) {
    py::dict d;
    d["lambda"] = r.lambda;
    d["t_star"] = r.t_star;
    d["log_lambda"] = std::log(r.lambda);
    d["iterations"] = r.iterations;
    d["residual"] = r.residual;
    d["empty_core"] = r.empty_core;
    return d;
}

py::object big_to_int(const BigNat& v) {
    return py::module_::import("builtins").attr("int")(v.to_string());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "stretch factors and foliation cones from veering triangulations";

    py::register_exception<IoError>(m, "IoError");
    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<ConvergenceError>(m, "ConvergenceError");

    m.def("validate", [](const std::string& tri_json) {
        auto T = parse_triangulation(tri_json);
        return validate_taut(T).to_json();
    }, py::arg("tri_json"), "taut validation report as a JSON string");

    m.def("infer_colors", [](const std::string& tri_json) {
        auto T = parse_triangulation(tri_json);
        std::vector<std::string> out;
        for (Color c : infer_colors(T)) out.push_back(color_name(c));
        return out;
    }, py::arg("tri_json"), "veering edge colors, edge 0 normalized to red");

    m.def("flow_graph", [](const std::string& tri_json) {
        auto T = parse_checked(tri_json);
        return flow_graph(T, build_sectors(T, dual_graph(T))).to_json();
    }, py::arg("tri_json"), "flow graph JSON (vertices, edges with crossing words)");

    m.def("branch_matrix", [](const std::string& tri_json) {
        return branch_equations(parse_checked(tri_json));
    }, py::arg("tri_json"), "branch equation rows (edges x faces)");

    m.def("carried_cone", [](const std::string& tri_json, int dim_cap) {
        return carried_cone(parse_checked(tri_json), dim_cap).to_json();
    }, py::arg("tri_json"), py::arg("dim_cap") = 20,
       "cone of carried classes in face-weight space, JSON");

    m.def("growth_rate",
          [](const std::vector<std::tuple<int, int, std::int64_t>>& edges, int num_vertices,
             const std::string& mode) {
              return growth_dict(growth_rate(graph_from(edges, num_vertices),
                                             mode == "unit" ? GrowthMode::unit
                                                            : GrowthMode::weighted));
          },
          py::arg("edges"), py::arg("num_vertices") = 0, py::arg("mode") = "weighted",
          "Perron growth of a weighted digraph given as (from, to, weight) triples");

    m.def("cycle_counts",
          [](const std::vector<std::tuple<int, int, std::int64_t>>& edges, int num_vertices,
             const std::string& mode, int n_max) {
              auto counts = cycle_count_oracle(graph_from(edges, num_vertices),
                                               mode == "unit" ? GrowthMode::unit
                                                              : GrowthMode::weighted,
                                               n_max);
              py::list out;
              for (const auto& c : counts) out.append(big_to_int(c));
              return out;
          },
          py::arg("edges"), py::arg("num_vertices") = 0, py::arg("mode") = "unit",
          py::arg("n_max") = 40, "exact closed-walk counts c_1..c_n");

    m.def("stretch",
          [](const std::string& tri_json, const std::vector<std::int64_t>& xi,
             std::optional<std::vector<std::int64_t>> eta, int component) {
              auto T = parse_checked(tri_json);
              FlowGraph phi = flow_graph(T, build_sectors(T, dual_graph(T)));
              BranchMatrix B = branch_equations(T);
              std::vector<std::int64_t> eta_v =
                  eta.value_or(std::vector<std::int64_t>(T.num_faces, 0));
              FlowGraph phi_eta = dynamical_core(cut(phi, eta_v, B));
              auto comps = cut_components(T, eta_v, B);
              FlowGraph phi_n = restrict_phi_n(T, phi_eta, comps, component);
              if (phi_n.edges.empty())
                  throw DomainError("empty dynamical core in the chosen component");
              return growth_dict(growth_rate(pairing_weighting(phi_n, xi), GrowthMode::weighted));
          },
          py::arg("tri_json"), py::arg("xi"), py::arg("eta") = py::none(),
          py::arg("component") = 0,
          "stretch factor of the class xi through the cut/core/restrict pipeline");

    m.def("entropy",
          [](const std::string& tri_json, const std::vector<std::int64_t>& xi,
             std::optional<std::vector<std::int64_t>> eta, int component) {
              auto T = parse_checked(tri_json);
              FlowGraph phi = flow_graph(T, build_sectors(T, dual_graph(T)));
              std::vector<std::int64_t> eta_v =
                  eta.value_or(std::vector<std::int64_t>(T.num_faces, 0));
              EntropySampler sampler(T, phi, eta_v, component);
              RatVec x(xi.size());
              for (std::size_t i = 0; i < xi.size(); ++i) x[i] = Rational(xi[i]);
              auto s = sampler.sample(x);
              py::dict d;
              d["ent"] = s.ent;
              d["lambda"] = s.lambda;
              d["status"] = entropy_status_name(s.status);
              return d;
          },
          py::arg("tri_json"), py::arg("xi"), py::arg("eta") = py::none(),
          py::arg("component") = 0, "entropy sample at an integral carried class");

    m.def("entropy_segment",
          [](const std::string& tri_json, const std::vector<std::int64_t>& xi,
             const std::vector<std::int64_t>& xi2, int k,
             std::optional<std::vector<std::int64_t>> eta, int component) {
              auto T = parse_checked(tri_json);
              FlowGraph phi = flow_graph(T, build_sectors(T, dual_graph(T)));
              std::vector<std::int64_t> eta_v =
                  eta.value_or(std::vector<std::int64_t>(T.num_faces, 0));
              EntropySampler sampler(T, phi, eta_v, component);
              RatVec a(xi.size()), b(xi2.size());
              for (std::size_t i = 0; i < xi.size(); ++i) a[i] = Rational(xi[i]);
              for (std::size_t i = 0; i < xi2.size(); ++i) b[i] = Rational(xi2[i]);
              auto rep = convexity_probe(sampler, a, b, k);
              py::list ents;
              for (const auto& smp : rep.samples) ents.append(smp.ent);
              py::dict d;
              d["ents"] = ents;
              d["max_violation"] = rep.max_violation;
              d["convex"] = rep.ok;
              return d;
          },
          py::arg("tri_json"), py::arg("xi"), py::arg("xi2"), py::arg("k") = 9,
          py::arg("eta") = py::none(), py::arg("component") = 0,
          "entropy along the segment between two carried classes, with the convexity verdict");

    m.def("transition_graph", [](const std::string& cycle_json) {
        auto tg = transition_graph(FoldingCycle::from_json(cycle_json));
        py::dict d;
        d["w1"] = tg.w1;
        d["edges"] = tg.gf.edges.size();
        return d;
    }, py::arg("cycle_json"), "composed transition counts of a folding cycle");

    m.def("gf_growth", [](const std::string& cycle_json) {
        return growth_dict(gf_growth(transition_graph(FoldingCycle::from_json(cycle_json))));
    }, py::arg("cycle_json"));

    m.def("intersection_growth",
          [](const std::string& cycle_json, const std::vector<std::int64_t>& carried,
             const std::vector<std::int64_t>& transverse, int n_max) {
              auto ig = intersection_growth(FoldingCycle::from_json(cycle_json), carried,
                                            transverse, n_max);
              py::list counts;
              for (const auto& c : ig.counts) counts.append(big_to_int(c));
              py::dict d;
              d["counts"] = counts;
              d["slope"] = ig.slope;
              return d;
          },
          py::arg("cycle_json"), py::arg("carried"), py::arg("transverse"), py::arg("n_max") = 40);

    m.def("figure_eight", [] { return std::string(figure_eight_json()); },
          "the 2-tetrahedron figure-eight-complement fixture");

    m.def("layered_bundles", &layered_bundle_fixtures, py::arg("flip_word"),
          "veering triangulations of layered once-punctured-torus bundles");

    m.def("acceptance",
          [](std::uint64_t seed, int nmax) {
              suite::Options opt;
              opt.seed = seed;
              opt.nmax = nmax;
              py::list out;
              for (const auto& r : suite::run_acceptance(opt)) {
                  py::dict d;
                  d["id"] = r.id;
                  d["name"] = r.name;
                  d["pass"] = r.pass;
                  d["detail"] = r.detail;
                  out.append(d);
              }
              return out;
          },
          py::arg("seed") = suite::Options{}.seed, py::arg("nmax") = 40,
          "run the acceptance battery");
}
