#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "veerflow/bundles.hpp"
#include "veerflow/cones.hpp"
#include "veerflow/suite.hpp"
#include "veerflow/track.hpp"

using namespace veerflow;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;
constexpr int kExitNumeric = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write " + out_path);
        out << text;
    }
}

std::vector<std::int64_t> load_weights(const std::string& path, int expect) {
    FaceClass w = face_class_from_json(slurp(path));
    if (static_cast<int>(w.weights.size()) != expect)
        throw DomainError("weight vector has wrong dimension");
    return w.weights;
}

RatVec to_ratvec(const std::vector<std::int64_t>& w) {
    RatVec x(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) x[i] = Rational(w[i]);
    return x;
}

struct Pipeline {
    VeeringTriangulation T;
    FlowGraph phi;
    BranchMatrix B;
};

Pipeline load_pipeline(const std::string& path) {
    Pipeline p{parse_triangulation(slurp(path)), {}, {}};
    auto rep = validate_taut(p.T);
    if (!rep.ok) throw DomainError("triangulation failed taut validation:\n" + rep.to_json());
    p.T.colors = infer_colors(p.T);
    p.phi = flow_graph(p.T, build_sectors(p.T, dual_graph(p.T)));
    p.B = branch_equations(p.T);
    return p;
}

int run_validate(const std::string& path) {
    VeeringTriangulation T = parse_triangulation(slurp(path));
    auto rep = validate_taut(T);
    std::string colors_note;
    bool colored = false;
    if (rep.ok) {
        try {
            T.colors = infer_colors(T);
            colored = true;
        } catch (const DomainError& e) {
            colors_note = e.what();
        }
    }
    Json doc = Json::parse(rep.to_json());
    if (colored) {
        Json jc = Json::object();
        for (int e = 0; e < T.num_edges; ++e) jc[std::to_string(e)] = color_name(T.colors[e]);
        doc["colors"] = jc;
    } else if (!colors_note.empty()) {
        doc["colors_error"] = colors_note;
    }
    doc["ok"] = rep.ok && colored;
    std::puts(doc.dump(2).c_str());
    return (rep.ok && colored) ? kExitOk : kExitDomain;
}

int run_stretch(const std::string& tri_path, const std::string& graph_path,
                const std::string& flowgraph_path, const std::string& xi_path,
                const std::string& eta_path, int component, const std::string& mode,
                bool debug_opposite, const std::string& out_path) {
    GrowthResult r;
    if (!graph_path.empty()) {
        WeightedDigraph g = WeightedDigraph::from_json(slurp(graph_path));
        r = growth_rate(g, mode == "unit" ? GrowthMode::unit : GrowthMode::weighted);
    } else if (!flowgraph_path.empty()) {
        // hand-built flow graphs bypass the builder; weights come from pairing
        FlowGraph phi = FlowGraph::from_json(slurp(flowgraph_path));
        if (xi_path.empty()) {
            r = growth_rate(unit_weighting(phi), GrowthMode::unit);
        } else {
            FaceClass xi = face_class_from_json(slurp(xi_path));
            r = growth_rate(pairing_weighting(phi, xi.weights), GrowthMode::weighted);
        }
    } else {
        Pipeline p = load_pipeline(tri_path);
        if (debug_opposite) {
            std::string detail;
            if (!suite::pairing_well_defined(p.T, p.phi, 6, &detail))
                throw DomainError("opposite-side pairing check failed: " + detail);
            std::fprintf(stderr, "opposite-side pairing check passed (%s)\n", detail.c_str());
        }
        std::vector<std::int64_t> eta(p.T.num_faces, 0);
        if (!eta_path.empty()) eta = load_weights(eta_path, p.T.num_faces);
        std::vector<std::int64_t> xi = load_weights(xi_path, p.T.num_faces);
        FlowGraph phi_eta = dynamical_core(cut(p.phi, eta, p.B));
        auto comps = cut_components(p.T, eta, p.B);
        FlowGraph phi_n = restrict_phi_n(p.T, phi_eta, comps, component);
        if (phi_n.edges.empty()) throw DomainError("empty dynamical core in the chosen component");
        r = growth_rate(pairing_weighting(phi_n, xi), GrowthMode::weighted);
    }
    Json doc = Json::parse(growth_result_to_json(r));
    doc["log_lambda"] = std::log(r.lambda);
    emit(doc.dump(2), out_path);
    return kExitOk;
}

int run_entropy(const std::string& tri_path, const std::string& xi_path,
                const std::string& xi2_path, const std::string& eta_path, int component,
                int points, int scale, int random_segments, std::uint64_t seed, double tol,
                const std::string& out_path) {
    Pipeline p = load_pipeline(tri_path);
    std::vector<std::int64_t> eta(p.T.num_faces, 0);
    if (!eta_path.empty()) eta = load_weights(eta_path, p.T.num_faces);
    EntropySampler sampler(p.T, p.phi, eta, component);

    if (random_segments > 0) {
        // segments between random interior combinations of the carried rays
        RationalCone cone = carried_cone(p.T);
        if (cone.rays.empty()) throw DomainError("carried cone is trivial; nothing to sample");
        suite::Rng rng(seed);
        auto random_point = [&] {
            RatVec x(p.T.num_faces, Rational(0));
            for (const auto& ray : cone.rays) {
                Rational coef(rng.uniform(1, 5));
                for (int j = 0; j < p.T.num_faces; ++j)
                    x[j] += coef * Rational(ray[j], BigInt(1));
            }
            return x;
        };
        double worst = 0;
        for (int s = 0; s < random_segments; ++s) {
            auto rep = convexity_probe(sampler, random_point(), random_point(), points, tol);
            worst = std::max(worst, rep.max_violation);
        }
        std::printf("randomized convexity suite: %d segments x %d points, max violation %.3g: %s\n",
                    random_segments, points, worst, worst <= tol ? "pass" : "fail");
        return worst <= tol ? kExitOk : kExitDomain;
    }

    RatVec xi = to_ratvec(load_weights(xi_path, p.T.num_faces));

    if (scale > 0) {
        double base = sampler.sample(xi).ent;
        RatVec kxi(xi.size());
        for (std::size_t i = 0; i < xi.size(); ++i) kxi[i] = xi[i] * Rational(scale);
        double err = std::abs(sampler.sample(kxi).ent * scale - base);
        std::printf("homogeneity |ent(k*xi)*k - ent(xi)| = %.3g (k=%d)\n", err, scale);
        return err <= 1e-9 ? kExitOk : kExitDomain;
    }

    if (xi2_path.empty()) throw DomainError("entropy segment needs --xi2 (or use --scale)");
    RatVec xi2 = to_ratvec(load_weights(xi2_path, p.T.num_faces));
    ConvexityReport rep = convexity_probe(sampler, xi, xi2, points, tol);
    std::string csv = "t,ent\n";
    for (int i = 0; i < points; ++i) {
        double t = double(i) / double(points - 1);
        char line[64];
        std::snprintf(line, sizeof line, "%.6f,%.12f\n", t, rep.samples[i].ent);
        csv += line;
    }
    emit(csv, out_path);
    std::printf("convexity max violation %.3g over %d points: %s\n", rep.max_violation, points,
                rep.ok ? "pass" : "fail");
    return rep.ok ? kExitOk : kExitDomain;
}

// curve vectors: a plain integer array or the {"weights": [...]} form
std::vector<std::int64_t> load_curve(const std::string& path) {
    std::string text = slurp(path);
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed curve vector: ") + e.what());
    }
    if (doc.is_array()) {
        std::vector<std::int64_t> v;
        for (const auto& x : doc) v.push_back(x.get<std::int64_t>());
        return v;
    }
    return face_class_from_json(text).weights;
}

int run_track(const std::string& cycle_path, const std::string& c_path, const std::string& d_path,
              int nmax, const std::string& out_path) {
    FoldingCycle cycle = FoldingCycle::from_json(slurp(cycle_path));
    TransitionGraph tg = transition_graph(cycle);
    GrowthResult g = gf_growth(tg);
    Json doc;
    doc["branches"] = cycle.track.num_branches;
    doc["gf_edges"] = tg.gf.edges.size();
    doc["lambda"] = g.lambda;
    doc["log_lambda"] = std::log(g.lambda);
    doc["translation"] = g.empty_core;
    doc["max_component"] = g.max_component;
    if (!c_path.empty() && !d_path.empty()) {
        auto ig = intersection_growth(cycle, load_curve(c_path), load_curve(d_path), nmax);
        doc["intersection_slope"] = ig.slope;
        Json counts = Json::array();
        for (const auto& v : ig.counts)
            counts.push_back(v.fits_u64() ? Json(v.to_u64()) : Json(v.to_string()));
        doc["intersection_counts"] = counts;
    }
    emit(doc.dump(2), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"veerflow: stretch factors and foliation cones from veering triangulations"};
    app.require_subcommand(1);

    std::string path, out_path, graph_path, flowgraph_path, xi_path, xi2_path, eta_path, c_path,
        d_path, mode = "weighted";
    int component = 0, points = 9, scale = 0, nmax = 40;
    double tol = 1e-6;
    std::uint64_t seed = suite::Options{}.seed;
    bool debug_opposite = false;

    auto* validate = app.add_subcommand("validate", "taut/veering validation report");
    validate->add_option("path", path)->required();

    auto* flowgraph = app.add_subcommand("flowgraph", "build the flow graph");
    flowgraph->add_option("path", path)->required();
    flowgraph->add_option("--out", out_path);
    flowgraph->add_flag("--debug-opposite-side", debug_opposite);

    auto* stretch = app.add_subcommand("stretch", "stretch factor of a weighted flow graph");
    stretch->add_option("path", path, "triangulation JSON");
    stretch->add_option("--graph", graph_path, "weighted digraph JSON (bypasses the builder)");
    stretch->add_option("--flowgraph", flowgraph_path, "flow graph JSON (bypasses the builder)");
    stretch->add_option("--xi", xi_path, "face class dual to the leaf");
    stretch->add_option("--eta", eta_path, "carried class to cut along (default 0)");
    stretch->add_option("--component", component);
    stretch->add_option("--mode", mode)->check(CLI::IsMember({"unit", "weighted"}));
    stretch->add_option("--out", out_path);
    stretch->add_flag("--debug-opposite-side", debug_opposite);

    int random_segments = 0;
    auto* entropy = app.add_subcommand("entropy", "entropy samples along a segment");
    entropy->add_option("path", path)->required();
    entropy->add_option("--xi", xi_path);
    entropy->add_option("--random", random_segments,
                        "randomized convexity suite over that many segments");
    entropy->add_option("--xi2", xi2_path);
    entropy->add_option("--eta", eta_path);
    entropy->add_option("--component", component);
    entropy->add_option("-k,--points", points)->check(CLI::PositiveNumber);
    entropy->add_option("--scale", scale, "homogeneity check mode");
    entropy->add_option("--tol", tol)->check(CLI::Range(1e-300, 1e-2));
    entropy->add_option("--seed", seed);
    entropy->add_option("--out", out_path);

    auto* track = app.add_subcommand("track", "transition graph of a folding cycle");
    track->add_option("path", path)->required();
    track->add_option("--carried", c_path);
    track->add_option("--transverse", d_path);
    track->add_option("--nmax", nmax)->check(CLI::PositiveNumber);
    track->add_option("--out", out_path);

    auto* suite_cmd = app.add_subcommand("suite", "run the acceptance battery");
    suite_cmd->add_option("--seed", seed);
    suite_cmd->add_option("--nmax", nmax)->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return run_validate(path);
        if (flowgraph->parsed()) {
            Pipeline p = load_pipeline(path);
            if (debug_opposite) {
                std::string detail;
                if (!suite::pairing_well_defined(p.T, p.phi, 6, &detail))
                    throw DomainError("opposite-side pairing check failed: " + detail);
            }
            emit(p.phi.to_json(), out_path);
            return kExitOk;
        }
        if (stretch->parsed()) {
            if (graph_path.empty() && flowgraph_path.empty() && xi_path.empty())
                throw DomainError("stretch needs --xi with a triangulation, or --graph/--flowgraph");
            return run_stretch(path, graph_path, flowgraph_path, xi_path, eta_path, component,
                               mode, debug_opposite, out_path);
        }
        if (entropy->parsed()) {
            if (random_segments == 0 && xi_path.empty())
                throw DomainError("entropy needs --xi (or --random N)");
            return run_entropy(path, xi_path, xi2_path, eta_path, component, points, scale,
                               random_segments, seed, tol, out_path);
        }
        if (track->parsed()) return run_track(path, c_path, d_path, nmax, out_path);
        if (suite_cmd->parsed()) {
            suite::Options opt;
            opt.seed = seed;
            opt.nmax = nmax;
            int failures = suite::report(suite::run_acceptance(opt));
            return failures == 0 ? kExitOk : kExitDomain;
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitDomain;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}
