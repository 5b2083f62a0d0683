#include "veerflow/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <queue>

#include <json.hpp>

namespace veerflow {

using Json = nlohmann::ordered_json;

std::string WeightedDigraph::to_json() const {
    Json doc;
    doc["vertices"] = num_vertices;
    doc["edges"] = Json::array();
    for (const auto& e : edges) doc["edges"].push_back(Json::array({e.from, e.to, e.weight}));
    return doc.dump();
}

WeightedDigraph WeightedDigraph::from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed digraph: ") + e.what());
    }
    WeightedDigraph g;
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw ParseError("malformed digraph: missing edges");
    int max_v = -1;
    for (const auto& je : doc["edges"]) {
        if (!je.is_array() || je.size() < 2) throw ParseError("malformed digraph: bad edge");
        WEdge e{je[0].get<int>(), je[1].get<int>(), je.size() > 2 ? je[2].get<std::int64_t>() : 1};
        if (e.from < 0 || e.to < 0 || e.weight < 0)
            throw ParseError("malformed digraph: negative entry");
        max_v = std::max({max_v, e.from, e.to});
        g.edges.push_back(e);
    }
    g.num_vertices = doc.value("vertices", max_v + 1);
    if (g.num_vertices <= max_v) throw ParseError("malformed digraph: vertex count too small");
    return g;
}

std::vector<int> strongly_connected_components(const WeightedDigraph& g, int* count) {
    int n = g.num_vertices;
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges) adj[e.from].push_back(e.to);

    // iterative Tarjan
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    int next_index = 0, comp_count = 0;
    struct Frame {
        int v;
        std::size_t child;
    };
    for (int s = 0; s < n; ++s) {
        if (index[s] >= 0) continue;
        std::vector<Frame> call{{s, 0}};
        index[s] = low[s] = next_index++;
        stack.push_back(s);
        on_stack[s] = true;
        while (!call.empty()) {
            auto& fr = call.back();
            if (fr.child < adj[fr.v].size()) {
                int w = adj[fr.v][fr.child++];
                if (index[w] < 0) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], index[w]);
                }
            } else {
                if (low[fr.v] == index[fr.v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if (w == fr.v) break;
                    }
                    ++comp_count;
                }
                int v = fr.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    if (count) *count = comp_count;
    return comp;
}

WeightedDigraph dynamical_core(const WeightedDigraph& g) {
    auto comp = strongly_connected_components(g);
    WeightedDigraph r;
    r.num_vertices = g.num_vertices;
    for (const auto& e : g.edges)
        if (comp[e.from] == comp[e.to]) r.edges.push_back(e);
    return r;
}

FlowGraph cut(const FlowGraph& phi, const std::vector<std::int64_t>& eta, const BranchMatrix& B) {
    if (!is_carried(B, eta)) throw DomainError("cut requires a carried class");
    FlowGraph r;
    r.num_vertices = phi.num_vertices;
    for (const auto& e : phi.edges) {
        bool hit = std::any_of(e.crossings.begin(), e.crossings.end(),
                               [&](const Crossing& c) { return eta[c.face] > 0; });
        if (!hit) r.edges.push_back(e);
    }
    return r;
}

FlowGraph dynamical_core(const FlowGraph& phi) {
    WeightedDigraph g;
    g.num_vertices = phi.num_vertices;
    for (const auto& e : phi.edges) g.edges.push_back({e.src, e.dst, 1});
    auto comp = strongly_connected_components(g);
    FlowGraph r;
    r.num_vertices = phi.num_vertices;
    for (const auto& e : phi.edges)
        if (comp[e.src] == comp[e.dst]) r.edges.push_back(e);
    return r;
}

std::vector<int> cut_components(const VeeringTriangulation& T, const std::vector<std::int64_t>& eta,
                                const BranchMatrix& B, int* count) {
    if (!is_carried(B, eta)) throw DomainError("cut_components requires a carried class");
    int n = T.tet_count();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int f = 0; f < T.num_faces; ++f) {
        if (eta[f] > 0) continue;
        int a = T.tet_below_face(f), b = T.tet_above_face(f);
        if (a >= 0 && b >= 0) parent[find(a)] = find(b);
    }
    std::vector<int> comp(n, -1);
    int c = 0;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (comp[r] < 0) comp[r] = c++;
        comp[i] = comp[r];
    }
    if (count) *count = c;
    return comp;
}

FlowGraph restrict_phi_n(const FlowGraph& phi_eta, const std::vector<int>& component_of_tet,
                         int component, const std::vector<int>& tet_below_edge,
                         const std::vector<std::pair<int, int>>& face_sides) {
    if (component < 0 ||
        component > *std::max_element(component_of_tet.begin(), component_of_tet.end()))
        throw DomainError("invalid component id");
    FlowGraph r;
    r.num_vertices = phi_eta.num_vertices;
    for (const auto& e : phi_eta.edges) {
        if (component_of_tet[e.tet] != component) continue;
        if (component_of_tet[tet_below_edge[e.src]] != component) continue;
        bool ok = true;
        for (const auto& c : e.crossings) {
            auto [a, b] = face_sides[c.face];
            if (component_of_tet[a] != component || component_of_tet[b] != component) {
                ok = false;
                break;
            }
        }
        if (ok) r.edges.push_back(e);
    }
    return r;
}

FlowGraph restrict_phi_n(const VeeringTriangulation& T, const FlowGraph& phi_eta,
                         const std::vector<int>& component_of_tet, int component) {
    std::vector<std::pair<int, int>> face_sides(T.num_faces);
    for (int f = 0; f < T.num_faces; ++f)
        face_sides[f] = {T.tet_below_face(f), T.tet_above_face(f)};
    return restrict_phi_n(phi_eta, component_of_tet, component, T.tet_below_edge(), face_sides);
}

WeightedDigraph unit_weighting(const FlowGraph& phi) {
    WeightedDigraph g;
    g.num_vertices = phi.num_vertices;
    for (const auto& e : phi.edges) g.edges.push_back({e.src, e.dst, 1});
    return g;
}

WeightedDigraph pairing_weighting(const FlowGraph& phi, const std::vector<std::int64_t>& xi) {
    WeightedDigraph g;
    g.num_vertices = phi.num_vertices;
    for (const auto& e : phi.edges) {
        std::int64_t w = pairing_of_edge(e, xi);
        if (w < 0) throw DomainError("pairing weight negative; class not carried");
        g.edges.push_back({e.src, e.dst, w});
    }
    return g;
}

std::optional<std::vector<int>> find_zero_weight_cycle(const WeightedDigraph& g) {
    WeightedDigraph zero;
    zero.num_vertices = g.num_vertices;
    for (const auto& e : g.edges)
        if (e.weight == 0) zero.edges.push_back(e);
    auto comp = strongly_connected_components(zero);
    for (const auto& e : zero.edges) {
        if (comp[e.from] != comp[e.to]) continue;
        // walk back from e.to to e.from inside the component
        std::vector<std::vector<int>> adj(zero.num_vertices);
        for (const auto& z : zero.edges)
            if (comp[z.from] == comp[e.from] && comp[z.to] == comp[e.from])
                adj[z.from].push_back(z.to);
        std::vector<int> prev(zero.num_vertices, -1);
        std::queue<int> q;
        q.push(e.to);
        prev[e.to] = e.to;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            if (v == e.from) break;
            for (int w : adj[v])
                if (prev[w] < 0) {
                    prev[w] = v;
                    q.push(w);
                }
        }
        if (prev[e.from] < 0) continue;
        // prev[] points one step closer to e.to along the directed path
        // e.to -> ... -> e.from; the zero edge e closes the cycle
        std::vector<int> back{e.from};
        for (int v = e.from; v != e.to;) {
            v = prev[v];
            back.push_back(v);
        }
        std::reverse(back.begin(), back.end());  // e.to -> ... -> e.from
        back.insert(back.begin(), e.from);       // prepend the zero edge's tail
        return back;
    }
    return std::nullopt;
}

namespace {

constexpr double kInnerTol = 1e-13;
constexpr double kRhoTol = 1e-12;
constexpr std::int64_t kIterCap = 100000;

struct RhoBounds {
    double lo = 0;
    double hi = 0;
    double mid() const { return 0.5 * (lo + hi); }
};

// Collatz-Wielandt bounds via power iteration on M + I restricted to one SCC.
// The min/max ratio bounds are valid at every iterate, so when certify > 0 the
// loop can stop as soon as rho is certified on one side of that threshold.
RhoBounds scc_rho_bounds(const std::vector<std::vector<double>>& m, std::int64_t& iters,
                         std::vector<double>* vec_out, double certify) {
    std::size_t n = m.size();
    std::vector<double> x(n, 1.0), y(n, 0.0);
    RhoBounds b;
    for (std::int64_t it = 0;; ++it) {
        if (it > kIterCap) throw ConvergenceError("power iteration did not converge");
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = x[i];  // the +I shift
            for (std::size_t j = 0; j < n; ++j) s += m[i][j] * x[j];
            y[i] = s;
            double ratio = s / x[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        double scale = *std::max_element(y.begin(), y.end());
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / scale;
        ++iters;
        b = {lo - 1.0, hi - 1.0};
        if (b.hi - b.lo <= kInnerTol * std::max(1.0, b.hi)) break;
        if (certify > 0 && (b.hi < certify - kRhoTol || b.lo > certify + kRhoTol)) break;
    }
    if (vec_out) *vec_out = x;
    return b;
}

struct SccSystem {
    std::vector<std::vector<int>> members;                  // per SCC with >= 1 internal edge
    std::vector<std::vector<const WEdge*>> internal_edges;  // matching edges
};

SccSystem scc_systems(const WeightedDigraph& g) {
    int count = 0;
    auto comp = strongly_connected_components(g, &count);
    std::vector<bool> has_edge(count, false);
    for (const auto& e : g.edges)
        if (comp[e.from] == comp[e.to]) has_edge[comp[e.from]] = true;
    std::vector<int> remap(count, -1);
    SccSystem sys;
    for (int c = 0; c < count; ++c)
        if (has_edge[c]) {
            remap[c] = static_cast<int>(sys.members.size());
            sys.members.emplace_back();
            sys.internal_edges.emplace_back();
        }
    for (int v = 0; v < g.num_vertices; ++v)
        if (remap[comp[v]] >= 0) sys.members[remap[comp[v]]].push_back(v);
    for (const auto& e : g.edges)
        if (comp[e.from] == comp[e.to]) sys.internal_edges[remap[comp[e.from]]].push_back(&e);
    return sys;
}

// rho(A(t)) over all SCCs, A(t)[u][v] = sum of t^w; t = 1 gives unit counts
RhoBounds rho_at(const SccSystem& sys, double t, std::int64_t& iters, double certify = 0,
                 int* argmax = nullptr, std::vector<std::vector<double>>* vecs = nullptr) {
    RhoBounds best{0, 0};
    double best_mid = -1;
    if (argmax) *argmax = -1;
    for (std::size_t s = 0; s < sys.members.size(); ++s) {
        const auto& mem = sys.members[s];
        std::vector<std::vector<double>> m(mem.size(), std::vector<double>(mem.size(), 0.0));
        std::vector<int> pos_of(1 + *std::max_element(mem.begin(), mem.end()), -1);
        for (std::size_t i = 0; i < mem.size(); ++i) pos_of[mem[i]] = static_cast<int>(i);
        for (const WEdge* e : sys.internal_edges[s])
            m[pos_of[e->from]][pos_of[e->to]] += std::pow(t, double(e->weight));
        std::vector<double> vec;
        RhoBounds b = scc_rho_bounds(m, iters, vecs ? &vec : nullptr, certify);
        if (vecs) vecs->push_back(vec);
        if (b.mid() > best_mid) {
            best_mid = b.mid();
            if (argmax) *argmax = static_cast<int>(s);
        }
        // rho of the whole graph is the max over components; each per-component
        // interval is tight or lies fully on one side of the certify target
        best.lo = std::max(best.lo, b.lo);
        best.hi = std::max(best.hi, b.hi);
    }
    return best;
}

bool rho_below(const RhoBounds& b, double target) { return b.hi < target - kRhoTol; }
bool rho_above(const RhoBounds& b, double target) { return b.lo > target + kRhoTol; }

}  // namespace

GrowthResult growth_rate(const WeightedDigraph& g, GrowthMode mode) {
    WeightedDigraph core = dynamical_core(g);
    if (core.edges.empty()) throw DomainError("growth undefined: empty dynamical core");

    GrowthResult res;
    SccSystem sys = scc_systems(core);

    if (mode == GrowthMode::weighted) {
        if (auto cyc = find_zero_weight_cycle(core)) {
            std::string msg = "weight-0 cycle:";
            for (int v : *cyc) msg += " " + std::to_string(v);
            throw DomainError(msg);
        }
    }

    if (mode == GrowthMode::unit) {
        int argmax = -1;
        RhoBounds b = rho_at(sys, 1.0, res.iterations, 0, &argmax);
        res.lambda = b.mid();
        res.t_star = 1.0 / res.lambda;
        res.max_component = argmax;
        res.residual = b.hi - b.lo;
    } else {
        RhoBounds at_one = rho_at(sys, 1.0, res.iterations, 1.0);
        if (rho_below(at_one, 1.0))
            throw DomainError("growth undefined: unit spectral radius below one on a core");
        if (!rho_above(at_one, 1.0)) {
            // disjoint-cycle cores: counts bounded, growth exactly one
            res.lambda = 1.0;
            res.t_star = 1.0;
            res.residual = std::max(std::abs(at_one.hi - 1.0), std::abs(at_one.lo - 1.0));
        } else {
            double lo = 0.5, hi = 1.0;
            while (!rho_below(rho_at(sys, lo, res.iterations, 1.0), 1.0)) {
                lo *= 0.5;
                if (lo < 1e-300) throw ConvergenceError("bisection bracket collapsed");
            }
            double mid = lo;
            while (true) {
                mid = 0.5 * (lo + hi);
                RhoBounds b = rho_at(sys, mid, res.iterations, 1.0);
                if (!rho_below(b, 1.0) && !rho_above(b, 1.0)) {
                    res.residual = std::max(std::abs(b.hi - 1.0), std::abs(b.lo - 1.0));
                    break;
                }
                if (hi - lo <= 1e-14) {
                    res.residual = std::max(std::abs(b.hi - 1.0), std::abs(b.lo - 1.0));
                    break;
                }
                (rho_above(b, 1.0) ? hi : lo) = mid;
            }
            res.t_star = mid;
            res.lambda = 1.0 / mid;
        }
    }

    // eigenvector certificates at t_star on the dominant component
    {
        std::vector<std::vector<double>> vecs;
        int argmax = -1;
        std::int64_t it2 = 0;
        double t = mode == GrowthMode::unit ? 1.0 : res.t_star;
        rho_at(sys, t, it2, 0, &argmax, &vecs);
        if (argmax >= 0) {
            res.right_vec = vecs[argmax];
            // left vector: same SCC, transposed
            const auto& mem = sys.members[argmax];
            std::vector<int> pos_of(1 + *std::max_element(mem.begin(), mem.end()), -1);
            for (std::size_t i = 0; i < mem.size(); ++i) pos_of[mem[i]] = static_cast<int>(i);
            std::vector<std::vector<double>> m(mem.size(), std::vector<double>(mem.size(), 0.0));
            for (const WEdge* e : sys.internal_edges[argmax])
                m[pos_of[e->to]][pos_of[e->from]] += std::pow(t, double(e->weight));
            std::int64_t it3 = 0;
            scc_rho_bounds(m, it3, &res.left_vec, 0);
            res.max_component = argmax;
        }
    }
    return res;
}

std::string growth_result_to_json(const GrowthResult& r) {
    Json doc;
    doc["lambda"] = r.lambda;
    doc["t_star"] = r.t_star;
    doc["residual"] = r.residual;
    doc["iterations"] = r.iterations;
    if (r.empty_core) doc["empty_core"] = true;
    return doc.dump();
}

std::vector<BigNat> cycle_count_oracle(const WeightedDigraph& g, GrowthMode mode, int n_max,
                                       int cap) {
    if (n_max > cap) throw DomainError("cycle count cap exceeded");
    int n = g.num_vertices;

    if (mode == GrowthMode::weighted) {
        if (auto cyc = find_zero_weight_cycle(g))
            throw DomainError("cycle counts undefined: weight-0 cycle present");
    }

    // topological order of the zero-weight subgraph, for weight-level sweeps
    std::vector<int> order(n);
    {
        std::vector<std::vector<int>> zadj(n);
        std::vector<int> indeg(n, 0);
        if (mode == GrowthMode::weighted)
            for (const auto& e : g.edges)
                if (e.weight == 0) {
                    zadj[e.from].push_back(e.to);
                    ++indeg[e.to];
                }
        std::queue<int> q;
        for (int v = 0; v < n; ++v)
            if (indeg[v] == 0) q.push(v);
        int k = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            order[k++] = v;
            for (int w : zadj[v])
                if (--indeg[w] == 0) q.push(w);
        }
        if (k != n) throw DomainError("cycle counts undefined: weight-0 cycle present");
    }

    std::vector<BigNat> counts(n_max + 1);
    for (int start = 0; start < n; ++start) {
        // table[v][k] = number of walks start -> v of total cost k
        std::vector<std::vector<BigNat>> table(n, std::vector<BigNat>(n_max + 1));
        table[start][0] = BigNat(1);
        for (int k = 0; k <= n_max; ++k) {
            // positive-cost arrivals first, then propagate along 0-cost edges
            if (mode == GrowthMode::weighted) {
                for (int idx = 0; idx < n; ++idx) {
                    int v = order[idx];
                    if (table[v][k].is_zero()) continue;
                    for (const auto& e : g.edges)
                        if (e.from == v && e.weight == 0) table[e.to][k] += table[v][k];
                }
            }
            if (k == n_max) break;
            for (const auto& e : g.edges) {
                std::int64_t c = mode == GrowthMode::unit ? 1 : e.weight;
                if (c == 0) continue;
                if (k + c <= n_max && !table[e.from][k].is_zero())
                    table[e.to][k + c] += table[e.from][k];
            }
        }
        for (int k = 1; k <= n_max; ++k) counts[k] += table[start][k];
    }
    counts.erase(counts.begin());  // c_1..c_{n_max}
    return counts;
}

namespace {

// exact count-matrix power via repeated multiplication
std::vector<std::vector<BigNat>> count_matrix(const WeightedDigraph& g) {
    std::vector<std::vector<BigNat>> a(g.num_vertices, std::vector<BigNat>(g.num_vertices));
    for (const auto& e : g.edges) a[e.from][e.to] += BigNat(1);
    return a;
}

}  // namespace

double row_sum_growth(const WeightedDigraph& g, int n_max) {
    int n = g.num_vertices;
    auto a = count_matrix(g);
    // iterate row vectors: rows[i] = e_i A^n
    std::vector<std::vector<BigNat>> rows(n, std::vector<BigNat>(n));
    for (int i = 0; i < n; ++i) rows[i][i] = BigNat(1);
    for (int step = 0; step < n_max; ++step) {
        for (int i = 0; i < n; ++i) {
            std::vector<BigNat> next(n);
            for (int j = 0; j < n; ++j) {
                if (rows[i][j].is_zero()) continue;
                for (int k = 0; k < n; ++k)
                    if (!a[j][k].is_zero()) next[k] += rows[i][j] * a[j][k];
            }
            rows[i] = std::move(next);
        }
    }
    double best = 0;
    for (int i = 0; i < n; ++i) {
        BigNat sum;
        for (int j = 0; j < n; ++j) sum += rows[i][j];
        if (sum.is_zero()) continue;
        best = std::max(best, std::exp(sum.log() / double(n_max)));
    }
    return best == 0 ? 1.0 : best;
}

double log_slope(const std::vector<BigNat>& values, int lo, int hi) {
    // values[k] corresponds to n = k+1
    hi = std::min(hi, static_cast<int>(values.size()));
    if (hi - lo < 2) return 0.0;
    std::vector<int> nz;
    for (int n = lo; n <= hi; ++n)
        if (!values[n - 1].is_zero()) nz.push_back(n);
    if (nz.size() < 2) return 0.0;

    // support period: a periodic sequence fits a clean line on its residue
    // class, an aperiodic jagged one is smoothed by window sums
    std::int64_t p = 0;
    for (std::size_t i = 1; i < nz.size(); ++i) p = std::gcd(p, std::int64_t(nz[i] - nz[0]));

    if (p <= 1) {
        int mid = (lo + hi) / 2;
        BigNat s1, s2;
        for (int n = lo; n < mid; ++n) s1 += values[n - 1];
        for (int n = mid; n < std::min(hi, 2 * mid - lo); ++n) s2 += values[n - 1];
        if (!s1.is_zero() && !s2.is_zero()) return (s2.log() - s1.log()) / double(mid - lo);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n : nz) {
        double x = n, y = values[n - 1].log();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = double(nz.size());
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace veerflow
