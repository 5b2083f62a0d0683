#include "veerflow/track.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace veerflow {

using Json = nlohmann::ordered_json;

std::string TrainTrack::to_json() const {
    Json doc;
    Json br = Json::array();
    for (int b = 0; b < num_branches; ++b) br.push_back(b);
    doc["branches"] = br;
    doc["switches"] = Json::array();
    for (const auto& s : switches) {
        Json js;
        Json a = Json::array(), b = Json::array();
        for (const auto& e : s.side_a) a.push_back(Json::array({e.branch, e.end}));
        for (const auto& e : s.side_b) b.push_back(Json::array({e.branch, e.end}));
        js["sideA"] = a;
        js["sideB"] = b;
        doc["switches"].push_back(js);
    }
    doc["large_ok"] = large_ok;
    return doc.dump(2);
}

TrainTrack TrainTrack::from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed track: ") + e.what());
    }
    TrainTrack t;
    if (!doc.contains("branches") || !doc.contains("switches"))
        throw ParseError("malformed track: missing branches/switches");
    t.num_branches = static_cast<int>(doc["branches"].size());
    for (const auto& js : doc["switches"]) {
        Switch s;
        for (const auto& e : js["sideA"]) s.side_a.push_back({e[0].get<int>(), e[1].get<int>()});
        for (const auto& e : js["sideB"]) s.side_b.push_back({e[0].get<int>(), e[1].get<int>()});
        t.switches.push_back(std::move(s));
    }
    t.large_ok = doc.value("large_ok", true);
    return t;
}

namespace {

struct EndLocation {
    int sw = -1;
    int side = -1;  // 0 = A, 1 = B
    int pos = -1;
};

std::vector<BranchEnd>& side_of(Switch& s, int side) { return side == 0 ? s.side_a : s.side_b; }
const std::vector<BranchEnd>& side_of(const Switch& s, int side) {
    return side == 0 ? s.side_a : s.side_b;
}

// location of every branch end; -1 entries when missing/duplicated
std::vector<std::array<EndLocation, 2>> locate_ends(const TrainTrack& v,
                                                    std::vector<std::string>* problems = nullptr) {
    std::vector<std::array<EndLocation, 2>> loc(v.num_branches);
    std::vector<std::array<int, 2>> seen(v.num_branches, {0, 0});
    for (int si = 0; si < static_cast<int>(v.switches.size()); ++si)
        for (int side = 0; side < 2; ++side) {
            const auto& lst = side_of(v.switches[si], side);
            for (int p = 0; p < static_cast<int>(lst.size()); ++p) {
                const auto& e = lst[p];
                if (e.branch < 0 || e.branch >= v.num_branches || e.end < 0 || e.end > 1) {
                    if (problems) problems->push_back("attachment out of range");
                    continue;
                }
                if (++seen[e.branch][e.end] == 1) loc[e.branch][e.end] = {si, side, p};
            }
        }
    if (problems)
        for (int b = 0; b < v.num_branches; ++b)
            for (int e = 0; e < 2; ++e)
                if (seen[b][e] != 1)
                    problems->push_back("branch " + std::to_string(b) + " end " + std::to_string(e) +
                                        (seen[b][e] == 0 ? " unattached" : " attached more than once"));
    return loc;
}

}  // namespace

TrackReport validate_track(const TrainTrack& v) {
    TrackReport rep;
    auto loc = locate_ends(v, &rep.problems);
    for (std::size_t si = 0; si < v.switches.size(); ++si) {
        if (v.switches[si].side_a.empty() || v.switches[si].side_b.empty())
            rep.problems.push_back("switch " + std::to_string(si) + " has an empty side");
    }
    for (int b = 0; b < v.num_branches; ++b) {
        bool large = true;
        for (int e = 0; e < 2; ++e) {
            const auto& l = loc[b][e];
            if (l.sw < 0) {
                large = false;
                break;
            }
            if (side_of(v.switches[l.sw], l.side).size() != 1) large = false;
        }
        if (large) rep.large_branches.push_back(b);
    }
    rep.ok = rep.problems.empty() && (v.large_ok || rep.large_branches.empty());
    return rep;
}

FoldResult apply_fold(const TrainTrack& v, const FoldMove& move) {
    if (move.over.empty()) throw DomainError("illegal fold: must fold over at least one branch");
    if (move.branch < 0 || move.branch >= v.num_branches)
        throw DomainError("illegal fold: bad branch id");
    for (int c : move.over)
        if (c < 0 || c >= v.num_branches || c == move.branch)
            throw DomainError("illegal fold: bad target branch");

    TrainTrack t = v;
    IntMatrix m(v.num_branches, std::vector<std::int64_t>(v.num_branches, 0));
    for (int i = 0; i < v.num_branches; ++i) m[i][i] = 1;

    for (int target : move.over) {
        auto loc = locate_ends(t);
        // find an end of the folding branch adjacent to an end of the target on
        // the same switch side; deterministic first match
        int fb_end = -1, tg_end = -1;
        EndLocation fl{};
        for (int e = 0; e < 2 && fb_end < 0; ++e) {
            const auto& l = loc[move.branch][e];
            if (l.sw < 0) throw DomainError("illegal fold: branch end unattached");
            const auto& lst = side_of(t.switches[l.sw], l.side);
            for (int d : {-1, 1}) {
                int p = l.pos + d;
                if (p < 0 || p >= static_cast<int>(lst.size())) continue;
                if (lst[p].branch == target) {
                    fb_end = e;
                    tg_end = lst[p].end;
                    fl = l;
                    break;
                }
            }
        }
        if (fb_end < 0)
            throw DomainError("illegal fold: branch " + std::to_string(move.branch) +
                              " is not adjacent to branch " + std::to_string(target) +
                              " at any switch");

        // far end of the target branch
        const auto far = loc[target][1 - tg_end];
        if (far.sw < 0) throw DomainError("illegal fold: target end unattached");

        // detach the folding end, reattach on the side opposite the target's far
        // end at the mirrored position (switch conditions are preserved exactly
        // by this placement)
        auto& from_list = side_of(t.switches[fl.sw], fl.side);
        BranchEnd moved = from_list[fl.pos];
        from_list.erase(from_list.begin() + fl.pos);
        // far location may shift if it sits on the same list after erasure
        auto loc2 = locate_ends(t);
        const auto far2 = loc2[target][1 - tg_end];
        auto& to_list = side_of(t.switches[far2.sw], 1 - far2.side);
        int insert_pos = std::min<int>(far2.pos, static_cast<int>(to_list.size()));
        to_list.insert(to_list.begin() + insert_pos, moved);

        m[move.branch][target] += 1;
    }
    return {std::move(t), std::move(m)};
}

std::string FoldingCycle::to_json() const {
    Json doc;
    doc["track"] = Json::parse(track.to_json());
    doc["moves"] = Json::array();
    for (const auto& mv : moves) {
        Json jm;
        jm["branch"] = mv.branch;
        jm["over"] = mv.over;
        doc["moves"].push_back(jm);
    }
    doc["relabel"] = relabel;
    if (!rays.empty()) doc["rays"] = rays;
    return doc.dump(2);
}

FoldingCycle FoldingCycle::from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed folding cycle: ") + e.what());
    }
    FoldingCycle c;
    if (!doc.contains("track")) throw ParseError("malformed folding cycle: missing track");
    c.track = TrainTrack::from_json(doc["track"].dump());
    if (doc.contains("moves"))
        for (const auto& jm : doc["moves"]) {
            FoldMove mv;
            mv.branch = jm["branch"].get<int>();
            for (const auto& o : jm["over"]) mv.over.push_back(o.get<int>());
            c.moves.push_back(std::move(mv));
        }
    if (doc.contains("relabel"))
        for (const auto& r : doc["relabel"]) c.relabel.push_back(r.get<int>());
    else
        for (int b = 0; b < c.track.num_branches; ++b) c.relabel.push_back(b);
    if (doc.contains("rays"))
        for (const auto& jr : doc["rays"]) {
            std::vector<int> chain;
            for (const auto& x : jr) chain.push_back(x.get<int>());
            c.rays.push_back(std::move(chain));
        }
    return c;
}

namespace {

// loose structural comparison: relabeled final track and initial track must
// have matching switch signatures (side contents as multisets, sides may swap);
// switches touching ray branches live in the truncated ends and are skipped
bool tracks_match(const TrainTrack& final_track, const std::vector<int>& relabel,
                  const TrainTrack& initial, const std::vector<bool>& ray) {
    auto signature = [&ray](const TrainTrack& t, const std::vector<int>* map) {
        std::multiset<std::pair<std::multiset<std::pair<int, int>>, std::multiset<std::pair<int, int>>>>
            sig;
        for (const auto& s : t.switches) {
            bool skip = false;
            for (const auto& e : s.side_a) skip |= ray[e.branch];
            for (const auto& e : s.side_b) skip |= ray[e.branch];
            if (skip) continue;
            std::multiset<std::pair<int, int>> a, b;
            for (const auto& e : s.side_a) a.insert({map ? (*map)[e.branch] : e.branch, e.end});
            for (const auto& e : s.side_b) b.insert({map ? (*map)[e.branch] : e.branch, e.end});
            if (b < a) std::swap(a, b);
            sig.insert({a, b});
        }
        return sig;
    };
    return signature(final_track, &relabel) == signature(initial, nullptr);
}

}  // namespace

TransitionGraph transition_graph(const FoldingCycle& cycle) {
    int nb = cycle.track.num_branches;
    if (static_cast<int>(cycle.relabel.size()) != nb)
        throw DomainError("relabeling has wrong size");

    TransitionGraph tg;
    tg.ray_branch.assign(nb, false);
    tg.truncated.assign(nb, false);
    for (const auto& chain : cycle.rays) {
        for (std::size_t i = 0; i < chain.size(); ++i) {
            int b = chain[i];
            if (b < 0 || b >= nb || tg.ray_branch[b])
                throw DomainError("ray chains must be disjoint branch lists");
            tg.ray_branch[b] = true;
            if (i + 1 == chain.size()) tg.truncated[b] = true;
        }
    }

    // relabel must be a bijection of core branches onto core branches
    {
        std::vector<bool> hit(nb, false);
        for (int b = 0; b < nb; ++b) {
            if (tg.ray_branch[b]) continue;
            int r = cycle.relabel[b];
            if (r < 0 || r >= nb || hit[r] || tg.ray_branch[r])
                throw DomainError("relabeling is not a bijection on core branches");
            hit[r] = true;
        }
    }

    // compose the elementary moves
    TrainTrack cur = cycle.track;
    IntMatrix w(nb, std::vector<std::int64_t>(nb, 0));
    for (int i = 0; i < nb; ++i) w[i][i] = 1;
    for (const auto& mv : cycle.moves) {
        auto res = apply_fold(cur, mv);
        cur = std::move(res.track);
        // w = w * m, m elementary: only row mv.branch differs from identity
        for (int i = 0; i < nb; ++i) {
            std::int64_t coef = w[i][mv.branch];
            if (coef == 0) continue;
            for (int target : mv.over) w[i][target] += coef;
        }
    }

    if (!tracks_match(cur, cycle.relabel, cycle.track, tg.ray_branch))
        throw DomainError("relabeling bijection inconsistent with track structure");

    // apply the relabeling, then override ray rows with the end shift
    tg.w1.assign(nb, std::vector<std::int64_t>(nb, 0));
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            if (w[i][j] != 0) tg.w1[i][cycle.relabel[j]] += w[i][j];
    for (const auto& chain : cycle.rays)
        for (std::size_t i = 0; i < chain.size(); ++i) {
            std::fill(tg.w1[chain[i]].begin(), tg.w1[chain[i]].end(), 0);
            if (i + 1 < chain.size()) tg.w1[chain[i]][chain[i + 1]] = 1;
        }

    tg.gf.num_vertices = nb;
    tg.simple_row.assign(nb, false);
    for (int i = 0; i < nb; ++i) {
        std::int64_t row_sum = 0;
        for (int j = 0; j < nb; ++j) {
            row_sum += tg.w1[i][j];
            for (std::int64_t k = 0; k < tg.w1[i][j]; ++k) tg.gf.edges.push_back({i, j, 1});
        }
        tg.simple_row[i] = row_sum == 1;
    }
    return tg;
}

std::vector<std::vector<BigNat>> transition_power(const IntMatrix& w1, int n) {
    int nb = static_cast<int>(w1.size());
    std::vector<std::vector<BigNat>> r(nb, std::vector<BigNat>(nb)), base(nb, std::vector<BigNat>(nb));
    for (int i = 0; i < nb; ++i) {
        r[i][i] = BigNat(1);
        for (int j = 0; j < nb; ++j) base[i][j] = BigNat(std::uint64_t(w1[i][j]));
    }
    for (int step = 0; step < n; ++step) {
        std::vector<std::vector<BigNat>> next(nb, std::vector<BigNat>(nb));
        for (int i = 0; i < nb; ++i)
            for (int k = 0; k < nb; ++k) {
                if (r[i][k].is_zero()) continue;
                for (int j = 0; j < nb; ++j)
                    if (!base[k][j].is_zero()) next[i][j] += r[i][k] * base[k][j];
            }
        r = std::move(next);
    }
    return r;
}

GrowthResult gf_growth(const TransitionGraph& tg) {
    WeightedDigraph core = dynamical_core(tg.gf);
    if (core.edges.empty()) {
        GrowthResult r;
        r.lambda = 1.0;
        r.t_star = 1.0;
        r.empty_core = true;  // translation case
        return r;
    }
    return growth_rate(tg.gf, GrowthMode::unit);
}

bool satisfies_switch_conditions(const TrainTrack& v, const std::vector<std::int64_t>& c) {
    if (static_cast<int>(c.size()) != v.num_branches)
        throw DomainError("carried weights have wrong dimension");
    for (const auto& s : v.switches) {
        std::int64_t a = 0, b = 0;
        for (const auto& e : s.side_a) a += c[e.branch];
        for (const auto& e : s.side_b) b += c[e.branch];
        if (a != b) return false;
    }
    return true;
}

IntersectionGrowth intersection_growth(const FoldingCycle& cycle,
                                       const std::vector<std::int64_t>& carried,
                                       const std::vector<std::int64_t>& transverse, int n_max,
                                       int cap) {
    if (n_max > cap) throw DomainError("intersection growth cap exceeded");
    if (!satisfies_switch_conditions(cycle.track, carried))
        throw DomainError("carried curve violates the switch conditions");
    int nb = cycle.track.num_branches;
    if (static_cast<int>(transverse.size()) != nb)
        throw DomainError("transverse counts have wrong dimension");
    auto tg = transition_graph(cycle);

    IntersectionGrowth ig;
    // row = c^T w^(n), accumulated iteratively
    std::vector<BigNat> row(nb);
    for (int i = 0; i < nb; ++i) row[i] = BigNat(std::uint64_t(carried[i]));
    std::vector<std::vector<BigNat>> base(nb, std::vector<BigNat>(nb));
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) base[i][j] = BigNat(std::uint64_t(tg.w1[i][j]));
    for (int n = 1; n <= n_max; ++n) {
        std::vector<BigNat> next(nb);
        for (int i = 0; i < nb; ++i) {
            if (row[i].is_zero()) continue;
            for (int j = 0; j < nb; ++j)
                if (!base[i][j].is_zero()) next[j] += row[i] * base[i][j];
        }
        row = std::move(next);
        BigNat in;
        for (int j = 0; j < nb; ++j)
            if (transverse[j] > 0 && !row[j].is_zero())
                in += row[j] * BigNat(std::uint64_t(transverse[j]));
        ig.counts.push_back(in);
    }
    ig.slope = log_slope(ig.counts, n_max / 2, n_max);
    return ig;
}

}  // namespace veerflow
