#include "veerflow/cones.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace veerflow {

using Json = nlohmann::ordered_json;

namespace {

Rational dot(const IntVec& a, const RatVec& x) {
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i], BigInt(1)) * x[i];
    return s;
}

BigInt idot(const IntVec& a, const IntVec& b) {
    BigInt s;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IntVec primitive(IntVec v) {
    BigInt g(0);
    for (const auto& x : v) g = BigInt::gcd(g, x);
    if (g.is_zero() || g == BigInt(1)) return v;
    for (auto& x : v) x = x / g;
    return v;
}

IntVec clear_denominators(const RatVec& v) {
    BigInt lcm(1);
    for (const auto& r : v) {
        BigInt g = BigInt::gcd(lcm, r.den());
        lcm = lcm / g * r.den();
    }
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].num() * (lcm / v[i].den());
    return primitive(std::move(out));
}

// reduced row echelon form over the rationals; returns pivot columns
std::vector<int> rref(std::vector<RatVec>& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int sel = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[r], m[sel]);
        Rational inv = Rational(1) / m[r][c];
        for (int j = c; j < cols; ++j) m[r][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::vector<RatVec> to_rat_rows(const std::vector<IntVec>& rows) {
    std::vector<RatVec> m;
    for (const auto& r : rows) {
        RatVec row(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) row[i] = Rational(r[i], BigInt(1));
        m.push_back(std::move(row));
    }
    return m;
}

int rank_of(const std::vector<IntVec>& rows) {
    auto m = to_rat_rows(rows);
    return static_cast<int>(rref(m).size());
}

// integer basis of the kernel of the row space
std::vector<IntVec> kernel_basis(const std::vector<IntVec>& rows, int dim) {
    auto m = to_rat_rows(rows);
    auto pivots = rref(m);
    std::vector<bool> is_pivot(dim, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<IntVec> basis;
    for (int c = 0; c < dim; ++c) {
        if (is_pivot[c]) continue;
        RatVec v(dim, Rational(0));
        v[c] = Rational(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][c];
        basis.push_back(clear_denominators(v));
    }
    return basis;
}

// pointed double description for {b : N b >= 0} with ker N = 0.
// returns extreme rays as primitive integer vectors
std::vector<IntVec> pointed_dd(const std::vector<IntVec>& n_rows, int d) {
    if (d == 0) return {};
    // initial simplicial subsystem: d independent rows
    std::vector<int> chosen;
    {
        std::vector<RatVec> acc;
        for (int i = 0; i < static_cast<int>(n_rows.size()) && static_cast<int>(chosen.size()) < d;
             ++i) {
            auto test = acc;
            RatVec row(d);
            for (int j = 0; j < d; ++j) row[j] = Rational(n_rows[i][j], BigInt(1));
            test.push_back(row);
            auto copy = test;
            if (static_cast<int>(rref(copy).size()) == static_cast<int>(test.size())) {
                acc = test;
                chosen.push_back(i);
            }
        }
        if (static_cast<int>(chosen.size()) != d)
            throw DomainError("double description: inequality system is rank deficient");
    }

    // rays of the simplicial cone: scaled columns of the inverse
    std::vector<IntVec> rays;
    {
        std::vector<RatVec> aug(d, RatVec(2 * d, Rational(0)));
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) aug[i][j] = Rational(n_rows[chosen[i]][j], BigInt(1));
            aug[i][d + i] = Rational(1);
        }
        rref(aug);
        for (int j = 0; j < d; ++j) {
            RatVec col(d);
            for (int i = 0; i < d; ++i) col[i] = aug[i][d + j];
            rays.push_back(clear_denominators(col));
        }
    }

    std::vector<int> processed = chosen;
    auto tight_set = [&](const IntVec& r) {
        std::vector<int> t;
        for (int idx : processed)
            if (idot(n_rows[idx], r).is_zero()) t.push_back(idx);
        return t;
    };

    for (int i = 0; i < static_cast<int>(n_rows.size()); ++i) {
        if (std::find(processed.begin(), processed.end(), i) != processed.end()) continue;
        const IntVec& h = n_rows[i];
        std::vector<IntVec> pos, zero, neg;
        std::vector<BigInt> val;
        for (auto& r : rays) {
            BigInt v = idot(h, r);
            if (v.sign() > 0)
                pos.push_back(r);
            else if (v.sign() < 0)
                neg.push_back(r);
            else
                zero.push_back(r);
        }
        std::vector<IntVec> next = pos;
        for (auto& z : zero) next.push_back(z);
        for (const auto& rp : pos)
            for (const auto& rn : neg) {
                // adjacency: common tight rows span a (d-2)-dimensional face
                auto tp = tight_set(rp), tn = tight_set(rn);
                std::vector<int> common;
                std::set_intersection(tp.begin(), tp.end(), tn.begin(), tn.end(),
                                      std::back_inserter(common));
                std::vector<IntVec> sub;
                for (int idx : common) sub.push_back(n_rows[idx]);
                if (rank_of(sub) != d - 2) continue;
                IntVec comb(d);
                BigInt a = idot(h, rp), b = idot(h, rn);
                for (int j = 0; j < d; ++j) comb[j] = a * rn[j] - b * rp[j];
                next.push_back(primitive(std::move(comb)));
            }
        rays = std::move(next);
        processed.push_back(i);
        std::sort(processed.begin(), processed.end());
    }

    // dedupe
    std::sort(rays.begin(), rays.end(), [](const IntVec& a, const IntVec& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            int c = BigInt::cmp(a[i], b[i]);
            if (c != 0) return c < 0;
        }
        return false;
    });
    rays.erase(std::unique(rays.begin(), rays.end(),
                           [](const IntVec& a, const IntVec& b) {
                               for (std::size_t i = 0; i < a.size(); ++i)
                                   if (!(a[i] == b[i])) return false;
                               return true;
                           }),
               rays.end());
    return rays;
}

struct DdResult {
    std::vector<IntVec> lines;
    std::vector<IntVec> rays;
};

// cone {x : E x = 0, A x >= 0} as lineality basis plus extreme rays
DdResult dd_ineq(int dim, const std::vector<IntVec>& eqs, const std::vector<IntVec>& ineqs) {
    DdResult out;
    // feasible subspace
    std::vector<IntVec> p = eqs.empty() ? std::vector<IntVec>() : kernel_basis(eqs, dim);
    if (eqs.empty()) {
        for (int i = 0; i < dim; ++i) {
            IntVec e(dim, BigInt(0));
            e[i] = BigInt(1);
            p.push_back(std::move(e));
        }
    }
    int k = static_cast<int>(p.size());
    if (k == 0) return out;

    // inequalities in subspace coordinates
    std::vector<IntVec> m;
    for (const auto& a : ineqs) {
        IntVec row(k);
        for (int j = 0; j < k; ++j) row[j] = idot(a, p[j]);
        m.push_back(primitive(std::move(row)));
    }

    // lineality within the subspace
    auto lu = kernel_basis(m, k);
    for (const auto& l : lu) {
        IntVec x(dim, BigInt(0));
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < dim; ++i) x[i] += l[j] * p[j][i];
        out.lines.push_back(primitive(std::move(x)));
    }

    // complement of the lineality: standard basis vectors extending lu
    std::vector<IntVec> q;
    {
        std::vector<IntVec> acc = lu;
        for (int c = 0; c < k; ++c) {
            IntVec e(k, BigInt(0));
            e[c] = BigInt(1);
            acc.push_back(e);
            if (rank_of(acc) == static_cast<int>(acc.size()))
                q.push_back(std::move(e));
            else
                acc.pop_back();
        }
    }
    int d = static_cast<int>(q.size());
    if (d == 0) return out;

    std::vector<IntVec> n_rows;
    for (const auto& row : m) {
        IntVec nr(d);
        for (int j = 0; j < d; ++j) nr[j] = idot(row, q[j]);
        n_rows.push_back(std::move(nr));
    }

    for (const auto& b : pointed_dd(n_rows, d)) {
        IntVec u(k, BigInt(0));
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < k; ++i) u[i] += b[j] * q[j][i];
        IntVec x(dim, BigInt(0));
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < dim; ++i) x[i] += u[j] * p[j][i];
        x = primitive(std::move(x));
        bool zero = std::all_of(x.begin(), x.end(), [](const BigInt& v) { return v.is_zero(); });
        if (!zero) out.rays.push_back(std::move(x));
    }
    return out;
}

}  // namespace

std::vector<IntVec> integer_kernel_basis(const std::vector<IntVec>& rows, int dim) {
    return kernel_basis(rows, dim);
}

RationalCone RationalCone::from_inequalities(int dim, const std::vector<IntVec>& eqs,
                                             const std::vector<IntVec>& ineqs) {
    RationalCone c;
    c.dim = dim;
    auto primal = dd_ineq(dim, eqs, ineqs);
    c.rays = primal.rays;
    c.lines = primal.lines;
    // canonical facet description via the polar
    auto polar = dd_ineq(dim, c.lines, c.rays);
    c.eqs = polar.lines;
    c.ineqs = polar.rays;
    return c;
}

RationalCone RationalCone::from_generators(int dim, const std::vector<IntVec>& gens,
                                           const std::vector<IntVec>& lines) {
    RationalCone c;
    c.dim = dim;
    auto polar = dd_ineq(dim, lines, gens);
    c.eqs = polar.lines;
    c.ineqs = polar.rays;
    auto primal = dd_ineq(dim, c.eqs, c.ineqs);
    c.lines = primal.lines;
    c.rays = primal.rays;
    return c;
}

Membership membership(const RationalCone& c, const RatVec& x) {
    if (static_cast<int>(x.size()) != c.dim) throw DomainError("membership: dimension mismatch");
    for (const auto& e : c.eqs)
        if (!dot(e, x).is_zero()) return Membership::outside;
    bool strict = true;
    for (const auto& a : c.ineqs) {
        Rational v = dot(a, x);
        if (v.sign() < 0) return Membership::outside;
        if (v.sign() == 0) strict = false;
    }
    return strict ? Membership::interior : Membership::boundary;
}

RatVec RestrictionMap::apply(const RatVec& x) const {
    if (static_cast<int>(x.size()) != cols) throw DomainError("restriction map: dimension mismatch");
    RatVec y(rows, Rational(0));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) y[i] += m[i][j] * x[j];
    return y;
}

int RestrictionMap::kernel_dimension() const {
    std::vector<RatVec> rows_copy = m;
    return cols - static_cast<int>(rref(rows_copy).size());
}

RestrictionMap RestrictionMap::compose(const RestrictionMap& second, const RestrictionMap& first) {
    if (second.cols != first.rows) throw DomainError("restriction map composition mismatch");
    RestrictionMap r;
    r.rows = second.rows;
    r.cols = first.cols;
    r.m.assign(r.rows, RatVec(r.cols, Rational(0)));
    for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j)
            for (int k = 0; k < second.cols; ++k) r.m[i][j] += second.m[i][k] * first.m[k][j];
    return r;
}

RationalCone image_cone(const RationalCone& c, const RestrictionMap& r) {
    if (r.cols != c.dim) throw DomainError("image_cone: dimension mismatch");
    std::vector<IntVec> gens, lines;
    auto push_image = [&](const IntVec& v, std::vector<IntVec>& dst) {
        RatVec x(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) x[i] = Rational(v[i], BigInt(1));
        RatVec y = r.apply(x);
        IntVec iy = clear_denominators(y);
        if (std::any_of(iy.begin(), iy.end(), [](const BigInt& b) { return !b.is_zero(); }))
            dst.push_back(std::move(iy));
    };
    for (const auto& v : c.rays) push_image(v, gens);
    for (const auto& v : c.lines) push_image(v, lines);
    return RationalCone::from_generators(r.rows, gens, lines);
}

RationalCone cone_from_branch_matrix(const BranchMatrix& B, int num_faces, int dim_cap) {
    if (num_faces > dim_cap)
        throw DomainError("carried cone dimension " + std::to_string(num_faces) +
                          " over the configured cap " + std::to_string(dim_cap));
    std::vector<IntVec> eqs;
    for (const auto& row : B) {
        IntVec r(num_faces);
        for (int j = 0; j < num_faces; ++j) r[j] = BigInt(row[j]);
        eqs.push_back(primitive(std::move(r)));
    }
    std::vector<IntVec> orthant;
    for (int i = 0; i < num_faces; ++i) {
        IntVec e(num_faces, BigInt(0));
        e[i] = BigInt(1);
        orthant.push_back(std::move(e));
    }
    return RationalCone::from_inequalities(num_faces, eqs, orthant);
}

RationalCone carried_cone(const VeeringTriangulation& T, int dim_cap) {
    return cone_from_branch_matrix(branch_equations(T), T.num_faces, dim_cap);
}

namespace {

Json int_to_json(const BigInt& v) {
    if (v.fits_i64()) return Json(v.to_i64());
    return Json(v.to_string());
}

BigInt int_from_json(const Json& j) {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    return BigInt::from_string(j.get<std::string>());
}

Json vec_to_json(const IntVec& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(Json::array({int_to_json(x), 1}));
    return out;
}

IntVec vec_from_json(const Json& j) {
    IntVec v;
    for (const auto& p : j) {
        if (p.is_array()) {
            BigInt num = int_from_json(p[0]);
            BigInt den = p.size() > 1 ? int_from_json(p[1]) : BigInt(1);
            if (!(den == BigInt(1)))
                throw ParseError("cone vectors must be integral (use a common denominator)");
            v.push_back(num);
        } else {
            v.push_back(int_from_json(p));
        }
    }
    return v;
}

}  // namespace

std::string RationalCone::to_json() const {
    Json doc;
    doc["dim"] = dim;
    Json r = Json::array(), i = Json::array();
    for (const auto& v : rays) r.push_back(vec_to_json(v));
    for (const auto& v : ineqs) i.push_back(vec_to_json(v));
    doc["rays"] = r;
    doc["ineqs"] = i;
    if (!lines.empty()) {
        Json l = Json::array();
        for (const auto& v : lines) l.push_back(vec_to_json(v));
        doc["lines"] = l;
    }
    if (!eqs.empty()) {
        Json e = Json::array();
        for (const auto& v : eqs) e.push_back(vec_to_json(v));
        doc["eqs"] = e;
    }
    doc["pointed"] = pointed();
    doc["full_dim"] = full_dim();
    return doc.dump(2);
}

RationalCone RationalCone::from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed cone: ") + e.what());
    }
    RationalCone c;
    c.dim = doc["dim"].get<int>();
    for (const auto& v : doc["rays"]) c.rays.push_back(vec_from_json(v));
    for (const auto& v : doc["ineqs"]) c.ineqs.push_back(vec_from_json(v));
    if (doc.contains("lines"))
        for (const auto& v : doc["lines"]) c.lines.push_back(vec_from_json(v));
    if (doc.contains("eqs"))
        for (const auto& v : doc["eqs"]) c.eqs.push_back(vec_from_json(v));
    return c;
}

const char* entropy_status_name(EntropyStatus s) {
    switch (s) {
        case EntropyStatus::interior_ok: return "interior-ok";
        case EntropyStatus::zero_weight_cycle: return "zero-weight-cycle";
        case EntropyStatus::empty_core: return "empty-core";
    }
    return "?";
}

EntropySampler::EntropySampler(const VeeringTriangulation& T, const FlowGraph& phi,
                               const std::vector<std::int64_t>& eta, int component)
    : branch_(branch_equations(T)) {
    FlowGraph phi_eta = dynamical_core(cut(phi, eta, branch_));
    auto comps = cut_components(T, eta, branch_);
    phi_n_ = restrict_phi_n(T, phi_eta, comps, component);
}

EntropySample EntropySampler::sample(const RatVec& xi) const {
    EntropySample s;
    s.xi = xi;
    if (phi_n_.edges.empty()) {
        s.status = EntropyStatus::empty_core;
        return s;
    }
    // scale to integers; ent(k xi) = ent(xi) / k undoes the scaling
    BigInt lcm(1);
    for (const auto& r : xi) {
        BigInt g = BigInt::gcd(lcm, r.den());
        lcm = lcm / g * r.den();
    }
    std::vector<std::int64_t> xi_int(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        BigInt v = xi[i].num() * (lcm / xi[i].den());
        if (!v.fits_i64()) throw DomainError("entropy sample class too large");
        xi_int[i] = v.to_i64();
        if (xi_int[i] < 0) throw DomainError("entropy sample class must be carried (nonnegative)");
    }
    if (!satisfies_branch_equations(branch_, xi_int))
        throw DomainError("entropy sample class violates the branch equations");
    double scale = lcm.to_double();

    WeightedDigraph g = pairing_weighting(phi_n_, xi_int);
    try {
        GrowthResult r = growth_rate(g, GrowthMode::weighted);
        s.ent = scale * std::log(r.lambda);
        s.lambda = std::exp(s.ent);
        s.status = EntropyStatus::interior_ok;
    } catch (const DomainError& e) {
        if (std::string(e.what()).find("weight-0 cycle") != std::string::npos) {
            s.status = EntropyStatus::zero_weight_cycle;
        } else if (std::string(e.what()).find("empty") != std::string::npos) {
            s.status = EntropyStatus::empty_core;
        } else {
            throw;
        }
    }
    return s;
}

ConvexityReport convexity_probe(const EntropySampler& sampler, const RatVec& xi, const RatVec& xi2,
                                int k, double tol) {
    if (k < 2) throw DomainError("convexity probe needs at least two points");
    if (xi.size() != xi2.size()) throw DomainError("segment endpoints have different dimensions");
    ConvexityReport rep;
    rep.points = k;
    for (int i = 0; i < k; ++i) {
        Rational t(i, k - 1);
        RatVec p(xi.size());
        for (std::size_t j = 0; j < xi.size(); ++j)
            p[j] = (Rational(1) - t) * xi[j] + t * xi2[j];
        EntropySample s = sampler.sample(p);
        if (s.status != EntropyStatus::interior_ok)
            throw DomainError(std::string("convexity probe sample not interior-ok: ") +
                              entropy_status_name(s.status));
        rep.samples.push_back(std::move(s));
    }
    double e0 = rep.samples.front().ent, e1 = rep.samples.back().ent;
    rep.max_violation = 0;
    for (int i = 0; i < k; ++i) {
        double t = double(i) / double(k - 1);
        double chord = (1.0 - t) * e0 + t * e1;
        rep.max_violation = std::max(rep.max_violation, rep.samples[i].ent - chord);
    }
    rep.ok = rep.max_violation <= tol;
    return rep;
}

std::string entropy_samples_to_json(const std::vector<EntropySample>& samples) {
    std::string out;
    for (const auto& s : samples) {
        Json line;
        Json xi = Json::array();
        for (const auto& r : s.xi) {
            if (r.den() == BigInt(1))
                xi.push_back(r.num().fits_i64() ? Json(r.num().to_i64()) : Json(r.num().to_string()));
            else
                xi.push_back(r.to_string());
        }
        line["xi"] = xi;
        line["lambda"] = s.lambda;
        line["ent"] = s.ent;
        line["status"] = entropy_status_name(s.status);
        out += line.dump();
        out += "\n";
    }
    return out;
}

}  // namespace veerflow
