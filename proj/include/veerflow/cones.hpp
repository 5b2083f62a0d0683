#pragma once

#include <string>
#include <vector>

#include "veerflow/bignum.hpp"
#include "veerflow/dynamics.hpp"

namespace veerflow {

using IntVec = std::vector<BigInt>;
using RatVec = std::vector<Rational>;

// Rational polyhedral cone with both descriptions kept canonical: extreme rays
// plus lineality basis, and facet inequalities plus equality normals. All
// vectors are primitive integer vectors; all arithmetic exact.
struct RationalCone {
    int dim = 0;
    std::vector<IntVec> rays;
    std::vector<IntVec> lines;
    std::vector<IntVec> ineqs;
    std::vector<IntVec> eqs;

    bool pointed() const { return lines.empty(); }
    bool full_dim() const { return eqs.empty(); }
    bool trivial() const { return rays.empty() && lines.empty(); }

    static RationalCone from_inequalities(int dim, const std::vector<IntVec>& eqs,
                                          const std::vector<IntVec>& ineqs);
    static RationalCone from_generators(int dim, const std::vector<IntVec>& gens,
                                        const std::vector<IntVec>& lines = {});

    std::string to_json() const;
    static RationalCone from_json(const std::string& text);
};

enum class Membership { interior, boundary, outside };

// exact classification against the facet description; interior means relative
// interior (all facet inequalities strict within the span)
Membership membership(const RationalCone& c, const RatVec& x);

struct RestrictionMap {
    int rows = 0;
    int cols = 0;
    std::vector<RatVec> m;  // rows x cols
    int declared_kernel_dim = -1;  // fixture metadata; -1 when unstated

    RatVec apply(const RatVec& x) const;
    int kernel_dimension() const;  // cols minus exact rank
    // true when no kernel dimension is declared or it matches the computation
    bool kernel_consistent() const {
        return declared_kernel_dim < 0 || declared_kernel_dim == kernel_dimension();
    }
    static RestrictionMap compose(const RestrictionMap& second, const RestrictionMap& first);
};

RationalCone image_cone(const RationalCone& c, const RestrictionMap& r);

// primitive integer basis of {x : row . x = 0 for every row}
std::vector<IntVec> integer_kernel_basis(const std::vector<IntVec>& rows, int dim);

// cone of carried classes {w >= 0 : branch_equations(T) w = 0} in face-weight
// space; throws DomainError past the dimension cap
RationalCone carried_cone(const VeeringTriangulation& T, int dim_cap = 20);
RationalCone cone_from_branch_matrix(const BranchMatrix& B, int num_faces, int dim_cap = 20);

enum class EntropyStatus { interior_ok, zero_weight_cycle, empty_core };

struct EntropySample {
    RatVec xi;
    double lambda = 1.0;
    double ent = 0.0;
    EntropyStatus status = EntropyStatus::interior_ok;
};

const char* entropy_status_name(EntropyStatus s);

// Weighted-growth entropy over a fixed sutured piece: cut along eta, take the
// dynamical core, restrict to the component, then weight by pairing with each
// sampled class. Rational classes are scaled to integers and rescaled back via
// degree -1 homogeneity.
class EntropySampler {
public:
    EntropySampler(const VeeringTriangulation& T, const FlowGraph& phi,
                   const std::vector<std::int64_t>& eta, int component);

    EntropySample sample(const RatVec& xi) const;
    bool empty_core() const { return phi_n_.edges.empty(); }
    const FlowGraph& phi_n() const { return phi_n_; }

private:
    BranchMatrix branch_;
    FlowGraph phi_n_;
};

struct ConvexityReport {
    bool ok = false;
    double max_violation = 0.0;
    int points = 0;
    std::vector<EntropySample> samples;
};

// entropy along the segment (1-t) xi + t xi2 at k evenly spaced points; checks
// ent against the chord and reports the worst violation
ConvexityReport convexity_probe(const EntropySampler& sampler, const RatVec& xi, const RatVec& xi2,
                                int k, double tol = 1e-6);

std::string entropy_samples_to_json(const std::vector<EntropySample>& samples);

}  // namespace veerflow
