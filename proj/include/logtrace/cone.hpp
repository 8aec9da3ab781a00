#pragma once

#include "logtrace/lattice.hpp"

#include <set>
#include <string>
#include <vector>

namespace logtrace {

// Ray generating set of {x : <ineq_i, x> >= 0}. Lineality directions are
// returned separately; `rays` is the minimal extreme-ray set modulo lineality.
struct RayDescription {
    Mat lineality;  // basis, Hermite form
    Mat rays;       // primitive, canonically sorted
};

RayDescription dual_description(const Mat& inequalities, int ambient_rank);

// Rational polyhedral cone with both descriptions kept in canonical form.
// Ray lists include +/- pairs for lineality directions, so a Cone value is
// equality-comparable by its ray matrix alone.
class Cone {
  public:
    static Cone from_rays(const Mat& generators, int ambient_rank);

    int ambient_rank() const { return ambient_rank_; }
    const Mat& rays() const { return rays_; }
    const Mat& facet_normals() const { return facet_normals_; }
    bool pointed() const { return pointed_; }
    int dim() const { return dim_; }
    bool is_simplicial() const;

    bool contains(const Vec& v) const;
    bool in_relative_interior(const Vec& v) const;

    // ray-index subsets of all faces (including the empty set for {0} and
    // the full set), closed under intersection
    std::vector<std::vector<int>> face_ray_sets() const;
    std::vector<Cone> faces() const;
    std::vector<Cone> facets() const;

    // face of this cone with exactly the given rays; throws if absent
    Cone face_from_rays(const Mat& rays) const;

    bool operator==(const Cone& o) const {
        return ambient_rank_ == o.ambient_rank_ && rays_ == o.rays_;
    }
    bool operator<(const Cone& o) const { return rays_ < o.rays_; }

    std::string key() const;  // canonical textual form, used as point ids

  private:
    int ambient_rank_ = 0;
    Mat rays_;
    Mat facet_normals_;
    bool pointed_ = true;
    int dim_ = 0;
};

Cone dualize(const Cone& c);

// index of the sublattice spanned by the rays inside the ambient lattice
// restricted to span(C); requires a simplicial cone
Int multiplicity(const Cone& c);

// nonzero lattice points of the half-open fundamental parallelepiped
// {sum t_i r_i : 0 <= t_i < 1} of a simplicial cone, graded-lex sorted
Mat parallelepiped_points(const Cone& c);

// A finite fan: maximal cones plus all their faces, pairwise intersecting
// in common faces. Construction verifies the fan condition.
class ConeComplex {
  public:
    static ConeComplex from_maximal(std::vector<Cone> maximal, int ambient_rank);

    int ambient_rank() const { return ambient_rank_; }
    const std::vector<Cone>& maximal_cones() const { return maximal_; }
    // every face of every member, zero cone excluded, canonically sorted
    const std::vector<Cone>& all_faces() const { return faces_; }
    // all rays of the complex, canonically sorted (this is the ray indexing
    // used by the model file format)
    const Mat& rays() const { return rays_; }

    bool supports(const Vec& v) const;
    bool has_face(const Cone& f) const;

    // smallest cone containing v; v lies in its relative interior
    const Cone& carrier(const Vec& v) const;

    bool all_simplicial() const;
    bool all_unimodular() const;

    bool operator==(const ConeComplex& o) const {
        return ambient_rank_ == o.ambient_rank_ && maximal_ == o.maximal_;
    }

  private:
    int ambient_rank_ = 0;
    std::vector<Cone> maximal_;
    std::vector<Cone> faces_;
    Mat rays_;
};

// Stellar subdivision at the ray through v (v must be nonzero and lie in
// the support). Cones not containing the carrier of v survive unchanged.
ConeComplex stellar_subdivide(const ConeComplex& k, const Vec& v);

// smallest cone of `older` containing the cone `c` (via an interior point)
const Cone& carrier_cone(const ConeComplex& older, const Cone& c);

struct ResolutionResult {
    ConeComplex complex;
    Mat trail;  // subdivision centers in order
};

// Refine until every maximal cone is simplicial and unimodular. Centers are
// chosen as the parallelepiped point of minimal coordinate sum (graded-lex
// tie-break) across all offending cones.
ResolutionResult resolve_complex(const ConeComplex& k);

}  // namespace logtrace
