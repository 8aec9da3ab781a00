#pragma once

#include "logtrace/cone.hpp"

#include <optional>

namespace logtrace {

// Finitely generated submonoid of an integer lattice. Values are immutable;
// the saturation flag and minimal generating set are computed on demand.
class AffineMonoid {
  public:
    // drops zero vectors, dedups and sorts generators graded-lex
    static AffineMonoid from_generators(const Mat& generators, int ambient_rank);

    int ambient_rank() const { return ambient_rank_; }
    const Mat& generators() const { return generators_; }
    const Lattice& gp() const { return gp_; }
    const Cone& cone() const { return cone_; }
    const Lattice& units() const { return units_; }

    int dim() const { return gp_.rank(); }
    bool is_trivial() const { return generators_.empty(); }
    bool is_sharp() const { return units_.is_zero(); }
    bool is_saturated() const;

    // exact membership by bounded coefficient search (the cone and group
    // memberships prune first)
    bool contains(const Vec& v) const;

    // unique minimal generating set; requires a sharp monoid
    const Mat& minimal_generators() const;

    // strictly positive grading on the sharp part: sum of facet normals
    const Vec& grading() const { return grading_; }

    bool operator==(const AffineMonoid& o) const {
        return ambient_rank_ == o.ambient_rank_ && generators_ == o.generators_;
    }

  private:
    friend AffineMonoid make_known_saturated(const Mat&, int);

    int ambient_rank_ = 0;
    Mat generators_;
    Lattice gp_{0};
    Cone cone_;
    Lattice units_{0};
    Vec grading_;
    mutable std::optional<bool> saturated_;
    mutable std::optional<Mat> minimal_;
};

// Hilbert basis of (pointed cone) intersect Z^k, ambient lattice standard.
// Works by triangulating and enumerating fundamental parallelepipeds, then
// discarding reducible candidates.
Mat hilbert_basis(const Cone& pointed_cone);

// P^sat = cone(P) intersect gp(P), presented by a Hilbert-style generating
// set (plus +/- unit basis vectors when P is not sharp)
AffineMonoid saturate(const AffineMonoid& p);

struct SharpeningResult {
    Lattice units;       // P intersect -P, exact
    AffineMonoid sharp;  // image of P in torsion-free quotient coordinates
    TorsionFreeQuotient projection;
};

SharpeningResult units_and_sharpen(const AffineMonoid& p);

// A face of a sharp fs monoid: the supporting functional plus the indices
// of the generators it contains. The complement of a face is a prime ideal
// of height dim(P) - dim(face).
struct FaceHandle {
    Vec supporting_functional;
    std::vector<int> member_generator_indices;
    int dim = 0;

    int prime_height(const AffineMonoid& p) const { return p.dim() - dim; }
};

// complete face lattice including {0} and P itself; requires P sharp and
// saturated
std::vector<FaceHandle> faces(const AffineMonoid& p);

// image of P in (gp(P)/F^gp)/torsion together with the torsion order of
// gp(P)/F^gp
std::pair<AffineMonoid, Int> localize_sharpen(const AffineMonoid& p, const FaceHandle& f);

// multiplicity of e along the height-1 prime complementary to `facet`
Int saturation_index(const AffineMonoid& p, const Vec& e, const FaceHandle& facet);

// e avoids every proper face of P
bool is_vertical(const AffineMonoid& p, const Vec& e);

// minimal generators form a lattice basis of gp(P)
bool is_free(const AffineMonoid& p);

// gcd(d, prime-to-p part of the content of e in gp(P)); bounds the degree
// of the induced stratum cover after adjoining a d-th root
Int cover_degree_bound(const AffineMonoid& p, const Vec& e, const Int& d, const Int& residue_char);

// Q = P +_N (1/d)N presented over rank(P)+1 coordinates, with the quotient
// data of Q^gp and the exact saturation membership test.
struct PushoutPresentation {
    AffineMonoid base;
    Vec uniformizer_image;
    Int root_order;
    Mat ambient_generators;  // generators of Q in Z^{n+1}
    Lattice relation;        // rank-1 lattice spanned by (e, -d)
    Mat gp_basis;            // rows: basis of gp(P)
    Vec e_gp;                // e in gp coordinates
    QuotientGroup quotient;  // Q^gp presented on Z^{rank+1}

    int class_length() const { return static_cast<int>(e_gp.size()) + 1; }
    // class representatives are (p in gp coordinates, m); normal form has
    // m in [0, d)
    Vec normalize(Vec cls) const;
    Vec class_add(const Vec& a, const Vec& b) const;
    // x in Q^sat iff d p + m e lies in P (P saturated)
    bool saturation_contains(const Vec& cls) const;
    // grading w(d p + m e); zero exactly on units and torsion
    Int degree(const Vec& cls) const;
};

PushoutPresentation pushout_root(const AffineMonoid& p, const Vec& e, const Int& d);

// Brute-force check, truncated at `degree_bound`, that Q^sat coincides with
// the submonoid generated by the units, the d-torsion of Q^gp and the
// radical of the ideal generated by the image of the maximal ideal of P.
// Requires P sharp and saturated.
bool lemma33_oracle(const AffineMonoid& p, const Vec& e, const Int& d, const Int& degree_bound);

// Hilbert-basis presentation of dual(C) intersect the dual lattice, taken
// within span(C); free iff C is unimodular
AffineMonoid dual_monoid(const Cone& c);

// internal: construct a monoid already known to be saturated
AffineMonoid make_known_saturated(const Mat& generators, int ambient_rank);

}  // namespace logtrace
