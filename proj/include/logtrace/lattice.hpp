#pragma once

#include "logtrace/numeric.hpp"

#include <optional>

namespace logtrace {

// Row-style Hermite normal form of the row span of `rows`: pivots positive,
// pivot columns strictly increasing, entries above a pivot reduced into
// [0, pivot). Zero rows are dropped. Unique per row span.
Mat hermite_normal_form(Mat rows);

struct SmithForm {
    std::vector<Int> diagonal;  // d_1 | d_2 | ... | d_r, all positive
    Mat V;                      // column transform: rowspace(A V) = rowspace(A) . V
    Mat Vinv;                   // V * Vinv = identity
};

// Smith normal form data of an integer matrix (rows x cols). Only the
// column transform is tracked; row operations do not change the row space.
SmithForm smith_normal_form(Mat a, int cols);

Mat identity_matrix(int n);
Mat mat_mul(const Mat& a, const Mat& b);
Vec row_times_mat(const Vec& v, const Mat& m);
Vec mat_times_col(const Mat& m, const Vec& v);
Mat transpose(const Mat& m);
int mat_rank(Mat m);
Int determinant(const Mat& m);
// exact inverse of a square integer matrix with det +-1
Mat unimodular_inverse(const Mat& m);

// Integer kernel of the linear map v -> (dot(v, rows[0]), ...): the lattice
// of vectors orthogonal to every row. Basis returned in Hermite form.
Mat integer_kernel(const Mat& rows, int n);

// A finitely generated subgroup of Z^n kept in canonical (Hermite) form, so
// equal lattices compare equal componentwise.
class Lattice {
  public:
    explicit Lattice(int ambient_rank) : ambient_rank_(ambient_rank) {
        if (ambient_rank < 0) throw input_error("Lattice: negative ambient rank");
    }

    static Lattice from_generators(const Mat& vectors, int ambient_rank);

    int ambient_rank() const { return ambient_rank_; }
    int rank() const { return static_cast<int>(basis_.size()); }
    const Mat& basis() const { return basis_; }
    bool is_zero() const { return basis_.empty(); }

    bool contains(const Vec& v) const;

    // integer coordinates of v in the Hermite basis; nullopt if v is not a member
    std::optional<Vec> coordinates(const Vec& v) const;

    // primitive hull: all ambient vectors with a nonzero multiple in this lattice
    Lattice saturation() const;

    Vec from_coordinates(const Vec& coords) const;

    bool operator==(const Lattice& o) const {
        return ambient_rank_ == o.ambient_rank_ && basis_ == o.basis_;
    }

  private:
    int ambient_rank_;
    Mat basis_;  // rows, Hermite form
};

inline Lattice canonicalize(const Mat& vectors, int ambient_rank) {
    return Lattice::from_generators(vectors, ambient_rank);
}

inline bool member(const Lattice& lat, const Vec& v) { return lat.contains(v); }

// Z^ambient_rank modulo a relation lattice, presented by its Smith data.
class QuotientGroup {
  public:
    QuotientGroup(int ambient_rank, const Lattice& relations);

    int ambient_rank() const { return ambient_rank_; }
    const Lattice& relations() const { return relations_; }
    // the invariant factors > 1, in divisibility order
    const std::vector<Int>& invariant_factors() const { return invariant_factors_; }
    int free_rank() const { return free_rank_; }
    Int torsion_order() const;

    // one ambient representative per element of the d-torsion subgroup;
    // count = prod gcd(d, d_i) over all invariant factors
    Mat d_torsion_representatives(const Int& d) const;

  private:
    int ambient_rank_;
    Lattice relations_;
    std::vector<Int> diagonal_;  // full Smith diagonal including 1s
    std::vector<Int> invariant_factors_;
    int free_rank_;
    Mat vinv_;  // maps Smith coordinates back to ambient representatives
};

inline QuotientGroup quotient(int ambient_rank, const Lattice& relations) {
    return QuotientGroup(ambient_rank, relations);
}

// Projection data for Z^n -> (Z^n / L) / torsion, realized as the last
// (n - rank L) Smith coordinates. apply() is surjective onto Z^{n-k}.
struct TorsionFreeQuotient {
    int ambient_rank = 0;
    int quotient_rank = 0;
    Int torsion_order = 1;
    Mat proj_columns;  // n rows x quotient_rank cols

    Vec apply(const Vec& v) const;
};

TorsionFreeQuotient torsion_free_quotient(const Lattice& sublattice);

}  // namespace logtrace
