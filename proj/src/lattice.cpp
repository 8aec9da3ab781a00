#include "logtrace/lattice.hpp"

#include <algorithm>

namespace logtrace {

Mat identity_matrix(int n) {
    Mat m(n, Vec(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.empty() || b.empty()) return {};
    size_t n = a.size(), k = b.size(), m = b.front().size();
    Mat out(n, Vec(m, 0));
    for (size_t i = 0; i < n; ++i) {
        if (a[i].size() != k) throw input_error("mat_mul: shape mismatch");
        for (size_t j = 0; j < k; ++j) {
            if (a[i][j] == 0) continue;
            for (size_t l = 0; l < m; ++l) out[i][l] += a[i][j] * b[j][l];
        }
    }
    return out;
}

Vec row_times_mat(const Vec& v, const Mat& m) {
    if (m.empty()) return {};
    size_t cols = m.front().size();
    if (v.size() != m.size()) throw input_error("row_times_mat: shape mismatch");
    Vec out(cols, 0);
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (size_t j = 0; j < cols; ++j) out[j] += v[i] * m[i][j];
    }
    return out;
}

Vec mat_times_col(const Mat& m, const Vec& v) {
    Vec out(m.size(), 0);
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != v.size()) throw input_error("mat_times_col: shape mismatch");
        for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    }
    return out;
}

Mat transpose(const Mat& m) {
    if (m.empty()) return {};
    Mat out(m.front().size(), Vec(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) out[j][i] = m[i][j];
    return out;
}

Mat hermite_normal_form(Mat rows) {
    if (rows.empty()) return rows;
    size_t n = rows.front().size();
    for (const Vec& r : rows)
        if (r.size() != n) throw input_error("hermite_normal_form: ragged matrix");

    size_t pivot_row = 0;
    std::vector<size_t> pivot_cols;
    for (size_t col = 0; col < n && pivot_row < rows.size(); ++col) {
        while (true) {
            size_t best = rows.size();
            for (size_t i = pivot_row; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))
                    best = i;
            }
            if (best == rows.size()) break;  // column clear below pivot_row
            std::swap(rows[pivot_row], rows[best]);
            if (rows[pivot_row][col] < 0) rows[pivot_row] = negate(rows[pivot_row]);
            bool clean = true;
            for (size_t i = pivot_row + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                Int q = rows[i][col] / rows[pivot_row][col];
                if (q != 0) rows[i] = sub(rows[i], scale(q, rows[pivot_row]));
                if (rows[i][col] != 0) clean = false;
            }
            if (clean) {
                pivot_cols.push_back(col);
                ++pivot_row;
                break;
            }
        }
    }
    rows.resize(pivot_row);

    // reduce entries above each pivot into [0, pivot)
    for (size_t k = 0; k < pivot_cols.size(); ++k) {
        size_t col = pivot_cols[k];
        const Int& p = rows[k][col];
        for (size_t i = 0; i < k; ++i) {
            Int q = rows[i][col] / p;
            if (rows[i][col] - q * p < 0) q -= 1;  // floor division
            if (q != 0) rows[i] = sub(rows[i], scale(q, rows[k]));
        }
    }
    return rows;
}

namespace {

bool find_pivot(const Mat& a, size_t from, size_t cols, size_t& pi, size_t& pj) {
    bool found = false;
    for (size_t i = from; i < a.size(); ++i) {
        for (size_t j = from; j < cols; ++j) {
            if (a[i][j] == 0) continue;
            if (!found || abs(a[i][j]) < abs(a[pi][pj])) {
                pi = i;
                pj = j;
                found = true;
            }
        }
    }
    return found;
}

}  // namespace

SmithForm smith_normal_form(Mat a, int cols) {
    for (Vec& r : a)
        if (static_cast<int>(r.size()) != cols)
            throw input_error("smith_normal_form: ragged matrix");

    SmithForm out;
    out.V = identity_matrix(cols);
    out.Vinv = identity_matrix(cols);

    // column ops are tracked so callers can pass between ambient and Smith
    // coordinates; row ops only reshuffle the row space and go untracked
    auto swap_cols = [&](size_t x, size_t y) {
        if (x == y) return;
        for (Vec& r : a) std::swap(r[x], r[y]);
        for (Vec& r : out.V) std::swap(r[x], r[y]);
        std::swap(out.Vinv[x], out.Vinv[y]);
    };
    auto negate_col = [&](size_t x) {
        for (Vec& r : a) r[x] = -r[x];
        for (Vec& r : out.V) r[x] = -r[x];
        out.Vinv[x] = negate(out.Vinv[x]);
    };
    auto add_col = [&](size_t src, size_t dst, const Int& q) {
        // col[dst] += q * col[src]
        if (q == 0) return;
        for (Vec& r : a) r[dst] += q * r[src];
        for (Vec& r : out.V) r[dst] += q * r[src];
        out.Vinv[src] = sub(out.Vinv[src], scale(q, out.Vinv[dst]));
    };

    size_t limit = std::min(a.size(), static_cast<size_t>(cols));
    size_t t = 0;
    for (; t < limit; ++t) {
        size_t pi = t, pj = t;
        if (!find_pivot(a, t, cols, pi, pj)) break;
        std::swap(a[t], a[pi]);
        swap_cols(t, pj);

        bool again = true;
        while (again) {
            again = false;
            if (a[t][t] < 0) negate_col(t);
            for (size_t i = t + 1; i < a.size(); ++i) {
                if (a[i][t] == 0) continue;
                Int q = a[i][t] / a[t][t];
                if (q != 0) a[i] = sub(a[i], scale(q, a[t]));
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    again = true;
                }
            }
            if (again) continue;
            for (size_t j = t + 1; j < static_cast<size_t>(cols); ++j) {
                if (a[t][j] == 0) continue;
                Int q = a[t][j] / a[t][t];
                add_col(t, j, -q);
                if (a[t][j] != 0) {
                    swap_cols(t, j);
                    again = true;
                }
            }
        }
        if (a[t][t] < 0) negate_col(t);
    }

    // enforce the divisibility chain: fold offending d_j into d_i and
    // re-reduce the 2x2 block to diag(gcd, lcm)
    for (size_t i = 0; i + 1 < t; ++i) {
        for (size_t j = i + 1; j < t; ++j) {
            if (a[j][j] % a[i][i] == 0) continue;
            a[i][j] = a[j][j];  // row_i += row_j (other entries are zero)
            // euclid on columns i, j within row i
            while (a[i][j] != 0) {
                Int q = a[i][i] / a[i][j];
                add_col(j, i, -q);
                swap_cols(i, j);
            }
            if (a[i][i] < 0) negate_col(i);
            // clear the stray entry in row j (entries of row j are integer
            // combinations of {0, old d_j}, hence divisible by the new pivot)
            if (a[j][i] != 0) {
                Int q = a[j][i] / a[i][i];
                a[j][i] -= q * a[i][i];
                a[j][j] -= q * a[i][j];
            }
            if (a[j][j] < 0) negate_col(j);
        }
    }

    for (size_t i = 0; i < t; ++i) out.diagonal.push_back(a[i][i]);
    return out;
}

int mat_rank(Mat m) {
    Mat h = hermite_normal_form(std::move(m));
    return static_cast<int>(h.size());
}

Int determinant(const Mat& m) {
    size_t n = m.size();
    for (const Vec& r : m)
        if (r.size() != n) throw input_error("determinant: matrix not square");
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    // cofactor expansion along the first row; fine at the ranks we support
    Int det = 0;
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j] == 0) continue;
        Mat minor;
        for (size_t i = 1; i < n; ++i) {
            Vec row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        Int c = m[0][j] * determinant(minor);
        det += (j % 2 == 0) ? c : -c;
    }
    return det;
}

Mat unimodular_inverse(const Mat& m) {
    size_t n = m.size();
    Int det = determinant(m);
    if (det != 1 && det != -1) throw input_error("unimodular_inverse: determinant is not a unit");
    if (n == 0) return {};
    Mat adj(n, Vec(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            Mat minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                Vec row;
                for (size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            Int cof = determinant(minor);
            if ((i + j) % 2 == 1) cof = -cof;
            adj[j][i] = cof * det;  // det is +-1
        }
    }
    return adj;
}

Mat integer_kernel(const Mat& rows, int n) {
    Mat clean;
    for (const Vec& r : rows) {
        if (static_cast<int>(r.size()) != n) throw input_error("integer_kernel: shape");
        if (!is_zero(r)) clean.push_back(r);
    }
    if (clean.empty()) return identity_matrix(n);
    // with U A V = D, v lies in the kernel iff the first r Smith coordinates
    // of V^{-1} v vanish, so columns r..n-1 of V give a saturated basis
    SmithForm sf = smith_normal_form(clean, n);
    size_t r = sf.diagonal.size();
    Mat vt = transpose(sf.V);
    Mat basis;
    for (size_t j = r; j < static_cast<size_t>(n); ++j) basis.push_back(vt[j]);
    return hermite_normal_form(basis);
}

Lattice Lattice::from_generators(const Mat& vectors, int ambient_rank) {
    Lattice lat(ambient_rank);
    for (const Vec& v : vectors)
        if (static_cast<int>(v.size()) != ambient_rank)
            throw input_error("canonicalize: vector length does not match ambient rank");
    lat.basis_ = hermite_normal_form(vectors);
    return lat;
}

std::optional<Vec> Lattice::coordinates(const Vec& v) const {
    if (static_cast<int>(v.size()) != ambient_rank_)
        throw input_error("lattice membership: dimension mismatch");
    Vec rem = v;
    Vec coords(basis_.size(), 0);
    for (size_t k = 0; k < basis_.size(); ++k) {
        size_t col = 0;
        while (col < rem.size() && basis_[k][col] == 0) ++col;
        // pivots sit strictly to the right of earlier ones, so this column
        // cannot be touched by later rows
        if (rem[col] % basis_[k][col] != 0) return std::nullopt;
        Int q = rem[col] / basis_[k][col];
        coords[k] = q;
        if (q != 0) rem = sub(rem, scale(q, basis_[k]));
    }
    if (!logtrace::is_zero(rem)) return std::nullopt;
    return coords;
}

bool Lattice::contains(const Vec& v) const { return coordinates(v).has_value(); }

Vec Lattice::from_coordinates(const Vec& coords) const {
    if (coords.size() != basis_.size()) throw input_error("from_coordinates: wrong length");
    Vec out(ambient_rank_, 0);
    for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] != 0) out = add(out, scale(coords[i], basis_[i]));
    return out;
}

Lattice Lattice::saturation() const {
    if (basis_.empty()) return *this;
    SmithForm sf = smith_normal_form(basis_, ambient_rank_);
    // in Smith coordinates the rational span is the first r axes
    size_t r = sf.diagonal.size();
    Mat gens;
    for (size_t i = 0; i < r; ++i) {
        Vec coords(ambient_rank_, 0);
        coords[i] = 1;
        gens.push_back(row_times_mat(coords, sf.Vinv));
    }
    return Lattice::from_generators(gens, ambient_rank_);
}

QuotientGroup::QuotientGroup(int ambient_rank, const Lattice& relations)
    : ambient_rank_(ambient_rank), relations_(relations) {
    if (relations.ambient_rank() != ambient_rank)
        throw input_error("quotient: relations live in a different ambient rank");
    SmithForm sf = smith_normal_form(relations.basis(), ambient_rank);
    diagonal_ = sf.diagonal;
    vinv_ = sf.Vinv.empty() ? identity_matrix(ambient_rank) : sf.Vinv;
    for (const Int& d : diagonal_)
        if (d > 1) invariant_factors_.push_back(d);
    free_rank_ = ambient_rank - static_cast<int>(diagonal_.size());
}

Int QuotientGroup::torsion_order() const {
    Int t = 1;
    for (const Int& d : invariant_factors_) t *= d;
    return t;
}

Mat QuotientGroup::d_torsion_representatives(const Int& d) const {
    if (d < 1) throw precondition_error("d_torsion_representatives: d must be >= 1");
    // the d-torsion of Z/d_i is cyclic of order g = gcd(d, d_i), generated
    // by d_i / g
    std::vector<Int> orders, steps;
    std::vector<size_t> coords;
    for (size_t i = 0; i < diagonal_.size(); ++i) {
        Int g = gcd(d, diagonal_[i]);
        if (g > 1) {
            orders.push_back(g);
            steps.push_back(diagonal_[i] / g);
            coords.push_back(i);
        }
    }
    Mat out;
    std::vector<Int> counter(orders.size(), 0);
    while (true) {
        Vec smith_coords(ambient_rank_, 0);
        for (size_t i = 0; i < counter.size(); ++i)
            smith_coords[coords[i]] = counter[i] * steps[i];
        out.push_back(row_times_mat(smith_coords, vinv_));
        size_t k = 0;
        while (k < counter.size()) {
            counter[k] += 1;
            if (counter[k] < orders[k]) break;
            counter[k] = 0;
            ++k;
        }
        if (k == counter.size()) break;
    }
    return out;
}

Vec TorsionFreeQuotient::apply(const Vec& v) const {
    if (static_cast<int>(v.size()) != ambient_rank)
        throw input_error("torsion-free quotient: dimension mismatch");
    Vec out(quotient_rank, 0);
    for (int j = 0; j < quotient_rank; ++j)
        for (int i = 0; i < ambient_rank; ++i) out[j] += v[i] * proj_columns[i][j];
    return out;
}

TorsionFreeQuotient torsion_free_quotient(const Lattice& sublattice) {
    int n = sublattice.ambient_rank();
    SmithForm sf = smith_normal_form(sublattice.basis(), n);
    int k = static_cast<int>(sf.diagonal.size());
    TorsionFreeQuotient q;
    q.ambient_rank = n;
    q.quotient_rank = n - k;
    q.torsion_order = 1;
    for (const Int& d : sf.diagonal) q.torsion_order *= d;
    Mat v = sf.V.empty() ? identity_matrix(n) : sf.V;
    q.proj_columns.assign(n, Vec(q.quotient_rank, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < q.quotient_rank; ++j) q.proj_columns[i][j] = v[i][k + j];
    return q;
}

}  // namespace logtrace
