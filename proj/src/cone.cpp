#include "logtrace/cone.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace logtrace {

namespace {

void sort_rows(Mat& m) { std::sort(m.begin(), m.end(), lex_less); }

Mat dedup_sorted(Mat m) {
    sort_rows(m);
    m.erase(std::unique(m.begin(), m.end()), m.end());
    return m;
}

}  // namespace

RayDescription dual_description(const Mat& inequalities, int ambient_rank) {
    check_rank_bound(ambient_rank, "dual_description");
    Mat ineqs;
    for (const Vec& a : inequalities) {
        if (static_cast<int>(a.size()) != ambient_rank)
            throw input_error("dual_description: inequality of wrong length");
        if (!is_zero(a)) ineqs.push_back(primitive(a));
    }
    ineqs = dedup_sorted(std::move(ineqs));

    Mat lineality = identity_matrix(ambient_rank);
    Mat rays;
    std::vector<std::set<int>> tight;  // per ray: processed inequality indices pairing to 0

    for (size_t step = 0; step < ineqs.size(); ++step) {
        const Vec& a = ineqs[step];

        // pull the constraint direction out of the lineality space first
        int pivot = -1;
        for (size_t i = 0; i < lineality.size(); ++i) {
            if (dot(a, lineality[i]) != 0) {
                pivot = static_cast<int>(i);
                break;
            }
        }
        if (pivot >= 0) {
            Vec l0 = lineality[static_cast<size_t>(pivot)];
            if (dot(a, l0) < 0) l0 = negate(l0);
            Int alpha = dot(a, l0);
            Mat new_lin;
            for (size_t i = 0; i < lineality.size(); ++i) {
                if (static_cast<int>(i) == pivot) continue;
                Vec l = sub(scale(alpha, lineality[i]), scale(dot(a, lineality[i]), l0));
                new_lin.push_back(primitive(l));
            }
            for (size_t i = 0; i < rays.size(); ++i) {
                Vec r = sub(scale(alpha, rays[i]), scale(dot(a, rays[i]), l0));
                rays[i] = primitive(r);
                // earlier constraints vanish on l0 (it was lineality), so
                // tight sets carry over unchanged
            }
            lineality = std::move(new_lin);
            rays.push_back(primitive(l0));
            std::set<int> all_prev;
            for (size_t j = 0; j < step; ++j) all_prev.insert(static_cast<int>(j));
            tight.push_back(all_prev);
            // l0 satisfies the new constraint strictly; fall through to the
            // generic split with the updated ray set
        }

        std::vector<size_t> pos, zero, neg;
        for (size_t i = 0; i < rays.size(); ++i) {
            Int p = dot(a, rays[i]);
            if (p > 0)
                pos.push_back(i);
            else if (p == 0)
                zero.push_back(i);
            else
                neg.push_back(i);
        }
        if (neg.empty()) {
            for (size_t i : zero) tight[i].insert(static_cast<int>(step));
            continue;
        }

        Mat new_rays;
        std::vector<std::set<int>> new_tight;
        for (size_t i : pos) {
            new_rays.push_back(rays[i]);
            new_tight.push_back(tight[i]);
        }
        for (size_t i : zero) {
            auto t = tight[i];
            t.insert(static_cast<int>(step));
            new_rays.push_back(rays[i]);
            new_tight.push_back(std::move(t));
        }
        for (size_t ip : pos) {
            for (size_t in : neg) {
                // combinatorial adjacency test (Fukuda-Prodon): the common
                // tight set of an adjacent pair is not dominated by any
                // third ray's tight set
                std::set<int> common;
                std::set_intersection(tight[ip].begin(), tight[ip].end(), tight[in].begin(),
                                      tight[in].end(), std::inserter(common, common.begin()));
                bool adjacent = true;
                for (size_t other = 0; other < rays.size(); ++other) {
                    if (other == ip || other == in) continue;
                    if (std::includes(tight[other].begin(), tight[other].end(), common.begin(),
                                      common.end())) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Vec combo = sub(scale(dot(a, rays[ip]), rays[in]),
                                scale(dot(a, rays[in]), rays[ip]));
                combo = primitive(combo);
                if (is_zero(combo)) continue;
                std::set<int> t = common;
                t.insert(static_cast<int>(step));
                new_rays.push_back(std::move(combo));
                new_tight.push_back(std::move(t));
            }
        }
        rays = std::move(new_rays);
        tight = std::move(new_tight);
    }

    // final extremality filter against the full inequality list
    RayDescription out;
    out.lineality = hermite_normal_form(lineality);
    int lin_dim = static_cast<int>(out.lineality.size());
    Mat kept;
    for (const Vec& r : rays) {
        Mat tight_rows;
        for (const Vec& a : ineqs)
            if (dot(a, r) == 0) tight_rows.push_back(a);
        // a ray is extreme (mod lineality) iff its tight constraints cut the
        // space down to the ray-plus-lineality line
        if (mat_rank(std::move(tight_rows)) == ambient_rank - lin_dim - 1)
            kept.push_back(r);
    }
    out.rays = dedup_sorted(std::move(kept));
    return out;
}

Cone Cone::from_rays(const Mat& generators, int ambient_rank) {
    check_rank_bound(ambient_rank, "cone");
    Cone c;
    c.ambient_rank_ = ambient_rank;
    Mat gens;
    for (const Vec& g : generators) {
        if (static_cast<int>(g.size()) != ambient_rank)
            throw input_error("cone: generator of wrong length");
        if (!is_zero(g)) gens.push_back(primitive(g));
    }
    gens = dedup_sorted(std::move(gens));

    // dual first, then double-dualize for the minimal primal description
    RayDescription dual = dual_description(gens, ambient_rank);
    Mat normals = dual.rays;
    for (const Vec& l : dual.lineality) {
        normals.push_back(l);
        normals.push_back(negate(l));
    }
    normals = dedup_sorted(std::move(normals));

    RayDescription primal = dual_description(normals, ambient_rank);
    Mat rays = primal.rays;
    for (const Vec& l : primal.lineality) {
        rays.push_back(l);
        rays.push_back(negate(l));
    }
    rays = dedup_sorted(std::move(rays));

    // cheap cross-check of the two descriptions: every input generator must
    // satisfy the facet inequalities
    for (const Vec& g : gens)
        for (const Vec& u : normals)
            if (dot(u, g) < 0)
                throw error("cone: inconsistent dual description (internal)");

    c.rays_ = std::move(rays);
    c.facet_normals_ = std::move(normals);
    c.pointed_ = primal.lineality.empty();
    c.dim_ = mat_rank(c.rays_);
    return c;
}

bool Cone::is_simplicial() const {
    return pointed_ && static_cast<int>(rays_.size()) == dim_;
}

bool Cone::contains(const Vec& v) const {
    if (static_cast<int>(v.size()) != ambient_rank_)
        throw input_error("cone membership: dimension mismatch");
    for (const Vec& u : facet_normals_)
        if (dot(u, v) < 0) return false;
    return true;
}

bool Cone::in_relative_interior(const Vec& v) const {
    if (!contains(v)) return false;
    if (is_zero(v)) return dim_ == 0;
    // v is interior iff the normals tight at v cut out the whole cone
    Mat tight;
    for (const Vec& u : facet_normals_)
        if (dot(u, v) == 0) tight.push_back(u);
    for (const Vec& r : rays_)
        for (const Vec& u : tight)
            if (dot(u, r) != 0) return false;
    return true;
}

std::vector<std::vector<int>> Cone::face_ray_sets() const {
    // faces are the tight-ray sets of dual vectors; generate by closing the
    // facet ray sets under intersection
    std::set<std::vector<int>> found;
    std::vector<int> all;
    for (int i = 0; i < static_cast<int>(rays_.size()); ++i) all.push_back(i);
    found.insert(all);
    std::vector<std::vector<int>> frontier = {all};
    for (const Vec& u : facet_normals_) {
        std::vector<int> s;
        for (int i = 0; i < static_cast<int>(rays_.size()); ++i)
            if (dot(u, rays_[i]) == 0) s.push_back(i);
        if (found.insert(s).second) frontier.push_back(s);
    }
    // close under pairwise intersection
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> current(found.begin(), found.end());
        for (size_t i = 0; i < current.size(); ++i) {
            for (size_t j = i + 1; j < current.size(); ++j) {
                std::vector<int> inter;
                std::set_intersection(current[i].begin(), current[i].end(), current[j].begin(),
                                      current[j].end(), std::back_inserter(inter));
                if (found.insert(inter).second) grew = true;
            }
        }
    }
    return {found.begin(), found.end()};
}

std::vector<Cone> Cone::faces() const {
    std::vector<Cone> out;
    for (const auto& s : face_ray_sets()) {
        Mat gens;
        for (int i : s) gens.push_back(rays_[i]);
        out.push_back(Cone::from_rays(gens, ambient_rank_));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Cone> Cone::facets() const {
    std::vector<Cone> out;
    for (const Cone& f : faces())
        if (f.dim() == dim_ - 1) out.push_back(f);
    return out;
}

Cone Cone::face_from_rays(const Mat& face_rays) const {
    Cone candidate = Cone::from_rays(face_rays, ambient_rank_);
    for (const Cone& f : faces())
        if (f == candidate) return f;
    throw input_error("face_from_rays: not a face of this cone");
}

std::string Cone::key() const {
    std::ostringstream os;
    for (size_t i = 0; i < rays_.size(); ++i) {
        if (i) os << ";";
        for (size_t j = 0; j < rays_[i].size(); ++j) {
            if (j) os << ",";
            os << rays_[i][j];
        }
    }
    return os.str();
}

Cone dualize(const Cone& c) {
    return Cone::from_rays(c.facet_normals(), c.ambient_rank());
}

namespace {

// rays of a simplicial cone expressed in the coordinates of the saturated
// lattice of their span, together with the transform data
struct SpanCoords {
    Lattice span_lattice;  // saturated, rank k
    Mat ray_coords;        // k-dim coordinates of the rays
};

SpanCoords span_coordinates(const Cone& c) {
    SpanCoords sc{Lattice::from_generators(c.rays(), c.ambient_rank()).saturation(), {}};
    for (const Vec& r : c.rays()) {
        auto coords = sc.span_lattice.coordinates(r);
        if (!coords) throw error("span_coordinates: ray escaped its saturated span (internal)");
        sc.ray_coords.push_back(*coords);
    }
    return sc;
}

}  // namespace

Int multiplicity(const Cone& c) {
    if (!c.is_simplicial()) throw precondition_error("multiplicity: cone is not simplicial");
    if (c.dim() == 0) return 1;
    SpanCoords sc = span_coordinates(c);
    SmithForm sf = smith_normal_form(sc.ray_coords, c.dim());
    Int m = 1;
    for (const Int& d : sf.diagonal) m *= d;
    return m;
}

Mat parallelepiped_points(const Cone& c) {
    if (!c.is_simplicial())
        throw precondition_error("parallelepiped_points: cone is not simplicial");
    if (c.dim() == 0) return {};
    SpanCoords sc = span_coordinates(c);
    int k = c.dim();
    SmithForm sf = smith_normal_form(sc.ray_coords, k);

    // representatives of (span lattice)/(ray lattice) in Smith coordinates,
    // then shifted into the half-open parallelepiped
    Mat ray_rows = sc.ray_coords;  // k x k, invertible over Q
    Mat out;
    std::vector<Int> counter(sf.diagonal.size(), 0);
    while (true) {
        Vec smith_coords(k, 0);
        for (size_t i = 0; i < counter.size(); ++i) smith_coords[i] = counter[i];
        Vec x = row_times_mat(smith_coords, sf.Vinv);  // span-lattice coords

        // rational coefficients t with x = sum t_i * ray_i, reduced mod 1
        // via fraction-free Gaussian elimination (Cramer)
        // Solve t * R = x where R = ray_rows.
        std::vector<Rat> t(k);
        {
            // build rational matrix and solve by elimination
            std::vector<std::vector<Rat>> m(k, std::vector<Rat>(k + 1));
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) m[j][i] = Rat(ray_rows[i][j]);  // transpose: R^T t^T = x^T
                m[i][k] = Rat(x[i]);
            }
            for (int col = 0; col < k; ++col) {
                int piv = -1;
                for (int r = col; r < k; ++r)
                    if (m[r][col] != 0) {
                        piv = r;
                        break;
                    }
                if (piv < 0) throw error("parallelepiped_points: singular ray matrix (internal)");
                std::swap(m[col], m[piv]);
                for (int r = 0; r < k; ++r) {
                    if (r == col || m[r][col] == 0) continue;
                    Rat f = m[r][col] / m[col][col];
                    for (int cc = col; cc <= k; ++cc) m[r][cc] -= f * m[col][cc];
                }
            }
            for (int i = 0; i < k; ++i) t[i] = m[i][k] / m[i][i];
        }
        Vec shifted = x;
        for (int i = 0; i < k; ++i) {
            // floor of the rational coefficient
            Int fl = numerator(t[i]) / denominator(t[i]);
            if (numerator(t[i]) - fl * denominator(t[i]) < 0) fl -= 1;
            if (fl != 0) shifted = sub(shifted, scale(fl, ray_rows[i]));
        }
        if (!is_zero(shifted)) {
            // back to ambient coordinates
            out.push_back(sc.span_lattice.from_coordinates(shifted));
        }

        size_t ci = 0;
        while (ci < counter.size()) {
            counter[ci] += 1;
            if (counter[ci] < sf.diagonal[ci]) break;
            counter[ci] = 0;
            ++ci;
        }
        if (ci == counter.size()) break;
    }
    std::sort(out.begin(), out.end(), graded_lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ConeComplex ConeComplex::from_maximal(std::vector<Cone> maximal, int ambient_rank) {
    ConeComplex k;
    k.ambient_rank_ = ambient_rank;
    for (const Cone& c : maximal)
        if (c.ambient_rank() != ambient_rank)
            throw input_error("cone complex: mixed ambient ranks");

    // drop cones that are faces of other members
    std::sort(maximal.begin(), maximal.end());
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
    std::vector<Cone> kept;
    for (size_t i = 0; i < maximal.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < maximal.size() && !dominated; ++j) {
            if (i == j) continue;
            bool sub = true;
            for (const Vec& r : maximal[i].rays())
                if (!maximal[j].contains(r)) {
                    sub = false;
                    break;
                }
            if (sub && !(maximal[j] == maximal[i])) dominated = true;
        }
        if (!dominated) kept.push_back(maximal[i]);
    }
    k.maximal_ = std::move(kept);
    if (k.maximal_.empty()) throw input_error("cone complex: no maximal cones");

    std::set<Cone> faces;
    for (const Cone& c : k.maximal_)
        for (const Cone& f : c.faces())
            if (f.dim() > 0) faces.insert(f);

    // fan condition: pairwise intersections are common faces
    for (size_t i = 0; i < k.maximal_.size(); ++i) {
        for (size_t j = i + 1; j < k.maximal_.size(); ++j) {
            Mat ineqs = k.maximal_[i].facet_normals();
            for (const Vec& u : k.maximal_[j].facet_normals()) ineqs.push_back(u);
            RayDescription rd = dual_description(ineqs, ambient_rank);
            Mat gens = rd.rays;
            for (const Vec& l : rd.lineality) {
                gens.push_back(l);
                gens.push_back(negate(l));
            }
            Cone inter = Cone::from_rays(gens, ambient_rank);
            if (inter.dim() == 0) continue;
            if (!faces.count(inter))
                throw input_error("cone complex: intersection of members is not a common face");
            bool face_of_i = false, face_of_j = false;
            for (const Cone& f : k.maximal_[i].faces())
                if (f == inter) face_of_i = true;
            for (const Cone& f : k.maximal_[j].faces())
                if (f == inter) face_of_j = true;
            if (!face_of_i || !face_of_j)
                throw input_error("cone complex: intersection of members is not a common face");
        }
    }

    k.faces_.assign(faces.begin(), faces.end());
    std::set<Vec, bool (*)(const Vec&, const Vec&)> rays(lex_less);
    for (const Cone& c : k.maximal_)
        for (const Vec& r : c.rays()) rays.insert(r);
    k.rays_.assign(rays.begin(), rays.end());
    return k;
}

bool ConeComplex::supports(const Vec& v) const {
    for (const Cone& c : maximal_)
        if (c.contains(v)) return true;
    return false;
}

bool ConeComplex::has_face(const Cone& f) const {
    for (const Cone& c : faces_)
        if (c == f) return true;
    return false;
}

const Cone& ConeComplex::carrier(const Vec& v) const {
    const Cone* best = nullptr;
    for (const Cone& f : faces_) {
        if (!f.contains(v)) continue;
        if (!best || f.dim() < best->dim()) best = &f;
    }
    if (!best) throw precondition_error("carrier: vector outside the support");
    if (!best->in_relative_interior(v))
        throw error("carrier: fan condition violated (internal)");
    return *best;
}

bool ConeComplex::all_simplicial() const {
    for (const Cone& c : maximal_)
        if (!c.is_simplicial()) return false;
    return true;
}

bool ConeComplex::all_unimodular() const {
    for (const Cone& c : maximal_)
        if (!c.is_simplicial() || multiplicity(c) != 1) return false;
    return true;
}

ConeComplex stellar_subdivide(const ConeComplex& k, const Vec& v) {
    Vec center = primitive(v);
    if (is_zero(center)) throw precondition_error("stellar subdivision at the zero vector");
    if (!k.supports(center))
        throw precondition_error("stellar subdivision center outside the support");
    const Cone& gamma = k.carrier(center);

    std::vector<Cone> new_maximal;
    for (const Cone& sigma : k.maximal_cones()) {
        bool contains_gamma = true;
        for (const Vec& r : gamma.rays())
            if (!sigma.contains(r)) {
                contains_gamma = false;
                break;
            }
        if (!contains_gamma) {
            new_maximal.push_back(sigma);
            continue;
        }
        // replace sigma by joins of the center with the facets avoiding the
        // carrier; when v is an existing ray of a simplicial cone this
        // reproduces sigma itself
        for (const Cone& facet : sigma.facets()) {
            bool facet_contains_gamma = true;
            for (const Vec& r : gamma.rays())
                if (!facet.contains(r)) {
                    facet_contains_gamma = false;
                    break;
                }
            if (facet_contains_gamma) continue;
            Mat gens = facet.rays();
            gens.push_back(center);
            new_maximal.push_back(Cone::from_rays(gens, k.ambient_rank()));
        }
    }
    return ConeComplex::from_maximal(std::move(new_maximal), k.ambient_rank());
}

const Cone& carrier_cone(const ConeComplex& older, const Cone& c) {
    // an interior point of c: the sum of its rays
    Vec w(older.ambient_rank(), 0);
    for (const Vec& r : c.rays()) w = add(w, r);
    if (is_zero(w)) throw precondition_error("carrier_cone: zero cone has no carrier");
    return older.carrier(w);
}

ResolutionResult resolve_complex(const ConeComplex& k) {
    ResolutionResult res{k, {}};
    int steps = 0;

    // make every cone simplicial by pulling at existing rays
    while (!res.complex.all_simplicial()) {
        bool progressed = false;
        Mat rays = res.complex.rays();
        for (const Vec& r : rays) {
            bool needed = false;
            for (const Cone& c : res.complex.maximal_cones()) {
                if (!c.is_simplicial() && c.contains(r)) {
                    needed = true;
                    break;
                }
            }
            if (!needed) continue;
            ConeComplex next = stellar_subdivide(res.complex, r);
            if (!(next == res.complex)) {
                res.complex = std::move(next);
                progressed = true;
            }
            if (++steps > config().resolution_step_cap)
                throw resource_error("resolve_complex: step cap exceeded");
        }
        if (!progressed && !res.complex.all_simplicial())
            throw error("resolve_complex: simplicialization stalled (internal)");
    }

    // then chip away at multiplicities with parallelepiped points
    while (true) {
        Vec best;
        bool have = false;
        for (const Cone& c : res.complex.maximal_cones()) {
            if (multiplicity(c) == 1) continue;
            for (const Vec& w : parallelepiped_points(c)) {
                if (!have || graded_lex_less(w, best)) {
                    best = w;
                    have = true;
                }
            }
        }
        if (!have) break;
        Vec center = primitive(best);
        res.trail.push_back(center);
        res.complex = stellar_subdivide(res.complex, center);
        if (++steps > config().resolution_step_cap)
            throw resource_error("resolve_complex: step cap exceeded");
    }
    return res;
}

}  // namespace logtrace
