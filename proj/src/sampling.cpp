#include "logtrace/sampling.hpp"

#include "logtrace/fixtures.hpp"
#include "logtrace/invariants.hpp"
#include "logtrace/report.hpp"

#include <algorithm>
#include <sstream>

namespace logtrace {

namespace {

Vec random_vec(Rng& rng, int n, long long lo, long long hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.range(lo, hi);
    return v;
}

// integer functional with <phi, v> = 1 for primitive v
Vec dual_functional(const Vec& v) {
    // solve by running the extended euclidean algorithm across the entries
    Vec phi(v.size(), 0);
    Int g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        if (g == 0) {
            // first nonzero entry: phi picks it up with the right sign later
            g = abs(v[i]);
            phi[i] = v[i] > 0 ? 1 : -1;
            continue;
        }
        // g_new = gcd(g, v[i]) = a*g + b*v[i]
        Int r0 = g, r1 = abs(v[i]), s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            Int q = r0 / r1;
            Int r2 = r0 - q * r1, s2 = s0 - q * s1, t2 = t0 - q * t1;
            r0 = r1; r1 = r2; s0 = s1; s1 = s2; t0 = t1; t1 = t2;
        }
        // r0 = s0*g + t0*|v[i]|
        for (Int& x : phi) x *= s0;
        phi[i] += (v[i] > 0 ? t0 : -t0);
        g = r0;
    }
    if (g != 1) throw precondition_error("dual_functional: vector is not primitive");
    return phi;
}

// random full-dimensional pointed simplicial cone with a compatible e
struct ChartSeed {
    Mat rays;      // r linearly independent rays
    Vec e;         // uniformizer image, <e, ray_i> = s_i >= 1
    std::vector<Int> s;  // designated ray multiplicities
};

std::optional<ChartSeed> try_chart_seed(Rng& rng, int rank, const Int& forced_s,
                                        long long s_bound) {
    ChartSeed seed;
    if (rng.chance(0.5)) {
        // unimodular cone: random small elementary transforms of the orthant
        Mat u = identity_matrix(rank);
        int ops = static_cast<int>(rng.range(0, 2 * rank));
        for (int k = 0; k < ops; ++k) {
            int i = static_cast<int>(rng.range(0, rank - 1));
            int j = static_cast<int>(rng.range(0, rank - 1));
            if (i == j) continue;
            Int c = rng.range(0, 1) ? 1 : -1;
            for (int col = 0; col < rank; ++col) u[i][col] += c * u[j][col];
        }
        seed.rays = u;
    } else {
        // small nonnegative rays (automatically pointed), modest determinant
        Mat rays;
        for (int i = 0; i < rank; ++i) rays.push_back(random_vec(rng, rank, 0, 3));
        if (mat_rank(rays) != rank) return std::nullopt;
        Int det = determinant(rays);
        if (abs(det) > 4) return std::nullopt;
        seed.rays = rays;
    }

    // choose multiplicities and solve for an integral e with R e = s
    for (int attempt = 0; attempt < 12; ++attempt) {
        std::vector<Int> s;
        for (int i = 0; i < rank; ++i)
            s.push_back(i == 0 && forced_s > 0 ? forced_s : Int(rng.range(1, 3)));
        // solve R e = s exactly over the rationals
        std::vector<std::vector<Rat>> m(rank, std::vector<Rat>(rank + 1));
        for (int i = 0; i < rank; ++i) {
            for (int j = 0; j < rank; ++j) m[i][j] = Rat(seed.rays[i][j]);
            m[i][rank] = Rat(s[i]);
        }
        bool singular = false;
        for (int col = 0; col < rank && !singular; ++col) {
            int piv = -1;
            for (int r = col; r < rank; ++r)
                if (m[r][col] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) {
                singular = true;
                break;
            }
            std::swap(m[col], m[piv]);
            for (int r = 0; r < rank; ++r) {
                if (r == col || m[r][col] == 0) continue;
                Rat f = m[r][col] / m[col][col];
                for (int cc = col; cc <= rank; ++cc) m[r][cc] -= f * m[col][cc];
            }
        }
        if (singular) return std::nullopt;
        Vec e(rank);
        bool integral = true;
        for (int i = 0; i < rank; ++i) {
            Rat x = m[i][rank] / m[i][i];
            if (denominator(x) != 1) {
                integral = false;
                break;
            }
            e[i] = numerator(x);
        }
        if (!integral) continue;
        bool bounded = true;
        for (const Int& x : e)
            if (abs(x) > s_bound * 4) bounded = false;
        if (!bounded) continue;
        seed.e = e;
        seed.s = s;
        return seed;
    }
    return std::nullopt;
}

Int max_ray_multiplicity(const ConeComplex& k, const Vec& e) {
    Int m = 0;
    for (const Vec& r : k.rays()) m = std::max(m, dot(e, r));
    return m;
}

}  // namespace

AffineMonoid random_saturated_monoid(Rng& rng, int max_rank) {
    while (true) {
        int rank = static_cast<int>(rng.range(1, max_rank));
        Mat rays;
        int count = rank + (rng.chance(0.3) ? 1 : 0);
        for (int i = 0; i < count; ++i) rays.push_back(random_vec(rng, rank, 0, 3));
        Cone c = Cone::from_rays(rays, rank);
        if (!c.pointed() || c.dim() != rank) continue;
        Mat hb = hilbert_basis(c);
        if (hb.empty() || hb.size() > 10) continue;
        return make_known_saturated(hb, rank);
    }
}

Vec random_vertical_element(const AffineMonoid& p, Rng& rng) {
    Vec e(p.ambient_rank(), 0);
    for (const Vec& g : p.generators()) e = add(e, scale(Int(rng.range(1, 2)), g));
    return e;
}

DecoratedModel random_model(Rng& rng, const RandomModelOptions& opts) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        int rank = static_cast<int>(rng.range(1, opts.max_rank));
        int n_charts = static_cast<int>(rng.range(1, opts.max_charts));

        DecoratedModel m;
        const long long primes[] = {0, 2, 3, 5, 7};
        m.residue_char = primes[rng.range(0, 4)];
        m.log_smooth_claimed = false;

        bool failed = false;
        Int prev_glue_s = 0;
        std::vector<Vec> prev_glue_ray(1);
        std::vector<ConeComplex> complexes;

        for (int ci = 0; ci < n_charts && !failed; ++ci) {
            auto seed = try_chart_seed(rng, rank, ci > 0 ? prev_glue_s : Int(0), opts.s_bound);
            if (!seed) {
                failed = true;
                break;
            }
            ConeComplex k = ConeComplex::from_maximal({Cone::from_rays(seed->rays, rank)}, rank);
            int subdivisions = static_cast<int>(rng.range(0, opts.max_subdivisions));
            for (int s = 0; s < subdivisions; ++s) {
                const auto& maximal = k.maximal_cones();
                const Cone& target = maximal[rng.range(0, maximal.size() - 1)];
                Vec v(rank, 0);
                for (const Vec& r : target.rays()) v = add(v, scale(Int(rng.range(1, 2)), r));
                v = primitive(v);
                k = stellar_subdivide(k, v);
            }
            if (max_ray_multiplicity(k, seed->e) > opts.s_bound) {
                failed = true;
                break;
            }

            RawChart chart;
            chart.id = "c" + std::to_string(ci);
            chart.rank = rank;
            chart.e = seed->e;
            for (const Cone& c : k.maximal_cones()) chart.maximal_cones.push_back(c.rays());
            m.charts.push_back(std::move(chart));
            complexes.push_back(k);

            // glue this chart's designated base ray to the previous chart
            if (ci > 0) {
                Vec v_b = primitive(seed->rays[0]);
                const Vec& v_a = prev_glue_ray[0];
                Vec phi = dual_functional(v_a);
                Mat map(rank, Vec(rank, 0));
                for (int i = 0; i < rank; ++i)
                    for (int j = 0; j < rank; ++j) map[i][j] = v_b[i] * phi[j];
                RawGluing g;
                g.a = RawFaceRef{m.charts[ci - 1].id,
                                 {static_cast<int>(
                                     std::find(complexes[ci - 1].rays().begin(),
                                               complexes[ci - 1].rays().end(), v_a) -
                                     complexes[ci - 1].rays().begin())}};
                g.b = RawFaceRef{m.charts[ci].id,
                                 {static_cast<int>(std::find(k.rays().begin(), k.rays().end(),
                                                             v_b) -
                                                   k.rays().begin())}};
                g.map = map;
                m.gluings.push_back(std::move(g));
            }

            // pick the ray the next chart will share
            const Mat& rays = complexes[ci].rays();
            Vec glue_ray = rays[rng.range(0, rays.size() - 1)];
            prev_glue_ray[0] = glue_ray;
            prev_glue_s = dot(seed->e, glue_ray);
        }
        if (failed) continue;

        // decorate every stratum class
        ModelStructure structure;
        try {
            structure = build_classes(m);
        } catch (const error&) {
            continue;
        }
        for (const FaceClass& cls : structure.classes) {
            RawFaceRef ref;
            ref.chart = m.charts[cls.root_chart].id;
            const Mat& rays = structure.complexes[cls.root_chart].rays();
            for (const Vec& r : cls.root_face.rays()) {
                auto it = std::find(rays.begin(), rays.end(), r);
                ref.ray_indices.push_back(static_cast<int>(it - rays.begin()));
            }
            std::sort(ref.ray_indices.begin(), ref.ray_indices.end());
            m.chi.push_back(
                RawDecoration{ref, Int(rng.range(-opts.chi_bound, opts.chi_bound))});
        }

        if (!validate(m).ok()) continue;
        return m;
    }
    throw resource_error("random_model: could not generate a model within bounds");
}

std::pair<std::string, Vec> random_subdivision_center(const DecoratedModel& model, Rng& rng) {
    ModelStructure s = build_classes(model);
    int chart = static_cast<int>(rng.range(0, static_cast<long long>(model.charts.size()) - 1));
    const auto& faces = s.complexes[chart].all_faces();
    const Cone& face = faces[rng.range(0, static_cast<long long>(faces.size()) - 1)];
    Vec v(model.charts[chart].rank, 0);
    for (const Vec& r : face.rays()) v = add(v, scale(Int(rng.range(1, 2)), r));
    return {model.charts[chart].id, primitive(v)};
}

OracleRun run_lemma_oracle(uint64_t seed, int cases, int max_d) {
    Rng rng(seed);
    OracleRun run;
    std::ostringstream os;
    while (run.cases_run < cases) {
        AffineMonoid p = random_saturated_monoid(rng, 3);
        Vec e = random_vertical_element(p, rng);
        Int d = rng.range(1, std::max(1, max_d));

        // degree bound: three times the largest generator degree of Q
        const Vec& w = p.grading();
        Int gen_deg = dot(w, e);
        for (const Vec& g : p.generators()) gen_deg = std::max(gen_deg, d * dot(w, g));
        Int bound = 3 * gen_deg;
        if (bound > 72) continue;  // keep the instance within enumeration reach

        ++run.cases_run;
        bool verdict = lemma33_oracle(p, e, d, bound);
        if (verdict) {
            ++run.cases_true;
        } else {
            os << "counterexample candidate: P = " << to_string(p.generators())
               << ", e = " << to_string(e) << ", d = " << d << ", bound = " << bound << "\n";
        }
    }
    run.ok = (run.cases_true == run.cases_run);
    os << "saturation-structure oracle: " << run.cases_true << "/" << run.cases_run
       << " instances verified (seed " << seed << ")\n";
    run.report = os.str();
    return run;
}

namespace {

struct Checker {
    std::ostringstream os;
    bool ok = true;

    void check(bool cond, const std::string& what) {
        os << (cond ? "[ok]   " : "[FAIL] ") << what << "\n";
        if (!cond) ok = false;
    }
};

}  // namespace

SelfTest run_selftest() {
    Checker c;
    try {
        {
            DecoratedModel m = parse_model(builtin_fixture("i0star"));
            Analysis a = run_analysis(m, 12);
            c.check(a.traces.volume == 4, "I0* volume = 4");
            c.check(a.traces.traces.at(1) == 4, "I0* trace(1) = 4");
            c.check(a.traces.traces.at(2) == 0, "I0* trace(2) = 0");
            ZetaFactorization want;
            want.factors[1] = -4;
            want.factors[2] = 2;
            c.check(a.zeta_factors == want, "I0* zeta = (t^2-1)^2 (t-1)^-4");
            c.check(a.traces.error_term == 0, "I0* error term = 0");
        }
        {
            DecoratedModel m = parse_model(builtin_fixture("i3"));
            Analysis a = run_analysis(m, 12);
            c.check(a.traces.volume == 0, "I3 volume = 0");
            bool all_zero = true;
            for (const auto& [d, t] : a.traces.traces) all_zero = all_zero && t == 0;
            c.check(all_zero, "I3 traces vanish");
            c.check(a.zeta_factors.factors.empty(), "I3 zeta = 1");
        }
        {
            DecoratedModel m = parse_model(builtin_fixture("good_reduction"));
            Analysis a = run_analysis(m, 6);
            c.check(a.traces.volume == 3 && a.traces.traces.at(5) == 3,
                    "good reduction trace = volume = chi");
        }
        {
            DecoratedModel m = parse_model(builtin_fixture("a1"));
            Analysis before = run_analysis(m, 12);
            c.check(!before.snc, "A1 model is not SNC");
            ModelResolution res = model_resolve(m);
            Analysis after = run_analysis(res.model, 12);
            c.check(after.snc, "resolved A1 model is SNC");
            c.check(res.trail.size() == 1 && res.trail[0].second == Vec({1, 1}),
                    "A1 resolution inserts exactly (1,1)");
            c.check(before.traces.traces == after.traces.traces &&
                        before.traces.volume == after.traces.volume &&
                        before.zeta_factors == after.zeta_factors,
                    "A1 invariants preserved by resolution");
        }
        {
            DecoratedModel m = parse_model(builtin_fixture("saito_chain"));
            Analysis a = run_analysis(m, 8);
            c.check(a.verdict && a.verdict->ok, "Saito chain satisfies trace(1) = volume");
            c.check(a.traces.error_term == 0, "Saito chain error term vanishes");
        }
        {
            DecoratedModel m = parse_model(builtin_fixture("violating"));
            bool tripped = false;
            try {
                run_analysis(m, 6);
            } catch (const consistency_error&) {
                tripped = true;
            }
            c.check(tripped, "violating model trips the consistency gate");
        }
        {
            OracleRun oracle = run_lemma_oracle(20260810, 12, 4);
            c.check(oracle.ok, "saturation-structure oracle (12 cases)");
        }
        {
            Rng rng(977);
            bool preserved = true;
            for (int i = 0; i < 10 && preserved; ++i) {
                DecoratedModel m = random_model(rng, RandomModelOptions{});
                Analysis a0 = run_analysis(m, 12);
                auto [chart, center] = random_subdivision_center(m, rng);
                DecoratedModel m2 = model_stellar_subdivide(m, chart, center);
                Analysis a1 = run_analysis(m2, 12);
                preserved = a0.traces.traces == a1.traces.traces &&
                            a0.traces.volume == a1.traces.volume &&
                            a0.zeta_factors == a1.zeta_factors &&
                            a0.traces.error_term == a1.traces.error_term;
            }
            c.check(preserved, "subdivision invariance (10 random models)");
        }
    } catch (const std::exception& e) {
        c.check(false, std::string("unexpected exception: ") + e.what());
    }
    SelfTest st;
    st.ok = c.ok;
    st.report = c.os.str();
    return st;
}

}  // namespace logtrace
