#include "logtrace.h"

#include "logtrace/fixtures.hpp"
#include "logtrace/report.hpp"
#include "logtrace/sampling.hpp"

#include <cstring>
#include <sstream>

struct logtrace_model {
    logtrace::DecoratedModel m;
};

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// translate the C++ error taxonomy into status codes
template <typename F>
logtrace_status guarded(F&& f) {
    try {
        return f();
    } catch (const logtrace::consistency_error& e) {
        g_last_error = e.what();
        return LOGTRACE_ERR_CONSISTENCY;
    } catch (const logtrace::input_error& e) {
        g_last_error = e.what();
        return LOGTRACE_ERR_PARSE;
    } catch (const logtrace::precondition_error& e) {
        g_last_error = e.what();
        return LOGTRACE_ERR_PRECONDITION;
    } catch (const logtrace::resource_error& e) {
        g_last_error = e.what();
        return LOGTRACE_ERR_RESOURCE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LOGTRACE_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* logtrace_version(void) { return "logtrace 1.0.0"; }

const char* logtrace_last_error(void) { return g_last_error.c_str(); }

void logtrace_string_free(char* s) { std::free(s); }

int logtrace_rank_bound(void) { return logtrace::config().rank_bound; }

void logtrace_set_rank_bound(int bound) {
    if (bound >= 1) logtrace::config().rank_bound = bound;
}

logtrace_status logtrace_model_parse(const char* json_text, logtrace_model** out) {
    if (!json_text || !out) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        auto* m = new logtrace_model{logtrace::parse_model(json_text)};
        *out = m;
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_model_load(const char* path, logtrace_model** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        auto* m = new logtrace_model{logtrace::load_model(path)};
        *out = m;
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_model_save(const logtrace_model* m, const char* path) {
    if (!m || !path) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        logtrace::save_model(m->m, path);
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_model_to_json(const logtrace_model* m, char** out_json) {
    if (!m || !out_json) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        *out_json = dup_string(logtrace::model_to_json(m->m));
        return LOGTRACE_OK;
    });
}

void logtrace_model_free(logtrace_model* m) { delete m; }

logtrace_status logtrace_model_validate(const logtrace_model* m, char** out_report) {
    if (!m) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        logtrace::ValidationReport rep = logtrace::validate(m->m);
        if (out_report) *out_report = dup_string(rep.to_text());
        if (!rep.ok()) {
            g_last_error = rep.to_text();
            return LOGTRACE_ERR_VALIDATION;
        }
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_model_analyze(const logtrace_model* m, int max_d, int format,
                                       char** out_report) {
    if (!m || !out_report) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        try {
            logtrace::Analysis a = logtrace::run_analysis(m->m, max_d);
            *out_report =
                dup_string(format == 1 ? logtrace::render_json(a) : logtrace::render_text(a));
            return LOGTRACE_OK;
        } catch (const logtrace::precondition_error& e) {
            // validation failures carry their report in the message
            g_last_error = e.what();
            return LOGTRACE_ERR_VALIDATION;
        }
    });
}

logtrace_status logtrace_model_subdivide(const logtrace_model* m, const char* chart,
                                         const int64_t* center, size_t center_len,
                                         const int64_t* face_ray_indices, size_t face_len,
                                         logtrace_model** out) {
    if (!m || !chart || !center || center_len == 0 || !out) {
        g_last_error = "null or empty argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        logtrace::Vec v;
        for (size_t i = 0; i < center_len; ++i) v.push_back(logtrace::Int(center[i]));
        std::vector<int> face;
        for (size_t i = 0; i < face_len; ++i)
            face.push_back(static_cast<int>(face_ray_indices[i]));
        logtrace::DecoratedModel next = logtrace::model_stellar_subdivide(
            m->m, chart, v, face_len > 0 ? &face : nullptr);
        *out = new logtrace_model{std::move(next)};
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_model_resolve(const logtrace_model* m, logtrace_model** out,
                                       char** out_trail) {
    if (!m || !out) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        logtrace::ModelResolution res = logtrace::model_resolve(m->m);
        std::ostringstream trail;
        for (const auto& [chart, v] : res.trail)
            trail << chart << " " << logtrace::to_string(v) << "\n";
        *out = new logtrace_model{std::move(res.model)};
        if (out_trail) *out_trail = dup_string(trail.str());
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_model_is_snc(const logtrace_model* m, int* out_snc, char** out_cycle) {
    if (!m || !out_snc) {
        g_last_error = "null argument";
        return LOGTRACE_ERR_PARSE;
    }
    return guarded([&] {
        logtrace::SncResult r = logtrace::is_snc(m->m);
        *out_snc = r.snc ? 1 : 0;
        if (out_cycle) {
            std::ostringstream os;
            for (const auto& [id, s] : r.cycle) os << s << "*[" << id << "]\n";
            *out_cycle = dup_string(os.str());
        }
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_oracle_run(uint64_t seed, int cases, int max_d, char** out_report) {
    return guarded([&] {
        logtrace::OracleRun run = logtrace::run_lemma_oracle(seed, cases, max_d);
        if (out_report) *out_report = dup_string(run.report);
        if (!run.ok) {
            g_last_error = "saturation-structure oracle found a failing instance";
            return LOGTRACE_ERR_VALIDATION;
        }
        return LOGTRACE_OK;
    });
}

logtrace_status logtrace_selftest(char** out_report) {
    return guarded([&] {
        logtrace::SelfTest st = logtrace::run_selftest();
        if (out_report) *out_report = dup_string(st.report);
        if (!st.ok) {
            g_last_error = "self test failed";
            return LOGTRACE_ERR_VALIDATION;
        }
        return LOGTRACE_OK;
    });
}

const char* logtrace_fixture(const char* name) {
    if (!name) return nullptr;
    static thread_local std::string buffer;
    buffer = logtrace::builtin_fixture(name);
    return buffer.empty() ? nullptr : buffer.c_str();
}

}  // extern "C"
