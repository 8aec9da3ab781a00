#pragma once

#include "logtrace/fan.hpp"

#include <cstdint>
#include <random>

namespace logtrace {

// Deterministic driver RNG; every randomized command is reproducible from
// its seed.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}
    long long range(long long lo, long long hi) {  // inclusive
        return std::uniform_int_distribution<long long>(lo, hi)(eng_);
    }
    bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(eng_) < p; }

  private:
    std::mt19937_64 eng_;
};

struct RandomModelOptions {
    int max_rank = 3;
    int max_charts = 3;
    long long chi_bound = 5;
    long long s_bound = 12;
    int max_subdivisions = 2;  // pre-applied to individual charts
};

// a validated decorated model within the stated bounds
DecoratedModel random_model(Rng& rng, const RandomModelOptions& opts);

// a sharp saturated toric monoid of rank <= max_rank with a vertical element
AffineMonoid random_saturated_monoid(Rng& rng, int max_rank);
Vec random_vertical_element(const AffineMonoid& p, Rng& rng);

// a legal stellar-subdivision center in one of the model's charts:
// a primitive interior combination of the rays of a random face
std::pair<std::string, Vec> random_subdivision_center(const DecoratedModel& model, Rng& rng);

struct OracleRun {
    int cases_run = 0;
    int cases_true = 0;
    bool ok = false;
    std::string report;
};

// randomized saturation-structure oracle: every instance must come back true
OracleRun run_lemma_oracle(uint64_t seed, int cases, int max_d);

struct SelfTest {
    bool ok = false;
    std::string report;
};

// built-in fixtures plus small randomized property suites
SelfTest run_selftest();

}  // namespace logtrace
