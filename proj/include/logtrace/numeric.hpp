#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace logtrace {

// All lattice/monoid arithmetic is exact. Intermediate Smith/Hermite
// reductions can blow up far beyond the input magnitude, hence arbitrary
// precision throughout.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;

// Error taxonomy. These map one-to-one onto the C API status codes and the
// CLI exit codes, so keep the hierarchy flat.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct input_error : error {
    using error::error;
};
struct precondition_error : error {
    using error::error;
};
struct resource_error : error {
    using error::error;
};
struct consistency_error : error {
    using error::error;
};

// Global tunables. The rank bound guards every enumeration-based routine;
// the coordinate bound caps generator entries accepted from model files.
struct Config {
    int rank_bound = 4;
    long long coord_bound = 64;
    // hard step caps so a malformed input fails loudly instead of spinning
    long long enumeration_cap = 4'000'000;
    int resolution_step_cap = 20'000;
};

Config& config();

inline void check_rank_bound(int rank, const char* where) {
    if (rank > config().rank_bound) {
        std::ostringstream os;
        os << where << ": rank " << rank << " exceeds configured bound "
           << config().rank_bound;
        throw resource_error(os.str());
    }
}

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

// gcd of entries; 0 for the zero vector by convention (callers guard).
Int content(const Vec& v);

// v divided by its content; the zero vector stays zero.
Vec primitive(const Vec& v);

Int dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Int& k, const Vec& v);
Vec negate(const Vec& v);
bool is_zero(const Vec& v);

// largest divisor of s prime to p; p = 0 returns s unchanged
Int prime_to_p_part(Int s, const Int& p);

bool is_prime(const Int& n);

Int binomial(int n, int q);

Int coord_sum(const Vec& v);

// ordering key used for deterministic presentations: grade by coordinate
// sum, break ties lexicographically
bool graded_lex_less(const Vec& a, const Vec& b);
bool lex_less(const Vec& a, const Vec& b);

std::string to_string(const Vec& v);
std::string to_string(const Mat& m);

// column count of a (possibly empty) row-major matrix
inline int row_length(const Mat& m, int fallback) {
    return m.empty() ? fallback : static_cast<int>(m.front().size());
}

}  // namespace logtrace
