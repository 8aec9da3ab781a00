#include "logtrace/numeric.hpp"

namespace logtrace {

Config& config() {
    static Config cfg;
    return cfg;
}

Int content(const Vec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    return g;
}

Vec primitive(const Vec& v) {
    Int c = content(v);
    if (c == 0 || c == 1) return v;
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / c;
    return out;
}

Int dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw input_error("dot: dimension mismatch");
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw input_error("add: dimension mismatch");
    Vec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw input_error("sub: dimension mismatch");
    Vec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec scale(const Int& k, const Vec& v) {
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = k * v[i];
    return out;
}

Vec negate(const Vec& v) {
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
    return out;
}

bool is_zero(const Vec& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

Int prime_to_p_part(Int s, const Int& p) {
    if (s <= 0) throw precondition_error("prime_to_p_part: argument must be positive");
    if (p == 0) return s;
    while (s % p == 0) s /= p;
    return s;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Int binomial(int n, int q) {
    if (q < 0 || q > n) return 0;
    Int r = 1;
    for (int i = 0; i < q; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

Int coord_sum(const Vec& v) {
    Int s = 0;
    for (const Int& x : v) s += x;
    return s;
}

bool lex_less(const Vec& a, const Vec& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

bool graded_lex_less(const Vec& a, const Vec& b) {
    Int sa = coord_sum(a), sb = coord_sum(b);
    if (sa != sb) return sa < sb;
    return lex_less(a, b);
}

std::string to_string(const Vec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << ")";
    return os.str();
}

std::string to_string(const Mat& m) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) os << " ";
        os << to_string(m[i]);
    }
    os << "]";
    return os.str();
}

}  // namespace logtrace
