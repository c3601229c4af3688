#include "orbcount/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace orbcount {

namespace {

// Exact division of monic integer polynomials (low-first).
std::vector<Int> divide_exact(std::vector<Int> a, const std::vector<Int>& b) {
    const std::size_t db = b.size() - 1;
    std::vector<Int> q(a.size() - db, Int(0));
    for (std::size_t i = a.size(); i-- > db;) {
        Int c = a[i];
        q[i - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    return q;
}

void reduce_mod(std::vector<Int>& c, const std::vector<Int>& phi) {
    const std::size_t m = phi.size() - 1;
    for (std::size_t i = c.size(); i-- > m;) {
        if (c[i] == 0) continue;
        Int v = c[i];
        for (std::size_t j = 0; j <= m; ++j) c[i - m + j] -= v * phi[j];
    }
    c.resize(m, Int(0));
}

}  // namespace

std::vector<Int> cyclotomic_polynomial(int d) {
    static std::map<int, std::vector<Int>> cache;
    static std::mutex mu;
    if (d < 1) throw std::invalid_argument("cyclotomic order must be positive");
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(d); it != cache.end()) return it->second;
    }
    std::vector<Int> p(d + 1, Int(0));
    p[0] = -1;
    p[d] = 1;
    for (int e = 1; e < d; ++e)
        if (d % e == 0) p = divide_exact(p, cyclotomic_polynomial(e));
    std::lock_guard<std::mutex> lock(mu);
    cache[d] = p;
    return p;
}

Cyclotomic::Cyclotomic(int d, const Int& value) : d_(d) {
    c_.assign(cyclotomic_polynomial(d).size() - 1, Int(0));
    c_[0] = value;
}

Cyclotomic Cyclotomic::from_unreduced(int d, std::vector<Int> c) {
    Cyclotomic r(d);
    reduce_mod(c, cyclotomic_polynomial(d));
    r.c_ = std::move(c);
    return r;
}

Cyclotomic Cyclotomic::zeta_power(int d, long k) {
    std::vector<Int> c(static_cast<std::size_t>(((k % d) + d) % d) + 1, Int(0));
    c.back() = 1;
    return from_unreduced(d, std::move(c));
}

bool Cyclotomic::is_zero() const {
    for (const Int& v : c_)
        if (v != 0) return false;
    return true;
}

bool Cyclotomic::is_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Int Cyclotomic::integer_value() const {
    if (!is_integer()) throw std::domain_error("cyclotomic value is not an integer");
    return c_[0];
}

Cyclotomic Cyclotomic::conj() const {
    std::vector<Int> c(d_ + 1, Int(0));
    for (std::size_t i = 0; i < c_.size(); ++i) c[(d_ - static_cast<int>(i)) % d_] += c_[i];
    return from_unreduced(d_, std::move(c));
}

std::complex<double> Cyclotomic::value() const {
    std::complex<double> z = std::polar(1.0, 2 * std::numbers::pi / d_), acc = 0, pw = 1;
    for (const Int& v : c_) {
        acc += v.get_d() * pw;
        pw *= z;
    }
    return acc;
}

std::string Cyclotomic::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Int a = abs(c_[i]);
        std::string mono = i == 0 ? "" : i == 1 ? "z" : "z^" + std::to_string(i);
        std::string term = mono.empty() ? orbcount::to_string(a) : (a == 1 ? mono : orbcount::to_string(a) + "*" + mono);
        if (out.empty())
            out = (c_[i] < 0 ? "-" : "") + term;
        else
            out += (c_[i] < 0 ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.d_ != b.d_) throw std::invalid_argument("cyclotomic order mismatch");
    Cyclotomic r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.d_ != b.d_) throw std::invalid_argument("cyclotomic order mismatch");
    Cyclotomic r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
}

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.d_ != b.d_) throw std::invalid_argument("cyclotomic order mismatch");
    std::vector<Int> c(a.c_.size() + b.c_.size(), Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Cyclotomic::from_unreduced(a.d_, std::move(c));
}

}  // namespace orbcount
