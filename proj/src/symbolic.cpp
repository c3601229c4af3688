#include "orbcount/symbolic.hpp"

#include <mpfr.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace orbcount {

namespace {

constexpr mpfr_prec_t kPrec = 200;

struct Mpfr {
    mpfr_t v;
    Mpfr() { mpfr_init2(v, kPrec); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    long double ld() const { return mpfr_get_ld(v, MPFR_RNDN); }
};

template <typename Map>
void drop_zero_powers(Map& m) {
    for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
}

std::string power_suffix(int e) { return e == 1 ? "" : "^" + std::to_string(e); }

}  // namespace

Symbolic::Symbolic(Rat c) : coeff_(std::move(c)) {
    coeff_.canonicalize();
    normalize();
}

void Symbolic::normalize() {
    if (coeff_ == 0) {
        root_ = 1;
        pi_half_ = 0;
        logs_.clear();
        log_values_.clear();
        zetas_.clear();
        return;
    }
    drop_zero_powers(logs_);
    drop_zero_powers(zetas_);
    for (auto it = log_values_.begin(); it != log_values_.end();)
        it = logs_.count(it->first) ? std::next(it) : log_values_.erase(it);
}

Symbolic Symbolic::pi(int half_power) {
    Symbolic s(1);
    s.pi_half_ = half_power;
    return s;
}

Symbolic Symbolic::sqrt(const Int& m) {
    if (m <= 0) throw std::invalid_argument("sqrt of nonpositive integer");
    auto [sf, r] = squarefree_decomposition(m);
    Symbolic s{Rat(r)};
    s.root_ = sf;
    return s;
}

Symbolic Symbolic::log(const std::string& name, long double value) {
    Symbolic s(1);
    s.logs_[name] = 1;
    s.log_values_[name] = value;
    return s;
}

Symbolic Symbolic::zeta(int k) {
    if (k < 2) throw std::invalid_argument("zeta(k) needs k >= 2");
    if (k % 2 == 0) {
        // zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!)
        Int fact = 1;
        for (int i = 2; i <= k; ++i) fact *= i;
        Int two_k = Int(1) << k;
        Rat c = bernoulli(k) * Rat(two_k) / Rat(2 * fact);
        if ((k / 2) % 2 == 0) c = -c;
        return Symbolic(c) * pi(2 * k);
    }
    Symbolic s(1);
    s.zetas_[k] = 1;
    return s;
}

long double Symbolic::value() const {
    long double v = coeff_.get_d();
    if (coeff_.get_den() != 1 || !coeff_.get_num().fits_slong_p()) {
        // ratio of big integers without overflow
        long exp_num = 0, exp_den = 0;
        double mn = mpz_get_d_2exp(&exp_num, coeff_.get_num_mpz_t());
        double md = mpz_get_d_2exp(&exp_den, coeff_.get_den_mpz_t());
        v = std::ldexp(static_cast<long double>(mn) / md, static_cast<int>(exp_num - exp_den));
    }
    if (root_ != 1) v *= std::sqrt(static_cast<long double>(root_.get_d()));
    if (pi_half_ != 0) v *= std::pow(std::numbers::pi_v<long double>, pi_half_ / 2.0L);
    for (const auto& [name, e] : logs_) v *= std::pow(log_values_.at(name), static_cast<long double>(e));
    for (const auto& [k, e] : zetas_) v *= std::pow(zeta_value(k), static_cast<long double>(e));
    return v;
}

std::string Symbolic::to_string() const {
    if (coeff_ == 0) return "0";
    std::vector<std::string> num, den;
    Rat c = abs(coeff_);
    bool root_below = false;
    if (root_ != 1 && c.get_den() % root_ == 0) {
        root_below = true;
        c *= Rat(root_);
        c.canonicalize();
    }
    auto pi_term = [](int h) {
        if (h == 1) return std::string("sqrt(pi)");
        if (h % 2 == 0) return "pi" + power_suffix(h / 2);
        return "pi^(" + std::to_string(h) + "/2)";
    };
    if (c.get_num() != 1) num.push_back(orbcount::to_string(c.get_num()));
    if (root_ != 1 && !root_below) num.push_back("sqrt(" + orbcount::to_string(root_) + ")");
    if (pi_half_ > 0) num.push_back(pi_term(pi_half_));
    for (const auto& [name, e] : logs_)
        if (e > 0) num.push_back(name + power_suffix(e));
    for (const auto& [k, e] : zetas_)
        if (e > 0) num.push_back("zeta(" + std::to_string(k) + ")" + power_suffix(e));

    if (c.get_den() != 1) den.push_back(orbcount::to_string(c.get_den()));
    if (pi_half_ < 0) den.push_back(pi_term(-pi_half_));
    if (root_below) den.push_back("sqrt(" + orbcount::to_string(root_) + ")");
    for (const auto& [name, e] : logs_)
        if (e < 0) den.push_back(name + power_suffix(-e));
    for (const auto& [k, e] : zetas_)
        if (e < 0) den.push_back("zeta(" + std::to_string(k) + ")" + power_suffix(-e));

    auto join = [](const std::vector<std::string>& parts) {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
        return s;
    };
    std::string out = coeff_ < 0 ? "-" : "";
    out += num.empty() ? "1" : join(num);
    if (!den.empty()) out += den.size() == 1 ? "/" + den[0] : "/(" + join(den) + ")";
    return out;
}

Symbolic Symbolic::pow(int e) const {
    Symbolic acc(1);
    Symbolic base = e >= 0 ? *this : Symbolic(1) / *this;
    for (int i = 0; i < std::abs(e); ++i) acc = acc * base;
    return acc;
}

Symbolic operator*(const Symbolic& a, const Symbolic& b) {
    if (a.is_zero() || b.is_zero()) return Symbolic(0);
    Symbolic r(a.coeff_ * b.coeff_);
    Int g;
    mpz_gcd(g.get_mpz_t(), a.root_.get_mpz_t(), b.root_.get_mpz_t());
    r.coeff_ *= Rat(g);
    r.root_ = a.root_ * b.root_ / (g * g);
    r.pi_half_ = a.pi_half_ + b.pi_half_;
    r.logs_ = a.logs_;
    r.log_values_ = a.log_values_;
    for (const auto& [name, e] : b.logs_) {
        r.logs_[name] += e;
        r.log_values_[name] = b.log_values_.at(name);
    }
    r.zetas_ = a.zetas_;
    for (const auto& [k, e] : b.zetas_) r.zetas_[k] += e;
    r.coeff_.canonicalize();
    r.normalize();
    return r;
}

Symbolic operator/(const Symbolic& a, const Symbolic& b) {
    if (b.is_zero()) throw std::domain_error("symbolic division by zero");
    Symbolic inv(1 / b.coeff_);
    // 1/sqrt(m) = sqrt(m)/m
    inv.root_ = b.root_;
    inv.coeff_ /= Rat(b.root_);
    inv.pi_half_ = -b.pi_half_;
    for (const auto& [name, e] : b.logs_) {
        inv.logs_[name] = -e;
        inv.log_values_[name] = b.log_values_.at(name);
    }
    for (const auto& [k, e] : b.zetas_) inv.zetas_[k] = -e;
    inv.coeff_.canonicalize();
    return a * inv;
}

Symbolic Symbolic::operator-() const {
    Symbolic r = *this;
    r.coeff_ = -r.coeff_;
    return r;
}

bool operator==(const Symbolic& a, const Symbolic& b) {
    return a.coeff_ == b.coeff_ && a.root_ == b.root_ && a.pi_half_ == b.pi_half_ && a.logs_ == b.logs_ &&
           a.zetas_ == b.zetas_;
}

Symbolic operator+(const Symbolic& a, const Symbolic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.root_ != b.root_ || a.pi_half_ != b.pi_half_ || a.logs_ != b.logs_ || a.zetas_ != b.zetas_)
        throw std::invalid_argument("cannot add unlike symbolic monomials");
    Symbolic r = a;
    r.coeff_ += b.coeff_;
    r.coeff_.canonicalize();
    r.normalize();
    return r;
}

long double zeta_value(int k) {
    Mpfr z;
    mpfr_zeta_ui(z.v, static_cast<unsigned long>(k), MPFR_RNDN);
    return z.ld();
}

Rat bernoulli(int k) {
    // Akiyama-Tanigawa; B_1 = +1/2 in this convention, fixed below
    std::vector<Rat> a(k + 1);
    for (int m = 0; m <= k; ++m) {
        a[m] = Rat(1, m + 1);
        for (int j = m; j >= 1; --j) {
            a[j - 1] = j * (a[j - 1] - a[j]);
            a[j - 1].canonicalize();
        }
    }
    Rat b = a[0];
    if (k == 1) b = -b;
    return b;
}

long double log_quadratic_unit(const Int& t, const Int& u, const Int& D) {
    Mpfr x, s;
    mpfr_set_z(s.v, D.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(s.v, s.v, MPFR_RNDN);
    mpfr_mul_z(s.v, s.v, u.get_mpz_t(), MPFR_RNDN);
    mpfr_add_z(x.v, s.v, t.get_mpz_t(), MPFR_RNDN);
    mpfr_div_ui(x.v, x.v, 2, MPFR_RNDN);
    mpfr_log(x.v, x.v, MPFR_RNDN);
    return x.ld();
}

}  // namespace orbcount
