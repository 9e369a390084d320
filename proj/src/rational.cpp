#include "quadode/rational.hpp"

namespace quadode {

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
        mpz_class n(ns), d(ds);
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        mpq_class q(n, d);
        q.canonicalize();
        return Rational(q);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal literal -> exact fraction, e.g. 0.25 -> 1/4
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg) ip = ip.substr(1);
        if (ip.empty() && fp.empty()) throw std::invalid_argument("Rational: bad decimal");
        if (ip.empty()) ip = "0";
        mpz_class whole(ip), frac(fp.empty() ? "0" : fp);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        mpq_class q(whole * scale + frac, scale);
        q.canonicalize();
        if (neg) q = -q;
        return Rational(q);
    }
    return Rational(mpq_class(mpz_class(s)));
}

namespace {

// exact integer n-th root; nullopt unless r^n == v
std::optional<mpz_class> exact_root(const mpz_class& v, unsigned n) {
    if (v < 0 && n % 2 == 0) return std::nullopt;
    mpz_class r;
    int exact = mpz_root(r.get_mpz_t(), v.get_mpz_t(), n);
    if (!exact) return std::nullopt;
    return r;
}

}  // namespace

std::optional<Rational> Rational::exact_sqrt() const {
    if (sign() < 0) return std::nullopt;
    auto rn = exact_root(num(), 2);
    if (!rn) return std::nullopt;
    auto rd = exact_root(den(), 2);
    if (!rd) return std::nullopt;
    mpq_class q(*rn, *rd);
    q.canonicalize();
    return Rational(q);
}

std::optional<Rational> Rational::exact_cbrt() const {
    auto rn = exact_root(num(), 3);
    if (!rn) return std::nullopt;
    auto rd = exact_root(den(), 3);
    if (!rd) return std::nullopt;
    mpq_class q(*rn, *rd);
    q.canonicalize();
    return Rational(q);
}

Rational pow(const Rational& base, unsigned e) {
    Rational acc(1), b = base;
    while (e) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1u;
    }
    return acc;
}

}  // namespace quadode
