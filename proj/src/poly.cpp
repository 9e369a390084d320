#include "quadode/poly.hpp"

#include <algorithm>

namespace quadode {

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::monomial(std::size_t deg, const Rational& coeff) {
    std::vector<Rational> c(deg + 1, Rational(0));
    c[deg] = coeff;
    return Poly(std::move(c));
}

void Poly::set_coeff(std::size_t i, const Rational& v) {
    if (i >= c_.size()) c_.resize(i + 1, Rational(0));
    c_[i] = v;
    trim();
}

Poly Poly::operator-() const {
    std::vector<Rational> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
    return Poly(std::move(r));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
}

Poly operator*(const Rational& s, const Poly& p) {
    std::vector<Rational> r(p.c_.size());
    for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] = s * p.c_[i];
    return Poly(std::move(r));
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rational> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = Rational(static_cast<long>(i)) * c_[i];
    return Poly(std::move(r));
}

Rational Poly::eval(const Rational& t) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

double Poly::eval(double t) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + it->to_double();
    return acc;
}

std::vector<double> Poly::coeffs_double() const {
    std::vector<double> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i].to_double();
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly acc = Poly::one(), b = *this;
    while (e) {
        if (e & 1u) acc = acc * b;
        b = b * b;
        e >>= 1u;
    }
    return acc;
}

std::optional<Poly> perfect_square_root(const Poly& p) {
    if (p.is_zero()) return Poly();
    int n = p.degree();
    if (n % 2 != 0) return std::nullopt;
    auto lead = p.leading().exact_sqrt();
    if (!lead) return std::nullopt;
    std::size_t m = static_cast<std::size_t>(n) / 2;
    std::vector<Rational> q(m + 1, Rational(0));
    q[m] = *lead;  // positive branch
    // descending match: coeff of x^(m+k) in q^2 is 2*q[m]*q[k] + cross terms
    // with indices strictly between k and m
    Rational twolead = Rational(2) * q[m];
    for (std::size_t k = m; k-- > 0;) {
        // coeff of x^(m+k) in q^2 is 2*q[m]*q[k] plus ordered pairs (i, m+k-i)
        // with both indices strictly between k and m
        Rational cross(0);
        for (std::size_t i = k + 1; i + 1 <= m; ++i) {
            std::size_t j = m + k - i;
            if (j <= k || j >= m) continue;
            cross += q[i] * q[j];
        }
        q[k] = (p.coeff(m + k) - cross) / twolead;
    }
    Poly root{std::vector<Rational>(q)};
    if (root * root != p) return std::nullopt;
    return root;
}

}  // namespace quadode
