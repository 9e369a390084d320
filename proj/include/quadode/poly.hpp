#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "quadode/rational.hpp"

namespace quadode {

/// Dense univariate polynomial over the rationals, coefficients stored in
/// ascending degree. Normalized: no trailing zero coefficients, so the zero
/// polynomial has an empty coefficient vector and degree() == -1.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<Rational> ascending) : c_(ascending) { trim(); }
    explicit Poly(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }
    explicit Poly(const Rational& constant) : c_{constant} { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly{Rational(1)}; }
    static Poly x() { return Poly{Rational(0), Rational(1)}; }
    static Poly monomial(std::size_t deg, const Rational& coeff = Rational(1));

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    std::size_t size() const { return c_.size(); }

    /// Coefficient of x^i (zero beyond the stored degree).
    Rational coeff(std::size_t i) const {
        return i < c_.size() ? c_[i] : Rational(0);
    }
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    /// Replace the coefficient of x^i (renormalizes).
    void set_coeff(std::size_t i, const Rational& v);

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Rational& s, const Poly& p);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Formal derivative.
    Poly derivative() const;

    /// Exact evaluation at a rational point (Horner).
    Rational eval(const Rational& t) const;
    /// Floating evaluation (Horner).
    double eval(double t) const;

    /// Coefficients as doubles, ascending; for numeric kernels.
    std::vector<double> coeffs_double() const;

    Poly pow(unsigned e) const;

private:
    void trim();
    std::vector<Rational> c_;
};

/// q with q*q == p exactly and positive leading coefficient, if p is a perfect
/// square over the rationals. The zero polynomial yields zero.
std::optional<Poly> perfect_square_root(const Poly& p);

}  // namespace quadode
