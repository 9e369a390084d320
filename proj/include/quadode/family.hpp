#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "quadode/poly.hpp"
#include "quadode/radical.hpp"

namespace quadode {

/// One solvable instance of y''' + y' = Q(y), Q = A*sqrt(B)/2.
///
/// Invariants (maintained by the factory functions below):
///   A == 2 + B''  exactly, and if U is present then U*U == B exactly.
/// The constant and linear coefficients of B are the two free constants of
/// the first integral (y')^2 = B(y).
struct Family {
    Poly B;                 ///< radicand, B = h - x^2
    Poly A;                 ///< derived factor, A = 2 + B''
    std::optional<Poly> U;  ///< exact square root of B, when one exists

    Rational b0() const { return B.coeff(0); }
    Rational b1() const { return B.coeff(1); }
    RadicalProduct radical() const { return {A, B}; }
};

/// B = U^2, A = 2 + B''. U must be nonzero.
Family family_from_u(const Poly& u);

/// A = 2 + B''; U is populated iff try_sqrt and B is a perfect square.
/// B must be nonzero.
Family family_from_b(const Poly& b, bool try_sqrt = true);

/// Inverse of the coefficient map: b2 = (a0-2)/2, b_{n+2} = a_n/((n+1)(n+2))
/// for n >= 1, with b0 and b1 free.
Family family_from_a(const Poly& a, const Rational& b0, const Rational& b1);

/// Membership test for a radical product: A == 2 + B''. residual is
/// A - 2 - B'' and is zero iff family is present.
struct RadicalRecognition {
    std::optional<Family> family;
    Poly residual;
};
RadicalRecognition recognize_radical(const RadicalProduct& rp);

/// Inverse problem for fully polynomial right-hand sides: find rational U
/// with U*(2 + (U^2)'') == P. Exact arithmetic throughout; the candidate is
/// verified by full expansion before being returned. P must be nonzero.
std::optional<Family> recognize_poly(const Poly& p, std::string* why = nullptr);

/// Forward expansion U*(2 + (U^2)''), the fully polynomial P of a
/// perfect-square family.
Poly expand_forward(const Poly& u);

/// F with y'' = F(y) - y along solutions; equals v + B'(v)/2.
Poly f_profile(const Family& fam);

/// B(v) < 0 where a nonnegative radicand was required.
class RadicandNegative : public std::domain_error {
public:
    explicit RadicandNegative(double v)
        : std::domain_error("radicand negative at " + std::to_string(v)), at_(v) {}
    double at() const { return at_; }

private:
    double at_;
};

/// Q(v) = A(v)*sqrt(B(v))/2 with the nonnegative square root.
double ode_rhs(const Family& fam, double v);

}  // namespace quadode
