#include "quadode/family.hpp"

#include <cmath>

namespace quadode {

namespace {

Poly two_plus_second_derivative(const Poly& b) {
    return Poly(Rational(2)) + b.derivative().derivative();
}

}  // namespace

Family family_from_u(const Poly& u) {
    if (u.is_zero()) throw std::invalid_argument("U must be nonzero");
    Poly b = u * u;
    return Family{b, two_plus_second_derivative(b), u};
}

Family family_from_b(const Poly& b, bool try_sqrt) {
    if (b.is_zero()) throw std::invalid_argument("B must be nonzero");
    Family fam{b, two_plus_second_derivative(b), std::nullopt};
    if (try_sqrt) fam.U = perfect_square_root(b);
    return fam;
}

Family family_from_a(const Poly& a, const Rational& b0, const Rational& b1) {
    std::vector<Rational> b(static_cast<std::size_t>(a.degree() < 0 ? 0 : a.degree()) + 3,
                            Rational(0));
    b[0] = b0;
    b[1] = b1;
    b[2] = (a.coeff(0) - Rational(2)) / Rational(2);
    for (int n = 1; n <= a.degree(); ++n)
        b[static_cast<std::size_t>(n) + 2] =
            a.coeff(static_cast<std::size_t>(n)) / Rational(static_cast<long>((n + 1) * (n + 2)));
    Poly bp{std::move(b)};
    if (bp.is_zero()) throw std::invalid_argument("B must be nonzero");
    return family_from_b(bp, true);
}

RadicalRecognition recognize_radical(const RadicalProduct& rp) {
    Poly residual = rp.A - two_plus_second_derivative(rp.B);
    if (!residual.is_zero()) return {std::nullopt, residual};
    if (rp.B.is_zero()) return {std::nullopt, residual};
    return {family_from_b(rp.B, true), residual};
}

Poly expand_forward(const Poly& u) {
    Poly b = u * u;
    return u * two_plus_second_derivative(b);
}

Poly f_profile(const Family& fam) {
    return Poly::x() + Rational(1, 2) * fam.B.derivative();
}

namespace {

bool fail(std::string* why, const char* msg) {
    if (why) *why = msg;
    return false;
}

// unique rational root of 2t^3 + 2t = rhs (the map is strictly increasing).
// t = r/s in lowest terms forces s^3 = den(rhs/2) and r an integer root of
// r^3 + s^2 r - num = 0, found by sign bisection.
std::optional<Rational> solve_increasing_cubic(const Rational& rhs) {
    Rational half = rhs / Rational(2);
    mpz_class num = half.num(), den = half.den();
    mpz_class s;
    if (!mpz_root(s.get_mpz_t(), den.get_mpz_t(), 3)) return std::nullopt;
    mpz_class s2 = s * s;
    // explicit return type: gmpxx expression templates must not outlive the statement
    auto f = [&](const mpz_class& r) -> mpz_class { return r * r * r + s2 * r - num; };
    mpz_class lo = 0, hi = 0;
    if (sgn(num) == 0) return Rational(0);
    if (sgn(num) > 0) {
        hi = 1;
        while (f(hi) < 0) hi *= 2;
    } else {
        lo = -1;
        while (f(lo) > 0) lo *= 2;
    }
    while (hi - lo > 1) {
        mpz_class mid = (lo + hi) / 2;  // floor division toward -inf not needed: lo,hi same sign or 0
        if (f(mid) >= 0)
            hi = mid;
        else
            lo = mid;
    }
    mpz_class root = f(lo) == 0 ? lo : hi;
    if (f(root) != 0) return std::nullopt;
    mpq_class q(root, s);
    q.canonicalize();
    return Rational(q);
}

}  // namespace

std::optional<Family> recognize_poly(const Poly& p, std::string* why) {
    if (p.is_zero()) throw std::invalid_argument("P must be nonzero");
    int n = p.degree();
    if (n == 0) {
        // constant family: A = 2, P = 2*U
        Poly u(p.coeff(0) / Rational(2));
        return family_from_u(u);
    }
    if ((n + 2) % 3 != 0) {
        fail(why, "degree is not of the form 3d-2");
        return std::nullopt;
    }
    int d = (n + 2) / 3;
    std::vector<Rational> u(static_cast<std::size_t>(d) + 1, Rational(0));
    if (d == 1) {
        // leading equation is 2t^3 + 2t = p1
        auto t = solve_increasing_cubic(p.coeff(1));
        if (!t) {
            fail(why, "leading cubic has no rational root");
            return std::nullopt;
        }
        u[1] = *t;
    } else {
        Rational cube = p.coeff(static_cast<std::size_t>(n)) /
                        Rational(static_cast<long>(2 * d * (2 * d - 1)));
        auto lead = cube.exact_cbrt();
        if (!lead) {
            fail(why, "leading coefficient has no rational cube root");
            return std::nullopt;
        }
        u[static_cast<std::size_t>(d)] = *lead;
    }
    // descending coefficient matching: the x^(n-k) coefficient of the forward
    // expansion is affine in u_{d-k}; probe it at 0 and 1
    for (int k = 1; k <= d; ++k) {
        std::size_t idx = static_cast<std::size_t>(d - k);
        auto coeff_at = [&](const Rational& trial) {
            u[idx] = trial;
            return expand_forward(Poly{std::vector<Rational>(u)})
                .coeff(static_cast<std::size_t>(n - k));
        };
        Rational g0 = coeff_at(Rational(0));
        Rational g1 = coeff_at(Rational(1));
        Rational slope = g1 - g0;
        Rational target = p.coeff(static_cast<std::size_t>(n - k));
        if (slope.is_zero()) {
            if (g0 != target) {
                fail(why, "coefficient matching failed");
                return std::nullopt;
            }
            u[idx] = Rational(0);
            continue;
        }
        u[idx] = (target - g0) / slope;
    }
    Poly candidate{std::move(u)};
    if (candidate.is_zero() || expand_forward(candidate) != p) {
        fail(why, "verification by full expansion failed");
        return std::nullopt;
    }
    return family_from_u(candidate);
}

double ode_rhs(const Family& fam, double v) {
    double b = fam.B.eval(v);
    if (b < 0.0) throw RadicandNegative(v);
    return 0.5 * fam.A.eval(v) * std::sqrt(b);
}

}  // namespace quadode
