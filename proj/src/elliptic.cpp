#include "quadode/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "quadode/quadrature.hpp"
#include "quadode/solve.hpp"

namespace quadode::elliptic {

CrossCheckFailure::CrossCheckFailure(double numeric, double reduced)
    : std::runtime_error([&] {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "elliptic cross-check failed: quadrature %.17g vs reduction %.17g",
                        numeric, reduced);
          return std::string(buf);
      }()),
      numeric_(numeric),
      reduced_(reduced) {}

double carlson_rf(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z < 0.0) throw DomainError("carlson_rf: negative argument");
    if ((x == 0.0) + (y == 0.0) + (z == 0.0) > 1)
        throw DomainError("carlson_rf: more than one zero argument");
    double mu = 0.0;
    for (int i = 0; i < 500; ++i) {
        mu = (x + y + z) / 3.0;
        double spread = std::max({std::fabs(x - mu), std::fabs(y - mu), std::fabs(z - mu)});
        if (spread < 1e-8 * mu) break;
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    double dx = 1.0 - x / mu, dy = 1.0 - y / mu, dz = 1.0 - z / mu;
    double e2 = dx * dy - dz * dz;
    double e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

namespace {

// K(m) for any m < 1 (the public op restricts to m >= 0)
double complete_k(double m, int* iterations) {
    double a = 1.0, b = std::sqrt(1.0 - m);
    int n = 0;
    while (std::fabs(a - b) > 1e-15 * a) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        if (++n > 100) break;
    }
    if (iterations) *iterations = n;
    return M_PI / (2.0 * a);
}

}  // namespace

double complete_k_agm(double m, int* iterations) {
    if (!(m >= 0.0 && m < 1.0)) throw DomainError("complete_k_agm: need 0 <= m < 1");
    return complete_k(m, iterations);
}

double incomplete_f(const EllipticArgs& args) {
    if (!std::isfinite(args.phi) || !std::isfinite(args.m))
        throw DomainError("incomplete_f: non-finite argument");
    double n = std::round(args.phi / M_PI);
    double phi = args.phi - n * M_PI;  // phi in [-pi/2, pi/2]
    double s = std::sin(phi), c = std::cos(phi);
    double r = 1.0 - args.m * s * s;
    if (r <= 0.0) throw DomainError("incomplete_f: m sin^2(phi) >= 1");
    double base = s == 0.0 ? 0.0 : s * carlson_rf(c * c, r, 1.0);
    if (n != 0.0) {
        if (args.m >= 1.0) throw DomainError("incomplete_f: reduction past pi/2 needs m < 1");
        base += 2.0 * n * complete_k(args.m, nullptr);
    }
    return base;
}

namespace {

struct CubicRoots {
    int n_real;       // 1 or 3
    double r[3];      // real roots ascending (n_real of them)
    double re, im;    // conjugate pair when n_real == 1 (im > 0)
};

double cubic_val(double c3, double c2, double c1, double c0, double t) {
    return ((c3 * t + c2) * t + c1) * t + c0;
}

double cubic_der(double c3, double c2, double c1, double t) {
    return (3.0 * c3 * t + 2.0 * c2) * t + c1;
}

double polish(double c3, double c2, double c1, double c0, double t) {
    for (int i = 0; i < 3; ++i) {
        double d = cubic_der(c3, c2, c1, t);
        if (d == 0.0) break;
        double step = cubic_val(c3, c2, c1, c0, t) / d;
        if (!std::isfinite(step)) break;
        t -= step;
    }
    return t;
}

CubicRoots solve_cubic(double c3, double c2, double c1, double c0) {
    // monic then depressed: t = s - p/3, s^3 + a s + b
    double p = c2 / c3, q = c1 / c3, r = c0 / c3;
    double a = q - p * p / 3.0;
    double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    double shift = -p / 3.0;
    double disc = 0.25 * b * b + a * a * a / 27.0;
    CubicRoots out{};
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        double s0 = std::cbrt(-0.5 * b + sq) + std::cbrt(-0.5 * b - sq);
        out.n_real = 1;
        out.r[0] = polish(c3, c2, c1, c0, s0 + shift);
        out.re = -0.5 * s0 + shift;
        double im2 = 3.0 * s0 * s0 + 4.0 * a;
        out.im = 0.5 * std::sqrt(std::max(im2, 0.0));
    } else {
        double m2 = std::sqrt(std::max(-a / 3.0, 0.0));
        double arg = m2 > 0.0 ? std::clamp(1.5 * b / (a * m2), -1.0, 1.0) : 1.0;
        double theta = std::acos(arg) / 3.0;
        out.n_real = 3;
        for (int k = 0; k < 3; ++k)
            out.r[k] = polish(c3, c2, c1, c0,
                              2.0 * m2 * std::cos(theta - 2.0 * M_PI * k / 3.0) + shift);
        std::sort(out.r, out.r + 3);
    }
    return out;
}

// F-difference between the bounds for the all-real-roots layout r1<=r2<=r3<=lo
double reduce_three_real(double c3, const CubicRoots& rt, double lo, double hi) {
    double r1 = rt.r[0], r2 = rt.r[1], r3 = rt.r[2];
    double g = 2.0 / std::sqrt(c3 * (r3 - r1));
    double m = (r2 - r1) / (r3 - r1);
    auto theta = [&](double t) {
        double num = t - r3, den = t - r2;
        double s = den > 0.0 ? std::sqrt(std::max(num, 0.0) / den) : 1.0;
        return std::asin(std::min(s, 1.0));
    };
    return g * (incomplete_f(theta(hi), m) - incomplete_f(theta(lo), m));
}

// F-difference for one real root r below lo and a conjugate pair re +- i*im
double reduce_one_real(double c3, const CubicRoots& rt, double lo, double hi) {
    double r = rt.r[0];
    double beta = rt.re - r;
    double amp = std::hypot(beta, rt.im);
    double m = (amp + beta) / (2.0 * amp);
    auto phi = [&](double t) { return 2.0 * std::atan(std::sqrt(std::max(t - r, 0.0) / amp)); };
    return (incomplete_f(phi(hi), m) - incomplete_f(phi(lo), m)) / std::sqrt(c3 * amp);
}

}  // namespace

double cubic_x_of_y(double c3, double c2, double c1, double c0, double y) {
    if (y == 0.0) return 0.0;
    auto f = [&](double t) {
        double v = cubic_val(c3, c2, c1, c0, t);
        if (v <= 0.0) throw solver::RadicandNonPositive(t);
        return 1.0 / std::sqrt(v);
    };
    double lo = std::min(0.0, y), hi = std::max(0.0, y);
    f(lo);
    f(hi);  // endpoints are never sampled by the panels; reject boundary roots here
    double numeric = quadrature::integrate_adaptive(f, 0.0, y, 1e-11, 100000);

    // closed route: only attempted when every real root sits at or below lo,
    // which requires a positive leading coefficient
    if (c3 > 0.0) {
        CubicRoots rt = solve_cubic(c3, c2, c1, c0);
        double top = rt.n_real == 3 ? rt.r[2] : rt.r[0];
        // repeated roots degenerate the reduction (modulus -> 1); leave those
        // to the numeric route alone
        bool separated =
            rt.n_real == 1 ||
            (rt.r[2] - rt.r[0] > 1e-10 * (1.0 + std::fabs(rt.r[2])) &&
             (rt.r[1] - rt.r[0]) < (1.0 - 1e-10) * (rt.r[2] - rt.r[0]));
        if (top <= lo && separated) {
            double reduced = rt.n_real == 3 ? reduce_three_real(c3, rt, lo, hi)
                                            : reduce_one_real(c3, rt, lo, hi);
            if (y < 0.0) reduced = -reduced;
            if (std::fabs(numeric - reduced) > 1e-9 * std::max(1.0, std::fabs(numeric)))
                throw CrossCheckFailure(numeric, reduced);
        }
    }
    return numeric;
}

}  // namespace quadode::elliptic
