#include "quadode/solve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace quadode::solver {

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

constexpr double kYMax = 1e12;  // bracket expansion gives up past this

void validate_grid(std::span<const double> xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) throw std::invalid_argument("grid contains a non-finite x");
        if (i == 0) continue;
        double step = xs[i] - xs[i - 1];
        double first = xs[1] - xs[0];
        if (step == 0.0 || (step > 0.0) != (first > 0.0))
            throw std::invalid_argument("grid must be strictly monotone");
    }
}

}  // namespace

RadicandNonPositive::RadicandNonPositive(double t)
    : SolverError("radicand is non-positive at y=" + fmt("%.17g", t)), at_(t) {}

InversionBracketFailure::InversionBracketFailure(double reached_x, const std::string& detail)
    : SolverError("inversion bracket failure: " + detail), reached_(reached_x) {}

StepUnderflow::StepUnderflow(double x)
    : SolverError("oracle left the domain near x=" + fmt("%.17g", x)), at_(x) {}

FamilyEval::FamilyEval(const Family& fam)
    : b_(fam.B.coeffs_double()),
      db_(fam.B.derivative().coeffs_double()),
      ddb_(fam.B.derivative().derivative().coeffs_double()),
      a_(fam.A.coeffs_double()) {}

double FamilyEval::horner(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
}

double FamilyEval::inv_sqrt_b(double t) const {
    double v = b(t);
    if (v <= 0.0) throw RadicandNonPositive(t);
    return 1.0 / std::sqrt(v);
}

double FamilyEval::q(double v) const {
    double bv = b(v);
    if (bv < 0.0) throw RadicandNegative(v);
    return 0.5 * a(v) * std::sqrt(bv);
}

namespace {

struct Anchor {
    double y;
    double x;
};

Row make_row(const FamilyEval& fe, int dir, double x, double y) {
    double bv = std::max(fe.b(y), 0.0);
    double s = std::sqrt(bv);
    double y1 = dir * s;
    double y2 = 0.5 * fe.db(y);
    double y3 = dir * 0.5 * fe.ddb(y) * s;
    double qv = 0.5 * fe.a(y) * s;
    return {x, y, y1, y2, y3, y3 + y1 - dir * qv};
}

class Inverter {
public:
    Inverter(const FamilyEval& fe, const SolveConfig& cfg)
        : fe_(fe), dir_(cfg.direction), quad_tol_(cfg.quad_tol), max_steps_(cfg.max_steps) {}

    // x at yb, integrating from a known point of the branch
    double segment(const Anchor& from, double yb, double tol, int budget) const {
        return from.x + dir_ * quadrature::integrate_adaptive(
                                   [this](double t) { return fe_.inv_sqrt_b(t); }, from.y, yb,
                                   tol, budget);
    }
    double segment(const Anchor& from, double yb) const {
        return segment(from, yb, quad_tol_, max_steps_);
    }

    // Solve x(y) = x_target on the monotone branch through `from`; returns the
    // converged point with its quadrature-accurate x.
    Anchor invert(Anchor from, double x_target, double inv_tol) const {
        double g0 = from.x - x_target;
        if (std::fabs(g0) <= inv_tol) return from;
        const double sy = ((dir_ > 0) == (x_target > from.x)) ? 1.0 : -1.0;

        // expand a bracket, accumulating x incrementally along the way
        double h = std::fabs(g0) * 1.5 * std::sqrt(std::max(fe_.b(from.y), 0.0)) +
                   1e4 * 2.2e-16 * (std::fabs(from.y) + 1.0);
        h = std::min(h, 0.25 * (std::fabs(from.y) + 1.0));
        Anchor near = from;
        Anchor far{};
        for (;;) {
            double y_next = near.y + sy * h;
            if (std::fabs(y_next) > kYMax)
                throw InversionBracketFailure(
                    near.x, "branch does not reach x=" + fmt("%.17g", x_target) +
                                "; grew past |y|=1e12 by x=" + fmt("%.17g", near.x));
            double x_next;
            try {
                x_next = segment(near, y_next);
            } catch (const RadicandNonPositive& e) {
                // ran into a radicand root: the branch ends just short of it,
                // which still brackets any target the supremum covers
                far = boundary_anchor(near, e.at(), x_target);
                break;
            }
            if ((x_next - x_target) * (near.x - x_target) <= 0.0) {
                far = {y_next, x_next};
                break;
            }
            near = {y_next, x_next};
            h *= 2.0;
        }

        // Newton with bisection fallback inside [near, far]
        Anchor lo = near, hi = far;
        double glo = lo.x - x_target;
        Anchor base = lo;
        double y = 0.5 * (lo.y + hi.y);
        for (int it = 0; it < 200; ++it) {
            double x_here = segment(base, y);
            base = {y, x_here};
            double g = x_here - x_target;
            if (std::fabs(g) <= inv_tol) return base;
            if ((g < 0.0) == (glo < 0.0)) {
                lo = base;
                glo = g;
            } else {
                hi = base;
            }
            double ymin = std::min(lo.y, hi.y), ymax = std::max(lo.y, hi.y);
            double bval = fe_.b(y);
            double y_next = bval > 0.0 ? y - g * dir_ * std::sqrt(bval) : y;
            if (!(y_next > ymin && y_next < ymax)) y_next = 0.5 * (lo.y + hi.y);
            if (y_next == y) y_next = 0.5 * (lo.y + hi.y);
            if (y_next == y) return base;  // interval collapsed in double precision
            y = y_next;
        }
        throw SolverError("inversion did not converge");
    }

private:
    // Endpoint of the branch at the radicand root between near.y (B > 0) and
    // t_bad; throws unless the target lies between near.x and that endpoint.
    Anchor boundary_anchor(const Anchor& near, double t_bad, double x_target) const {
        double good = near.y, bad = t_bad;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (good + bad);
            if (mid == good || mid == bad) break;
            if (fe_.b(mid) > 0.0)
                good = mid;
            else
                bad = mid;
        }
        double x_sup = near.x;
        bool have_sup = false;
        try {
            x_sup = segment(near, good, 1e-9, 200000);
            have_sup = true;
        } catch (...) {
            // keep the last trustworthy x
        }
        if (have_sup && (x_sup - x_target) * (near.x - x_target) <= 0.0) return {good, x_sup};
        throw InversionBracketFailure(
            x_sup, "branch does not reach x=" + fmt("%.17g", x_target) + "; radicand root near y=" +
                       fmt("%.17g", bad) + " limits it to x near " + fmt("%.17g", x_sup));
    }

    const FamilyEval& fe_;
    int dir_;
    double quad_tol_;
    int max_steps_;
};

void require_interior_anchor(const FamilyEval& fe, const SolveConfig& cfg) {
    if (cfg.direction != 1 && cfg.direction != -1)
        throw std::invalid_argument("direction must be +1 or -1");
    if (!(fe.b(cfg.y0) > 0.0)) throw RadicandNonPositive(cfg.y0);
}

}  // namespace

double x_of_y(const Family& fam, const SolveConfig& cfg, double y) {
    FamilyEval fe(fam);
    require_interior_anchor(fe, cfg);
    // endpoints are never quadrature nodes, so reject a boundary root explicitly:
    // the solution lives on an open interval with B > 0
    if (!(fe.b(y) > 0.0)) throw RadicandNonPositive(y);
    Inverter inv(fe, cfg);
    return inv.segment({cfg.y0, cfg.x0}, y);
}

double y_of_x(const Family& fam, const SolveConfig& cfg, double x) {
    FamilyEval fe(fam);
    require_interior_anchor(fe, cfg);
    Inverter inv(fe, cfg);
    return inv.invert({cfg.y0, cfg.x0}, x, cfg.inv_tol).y;
}

Derivatives derivatives_at(const Family& fam, const SolveConfig& cfg, double y) {
    FamilyEval fe(fam);
    double bv = fe.b(y);
    if (bv < 0.0) throw RadicandNegative(y);
    double s = std::sqrt(bv);
    return {cfg.direction * s, 0.5 * fe.db(y), cfg.direction * 0.5 * fe.ddb(y) * s};
}

SolutionTable solve_grid_serial(const Family& fam, const SolveConfig& cfg,
                                std::span<const double> xs) {
    validate_grid(xs);
    FamilyEval fe(fam);
    require_interior_anchor(fe, cfg);
    Inverter inv(fe, cfg);
    Anchor chain{cfg.y0, cfg.x0};
    SolutionTable out;
    out.rows.reserve(xs.size());
    for (double x : xs) {
        chain = inv.invert(chain, x, cfg.inv_tol);
        out.rows.push_back(make_row(fe, cfg.direction, x, chain.y));
    }
    return out;
}

SolutionTable solve_grid_parallel(const Family& fam, const SolveConfig& cfg,
                                  std::span<const double> xs) {
    validate_grid(xs);
    FamilyEval fe(fam);
    require_interior_anchor(fe, cfg);
    Inverter inv(fe, cfg);

    // sequential seeding pass at a loose tolerance; anchors stay
    // quadrature-accurate because invert() returns the integrated x
    const double seed_tol = std::max(cfg.inv_tol, 1e-7);
    const std::size_t n = xs.size();
    std::vector<Anchor> seeds(n);
    Anchor chain{cfg.y0, cfg.x0};
    for (std::size_t i = 0; i < n; ++i) {
        chain = inv.invert(chain, xs[i], seed_tol);
        seeds[i] = chain;
    }

    SolutionTable out;
    out.rows.resize(n);
    std::exception_ptr first_error = nullptr;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < static_cast<long>(n); ++i) {
        try {
            Anchor fine = inv.invert(seeds[static_cast<std::size_t>(i)], xs[i], cfg.inv_tol);
            out.rows[static_cast<std::size_t>(i)] = make_row(fe, cfg.direction, xs[i], fine.y);
        } catch (...) {
#if defined(_OPENMP)
#pragma omp critical(quadode_solve_grid_error)
#endif
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

SolutionTable solve_grid(const Family& fam, const SolveConfig& cfg, std::span<const double> xs) {
#if defined(_OPENMP)
    if (xs.size() >= 64) return solve_grid_parallel(fam, cfg, xs);
#endif
    return solve_grid_serial(fam, cfg, xs);
}

SolutionTable rk_oracle(const Family& fam, const SolveConfig& cfg, std::span<const double> xs) {
    validate_grid(xs);
    FamilyEval fe(fam);
    require_interior_anchor(fe, cfg);
    const double dir = cfg.direction;

    using State = std::array<double, 3>;  // (y, y', y'')
    auto rhs = [&](const State& u) -> State {
        return {u[1], u[2], dir * fe.q(u[0]) - u[1]};
    };
    auto step = [&](const State& u, double h) -> State {
        State k1 = rhs(u);
        State k2 = rhs({u[0] + 0.5 * h * k1[0], u[1] + 0.5 * h * k1[1], u[2] + 0.5 * h * k1[2]});
        State k3 = rhs({u[0] + 0.5 * h * k2[0], u[1] + 0.5 * h * k2[1], u[2] + 0.5 * h * k2[2]});
        State k4 = rhs({u[0] + h * k3[0], u[1] + h * k3[1], u[2] + h * k3[2]});
        return {u[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                u[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
                u[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])};
    };

    const State u0{cfg.y0, dir * std::sqrt(fe.b(cfg.y0)), 0.5 * fe.db(cfg.y0)};
    SolutionTable out;
    out.rows.resize(xs.size());
    double drift = 0.0;
    auto note_drift = [&](const State& u) {
        drift = std::max(drift, std::fabs(u[1] * u[1] - fe.b(u[0])));
    };
    note_drift(u0);

    // targets on each side of the anchor, processed outward
    std::vector<std::size_t> fwd, bwd;
    for (std::size_t i = 0; i < xs.size(); ++i) (xs[i] >= cfg.x0 ? fwd : bwd).push_back(i);
    auto by_distance = [&](std::size_t a, std::size_t b) {
        return std::fabs(xs[a] - cfg.x0) < std::fabs(xs[b] - cfg.x0);
    };
    std::sort(fwd.begin(), fwd.end(), by_distance);
    std::sort(bwd.begin(), bwd.end(), by_distance);

    const long min_steps = std::max<long>(4096, 64 * static_cast<long>(xs.size()));
    for (int side = 0; side < 2; ++side) {
        const auto& targets = side == 0 ? fwd : bwd;
        if (targets.empty()) continue;
        const double span = std::fabs(xs[targets.back()] - cfg.x0);
        const double sign = side == 0 ? 1.0 : -1.0;
        const double hmag = span > 0.0 ? span / static_cast<double>(min_steps) : 1.0;
        State u = u0;
        long k = 0;  // full steps taken; current x = x0 + sign*k*hmag
        auto finite = [](const State& s) {
            return std::isfinite(s[0]) && std::isfinite(s[1]) && std::isfinite(s[2]);
        };
        for (std::size_t idx : targets) {
            const double tau = std::fabs(xs[idx] - cfg.x0);
            try {
                while ((static_cast<double>(k) + 1.0) * hmag <= tau) {
                    u = step(u, sign * hmag);
                    ++k;
                    if (!finite(u))
                        throw StepUnderflow(cfg.x0 + sign * static_cast<double>(k) * hmag);
                    note_drift(u);
                }
                double partial = tau - static_cast<double>(k) * hmag;
                State v = partial > 0.0 ? step(u, sign * partial) : u;
                if (!finite(v)) throw StepUnderflow(xs[idx]);
                note_drift(v);
                double y3 = dir * fe.q(v[0]) - v[1];
                // residual column carries the local first-integral defect
                out.rows[idx] = {xs[idx], v[0], v[1], v[2], y3, v[1] * v[1] - fe.b(v[0])};
            } catch (const RadicandNegative&) {
                throw StepUnderflow(cfg.x0 + sign * static_cast<double>(k) * hmag);
            }
        }
    }
    out.first_integral_drift = drift;
    return out;
}

ResidualReport verify(const Family& fam, const SolveConfig& cfg, std::span<const double> xs) {
    SolutionTable table = solve_grid(fam, cfg, xs);
    SolutionTable oracle = rk_oracle(fam, cfg, xs);
    ResidualReport rep;
    rep.rows_checked = static_cast<long>(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(table.rows[i].residual));
        rep.max_oracle_deviation =
            std::max(rep.max_oracle_deviation, std::fabs(table.rows[i].y - oracle.rows[i].y));
    }
    rep.first_integral_drift = oracle.first_integral_drift;
    return rep;
}

}  // namespace quadode::solver
