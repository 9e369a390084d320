#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "quadode/catalog.hpp"
#include "quadode/elliptic.hpp"
#include "quadode/family.hpp"
#include "quadode/solve.hpp"

using namespace quadode;
using namespace quadode::catalog;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return xs;
}

Params documented_params(const std::string& name) {
    if (name == "quartic") return {{"e", Rational(1)}, {"f", Rational(0)}, {"g", Rational(1)}};
    if (name == "pure-cubic") return {{"d", Rational(1)}};
    if (name == "shifted-cubic") return {{"g", Rational(1)}, {"d", Rational(1)}};
    if (name == "elliptic-cubic")
        return {{"f1", Rational(6)}, {"g1", Rational(2)}, {"C1", Rational(1, 2)}, {"C2", Rational(0)}};
    return {{"a1", Rational(1)}, {"b1", Rational(1)}, {"c1", Rational(1)},
            {"d1", Rational(1)}, {"e1", Rational(1)}, {"f1", Rational(1)},
            {"g1", Rational(2)}, {"C1", Rational(1, 2)}, {"C2", Rational(0)}};
}

// O(h^4) central first derivative
double d1(const std::function<double(double)>& f, double t, double h) {
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

bool has_note_with(const CatalogEntry& e, const std::string& needle) {
    for (const std::string& n : e.notes)
        if (n.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("quartic entry") {
    CatalogEntry e = get_entry("quartic", documented_params("quartic"));
    REQUIRE(e.closed_y.has_value());
    REQUIRE(e.closed_yi.has_value());
    CHECK(e.direction == 1);
    CHECK((e.family.B == Poly{Rational(1), Rational(0), Rational(2), Rational(0), Rational(1)}));
    for (double x : {-1.2, -0.4, 0.0, 0.7, 1.3})
        CHECK(std::fabs(e.closed_y->eval(x) - std::tan(x)) < 1e-12);
    for (double y : {-2.0, 0.5, 4.0})
        CHECK(std::fabs(e.closed_yi->eval(y) - std::atan(y)) < 1e-12);
    CHECK(e.closed_y->lo == doctest::Approx(-M_PI / 2).epsilon(1e-12));
    CHECK(e.closed_y->hi == doctest::Approx(M_PI / 2).epsilon(1e-12));

    SUBCASE("anchored away from the origin") {
        Params p = documented_params("quartic");
        p["y0"] = Rational(1);
        CatalogEntry a = get_entry("quartic", p);
        CHECK(std::fabs(a.closed_y->eval(0.0) - 1.0) < 1e-12);
        CHECK(std::fabs(a.closed_y->eval(0.2) - std::tan(0.2 + M_PI / 4)) < 1e-12);
    }
    SUBCASE("negative leading coefficient solves the reflected branch") {
        Params p{{"e", Rational(-1)}, {"f", Rational(0)}, {"g", Rational(-1)}};
        CatalogEntry a = get_entry("quartic", p);
        CHECK(a.direction == -1);
        for (double x : {-0.9, 0.3, 1.1})
            CHECK(std::fabs(a.closed_y->eval(x) + std::tan(x)) < 1e-12);
    }
    SUBCASE("parameter domain") {
        CHECK_THROWS_AS(get_entry("quartic", {{"e", Rational(1)}, {"f", Rational(2)}, {"g", Rational(1)}}),
                        ParamDomainError);  // 4eg - f^2 = 0
        CHECK_THROWS_AS(get_entry("quartic", {{"e", Rational(0)}, {"f", Rational(0)}, {"g", Rational(1)}}),
                        ParamDomainError);
        CHECK_THROWS_AS(get_entry("quartic", {{"e", Rational(1)}}), ParamDomainError);
        Params junk = documented_params("quartic");
        junk["zz"] = Rational(1);
        CHECK_THROWS_AS(get_entry("quartic", junk), ParamDomainError);
    }
    CHECK_THROWS_AS(get_entry("no-such-entry", {}), UnknownEntry);
}

TEST_CASE("pure-cubic entry") {
    CatalogEntry e = get_entry("pure-cubic", documented_params("pure-cubic"));
    CHECK(e.y0 == 1.0);
    CHECK(e.direction == 1);
    CHECK(std::fabs(e.closed_y->eval(0.375) - 2.0) < 1e-12);
    CHECK(std::fabs(e.closed_yi->eval(2.0) - 0.375) < 1e-12);
    CHECK(e.closed_y->hi == doctest::Approx(0.5));  // blow-up abscissa
    CHECK(has_note_with(e, "i/sqrt(2 d x)"));
    CHECK(has_note_with(e, "30 d^3"));

    SUBCASE("negative anchor rides the falling branch") {
        Params p = documented_params("pure-cubic");
        p["y0"] = Rational(-1);
        CatalogEntry a = get_entry("pure-cubic", p);
        CHECK(a.direction == -1);
        CHECK(std::fabs(a.closed_y->eval(0.375) + 2.0) < 1e-12);
    }
    SUBCASE("anchor on the equilibrium is rejected") {
        Params p = documented_params("pure-cubic");
        p["y0"] = Rational(0);
        CHECK_THROWS_AS(get_entry("pure-cubic", p), ParamDomainError);
    }
}

TEST_CASE("shifted-cubic entry") {
    CatalogEntry e = get_entry("shifted-cubic", documented_params("shifted-cubic"));
    REQUIRE(e.closed_yi.has_value());
    CHECK(!e.closed_y.has_value());
    CHECK(e.direction == 1);
    CHECK(has_note_with(e, "45 d^{4/3} g^{2/3} x^2"));

    solver::SolveConfig cfg;
    for (double y : {-0.9, -0.3, 0.5, 1.5}) {
        CAPTURE(y);
        CHECK(std::fabs(e.closed_yi->eval(y) - solver::x_of_y(e.family, cfg, y)) < 1e-9);
    }

    SUBCASE("branch below the root of U") {
        Params p = documented_params("shifted-cubic");
        p["y0"] = Rational(-2);
        CatalogEntry a = get_entry("shifted-cubic", p);
        CHECK(a.direction == -1);
        solver::SolveConfig c;
        c.y0 = -2.0;
        c.direction = -1;
        for (double y : {-1.2, -1.8, -3.0})
            CHECK(std::fabs(a.closed_yi->eval(y) - solver::x_of_y(a.family, c, y)) < 1e-9);
        CHECK(a.closed_yi->hi == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(get_entry("shifted-cubic", {{"g", Rational(0)}, {"d", Rational(1)}}),
                    ParamDomainError);
}

TEST_CASE("elliptic-cubic entry") {
    CatalogEntry e = get_entry("elliptic-cubic", documented_params("elliptic-cubic"));
    REQUIRE(e.closed_yi.has_value());
    CHECK(!e.closed_y.has_value());
    CHECK((e.family.B == Poly{Rational(1), Rational(0), Rational(0), Rational(1)}));

    solver::SolveConfig cfg;
    for (double y : {-0.9, -0.4, 0.6, 1.4}) {
        CAPTURE(y);
        CHECK(std::fabs(e.closed_yi->eval(y) - elliptic::cubic_x_of_y(1, 0, 0, 1, y)) < 1e-12);
        CHECK(std::fabs(e.closed_yi->eval(y) - solver::x_of_y(e.family, cfg, y)) < 1e-9);
    }
    CHECK(e.closed_yi->lo == doctest::Approx(-1.0));  // component edge at the cubic's root
}

TEST_CASE("octic-radicand entry") {
    CatalogEntry e = get_entry("octic-radicand", documented_params("octic-radicand"));
    CHECK(!e.closed_y.has_value());
    CHECK(!e.closed_yi.has_value());
    CHECK(has_note_with(e, "840*B"));
    // spot-check the coefficient bracket: b3 = f1/6, b8 = a1/56
    CHECK(e.family.B.coeff(0) == Rational(1));
    CHECK(e.family.B.coeff(2) == Rational(0));
    CHECK(e.family.B.coeff(3) == Rational(1, 6));
    CHECK(e.family.B.coeff(8) == Rational(1, 56));
    CHECK((e.family.A.coeff(0) == Rational(2)));
}

TEST_CASE("verify_entry") {
    SUBCASE("quartic acceptance grid") {
        auto rep = verify_entry("quartic", documented_params("quartic"), linspace(-1.2, 1.2, 97));
        CHECK(rep.rows_checked == 97);
        CHECK(rep.max_abs_residual < 1e-6);
        CHECK(rep.max_oracle_deviation < 1e-6);
        CHECK(rep.first_integral_drift < 1e-6);
        CHECK(rep.max_closed_form_deviation < 1e-8);
    }
    SUBCASE("pure-cubic real branch") {
        auto rep = verify_entry("pure-cubic", documented_params("pure-cubic"), linspace(0.0, 0.45, 46));
        CHECK(rep.max_abs_residual < 1e-6);
        CHECK(rep.max_oracle_deviation < 1e-6);
        CHECK(rep.first_integral_drift < 1e-6);
        CHECK(rep.max_closed_form_deviation < 1e-6);
    }
    SUBCASE("one-point grid at the anchor") {
        std::vector<double> xs{0.0};
        auto rep = verify_entry("quartic", documented_params("quartic"), xs);
        CHECK(rep.rows_checked == 1);
        CHECK(rep.max_abs_residual < 1e-10);
        CHECK(rep.max_oracle_deviation < 1e-10);
        CHECK(rep.first_integral_drift < 1e-10);
        CHECK(rep.max_closed_form_deviation < 1e-10);
    }
}

TEST_CASE("closed forms are mutually inverse") {
    CatalogEntry q = get_entry("quartic", documented_params("quartic"));
    for (double x : linspace(-1.2, 1.2, 25))
        CHECK(std::fabs(q.closed_yi->eval(q.closed_y->eval(x)) - x) < 1e-9);
    CatalogEntry c = get_entry("pure-cubic", documented_params("pure-cubic"));
    for (double x : linspace(-1.0, 0.45, 25))
        CHECK(std::fabs(c.closed_yi->eval(c.closed_y->eval(x)) - x) < 1e-9);
}

TEST_CASE("closed_y satisfies the equation through finite differences") {
    struct Probe {
        const char* name;
        std::vector<double> xs;
    };
    const Probe probes[] = {
        {"quartic", {-0.8, -0.3, 0.0, 0.4, 0.8}},
        {"pure-cubic", {0.0, 0.1, 0.2}},
    };
    const double h = 2.5e-3;
    for (const Probe& pr : probes) {
        CatalogEntry e = get_entry(pr.name, documented_params(pr.name));
        auto f = e.closed_y->eval;
        for (double x : pr.xs) {
            CAPTURE(pr.name);
            CAPTURE(x);
            double y = f(x);
            // O(h^4) stencils for y' and y'''
            double y1 = d1(f, x, h);
            double y3 = (-(f(x + 3 * h) - f(x - 3 * h)) / 8.0 + (f(x + 2 * h) - f(x - 2 * h)) -
                         13.0 * (f(x + h) - f(x - h)) / 8.0) /
                        (h * h * h);
            double q = e.direction * ode_rhs(e.family, y);
            CHECK(std::fabs(y3 + y1 - q) < 1e-6 * (1.0 + std::fabs(q)));
        }
    }
}

TEST_CASE("erratum guard: d/dy closed_yi = direction/sqrt(B)") {
    struct Probe {
        const char* name;
        std::vector<double> ys;
    };
    const Probe probes[] = {
        {"quartic", {-1.5, 0.3, 2.0}},
        {"pure-cubic", {0.7, 1.5, 3.0}},
        {"shifted-cubic", {-0.8, 0.5, 2.0}},
        {"elliptic-cubic", {-0.6, 0.5, 1.2}},
    };
    const double h = 5e-3;
    for (const Probe& pr : probes) {
        CatalogEntry e = get_entry(pr.name, documented_params(pr.name));
        solver::FamilyEval fe(e.family);
        for (double y : pr.ys) {
            CAPTURE(pr.name);
            CAPTURE(y);
            double want = e.direction / std::sqrt(fe.b(y));
            double got = d1(e.closed_yi->eval, y, h);
            CHECK(std::fabs(got - want) < 1e-6 * std::fabs(want));
        }
    }
}

TEST_CASE("list_entries") {
    auto a = list_entries();
    auto b = list_entries();
    REQUIRE(a.size() == 5);
    const char* order[] = {"quartic", "pure-cubic", "shifted-cubic", "elliptic-cubic",
                           "octic-radicand"};
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == order[i]);
        CHECK(a[i].name == b[i].name);
        CHECK(!a[i].summary.empty());
        // documented example params construct every listed entry
        CatalogEntry e = get_entry(a[i].name, documented_params(a[i].name));
        CHECK(e.name == a[i].name);
        for (const std::string& must : a[i].params) CHECK(e.params.count(must) == 1);
    }
}
