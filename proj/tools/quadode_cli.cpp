#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quadode/catalog.hpp"
#include "quadode/elliptic.hpp"
#include "quadode/family.hpp"
#include "quadode/parse.hpp"
#include "quadode/serialize.hpp"
#include "quadode/solve.hpp"

namespace {

using quadode::Family;
using quadode::Rational;
using quadode::SubstMap;
using json = quadode::io::json;

int emit(const std::string& command, json inputs, json result,
         const std::vector<std::string>& diags, int code = 0) {
    json env;
    env["schema_version"] = 1;
    env["command"] = command;
    env["inputs"] = std::move(inputs);
    env["result"] = std::move(result);
    env["diagnostics"] = diags;
    std::cout << env.dump() << "\n";
    return code;
}

SubstMap build_subst(const std::vector<std::string>& kvs) {
    SubstMap m;
    for (const std::string& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--subst expects name=value, got '" + kv + "'");
        m[kv.substr(0, eq)] = Rational::from_string(kv.substr(eq + 1));
    }
    return m;
}

struct FamilyFlags {
    std::string u, b, a;
    std::string b0, b1;
    std::vector<std::string> subst;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f) {
    cmd->add_option("--u", f.u, "perfect-square construction: B = U^2");
    cmd->add_option("--b", f.b, "radicand polynomial B");
    cmd->add_option("--a", f.a, "factor polynomial A (requires --b0 and --b1)");
    cmd->add_option("--b0", f.b0, "constant coefficient of B (with --a)");
    cmd->add_option("--b1", f.b1, "linear coefficient of B (with --a)");
    cmd->add_option("--subst", f.subst, "name=rational substitution (repeatable)");
}

json echo_family_inputs(const FamilyFlags& f) {
    json j = json::object();
    if (!f.u.empty()) j["u"] = f.u;
    if (!f.b.empty()) j["b"] = f.b;
    if (!f.a.empty()) {
        j["a"] = f.a;
        j["b0"] = f.b0;
        j["b1"] = f.b1;
    }
    if (!f.subst.empty()) j["subst"] = f.subst;
    return j;
}

Family build_family(const FamilyFlags& f) {
    int provided = (!f.u.empty()) + (!f.b.empty()) + (!f.a.empty());
    if (provided != 1) throw std::invalid_argument("provide exactly one of --u, --b, --a");
    SubstMap subst = build_subst(f.subst);
    const SubstMap* sp = subst.empty() ? nullptr : &subst;
    if (!f.u.empty()) return quadode::family_from_u(quadode::parse_poly(f.u, sp));
    if (!f.b.empty()) return quadode::family_from_b(quadode::parse_poly(f.b, sp));
    if (f.b0.empty() || f.b1.empty())
        throw std::invalid_argument("--a requires --b0 and --b1");
    return quadode::family_from_a(quadode::parse_poly(f.a, sp), Rational::from_string(f.b0),
                                  Rational::from_string(f.b1));
}

double resolve_tol(bool flag_given, double flag_value, std::vector<std::string>& diags) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("QUADODE_DEFAULT_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && std::isfinite(v) && v > 0.0) {
            diags.push_back("tolerance taken from QUADODE_DEFAULT_TOL");
            return v;
        }
        diags.push_back("ignoring invalid QUADODE_DEFAULT_TOL");
    }
    return 1e-8;
}

double internal_tol(double tol) { return std::clamp(tol * 0.01, 1e-14, 1e-6); }

std::vector<double> linspace(double from, double to, long n) {
    if (n < 1) throw std::invalid_argument("--n must be >= 1");
    std::vector<double> xs(static_cast<std::size_t>(n));
    if (n == 1) {
        xs[0] = from;
        return xs;
    }
    for (long i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] =
            from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
    return xs;
}

// run `body`, turning domain failures into an error envelope and exit code 1
template <class F>
int domain_guard(const std::string& command, const json& inputs, std::vector<std::string>& diags,
                 F&& body) {
    auto fail = [&](const char* type, const std::string& message, json extra = json::object()) {
        json err;
        err["error"] = json{{"type", type}, {"message", message}};
        for (auto& [k, v] : extra.items()) err["error"][k] = v;
        std::cerr << message << "\n";
        return emit(command, inputs, err, diags, 1);
    };
    try {
        return body();
    } catch (const quadode::solver::InversionBracketFailure& e) {
        return fail("InversionBracketFailure", e.what(), json{{"reached_x", e.reached()}});
    } catch (const quadode::solver::RadicandNonPositive& e) {
        return fail("RadicandNonPositive", e.what(), json{{"at", e.at()}});
    } catch (const quadode::solver::StepUnderflow& e) {
        return fail("StepUnderflow", e.what(), json{{"at", e.at()}});
    } catch (const quadode::RadicandNegative& e) {
        return fail("RadicandNegative", e.what(), json{{"at", e.at()}});
    } catch (const quadode::quadrature::ToleranceNotMet& e) {
        return fail("ToleranceNotMet", e.what());
    } catch (const quadode::elliptic::CrossCheckFailure& e) {
        return fail("CrossCheckFailure", e.what());
    } catch (const quadode::elliptic::DomainError& e) {
        return fail("DomainError", e.what());
    } catch (const quadode::catalog::ParamDomainError& e) {
        return fail("ParamDomainError", e.what());
    } catch (const quadode::solver::SolverError& e) {
        return fail("SolverError", e.what());
    }
}

quadode::catalog::Params parse_params(const std::vector<std::string>& kvs) {
    quadode::catalog::Params p;
    for (const std::string& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--param expects name=value, got '" + kv + "'");
        p[kv.substr(0, eq)] = Rational::from_string(kv.substr(eq + 1));
    }
    return p;
}

quadode::catalog::Params default_params(const std::string& name) {
    using quadode::catalog::Params;
    if (name == "quartic") return Params{{"e", 1}, {"f", 0}, {"g", 1}};
    if (name == "pure-cubic") return Params{{"d", 1}};
    if (name == "shifted-cubic") return Params{{"g", 1}, {"d", 1}};
    if (name == "elliptic-cubic")
        return Params{{"f1", 6}, {"g1", 2}, {"C1", Rational(1, 2)}, {"C2", 0}};
    if (name == "octic-radicand")
        return Params{{"a1", 1}, {"b1", 1}, {"c1", 1},          {"d1", 1}, {"e1", 1},
                      {"f1", 1}, {"g1", 2}, {"C1", Rational(1, 2)}, {"C2", 0}};
    throw quadode::catalog::UnknownEntry(name);
}

json bound_json(double v) {
    if (std::isinf(v)) return nullptr;  // unbounded
    return v;
}

json params_json(const quadode::catalog::Params& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = quadode::io::rational_json(v);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construct, recognize, solve and verify quadrature-solvable families of "
                 "y''' + y' = Q(y) with polynomial-squared radicands"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---- construct ----
    auto* c_cmd = app.add_subcommand("construct", "build a family from --u, --b, or --a");
    FamilyFlags c_fam;
    add_family_flags(c_cmd, c_fam);
    std::string c_fmt = "json";
    c_cmd->add_option("--format", c_fmt)->check(CLI::IsMember({"json"}));
    c_cmd->callback([&] {
        json inputs = echo_family_inputs(c_fam);
        std::vector<std::string> diags;
        Family fam = build_family(c_fam);
        exit_code = emit("construct", inputs, json{{"family", quadode::io::family_json(fam)}},
                         diags);
    });

    // ---- recognize ----
    auto* r_cmd = app.add_subcommand("recognize", "decide membership and recover U");
    std::string r_p;
    FamilyFlags r_fam;
    r_cmd->add_option("--p", r_p, "candidate right-hand-side polynomial P");
    r_cmd->add_option("--a", r_fam.a, "factor polynomial A of a radical product");
    r_cmd->add_option("--b", r_fam.b, "radicand polynomial B of a radical product");
    r_cmd->add_option("--subst", r_fam.subst, "name=rational substitution (repeatable)");
    std::string r_fmt = "json";
    r_cmd->add_option("--format", r_fmt)->check(CLI::IsMember({"json"}));
    r_cmd->callback([&] {
        std::vector<std::string> diags;
        SubstMap subst = build_subst(r_fam.subst);
        const SubstMap* sp = subst.empty() ? nullptr : &subst;
        if (!r_p.empty()) {
            if (!r_fam.a.empty() || !r_fam.b.empty())
                throw std::invalid_argument("use either --p or the pair --a/--b");
            json inputs{{"p", r_p}};
            if (!r_fam.subst.empty()) inputs["subst"] = r_fam.subst;
            quadode::Poly p = quadode::parse_poly(r_p, sp);
            std::string why;
            auto fam = quadode::recognize_poly(p, &why);
            if (fam) {
                exit_code = emit("recognize", inputs,
                                 json{{"in_family", true},
                                      {"family", quadode::io::family_json(*fam)}},
                                 diags);
            } else {
                exit_code = emit("recognize", inputs,
                                 json{{"in_family", false}, {"reason", why}}, diags, 1);
            }
            return;
        }
        if (r_fam.a.empty() || r_fam.b.empty())
            throw std::invalid_argument("recognize needs --p or both --a and --b");
        json inputs{{"a", r_fam.a}, {"b", r_fam.b}};
        if (!r_fam.subst.empty()) inputs["subst"] = r_fam.subst;
        quadode::RadicalProduct rp{quadode::parse_poly(r_fam.a, sp),
                                   quadode::parse_poly(r_fam.b, sp)};
        quadode::RadicalRecognition rec = quadode::recognize_radical(rp);
        if (rec.family) {
            exit_code = emit("recognize", inputs,
                             json{{"in_family", true},
                                  {"family", quadode::io::family_json(*rec.family)}},
                             diags);
        } else {
            exit_code = emit("recognize", inputs,
                             json{{"in_family", false},
                                  {"residual", quadode::io::poly_json(rec.residual)}},
                             diags, 1);
        }
    });

    // ---- solve / verify ----
    struct GridFlags {
        FamilyFlags fam;
        double x0 = 0.0, y0 = 0.0;
        int direction = 1;
        double from = 0.0, to = 0.0;
        long n = 0;
        double tol = 1e-8;
        std::string format = "json";
    };
    auto add_grid_flags = [](CLI::App* cmd, GridFlags& g, bool with_csv) {
        add_family_flags(cmd, g.fam);
        cmd->add_option("--x0", g.x0, "anchor abscissa")->capture_default_str();
        cmd->add_option("--y0", g.y0, "anchor ordinate")->capture_default_str();
        cmd->add_option("--direction", g.direction, "sign of y' on the branch")
            ->check(CLI::IsMember({1, -1}))
            ->capture_default_str();
        cmd->add_option("--from", g.from, "grid start")->required();
        cmd->add_option("--to", g.to, "grid end")->required();
        cmd->add_option("--n", g.n, "grid size")->required();
        auto* t = cmd->add_option("--tol", g.tol,
                                  "tolerance (default 1e-8; QUADODE_DEFAULT_TOL overrides)");
        if (with_csv)
            cmd->add_option("--format", g.format)->check(CLI::IsMember({"json", "csv"}));
        else
            cmd->add_option("--format", g.format)->check(CLI::IsMember({"json"}));
        return t;
    };

    auto* s_cmd = app.add_subcommand("solve", "solve on a grid by quadrature + inversion");
    GridFlags s_g;
    auto* s_tol_opt = add_grid_flags(s_cmd, s_g, true);
    s_cmd->callback([&] {
        std::vector<std::string> diags;
        double tol = resolve_tol(s_tol_opt->count() > 0, s_g.tol, diags);
        json inputs = echo_family_inputs(s_g.fam);
        inputs["x0"] = s_g.x0;
        inputs["y0"] = s_g.y0;
        inputs["direction"] = s_g.direction;
        inputs["from"] = s_g.from;
        inputs["to"] = s_g.to;
        inputs["n"] = s_g.n;
        inputs["tol"] = tol;
        Family fam = build_family(s_g.fam);
        std::vector<double> xs = linspace(s_g.from, s_g.to, s_g.n);
        quadode::solver::SolveConfig cfg;
        cfg.x0 = s_g.x0;
        cfg.y0 = s_g.y0;
        cfg.direction = s_g.direction;
        cfg.quad_tol = cfg.inv_tol = internal_tol(tol);
        exit_code = domain_guard("solve", inputs, diags, [&] {
            quadode::solver::SolutionTable table = quadode::solver::solve_grid(fam, cfg, xs);
            if (s_g.format == "csv") {
                std::cout << quadode::io::table_csv(table);
                return 0;
            }
            return emit("solve", inputs, json{{"table", quadode::io::table_json(table)}}, diags);
        });
    });

    auto* v_cmd = app.add_subcommand("verify", "solve, run the RK oracle, compare");
    GridFlags v_g;
    auto* v_tol_opt = add_grid_flags(v_cmd, v_g, false);
    v_cmd->callback([&] {
        std::vector<std::string> diags;
        double tol = resolve_tol(v_tol_opt->count() > 0, v_g.tol, diags);
        json inputs = echo_family_inputs(v_g.fam);
        inputs["x0"] = v_g.x0;
        inputs["y0"] = v_g.y0;
        inputs["direction"] = v_g.direction;
        inputs["from"] = v_g.from;
        inputs["to"] = v_g.to;
        inputs["n"] = v_g.n;
        inputs["tol"] = tol;
        Family fam = build_family(v_g.fam);
        std::vector<double> xs = linspace(v_g.from, v_g.to, v_g.n);
        quadode::solver::SolveConfig cfg;
        cfg.x0 = v_g.x0;
        cfg.y0 = v_g.y0;
        cfg.direction = v_g.direction;
        cfg.quad_tol = cfg.inv_tol = internal_tol(tol);
        exit_code = domain_guard("verify", inputs, diags, [&] {
            quadode::solver::ResidualReport rep = quadode::solver::verify(fam, cfg, xs);
            bool pass = rep.max_abs_residual <= tol && rep.max_oracle_deviation <= tol &&
                        rep.first_integral_drift <= tol &&
                        rep.max_closed_form_deviation <= tol;
            return emit("verify", inputs,
                        json{{"report", quadode::io::report_json(rep)},
                             {"tol", tol},
                             {"pass", pass}},
                        diags, pass ? 0 : 1);
        });
    });

    // ---- catalog ----
    auto* cat = app.add_subcommand("catalog", "worked-example catalog");
    cat->require_subcommand(1);

    auto* cat_list = cat->add_subcommand("list", "list entries");
    cat_list->callback([&] {
        json entries = json::array();
        for (const auto& sig : quadode::catalog::list_entries())
            entries.push_back(json{{"name", sig.name},
                                   {"params", sig.params},
                                   {"summary", sig.summary}});
        exit_code = emit("catalog list", json::object(), json{{"entries", entries}}, {});
    });

    auto* cat_show = cat->add_subcommand("show", "show one entry (defaults filled in)");
    std::string show_name;
    std::vector<std::string> show_params;
    cat_show->add_option("name", show_name)->required();
    cat_show->add_option("--param", show_params, "name=rational (repeatable)");
    cat_show->callback([&] {
        std::vector<std::string> diags;
        json inputs{{"name", show_name}};
        if (!show_params.empty()) inputs["param"] = show_params;
        exit_code = domain_guard("catalog show", inputs, diags, [&] {
            quadode::catalog::Params p = default_params(show_name);
            for (auto& [k, v] : parse_params(show_params)) p[k] = v;
            quadode::catalog::CatalogEntry entry = quadode::catalog::get_entry(show_name, p);
            json result;
            result["name"] = entry.name;
            result["params"] = params_json(entry.params);
            result["family"] = quadode::io::family_json(entry.family);
            result["anchor"] = json{{"x0", entry.x0}, {"y0", entry.y0}};
            result["direction"] = entry.direction;
            result["closed_y"] =
                entry.closed_y ? json{{"present", true},
                                      {"valid_from", bound_json(entry.closed_y->lo)},
                                      {"valid_to", bound_json(entry.closed_y->hi)}}
                               : json{{"present", false}};
            result["closed_yi"] =
                entry.closed_yi ? json{{"present", true},
                                       {"valid_from", bound_json(entry.closed_yi->lo)},
                                       {"valid_to", bound_json(entry.closed_yi->hi)}}
                                : json{{"present", false}};
            result["notes"] = entry.notes;
            return emit("catalog show", inputs, result, diags);
        });
    });

    auto* cat_verify = cat->add_subcommand("verify", "verify one entry on a grid");
    std::string cv_name;
    std::vector<std::string> cv_params;
    double cv_from = 0.0, cv_to = 0.0, cv_tol = 1e-8;
    long cv_n = 0;
    cat_verify->add_option("name", cv_name)->required();
    cat_verify->add_option("--param", cv_params, "name=rational (repeatable)");
    cat_verify->add_option("--from", cv_from)->required();
    cat_verify->add_option("--to", cv_to)->required();
    cat_verify->add_option("--n", cv_n)->required();
    auto* cv_tol_opt = cat_verify->add_option("--tol", cv_tol, "pass threshold");
    cat_verify->callback([&] {
        std::vector<std::string> diags;
        double tol = resolve_tol(cv_tol_opt->count() > 0, cv_tol, diags);
        json inputs{{"name", cv_name}, {"from", cv_from}, {"to", cv_to}, {"n", cv_n},
                    {"tol", tol}};
        if (!cv_params.empty()) inputs["param"] = cv_params;
        exit_code = domain_guard("catalog verify", inputs, diags, [&] {
            std::vector<double> xs = linspace(cv_from, cv_to, cv_n);
            quadode::solver::ResidualReport rep =
                quadode::catalog::verify_entry(cv_name, parse_params(cv_params), xs);
            bool pass = rep.max_abs_residual <= tol && rep.max_oracle_deviation <= tol &&
                        rep.first_integral_drift <= tol &&
                        rep.max_closed_form_deviation <= tol;
            return emit("catalog verify", inputs,
                        json{{"report", quadode::io::report_json(rep)},
                             {"tol", tol},
                             {"pass", pass}},
                        diags, pass ? 0 : 1);
        });
    });

    // ---- elliptic ----
    auto* ell = app.add_subcommand("elliptic", "elliptic integral evaluators");
    ell->require_subcommand(1);

    auto* ell_rf = ell->add_subcommand("rf", "Carlson R_F(x, y, z)");
    double rf_x = 0, rf_y = 0, rf_z = 0;
    ell_rf->add_option("x", rf_x)->required();
    ell_rf->add_option("y", rf_y)->required();
    ell_rf->add_option("z", rf_z)->required();
    ell_rf->callback([&] {
        std::vector<std::string> diags;
        json inputs{{"x", rf_x}, {"y", rf_y}, {"z", rf_z}};
        exit_code = domain_guard("elliptic rf", inputs, diags, [&] {
            return emit("elliptic rf", inputs,
                        json{{"value", quadode::elliptic::carlson_rf(rf_x, rf_y, rf_z)}}, diags);
        });
    });

    auto* ell_f = ell->add_subcommand("F", "incomplete first-kind F(phi, m)");
    double f_phi = 0, f_m = 0;
    ell_f->add_option("phi", f_phi)->required();
    ell_f->add_option("m", f_m)->required();
    ell_f->callback([&] {
        std::vector<std::string> diags;
        json inputs{{"phi", f_phi}, {"m", f_m}};
        exit_code = domain_guard("elliptic F", inputs, diags, [&] {
            return emit("elliptic F", inputs,
                        json{{"value", quadode::elliptic::incomplete_f(f_phi, f_m)}}, diags);
        });
    });

    auto* ell_k = ell->add_subcommand("K", "complete first-kind K(m) via AGM");
    double k_m = 0;
    ell_k->add_option("m", k_m)->required();
    ell_k->callback([&] {
        std::vector<std::string> diags;
        json inputs{{"m", k_m}};
        exit_code = domain_guard("elliptic K", inputs, diags, [&] {
            int iters = 0;
            double v = quadode::elliptic::complete_k_agm(k_m, &iters);
            return emit("elliptic K", inputs, json{{"value", v}, {"iterations", iters}},
                        diags);
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const quadode::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const quadode::catalog::UnknownEntry& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
