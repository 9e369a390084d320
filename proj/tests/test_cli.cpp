#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

using json = nlohmann::json;

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + "\"" QUADODE_CLI_PATH "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args, int expect_code, const std::string& env_prefix = "") {
    RunResult r = run(args, env_prefix);
    CAPTURE(args);
    CAPTURE(r.out);
    CHECK(r.code == expect_code);
    REQUIRE(!r.out.empty());
    CHECK(r.out.back() == '\n');
    // envelope is a single JSON line
    CHECK(r.out.find('\n') == r.out.size() - 1);
    return json::parse(r.out);
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto nl = s.find('\n', pos);
        if (nl == std::string::npos) nl = s.size();
        lines.push_back(s.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::vector<double> split_csv_row(const std::string& line) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        auto comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        vals.push_back(std::strtod(line.substr(pos, comma - pos).c_str(), nullptr));
        pos = comma + 1;
    }
    return vals;
}

}  // namespace

TEST_CASE("construct") {
    json j = run_json("construct --u \"1+x^2\"", 0);
    CHECK(j["schema_version"] == 1);
    CHECK(j["command"] == "construct");
    CHECK(j["inputs"]["u"] == "1+x^2");
    CHECK(j["diagnostics"].is_array());
    CHECK((j["result"]["family"]["A"] == json::array({6, 0, 12})));
    CHECK((j["result"]["family"]["B"] == json::array({1, 0, 2, 0, 1})));
    CHECK((j["result"]["family"]["U"] == json::array({1, 0, 1})));
    CHECK(j["result"]["family"]["P"]["A"] == j["result"]["family"]["A"]);
    CHECK(j["result"]["family"]["P"]["B"] == j["result"]["family"]["B"]);
    CHECK(j["result"]["family"]["convention"] == "Q=P/2");

    SUBCASE("coefficient map with substitutions") {
        json k = run_json(
            "construct --a \"g1+f1*x\" --subst g1=2 --subst f1=6 --b0 1 --b1 0", 0);
        CHECK((k["result"]["family"]["B"] == json::array({1, 0, 0, 1})));
        CHECK((k["result"]["family"]["A"] == json::array({2, 6})));
    }
    SUBCASE("non-integer rationals render as strings") {
        json k = run_json("construct --u \"1/2+x\"", 0);
        CHECK(k["result"]["family"]["B"][0] == "1/4");
        CHECK(k["result"]["family"]["B"][1] == 1);
    }
    SUBCASE("usage errors exit 2") {
        CHECK(run("construct --u \"0\"").code == 2);
        CHECK(run("construct").code == 2);
        CHECK(run("construct --u \"x +\"").code == 2);
        CHECK(run("construct --u \"x\" --b \"x\"").code == 2);
        CHECK(run("construct --a \"x\"").code == 2);  // missing --b0/--b1
    }
}

TEST_CASE("recognize") {
    json j = run_json("recognize --p \"6+18*x^2+12*x^4\"", 0);
    CHECK(j["result"]["in_family"] == true);
    CHECK((j["result"]["family"]["U"] == json::array({1, 0, 1})));

    json k = run_json("recognize --a \"2\" --b \"1\"", 0);
    CHECK(k["result"]["in_family"] == true);
    CHECK((k["result"]["family"]["A"] == json::array({2})));

    SUBCASE("non-members exit 1 with a reason") {
        json m = run_json("recognize --p \"x^2\"", 1);
        CHECK(m["result"]["in_family"] == false);
        CHECK(!m["result"]["reason"].get<std::string>().empty());
        json r = run_json("recognize --a \"1\" --b \"x\"", 1);
        CHECK(r["result"]["in_family"] == false);
        CHECK((r["result"]["residual"] == json::array({-1})));
    }
    SUBCASE("usage errors exit 2") {
        CHECK(run("recognize").code == 2);
        CHECK(run("recognize --p \"x\" --a \"1\" --b \"x\"").code == 2);
    }
}

TEST_CASE("solve") {
    const std::string tan_grid =
        "--u \"1+x^2\" --x0 0 --y0 0 --from 0 --to 0.7853981634 --n 3";
    SUBCASE("csv output") {
        RunResult r = run("solve " + tan_grid + " --format csv");
        CHECK(r.code == 0);
        auto lines = split_lines(r.out);
        REQUIRE(lines.size() == 4);
        CHECK(lines[0] == "x,y,y1,y2,y3,residual");
        auto last = split_csv_row(lines[3]);
        REQUIRE(last.size() == 6);
        CHECK(std::fabs(last[1] - 1.0) < 1e-8);
        auto first = split_csv_row(lines[1]);
        CHECK(first[0] == 0.0);
        CHECK(first[1] == 0.0);
    }
    SUBCASE("json output mirrors csv") {
        json j = run_json("solve " + tan_grid, 0);
        CHECK(j["inputs"]["n"] == 3);
        CHECK(j["inputs"]["tol"] == 1e-8);
        CHECK((j["result"]["table"]["columns"] ==
               json::array({"x", "y", "y1", "y2", "y3", "residual"})));
        REQUIRE(j["result"]["table"]["rows"].size() == 3);
        double y_json = j["result"]["table"]["rows"][2][1].get<double>();
        RunResult r = run("solve " + tan_grid + " --format csv");
        double y_csv = split_csv_row(split_lines(r.out)[3])[1];
        CHECK(y_json == y_csv);  // lossless at double precision
    }
    SUBCASE("deterministic output") {
        RunResult a = run("solve " + tan_grid);
        RunResult b = run("solve " + tan_grid);
        CHECK(a.out == b.out);
    }
    SUBCASE("reflected branch") {
        RunResult r = run(
            "solve --u \"1+x^2\" --direction=-1 --from 0 --to -0.7853981634 --n 3 "
            "--format csv");
        CHECK(r.code == 0);
        auto last = split_csv_row(split_lines(r.out)[3]);
        CHECK(std::fabs(last[1] - 1.0) < 1e-8);
    }
    SUBCASE("blow-up reports the boundary and exits 1") {
        json j = run_json("solve --u \"x^3\" --x0 0 --y0 1 --from 0 --to 0.6 --n 7", 1);
        CHECK(j["result"]["error"]["type"] == "InversionBracketFailure");
        CHECK(std::fabs(j["result"]["error"]["reached_x"].get<double>() - 0.5) < 1e-3);
    }
    SUBCASE("missing required flags exit 2") {
        CHECK(run("solve --u \"1+x^2\"").code == 2);
        CHECK(run("solve --u \"1+x^2\" --from 0 --to 1 --n 0").code == 2);
    }
}

TEST_CASE("verify") {
    json j = run_json("verify --u \"1+x^2\" --x0 0 --y0 0 --from -1 --to 1 --n 101 --tol 1e-6", 0);
    CHECK(j["result"]["pass"] == true);
    CHECK(j["result"]["report"]["max_abs_residual"].get<double>() < 1e-6);
    CHECK(j["result"]["report"]["max_oracle_deviation"].get<double>() < 1e-6);
    CHECK(j["result"]["report"]["first_integral_drift"].get<double>() < 1e-6);
    CHECK(j["result"]["report"]["rows_checked"] == 101);

    SUBCASE("unreachable tolerance fails with exit 1") {
        json k = run_json("verify --u \"1+x^2\" --from -1 --to 1 --n 41 --tol 1e-16", 1);
        CHECK(k["result"]["pass"] == false);
    }
    SUBCASE("environment default and flag precedence") {
        const std::string args = "verify --u \"1+x^2\" --from -0.5 --to 0.5 --n 21";
        json env = run_json(args, 0, "QUADODE_DEFAULT_TOL=1e-4 ");
        CHECK(env["inputs"]["tol"] == 1e-4);
        bool noted = false;
        for (const auto& d : env["diagnostics"])
            noted |= d.get<std::string>().find("QUADODE_DEFAULT_TOL") != std::string::npos;
        CHECK(noted);

        json flag = run_json(args + " --tol 1e-6", 0, "QUADODE_DEFAULT_TOL=1e-4 ");
        CHECK(flag["inputs"]["tol"] == 1e-6);
        CHECK(flag["diagnostics"].empty());

        json bad = run_json(args, 0, "QUADODE_DEFAULT_TOL=banana ");
        CHECK(bad["inputs"]["tol"] == 1e-8);
        bool warned = false;
        for (const auto& d : bad["diagnostics"])
            warned |= d.get<std::string>().find("ignoring invalid") != std::string::npos;
        CHECK(warned);
    }
}

TEST_CASE("elliptic commands") {
    json f = run_json("elliptic F 1.5707963268 0", 0);
    CHECK(std::fabs(f["result"]["value"].get<double>() - 1.5707963268) < 1e-9);

    json rf = run_json("elliptic rf 0 2 2", 0);
    CHECK(std::fabs(rf["result"]["value"].get<double>() - 1.1107207345395915) < 1e-10);

    json k = run_json("elliptic K 0.5", 0);
    CHECK(std::fabs(k["result"]["value"].get<double>() - 1.8540746773013719) < 1e-10);
    CHECK(k["result"]["iterations"].get<int>() >= 1);
    CHECK(k["result"]["iterations"].get<int>() <= 8);

    SUBCASE("domain failures exit 1") {
        json bad = run_json("elliptic K 1", 1);
        CHECK(bad["result"]["error"]["type"] == "DomainError");
    }
    SUBCASE("usage errors exit 2") {
        CHECK(run("elliptic").code == 2);
        CHECK(run("elliptic K").code == 2);
    }
}

TEST_CASE("catalog commands") {
    json l = run_json("catalog list", 0);
    REQUIRE(l["result"]["entries"].size() == 5);
    CHECK(l["result"]["entries"][0]["name"] == "quartic");
    CHECK(l["result"]["entries"][2]["name"] == "shifted-cubic");

    SUBCASE("show fills documented defaults") {
        json s = run_json("catalog show shifted-cubic", 0);
        CHECK(s["result"]["name"] == "shifted-cubic");
        CHECK(s["result"]["params"]["g"] == 1);
        CHECK(s["result"]["closed_y"]["present"] == false);
        CHECK(s["result"]["closed_yi"]["present"] == true);
        CHECK(std::fabs(s["result"]["closed_yi"]["valid_from"].get<double>() + 1.0) < 1e-9);
        CHECK(s["result"]["closed_yi"]["valid_to"].is_null());  // unbounded above
        bool erratum = false;
        for (const auto& n : s["result"]["notes"])
            erratum |= n.get<std::string>().find("45 d^{4/3} g^{2/3} x^2") != std::string::npos;
        CHECK(erratum);
    }
    SUBCASE("show accepts parameter overrides") {
        json s = run_json("catalog show pure-cubic --param y0=2", 0);
        CHECK(s["result"]["anchor"]["y0"] == 2.0);
        CHECK(std::fabs(s["result"]["closed_y"]["valid_to"].get<double>() - 0.125) < 1e-12);
    }
    SUBCASE("parameter domain failures exit 1") {
        json s = run_json("catalog show quartic --param f=2", 1);  // 4eg - f^2 = 0
        CHECK(s["result"]["error"]["type"] == "ParamDomainError");
    }
    SUBCASE("verify mirrors cmd_verify semantics") {
        json v = run_json(
            "catalog verify quartic --param e=1 --param f=0 --param g=1 "
            "--from -1.2 --to 1.2 --n 97",
            0);
        CHECK(v["result"]["pass"] == true);
        CHECK(v["result"]["report"]["max_closed_form_deviation"].get<double>() < 1e-8);
        // verify demands explicit parameters
        CHECK(run("catalog verify quartic --from -1 --to 1 --n 9").code == 1);
    }
    SUBCASE("unknown entries are usage errors") {
        CHECK(run("catalog show no-such-entry").code == 2);
        CHECK(run("catalog verify no-such-entry --from 0 --to 1 --n 3").code == 2);
    }
}

TEST_CASE("top-level usage") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--help").code == 0);
}
