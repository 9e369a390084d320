#include "quadode/serialize.hpp"

#include <cstdio>

namespace quadode::io {

json rational_json(const Rational& r) {
    if (r.is_integer()) {
        mpz_class n = r.num();
        static const mpz_class limit = mpz_class(1) << 53;
        if (n > -limit && n < limit) return static_cast<std::int64_t>(n.get_si());
    }
    return r.str();
}

json poly_json(const Poly& p) {
    json arr = json::array();
    for (int i = 0; i <= p.degree(); ++i) arr.push_back(rational_json(p.coeff(i)));
    return arr;
}

json family_json(const Family& fam) {
    json j;
    j["B"] = poly_json(fam.B);
    j["A"] = poly_json(fam.A);
    j["P"] = json{{"A", poly_json(fam.A)}, {"B", poly_json(fam.B)}};
    if (fam.U) j["U"] = poly_json(*fam.U);
    j["convention"] = "Q=P/2";
    return j;
}

json table_json(const solver::SolutionTable& t) {
    json rows = json::array();
    for (const solver::Row& r : t.rows)
        rows.push_back(json::array({r.x, r.y, r.y1, r.y2, r.y3, r.residual}));
    json j;
    j["columns"] = json::array({"x", "y", "y1", "y2", "y3", "residual"});
    j["rows"] = rows;
    return j;
}

json report_json(const solver::ResidualReport& r) {
    json j;
    j["max_abs_residual"] = r.max_abs_residual;
    j["max_oracle_deviation"] = r.max_oracle_deviation;
    j["first_integral_drift"] = r.first_integral_drift;
    j["max_closed_form_deviation"] = r.max_closed_form_deviation;
    j["rows_checked"] = r.rows_checked;
    return j;
}

std::string table_csv(const solver::SolutionTable& t) {
    std::string out = "x,y,y1,y2,y3,residual\n";
    char buf[160];
    for (const solver::Row& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.x, r.y, r.y1,
                      r.y2, r.y3, r.residual);
        out += buf;
    }
    return out;
}

}  // namespace quadode::io
