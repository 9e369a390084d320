#pragma once

#include <string>

#include <json.hpp>

#include "quadode/family.hpp"
#include "quadode/solve.hpp"

namespace quadode::io {

using json = nlohmann::ordered_json;

/// Integer JSON number when exactly representable (den == 1, |num| < 2^53),
/// otherwise the string "num/den".
json rational_json(const Rational& r);

/// Ascending coefficient array.
json poly_json(const Poly& p);

/// {B, A, P:{A,B}, U?, convention:"Q=P/2"}
json family_json(const Family& fam);

json table_json(const solver::SolutionTable& t);

json report_json(const solver::ResidualReport& r);

/// Header `x,y,y1,y2,y3,residual`, one row per line, %.17g fields,
/// '.' decimal separator, newline-terminated.
std::string table_csv(const solver::SolutionTable& t);

}  // namespace quadode::io
