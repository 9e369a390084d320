#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadode/family.hpp"
#include "quadode/solve.hpp"

namespace quadode::catalog {

class UnknownEntry : public std::runtime_error {
public:
    explicit UnknownEntry(const std::string& name)
        : std::runtime_error("unknown catalog entry: " + name) {}
};

class ParamDomainError : public std::runtime_error {
public:
    explicit ParamDomainError(const std::string& what) : std::runtime_error(what) {}
};

using Params = std::map<std::string, Rational>;

/// One-variable evaluator with its open validity interval.
struct ClosedForm {
    std::function<double(double)> eval;
    double lo;
    double hi;
    bool contains(double t) const { return t > lo && t < hi; }
};

struct CatalogEntry {
    std::string name;
    Params params;  // resolved values, defaults included
    Family family;
    double x0 = 0.0;
    double y0 = 0.0;
    int direction = +1;
    std::optional<ClosedForm> closed_y;   // x -> y
    std::optional<ClosedForm> closed_yi;  // y -> x
    std::vector<std::string> notes;
};

struct EntrySignature {
    std::string name;
    std::vector<std::string> params;  // required parameter names
    std::string summary;
};

/// Construct a named entry.  All entries accept optional x0/y0 overrides of
/// their default anchor.
CatalogEntry get_entry(const std::string& name, const Params& params);

/// solver::verify on the entry's family plus pointwise comparison of the
/// closed forms (when present) against the computed table; closed-form
/// deviations land in max_closed_form_deviation.
solver::ResidualReport verify_entry(const std::string& name, const Params& params,
                                    std::span<const double> xs);

/// Stable-ordered entry directory.
std::vector<EntrySignature> list_entries();

}  // namespace quadode::catalog
