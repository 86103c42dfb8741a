#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace willmore::verify {

/// One measured quantity. A check passes iff measured <= tolerance, so
/// inequality-style properties store the (signed) constraint violation with
/// tolerance 0.
struct Check {
    std::string name;    // "NN.slug" -- NN is the two-digit criterion number
    std::string anchor;  // plain-language statement of the property
    double measured = 0;
    double tolerance = 0;
    bool pass = false;
};

struct Report {
    std::vector<Check> checks;
    bool all_pass() const;
};

/// Run the full verification suite (12 criteria, several checks each).
Report run_suite();

/// Deterministic JSON serialization: fixed key order, 17 significant digits,
/// LF line endings.
void write_report_json(std::ostream& os, const Report& report);
std::string report_to_json(const Report& report);

struct CriterionSummary {
    int id = 0;
    std::string title;
    bool pass = false;
};

/// Collapse the report to one pass/fail entry per criterion number.
std::vector<CriterionSummary> summarize(const Report& report);

}  // namespace willmore::verify
