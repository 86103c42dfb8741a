// Acceptance suite: runs every verification criterion and prints one
// pass/fail line per criterion. Exit status is nonzero if anything fails.
#include <cstdio>

#include "willmore/verify.hpp"

int main() {
    const auto report = willmore::verify::run_suite();
    const auto summary = willmore::verify::summarize(report);

    for (const auto& s : summary)
        std::printf("criterion %02d  %-48s %s\n", s.id, s.title.c_str(),
                    s.pass ? "PASS" : "FAIL");

    bool ok = true;
    for (const auto& c : report.checks) {
        if (c.pass) continue;
        ok = false;
        std::printf("  failed check %s: measured %.17g, tolerance %.17g\n",
                    c.name.c_str(), c.measured, c.tolerance);
    }
    std::printf("overall: %s (%zu checks)\n", ok ? "PASS" : "FAIL",
                report.checks.size());
    return ok ? 0 : 1;
}
