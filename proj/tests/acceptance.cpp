// Acceptance runner: one PASS/FAIL line per criterion with the measured
// value, the pinned tolerance and the wall-clock time against its budget.

#include <cstdio>

#include "austere/verification.hpp"

int main() {
    const auto suite = austere::verify_all(1, true, false);
    bool all = true;
    for (const auto& c : suite.criteria) {
        const bool ok = c.passed && c.within_time();
        all = all && ok;
        std::printf("%s %-24s measured=%.3e tol=%.3e time=%.2fs/%.0fs  %s\n", ok ? "PASS" : "FAIL", c.id.c_str(),
                    c.measured, c.tolerance, c.seconds, c.time_budget, c.title.c_str());
    }
    return all ? 0 : 1;
}
