#ifndef PROJLAT_SELFTEST_HPP
#define PROJLAT_SELFTEST_HPP

//
// Property suite behind `projlat selftest` and the acceptance tests.
// Every criterion runs with its full trial count by default; `trials`
// overrides the outer loop length for quick runs. Fixed seed + fixed
// config => byte-identical report.
//

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "projlat/tolerance.hpp"

namespace projlat {

struct SelftestConfig {
    std::uint64_t seed = 7;
    std::size_t trials = 0;  // 0: full acceptance counts
    Tolerance tol{};
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> stats;
};

struct SelftestReport {
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
};

SelftestReport run_selftest(const SelftestConfig& cfg);

// key=value lines, one per criterion, then a final PASS/FAIL line.
void print_report(std::ostream& os, const SelftestReport& report);

std::string format_double(double x);

}  // namespace projlat

#endif
