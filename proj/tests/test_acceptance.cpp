// Acceptance suite: runs every criterion at its full trial count and
// stated tolerance, printing one pass/fail line per criterion.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "projlat/selftest.hpp"

TEST_CASE("acceptance criteria") {
    projlat::SelftestConfig cfg;  // seed 7, full counts
    projlat::SelftestReport report = projlat::run_selftest(cfg);
    projlat::print_report(std::cout, report);

    REQUIRE(report.criteria.size() == 8);
    for (const projlat::CriterionResult& c : report.criteria) {
        CAPTURE(c.id);
        CAPTURE(c.name);
        CHECK(c.pass);
    }
    CHECK(report.all_pass);
}
