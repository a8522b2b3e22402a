#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rholattice/json_io.hpp"

namespace rholattice {

struct VerifyOptions {
    std::string suite = "all";
    int max_n = 0;  // 0: no filter
    int max_d = 0;  // 0: no filter
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: hardware concurrency
    std::string only;      // statement id filter, empty for all
};

struct CheckResult {
    std::string id;
    Json params;
    bool pass = true;
    std::string witness;
    std::string reproducer;
    Json note;  // informational output that is not asserted
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 1;
    std::vector<CheckResult> checks;

    std::size_t passed() const;
    std::size_t failed() const;
    // statement id -> (passed, failed)
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_statement() const;
};

const std::vector<std::string>& verify_suites();
// Default parameter sweep.
const std::vector<int>& sweep_n();
const std::vector<int>& sweep_d();

VerifyReport run_verify(const VerifyOptions& options);

Json check_to_json(const CheckResult& c);
Json summary_to_json(const VerifyReport& r);
// One JSON object per check, then the summary line.
void write_report(std::ostream& out, const VerifyReport& r);

}  // namespace rholattice
