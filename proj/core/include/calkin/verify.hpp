#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace calkin::verify {

struct RunConfig {
    std::uint64_t seed = 12345;  // mandatory: no wall-clock seeding anywhere
    double tol_identity = 1e-12;
    double tol_inequality = 1e-9;
    int depth = 40;
    int depth_double_exp = 4;  // the doubly-exponential profile stays shallow
    int r_max = 8;
    std::size_t horizon = 60;
    int matrix_cap = 64;
    std::string out_dir;          // empty: no report files
    std::string format = "json";  // or "csv"
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string operation;  // module operations exercised
    std::string claim;      // the fact the criterion instantiates
    bool pass = false;
    double measured = 0.0;   // worst observed value
    double threshold = 0.0;  // what it must stay within
    double seconds = 0.0;
    double budget = 0.0;     // runtime budget in seconds; 0 = none pinned
    std::string detail;
};

// Runs the whole claim suite; one result per criterion, in order.
std::vector<CriterionResult> run_all(const RunConfig& cfg);

bool all_passed(const std::vector<CriterionResult>& results);

std::string report_json(const std::vector<CriterionResult>& results,
                        const RunConfig& cfg);
std::string report_csv(const std::vector<CriterionResult>& results);

// One "PASS/FAIL id name ..." line per criterion.
std::string summary_lines(const std::vector<CriterionResult>& results);

}  // namespace calkin::verify
