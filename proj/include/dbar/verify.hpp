#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dbar::verify {

struct Check {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    std::string cmp = "<=";  // value cmp tol; "==" for booleans encoded as 0/1
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string name;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    std::string error;  // set when the suite aborted with an exception

    bool pass() const;
    nlohmann::json to_json() const;
};

struct VerifyOptions {
    int res = 0;  // 0 keeps each suite's own resolution
    std::uint64_t seed = 42;
    std::string cli_path;  // optional: exercised by the infrastructure suite
};

/// Suite names in acceptance order.
std::vector<std::string> suite_names();

/// Runs one suite; exceptions are captured into SuiteResult::error.
SuiteResult run(const std::string& name, const VerifyOptions& opt = {});

}  // namespace dbar::verify
