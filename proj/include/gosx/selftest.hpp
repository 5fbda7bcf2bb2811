#pragma once

// Invariant suite run by `gosx selftest`: one check per module property,
// each reduced to a measured quantity against a tolerance.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gosx/distributions.hpp"
#include "gosx/params.hpp"

namespace gosx {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    /// Worst observed deviation (or margin), as defined by the check.
    double measure = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct SelftestOptions {
    /// Skip the Monte Carlo checks.
    bool quick = false;
    std::uint64_t seed = 2024;
    int threads = 0;
    /// Only modules whose name is listed; empty means all.
    std::vector<std::string> modules;
};

struct SelftestReport {
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    int passed() const;
    int failed() const;
};

SelftestReport run_selftest(const SelftestOptions& options = {}, const std::function<void(const CheckResult&)>& on_check = {});

std::vector<std::string> selftest_modules();

/// A range/midrange example of the case table. slow marks cases whose
/// finite-n error decays only logarithmically or like a small power of n,
/// so n = 500 is not yet within Monte Carlo noise.
struct RangeExample {
    DistributionModel model;
    GosParams params;
    bool slow = false;
};

std::vector<RangeExample> range_examples(int n);

}  // namespace gosx
