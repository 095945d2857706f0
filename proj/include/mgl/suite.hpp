#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace mgl {

struct SuiteCheck {
    std::string name;
    std::string anchor;
    bool pass = false;
    double seconds = 0.0;  // run-dependent, kept out of the core JSON
    nlohmann::json details;
};

struct SuiteResult {
    bool quick = false;
    bool pass = false;
    std::vector<SuiteCheck> checks;
    double total_seconds = 0.0;

    // Deterministic core: names, anchors, verdicts, numeric details.
    nlohmann::json to_json() const;
    // Wall-clock timings for the meta section.
    nlohmann::json timings() const;
};

// Full acceptance battery, one check per criterion.  quick trims grid
// refinement sweeps and the search budget without weakening any asserted
// tolerance.  workers > 1 runs the checks on a thread pool; the merge is
// index-ordered so output does not depend on scheduling.
SuiteResult run_suite(bool quick, int workers);

}  // namespace mgl
