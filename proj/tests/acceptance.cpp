// Acceptance battery: one line per criterion, nonzero exit on any failure.
// Criteria 1..8 are the suite checks run at full resolution with wall-time
// limits; criterion 9 replays the quick suite in two child processes and
// requires byte-identical reports once volatile metadata is stripped.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mgl/report.hpp"
#include "mgl/suite.hpp"

namespace {

int run_quick_suite(const std::string& report_path) {
    const std::string cmd = std::string(MGLAB_PATH) + " suite --quick --report " +
                            report_path + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool load_stripped(const std::string& path, std::string& dump) {
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    in >> j;
    dump = mgl::strip_meta(std::move(j)).dump();
    return true;
}

void print_line(bool ok, int index, const std::string& name, double seconds) {
    std::printf("[%s] criterion-%d %s (%.2fs)\n", ok ? "PASS" : "FAIL", index,
                name.c_str(), seconds);
}

}  // namespace

int main() {
    const double kLimitSeconds[8] = {1.0, 1.0, 5.0, 10.0, 60.0, 1.0, 30.0, 2.0};

    const mgl::SuiteResult res = mgl::run_suite(/*quick=*/false, /*workers=*/1);
    if (res.checks.size() != 9) {
        std::printf("[FAIL] suite returned %zu checks, expected 9\n", res.checks.size());
        return 1;
    }

    bool all_pass = true;
    for (int i = 0; i < 8; ++i) {
        const mgl::SuiteCheck& c = res.checks[static_cast<size_t>(i)];
        const bool in_budget = c.seconds < kLimitSeconds[i];
        const bool ok = c.pass && in_budget;
        all_pass = all_pass && ok;
        print_line(ok, i + 1, c.name, c.seconds);
        if (!c.pass && c.details.contains("failed"))
            std::printf("       failed: %s\n", c.details["failed"].dump().c_str());
        if (!in_budget)
            std::printf("       over budget: %.2fs >= %.2fs\n", c.seconds, kLimitSeconds[i]);
    }

    const auto t0 = std::chrono::steady_clock::now();
    bool nine = res.checks[8].pass;
    if (!nine)
        std::printf("       in-process rerun mismatch: %s\n",
                    res.checks[8].details.dump().c_str());

    if (run_quick_suite("acc_quick_1.json") != 0 ||
        run_quick_suite("acc_quick_2.json") != 0) {
        std::printf("       quick suite child process failed\n");
        nine = false;
    } else {
        std::string d1, d2;
        if (!load_stripped("acc_quick_1.json", d1) || !load_stripped("acc_quick_2.json", d2)) {
            std::printf("       quick suite report missing\n");
            nine = false;
        } else if (d1 != d2) {
            std::printf("       quick suite reports differ after meta strip\n");
            nine = false;
        }
    }
    std::remove("acc_quick_1.json");
    std::remove("acc_quick_2.json");

    if (res.total_seconds >= 120.0) {
        std::printf("       full suite over budget: %.2fs >= 120s\n", res.total_seconds);
        nine = false;
    }

    const double nine_seconds =
        res.checks[8].seconds +
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    print_line(nine, 9, res.checks[8].name, nine_seconds);
    all_pass = all_pass && nine;

    return all_pass ? 0 : 1;
}
