// Runs the acceptance criteria and prints one status line per criterion.
// Usage: bealab_acceptance [--only AC3 [--only AC7 ...]] [--report out.json]

#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "bealab/report.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> only;
    std::string report_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only.push_back(argv[++i]);
        } else if (arg == "--report" && i + 1 < argc) {
            report_path = argv[++i];
        } else if (arg == "--help" || arg == "-h") {
            std::printf("usage: %s [--only ACn]... [--report path]\n", argv[0]);
            return 0;
        } else {
            std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
            return 2;
        }
    }

    std::vector<std::string> ids = only.empty() ? bealab::criterion_ids() : only;
    std::vector<bealab::CriterionResult> results;
    int failed = 0;
    for (const auto& id : ids) {
        bealab::CriterionResult r;
        try {
            r = bealab::run_criterion(id);
        } catch (const std::exception& e) {
            r.id = id;
            r.pass = false;
            r.details.push_back(std::string("error: ") + e.what());
        }
        results.push_back(r);
        if (!r.pass) ++failed;
        std::printf("%s: %s\n", r.id.c_str(), r.pass ? "PASS" : "FAIL");
        for (const auto& line : r.details) std::printf("    %s\n", line.c_str());
        for (const auto& line : r.info) std::printf("    note: %s\n", line.c_str());
    }
    std::printf("%d passed, %d failed\n", (int)results.size() - failed, failed);

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << bealab::build_report(results).dump(2) << "\n";
    }
    return failed == 0 ? 0 : 1;
}
