// One line per acceptance criterion. Exit status is non-zero only when a
// suite cannot run to completion, or on any FAIL with --strict.
#include <cstring>
#include <iomanip>
#include <iostream>
#include <limits>

#include "dbar/verify.hpp"

int main(int argc, char** argv) {
    bool strict = false;
    for (int i = 1; i < argc; ++i) strict = strict || std::strcmp(argv[i], "--strict") == 0;
    dbar::verify::VerifyOptions opt;
#ifdef DBAR_CLI_PATH
    opt.cli_path = DBAR_CLI_PATH;
#endif
    int idx = 0, failed = 0, aborted = 0;
    for (const auto& name : dbar::verify::suite_names()) {
        const auto r = dbar::verify::run(name, opt);
        ++idx;
        std::cout << (r.pass() ? "PASS" : "FAIL") << " [" << idx << "] " << r.name << " (" << std::fixed
                  << std::setprecision(2) << r.seconds << " s)\n";
        for (const auto& c : r.checks) {
            std::cout << "    " << (c.pass ? "ok " : "NO ") << c.name << ": " << std::scientific << std::setprecision(3)
                      << c.value << ' ' << c.cmp << ' ';
            if (c.tol == std::numeric_limits<double>::infinity()) std::cout << "(reported)";
            else std::cout << c.tol;
            if (!c.note.empty()) std::cout << "  [" << c.note << ']';
            std::cout << '\n';
        }
        if (!r.error.empty()) {
            std::cout << "    aborted: " << r.error << '\n';
            ++aborted;
        }
        if (!r.pass()) ++failed;
        std::cout.flush();
    }
    std::cout << "criteria passed: " << idx - failed << "/" << idx << '\n';
    if (aborted) return 2;
    return strict && failed ? 1 : 0;
}
