// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Optional arguments select criteria by id, e.g. `crsma_acceptance 2 9`.

#include <cstdlib>
#include <iostream>
#include <string>

#include "crsma/acceptance.hpp"

int main(int argc, char** argv) {
    crsma::AcceptanceOptions options;
    for (int i = 1; i < argc; ++i) {
        options.only.push_back(std::atoi(argv[i]));
    }
    try {
        const auto results = crsma::run_acceptance(options);
        std::cout << crsma::render_report(results);
        return crsma::all_passed(results) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << '\n';
        return 2;
    }
}
