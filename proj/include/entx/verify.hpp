#ifndef ENTX_VERIFY_HPP
#define ENTX_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "entx/csv.hpp"

namespace entx {

struct VerifyCheck {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    bool all_passed() const;
    CsvTable table() const; // columns suite, check, status, detail
};

// Runs the named invariant suite; name in {entropy, dumbbell, l1, tomei,
// systole, all}. Failures are reported, never thrown. Deterministic for a
// fixed seed.
VerifyReport run_verify_suite(const std::string& name, uint32_t seed = 1);

} // namespace entx

#endif
