#ifndef EQSIM_HARNESS_SELFTEST_HPP
#define EQSIM_HARNESS_SELFTEST_HPP

#include <string>
#include <vector>

namespace eqsim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Structural-invariant suite: decomposition round-trips and orthogonality,
// tracelessness, gap-checker verdicts on canonical spectra, operator-basis
// orthonormality and reconstruction, bath-term invisibility, constant-shift
// independence, rank/norm inequalities, coefficient identities.
std::vector<CheckResult> run_selftest();

}  // namespace eqsim

#endif
