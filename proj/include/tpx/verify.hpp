#ifndef TPX_VERIFY_HPP
#define TPX_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tpx::verify {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

using Suite = std::vector<Check>;

struct VerifyOptions {
    int n_max = 6;
    int k_max = 2;
    std::uint64_t seed = 12345;
    // Test mode: perturbs one computed value so the harness provably
    // catches and names a failing identity.
    bool inject_failure = false;
};

// Suites: mobius, counting, states, elements, ranks, lemmas, gaps, design.
Suite run_suite(const std::string& name, const VerifyOptions& opts);
std::vector<std::string> suite_names();

Suite mobius_suite(const VerifyOptions& opts);
Suite counting_suite(const VerifyOptions& opts);
Suite states_suite(const VerifyOptions& opts);
Suite elements_suite(const VerifyOptions& opts);
Suite ranks_suite(const VerifyOptions& opts);
Suite lemmas_suite(const VerifyOptions& opts);
Suite gaps_suite(const VerifyOptions& opts);
Suite design_suite(const VerifyOptions& opts);

} // namespace tpx::verify

#endif
