#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fadingrate/montecarlo.hpp"

namespace fadingrate {

enum class Suite { Spectra, Szego, Concavity, All };

std::string_view suite_name(Suite suite);
/// Throws std::invalid_argument for an unknown name.
Suite suite_from_name(std::string_view name);

/// Defaults reproduce the documented suites:
///  spectra   - rectangular f_d = 0.05, L = 8, 6 dB, N = 2048, 200 trials;
///              error variance within 3 %, in-band error PSD within 5 %,
///              plus analytic spectrum dominance and orthogonality checks.
///  szego     - raised cosine f_d = 0.1, beta = 0.5, 6 dB, L = 4,
///              N in {128, 256, 512, 1024}.
///  concavity - 1000 random probes at N = 64 and 500 two-point CM batches
///              at N = 32, both on the raised cosine model above.
struct VerifyOptions {
    Suite suite = Suite::All;
    std::uint64_t seed = 1;
    std::optional<int> trials;                 // Monte Carlo trials (spectra)
    std::optional<double> variance_tolerance;  // relative, spectra
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> lines;  // human-readable body

    bool all_passed() const;
};

VerifyReport run_verify(const VerifyOptions& options);

/// Human-readable body followed by one `check_name,pass|fail,margin` line
/// per check.
void write_report(std::ostream& os, const VerifyReport& report);

}  // namespace fadingrate
