// Verification reports and their JSON form.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cmspec {

struct CoeffDetail {
    std::string coefficient_multiindex;
    double max_ratio = 0.0;
    int point_index = -1;
    int context_index = -1;
};

struct VerificationReport {
    std::string check;
    std::string system;
    std::string status = "pass"; // pass | fail | inconclusive
    double max_abs_residual = 0.0;
    double witness_scale = 0.0;
    double max_residual_ratio = 0.0;
    int trials = 0;
    long precision_bits = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> contexts; // (g2, g3) canonical text
    long elapsed_ms = 0;
    std::vector<CoeffDetail> details;
    std::vector<std::string> notes;

    bool passed() const { return status == "pass"; }
};

// JSON text per the published schema (docs/report.schema.json). When
// `stable_elapsed` is set, elapsed_ms is reported as 0 so that reports are
// byte-identical across runs with identical configuration.
std::string report_to_json(const VerificationReport& r, bool stable_elapsed = false);
std::string reports_to_json(const std::string& config_echo_json,
                            const std::vector<VerificationReport>& reports,
                            bool stable_elapsed = false);

} // namespace cmspec
