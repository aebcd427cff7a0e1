#include "cmspec/report.hpp"

#include <json.hpp>

namespace cmspec {

namespace {

nlohmann::ordered_json report_json(const VerificationReport& r, bool stable_elapsed) {
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["system"] = r.system;
    j["status"] = r.status;
    j["max_residual_ratio"] = r.max_residual_ratio;
    j["max_abs_residual"] = r.max_abs_residual;
    j["witness_scale"] = r.witness_scale;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["precision_bits"] = r.precision_bits;
    nlohmann::ordered_json ctxs = nlohmann::ordered_json::array();
    for (const auto& [g2, g3] : r.contexts) {
        nlohmann::ordered_json c;
        c["g2"] = g2;
        c["g3"] = g3;
        ctxs.push_back(c);
    }
    j["contexts"] = ctxs;
    j["elapsed_ms"] = stable_elapsed ? 0 : r.elapsed_ms;
    nlohmann::ordered_json det = nlohmann::ordered_json::array();
    for (const auto& d : r.details) {
        nlohmann::ordered_json e;
        e["coefficient_multiindex"] = d.coefficient_multiindex;
        e["max_ratio"] = d.max_ratio;
        e["point_index"] = d.point_index;
        e["context_index"] = d.context_index;
        det.push_back(e);
    }
    j["details"] = det;
    j["notes"] = r.notes;
    return j;
}

} // namespace

std::string report_to_json(const VerificationReport& r, bool stable_elapsed) {
    return report_json(r, stable_elapsed).dump(2) + "\n";
}

std::string reports_to_json(const std::string& config_echo_json,
                            const std::vector<VerificationReport>& reports, bool stable_elapsed) {
    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json::parse(config_echo_json);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_json(r, stable_elapsed));
    j["reports"] = arr;
    return j.dump(2) + "\n";
}

} // namespace cmspec
