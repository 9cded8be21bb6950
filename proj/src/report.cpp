#include "germkit/report.hpp"

#include <functional>
#include <sstream>

namespace germkit {

Json report_header(const std::string& command, const std::vector<std::string>& inputs) {
    Json j;
    j["tool"] = "germkit";
    j["version"] = "0.1.0";
    j["command"] = command;
    j["inputs"] = inputs;
    j["results"] = Json::object();
    return j;
}

void report_finish(Json& report, double elapsed_ms) { report["timing_ms"] = elapsed_ms; }

Json certificate_to_json(const DeterminacyCertificate& c) {
    Json j;
    j["group"] = group_name(c.group);
    j["k_base"] = c.k_base;
    j["order_bound"] = c.order_bound;
    j["jet_order_used"] = c.jet_order_used;
    return j;
}

Json codim_to_json(const CodimResult& r, const std::string& param_name,
                   bool /*verbose_certificates*/) {
    Json j;
    j["value"] = r.value;
    j["extended"] = r.extended;
    j["jet_order_used"] = r.jet_order_used;
    j["certificate"] = certificate_to_json(r.certificate);
    Json facs = Json::array();
    for (const auto& f : r.exceptional_pivots) facs.push_back(f.to_string(param_name));
    j["exceptional_pivot_factors"] = facs;
    return j;
}

std::string render_text(const Json& report) {
    std::ostringstream os;
    os << report["command"].get<std::string>() << ":\n";
    std::function<void(const Json&, int)> walk = [&](const Json& node, int depth) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            for (int i = 0; i < depth; ++i) os << "  ";
            if (it.value().is_object()) {
                os << it.key() << ":\n";
                walk(it.value(), depth + 1);
            } else {
                os << it.key() << " = " << it.value().dump() << "\n";
            }
        }
    };
    if (report.contains("results")) walk(report["results"], 1);
    return os.str();
}

}  // namespace germkit
