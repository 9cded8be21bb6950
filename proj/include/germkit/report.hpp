#pragma once

// Deterministic report assembly shared by the CLI subcommands.

#include "germkit/determinacy.hpp"

#include <json.hpp>

namespace germkit {

using Json = nlohmann::ordered_json;

// Fixed header fields; the timing field is the only nondeterministic one and
// is excluded from golden comparisons.
Json report_header(const std::string& command, const std::vector<std::string>& inputs);
void report_finish(Json& report, double elapsed_ms);

Json codim_to_json(const CodimResult& r, const std::string& param_name,
                   bool verbose_certificates);
Json certificate_to_json(const DeterminacyCertificate& c);

std::string render_text(const Json& report);

}  // namespace germkit
