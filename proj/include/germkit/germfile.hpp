#pragma once

// Germ file parsing: key = value lines (vars, params, exclude, map, and an
// optional unfolding block) with line-numbered diagnostics.

#include "germkit/stability.hpp"

namespace germkit {

struct GermFile {
    MapGerm germ;
    std::vector<VectorFieldJet> sigmas;        // optional unfolding block
    std::optional<VectorFieldJet> sigma_m;
    std::string path;
};

GermFile parse_germ_file(const std::string& path);
GermFile parse_germ_text(const std::string& text, const std::string& origin);

// Round-trip support for --echo.
std::string germ_file_echo(const GermFile& gf);

}  // namespace germkit
