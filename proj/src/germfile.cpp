#include "germkit/germfile.hpp"

#include <fstream>
#include <sstream>

namespace germkit {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(trim(cur)); cur.clear(); }
        else cur += c;
    }
    out.push_back(trim(cur));
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw error(origin + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

GermFile parse_germ_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::string> vars;
    std::optional<std::string> param;
    std::string exclude_text;
    int exclude_line = 0;
    std::vector<std::string> map_texts;
    int map_line = 0;
    std::vector<std::pair<std::string, int>> sigma_items;
    int sigma_line = 0;
    std::vector<std::string> sigma_m_texts;
    int sigma_m_line = 0;

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key == "vars") {
            std::istringstream vs(value);
            std::string w;
            while (vs >> w) vars.push_back(w);
        } else if (key == "params") {
            std::istringstream vs(value);
            std::string w;
            while (vs >> w) {
                if (param) fail(origin, lineno, "at most one formal parameter is supported");
                param = w;
            }
        } else if (key == "exclude") {
            exclude_text = value;
            exclude_line = lineno;
        } else if (key == "map") {
            map_texts = split(value, ';');
            map_line = lineno;
        } else if (key == "sigma") {
            sigma_line = lineno;
            for (const auto& item : split(value, ';')) {
                std::istringstream is(item);
                std::string mono, comp;
                is >> mono >> comp;
                if (mono.empty() || comp.size() < 2 || comp[0] != 'e')
                    fail(origin, lineno, "bad sigma item '" + item + "' (want '<monomial> e<j>')");
                sigma_items.emplace_back(mono, std::stoi(comp.substr(1)));
            }
        } else if (key == "sigma_m") {
            sigma_m_texts = split(value, ';');
            sigma_m_line = lineno;
        } else {
            fail(origin, lineno, "unknown key '" + key + "'");
        }
    }
    if (vars.empty()) fail(origin, lineno, "missing 'vars'");
    if (map_texts.empty()) fail(origin, map_line ? map_line : lineno, "missing or empty 'map'");

    std::optional<ZPoly> excluded;
    if (!exclude_text.empty()) {
        if (!param) fail(origin, exclude_line, "'exclude' requires 'params'");
        RingPtr pring = make_ring({}, param);
        Polynomial p;
        try {
            p = parse_polynomial(exclude_text, pring);
        } catch (const error& e) {
            fail(origin, exclude_line, e.what());
        }
        Scalar c = p.constant_term();
        if (c.den_poly().degree() > 0)
            fail(origin, exclude_line, "excluded locus must be a polynomial");
        excluded = c.num_poly();
        if (excluded->is_zero()) fail(origin, exclude_line, "excluded locus must be nonzero");
    }

    GermFile gf;
    gf.path = origin;
    RingPtr ring;
    try {
        ring = make_ring(vars, param, excluded);
    } catch (const error& e) {
        fail(origin, 1, e.what());
    }
    std::vector<Polynomial> comps;
    for (const auto& text : map_texts) {
        try {
            comps.push_back(parse_polynomial(text, ring));
        } catch (const error& e) {
            fail(origin, map_line, std::string(e.what()) + " in component '" + text + "'");
        }
    }
    gf.germ.ring = ring;
    gf.germ.components = std::move(comps);
    try {
        gf.germ.validate();
    } catch (const error& e) {
        fail(origin, map_line, e.what());
    }

    const int p = gf.germ.p();
    for (const auto& [mono, comp] : sigma_items) {
        if (comp < 1 || comp > p) fail(origin, sigma_line, "sigma component index out of range");
        VectorFieldJet v = VectorFieldJet::zero(ring, p);
        try {
            v.components[static_cast<size_t>(comp - 1)] = parse_polynomial(mono, ring);
        } catch (const error& e) {
            fail(origin, sigma_line, e.what());
        }
        gf.sigmas.push_back(std::move(v));
    }
    if (!sigma_m_texts.empty()) {
        if (static_cast<int>(sigma_m_texts.size()) != p)
            fail(origin, sigma_m_line, "sigma_m needs one component per map component");
        VectorFieldJet v = VectorFieldJet::zero(ring, p);
        for (int i = 0; i < p; ++i) {
            try {
                v.components[static_cast<size_t>(i)] =
                    parse_polynomial(sigma_m_texts[static_cast<size_t>(i)], ring);
            } catch (const error& e) {
                fail(origin, sigma_m_line, e.what());
            }
        }
        gf.sigma_m = std::move(v);
    }
    return gf;
}

GermFile parse_germ_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open germ file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_germ_text(buf.str(), path);
}

std::string germ_file_echo(const GermFile& gf) {
    std::ostringstream os;
    os << "vars =";
    for (const auto& v : gf.germ.ring->variables) os << " " << v;
    os << "\n";
    if (gf.germ.ring->parameter) {
        os << "params = " << *gf.germ.ring->parameter << "\n";
        if (gf.germ.ring->excluded_locus)
            os << "exclude = " << gf.germ.ring->excluded_locus->to_string(*gf.germ.ring->parameter)
               << "\n";
    }
    os << "map = ";
    for (size_t i = 0; i < gf.germ.components.size(); ++i) {
        if (i) os << " ; ";
        os << gf.germ.components[i].to_string();
    }
    os << "\n";
    return os.str();
}

}  // namespace germkit
