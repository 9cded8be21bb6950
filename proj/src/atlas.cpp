#include "germkit/atlas.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <mutex>
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
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

// Token-aware substitution of integer parameters into a template.
std::string substitute_ints(const std::string& text, const IntAssignment& env) {
    std::string out;
    size_t i = 0;
    auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ident_char = [&](char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); };
    while (i < text.size()) {
        if (ident_start(text[i])) {
            size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            std::string name = text.substr(i, j - i);
            auto it = env.find(name);
            if (it != env.end()) {
                long v = it->second;
                out += v < 0 ? "(" + std::to_string(v) + ")" : std::to_string(v);
            } else {
                out += name;
            }
            i = j;
        } else {
            out += text[i++];
        }
    }
    return out;
}

struct IntExprParser {
    const std::string& text;
    const IntAssignment& env;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw error("int expression error in '" + text + "': " + msg);
    }
    void skip() { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; }
    bool accept(char c) {
        skip();
        if (pos < text.size() && text[pos] == c) { ++pos; return true; }
        return false;
    }
    long expr() {
        long acc = term();
        while (true) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }
    long term() {
        long acc = atom();
        while (accept('*')) acc *= atom();
        return acc;
    }
    long atom() {
        skip();
        if (accept('(')) {
            long v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (accept('-')) return -atom();
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            long v = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                v = v * 10 + (text[pos++] - '0');
            return v;
        }
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            auto it = env.find(name);
            if (it == env.end()) fail("unknown parameter '" + name + "'");
            return it->second;
        }
        fail("unexpected character");
    }
};

}  // namespace

long eval_int_expr(const std::string& expr, const IntAssignment& env) {
    IntExprParser p{expr, env};
    long v = p.expr();
    p.skip();
    if (p.pos != expr.size()) p.fail("trailing input");
    return v;
}

bool eval_constraints(const std::vector<std::string>& chains, const IntAssignment& env) {
    for (const auto& chain : chains) {
        // chain: expr op expr op expr ... with ops <=, <, ==, !=, >=, >
        std::vector<std::string> parts;
        std::vector<std::string> ops;
        size_t i = 0;
        size_t start = 0;
        while (i < chain.size()) {
            char c = chain[i];
            if (c == '<' || c == '>' || c == '!' || c == '=') {
                parts.push_back(chain.substr(start, i - start));
                std::string op(1, c);
                if (i + 1 < chain.size() && chain[i + 1] == '=') { op += '='; ++i; }
                ops.push_back(op);
                start = i + 1;
            }
            ++i;
        }
        parts.push_back(chain.substr(start));
        if (parts.size() != ops.size() + 1) throw error("bad constraint '" + chain + "'");
        for (size_t k = 0; k < ops.size(); ++k) {
            long a = eval_int_expr(trim(parts[k]), env);
            long b = eval_int_expr(trim(parts[k + 1]), env);
            const std::string& op = ops[k];
            bool ok = op == "<=" ? a <= b
                    : op == "<"  ? a < b
                    : op == ">=" ? a >= b
                    : op == ">"  ? a > b
                    : op == "==" || op == "=" ? a == b
                    : op == "!=" ? a != b
                              : throw error("bad operator '" + op + "'");
            if (!ok) return false;
        }
    }
    return true;
}

std::vector<AtlasEntry> load_atlas(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open atlas data file: " + path);
    std::vector<AtlasEntry> entries;
    AtlasEntry cur;
    bool any = false;
    int lineno = 0;
    auto flush = [&]() {
        if (!any) return;
        if (cur.table.empty() || cur.name.empty() || cur.map_texts.empty())
            throw error("incomplete atlas record ending at line " + std::to_string(lineno));
        if (cur.unfold_r && !cur.unfold_sigma.empty()) {
            IntAssignment first;
            for (const auto& pname : cur.int_params) first[pname] = 0;
            // structural check against the stored sigma list (r may depend on
            // integer parameters only for rows built programmatically)
            if (cur.int_params.empty() &&
                eval_int_expr(*cur.unfold_r, {}) != static_cast<long>(cur.unfold_sigma.size()))
                throw error("atlas row " + cur.name + ": unfold_r does not match the sigma list");
        }
        entries.push_back(cur);
        cur = AtlasEntry{};
        any = false;
    };
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) { flush(); continue; }
        if (t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw error("atlas line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        any = true;
        if (key == "table") cur.table = value;
        else if (key == "name") cur.name = value;
        else if (key == "boardman") cur.boardman = value;
        else if (key == "vars") cur.vars = split_ws(value);
        else if (key == "map") cur.map_texts = split(value, ';');
        else if (key == "intparams") cur.int_params = split_ws(value);
        else if (key == "constraints") cur.constraints = split(value, ',');
        else if (key == "modulus") cur.modulus = value;
        else if (key == "exclude_factors") cur.exclude_factors = split(value, ';');
        else if (key == "expect_kcod") cur.expect_kcod = value;
        else if (key == "expect_corank") cur.expect_corank = value;
        else if (key == "expect_delta") cur.expect_delta = value;
        else if (key == "unfold_r") cur.unfold_r = value;
        else if (key == "unfold_sigma_m") cur.unfold_sigma_m = split(value, ';');
        else if (key == "weights") {
            cur.weights_raw = split_ws(value);
        } else if (key == "degrees") {
            cur.degrees_raw = split_ws(value);
        } else if (key == "unfold_sigma") {
            for (const auto& item : split(value, ';')) {
                auto words = split_ws(item);
                if (words.size() != 2 || words[1].size() < 2 || words[1][0] != 'e')
                    throw error("bad unfold_sigma item '" + item + "'");
                cur.unfold_sigma.emplace_back(words[0], std::stoi(words[1].substr(1)));
            }
        } else if (key == "pair") {
            auto words = split_ws(value);
            if (words.size() != 2) throw error("bad pair '" + value + "'");
            cur.pair_n = std::stoi(words[0]);
            cur.pair_p = std::stoi(words[1]);
        } else if (key == "note") {
            cur.note = value;
        } else {
            throw error("unknown atlas key '" + key + "' at line " + std::to_string(lineno));
        }
    }
    flush();
    if (entries.empty()) throw error("atlas data file is empty: " + path);
    return entries;
}

std::string default_atlas_path() {
    if (const char* env = std::getenv("GERMKIT_ATLAS")) return env;
#ifdef GERMKIT_ATLAS_DEFAULT
    return GERMKIT_ATLAS_DEFAULT;
#else
    return "data/atlas.dat";
#endif
}

const std::vector<AtlasEntry>& builtin_atlas() {
    static std::vector<AtlasEntry> atlas = load_atlas(default_atlas_path());
    return atlas;
}

std::vector<AtlasEntry> table_entries(const std::string& table_id) {
    static const std::vector<std::string> known = {"StableNP8", "BND99", "BND_6t2",
                                                   "BND_ngtp", "Bimodal107"};
    if (std::find(known.begin(), known.end(), table_id) == known.end())
        throw error("unknown table '" + table_id + "'");
    std::vector<AtlasEntry> out;
    for (const auto& e : builtin_atlas())
        if (e.table == table_id) out.push_back(e);
    return out;
}

std::vector<IntAssignment> valid_assignments(const AtlasEntry& entry, int limit) {
    std::vector<IntAssignment> out;
    if (entry.int_params.empty()) {
        out.push_back({});
        return out;
    }
    const long lo = 0, hi = 12;
    std::vector<long> vals(entry.int_params.size(), lo);
    bool done = false;
    while (!done) {
        IntAssignment env;
        for (size_t i = 0; i < vals.size(); ++i) env[entry.int_params[i]] = vals[i];
        if (eval_constraints(entry.constraints, env)) {
            out.push_back(env);
            if (static_cast<int>(out.size()) >= limit) return out;
        }
        // odometer increment, last parameter fastest
        size_t i = vals.size();
        while (true) {
            if (i == 0) { done = true; break; }
            --i;
            if (vals[i] < hi) { ++vals[i]; break; }
            vals[i] = lo;
        }
    }
    return out;
}

std::vector<IntAssignment> sample_assignments(const AtlasEntry& entry) {
    auto all = valid_assignments(entry);
    if (all.size() <= 2) return all;
    return {all.front(), all.back()};
}

namespace {

ZPoly parse_modulus_poly(const std::string& text, const std::string& modulus) {
    RingPtr r = make_ring({}, modulus);
    Polynomial p = parse_polynomial(text, r);
    Scalar c = p.constant_term();
    if (c.den_poly().degree() > 0) throw error("modulus polynomial with nontrivial denominator");
    return c.num_poly();
}

}  // namespace

InstantiatedEntry instantiate(const AtlasEntry& entry, const IntAssignment& assignment,
                              std::optional<Rat> modulus_value) {
    for (const auto& pname : entry.int_params)
        if (!assignment.count(pname))
            throw error("missing integer parameter '" + pname + "'");
    if (!entry.constraints.empty() && !eval_constraints(entry.constraints, assignment))
        throw error("assignment violates the entry constraints");
    InstantiatedEntry inst;
    inst.assignment = assignment;
    inst.modulus_value = modulus_value;
    std::optional<ZPoly> excluded;
    if (entry.modulus) {
        ZPoly prod(Int(1));
        for (const auto& ftext : entry.exclude_factors)
            prod = prod * parse_modulus_poly(substitute_ints(ftext, assignment), *entry.modulus);
        if (!entry.exclude_factors.empty()) excluded = prod;
        if (modulus_value) {
            for (const auto& ftext : entry.exclude_factors) {
                ZPoly fac = parse_modulus_poly(substitute_ints(ftext, assignment), *entry.modulus);
                if (fac.eval(*modulus_value) == 0)
                    throw error("modulus value is excluded: factor " + ftext + " vanishes");
            }
        }
    }
    RingPtr ring = make_ring(entry.vars, entry.modulus, excluded);
    MapGerm g;
    g.ring = ring;
    for (const auto& text : entry.map_texts)
        g.components.push_back(parse_polynomial(substitute_ints(text, assignment), ring));
    g.validate();
    if (modulus_value) g = g.specialize_parameter(*modulus_value);
    inst.germ = std::move(g);
    return inst;
}

bool VerificationReport::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const EntryCheck& c) {
        return c.status == CheckStatus::Pass;
    });
}

bool VerificationReport::inconclusive() const {
    return std::any_of(checks.begin(), checks.end(), [](const EntryCheck& c) {
        return c.status == CheckStatus::Inconclusive;
    });
}

VerificationReport verify_entry(const AtlasEntry& entry, const IntAssignment& assignment,
                                std::optional<Rat> modulus_value, int cutoff) {
    VerificationReport rep;
    rep.table = entry.table;
    rep.name = entry.name;
    rep.assignment = assignment;
    rep.modulus_value = modulus_value;
    InstantiatedEntry inst = instantiate(entry, assignment, modulus_value);

    EntryCheck kc;
    kc.invariant = "K_cod";
    kc.expected = eval_int_expr(entry.expect_kcod, assignment);
    try {
        CodimResult r = stabilized_codim(inst.germ, Group::K, /*extended=*/false, cutoff);
        kc.computed = r.value;
        kc.status = (r.value == kc.expected) ? CheckStatus::Pass : CheckStatus::Fail;
    } catch (const NotFinitelyDetermined&) {
        kc.status = CheckStatus::Inconclusive;
    }
    rep.checks.push_back(kc);

    EntryCheck cr;
    cr.invariant = "corank";
    cr.expected = eval_int_expr(entry.expect_corank, assignment);
    cr.computed = corank(inst.germ);
    cr.status = (*cr.computed == cr.expected) ? CheckStatus::Pass : CheckStatus::Fail;
    rep.checks.push_back(cr);

    if (entry.expect_delta) {
        EntryCheck dc;
        dc.invariant = "delta";
        dc.expected = eval_int_expr(*entry.expect_delta, assignment);
        DeltaResult d = delta(inst.germ, cutoff);
        if (!d.finite) {
            dc.status = CheckStatus::Inconclusive;
        } else {
            dc.computed = d.value;
            dc.status = (d.value == dc.expected) ? CheckStatus::Pass : CheckStatus::Fail;
        }
        rep.checks.push_back(dc);
    }
    return rep;
}

namespace {

struct Invariants {
    int corank = 0;
    long kcod = 0;
    bool delta_finite = false;
    long delta_value = 0;
    std::vector<long> hilbert;
};

std::optional<Invariants> compute_invariants(const MapGerm& f, int cutoff) {
    Invariants inv;
    inv.corank = corank(f);
    try {
        inv.kcod = stabilized_codim(f, Group::K, false, cutoff).value;
    } catch (const NotFinitelyDetermined&) {
        return std::nullopt;
    }
    MapGerm core = rank_reduce(f, cutoff + 1);
    DeltaResult d = delta(f, cutoff);
    inv.delta_finite = d.finite;
    if (d.finite) {
        inv.delta_value = d.value;
        inv.hilbert = local_algebra(core, d.certificate_k).dims_by_degree;
    }
    return inv;
}

std::optional<Rat> good_modulus_sample(const AtlasEntry& entry, const IntAssignment& asg) {
    if (!entry.modulus) return std::nullopt;
    for (long c = 3; c < 20; ++c) {
        bool ok = true;
        for (const auto& ftext : entry.exclude_factors) {
            ZPoly fac = parse_modulus_poly(substitute_ints(ftext, asg), *entry.modulus);
            if (fac.eval(Rat(c)) == 0) { ok = false; break; }
        }
        if (ok) return Rat(c);
    }
    throw error("no rational modulus sample found off the excluded locus");
}

}  // namespace

ClassifyResult classify(const MapGerm& f, int cutoff) {
    ClassifyResult out;
    auto inv = compute_invariants(f, cutoff);
    if (!inv) {
        out.fst = false;
        return out;
    }
    static std::map<std::string, std::optional<Invariants>> cache;
    static std::mutex cache_mutex;
    for (const auto& entry : builtin_atlas()) {
        for (const auto& asg : valid_assignments(entry, 48)) {
            std::string key = entry.table + "|" + entry.name;
            for (const auto& [k, v] : asg) key += "|" + k + "=" + std::to_string(v);
            std::optional<Invariants> einv;
            {
                std::lock_guard<std::mutex> lock(cache_mutex);
                auto it = cache.find(key);
                if (it != cache.end()) einv = it->second;
                else {
                    InstantiatedEntry inst = instantiate(entry, asg, good_modulus_sample(entry, asg));
                    einv = compute_invariants(inst.germ, cutoff);
                    cache[key] = einv;
                }
            }
            if (!einv) continue;
            if (einv->corank != inv->corank || einv->kcod != inv->kcod) continue;
            if (einv->delta_finite && inv->delta_finite &&
                (einv->delta_value != inv->delta_value || einv->hilbert != inv->hilbert))
                continue;
            if (einv->delta_finite != inv->delta_finite) continue;
            out.candidates.push_back({entry.table, entry.name, asg});
        }
    }
    return out;
}

namespace {

MapGerm assemble_unfolding(const MapGerm& core, const std::vector<VectorFieldJet>& sigmas,
                           std::vector<std::string>* out_names) {
    const int n = core.n();
    const int p = core.p();
    const int r = static_cast<int>(sigmas.size());
    std::vector<std::string> vars = core.ring->variables;
    std::vector<std::string> names;
    for (int i = 1; i <= r; ++i) {
        std::string cand = "u" + std::to_string(i);
        while (std::find(vars.begin(), vars.end(), cand) != vars.end() ||
               (core.ring->parameter && *core.ring->parameter == cand))
            cand += "_";
        names.push_back(cand);
        vars.push_back(cand);
    }
    RingPtr big = make_ring(vars, core.ring->parameter, core.ring->excluded_locus);
    std::vector<int> var_map;
    for (int i = 0; i < n; ++i) var_map.push_back(i);
    auto lift = [&](const Polynomial& poly) {
        Polynomial out(big);
        for (const auto& [m, c] : poly.terms()) {
            std::vector<int> exps(static_cast<size_t>(big->nvars()), 0);
            for (int i = 0; i < m.nvars(); ++i) exps[static_cast<size_t>(i)] = m.exp(i);
            out.add_term(Monomial(std::move(exps)), c);
        }
        return out;
    };
    MapGerm F;
    F.ring = big;
    for (int i = 0; i < p; ++i) {
        Polynomial comp = lift(core.components[static_cast<size_t>(i)]);
        for (int j = 0; j < r; ++j) {
            const Polynomial& sig = sigmas[static_cast<size_t>(j)].components[static_cast<size_t>(i)];
            if (!sig.is_zero()) comp = comp + lift(sig) * Polynomial::variable(big, n + j);
        }
        F.components.push_back(std::move(comp));
    }
    for (int j = 0; j < r; ++j) F.components.push_back(Polynomial::variable(big, n + j));
    F.validate();
    if (out_names) *out_names = names;
    return F;
}

}  // namespace

UnimodularGerm unimodular_normal_form(int n, int p, std::optional<Rat> modulus_value,
                                      bool check_postconditions) {
    // (6t+2, 7t+1) beyond t = 5: unfolding data is tabulated for t = 5 only.
    if (n > 32 && n % 6 == 2 && p == (7 * (n - 2)) / 6 + 1)
        throw error("unfolding data for (6t+2,7t+1) is available for t = 5 only");
    const AtlasEntry* found = nullptr;
    int suspension = 0;
    for (const auto& e : builtin_atlas()) {
        if (e.table == "Bimodal107" || e.pair_n == 0) continue;
        if (e.pair_n == n && e.pair_p == p) { found = &e; break; }
    }
    if (!found && p == 7 && n > 10) {
        for (const auto& e : builtin_atlas())
            if (e.table == "BND_ngtp" && e.pair_n == 10 && e.pair_p == 7) {
                found = &e;
                suspension = n - 10;
                break;
            }
    }
    if (!found) throw error("no unimodular normal form for pair (" + std::to_string(n) + "," +
                            std::to_string(p) + ")");
    const AtlasEntry& entry = *found;
    IntAssignment asg;
    if (!entry.int_params.empty()) asg = valid_assignments(entry).front();
    InstantiatedEntry inst = instantiate(entry, asg, modulus_value);
    MapGerm core = inst.germ;
    if (suspension > 0) {
        // quadratic suspension in fresh w variables
        std::vector<std::string> vars = core.ring->variables;
        int base = static_cast<int>(vars.size());
        for (int i = 1; i <= suspension; ++i) {
            std::string cand = "w" + std::to_string(i);
            while (std::find(vars.begin(), vars.end(), cand) != vars.end()) cand += "_";
            vars.push_back(cand);
        }
        RingPtr big = make_ring(vars, core.ring->parameter, core.ring->excluded_locus);
        MapGerm ext;
        ext.ring = big;
        for (const auto& comp : core.components) {
            Polynomial lifted(big);
            for (const auto& [m, c] : comp.terms()) {
                std::vector<int> exps(static_cast<size_t>(big->nvars()), 0);
                for (int i = 0; i < m.nvars(); ++i) exps[static_cast<size_t>(i)] = m.exp(i);
                lifted.add_term(Monomial(std::move(exps)), c);
            }
            ext.components.push_back(std::move(lifted));
        }
        for (int i = 0; i < suspension; ++i) {
            Polynomial w = Polynomial::variable(big, base + i);
            ext.components[0] = ext.components[0] + w * w;
        }
        core = std::move(ext);
    }
    const int t = core.p();
    UnimodularGerm out;
    out.label = entry.table + "/" + entry.name;
    out.core = core;
    for (const auto& [mono_text, comp] : entry.unfold_sigma) {
        if (comp < 1 || comp > t) throw error("unfold_sigma component out of range");
        VectorFieldJet v = VectorFieldJet::zero(core.ring, t);
        v.components[static_cast<size_t>(comp - 1)] =
            parse_polynomial(substitute_ints(mono_text, asg), core.ring);
        out.sigmas.push_back(std::move(v));
    }
    if (entry.unfold_sigma_m.empty()) throw error("entry lacks a modulus direction");
    out.sigma_m = VectorFieldJet::zero(core.ring, t);
    for (int i = 0; i < t && i < static_cast<int>(entry.unfold_sigma_m.size()); ++i)
        out.sigma_m.components[static_cast<size_t>(i)] =
            parse_polynomial(substitute_ints(entry.unfold_sigma_m[static_cast<size_t>(i)], asg),
                             core.ring);
    out.full = assemble_unfolding(core, out.sigmas, nullptr);
    if (out.full.n() != n || out.full.p() != p)
        throw error("internal invariant violation: unfolding dimensions do not match the pair");
    if (check_postconditions) {
        long expect_kcod = eval_int_expr(entry.expect_kcod, asg) + suspension;
        long expect_corank = eval_int_expr(entry.expect_corank, asg) + suspension;
        CodimResult kc = stabilized_codim(core, Group::K, false);
        if (kc.value != expect_kcod || kc.value != n + 1)
            throw error("internal invariant violation: core K-cod != n + 1");
        if (corank(core) != expect_corank)
            throw error("internal invariant violation: core corank mismatch");
    }
    return out;
}

}  // namespace germkit
