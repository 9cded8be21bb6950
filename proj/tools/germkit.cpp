// germkit command-line front end.
//
// Exit codes: 0 success, 1 computation undecided or inconclusive, 2 usage
// error, 3 internal invariant violation.

#include <CLI11.hpp>

#include "germkit/atlas.hpp"
#include "germkit/germfile.hpp"
#include "germkit/nicedim.hpp"
#include "germkit/report.hpp"
#include "germkit/triviality.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace germkit;

constexpr int kExitOk = 0;
constexpr int kExitUndecided = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct CommonOpts {
    int jet_cutoff = 12;
    std::string at;    // "name=value" specialization
    bool json = false;
    bool verbose_certificates = false;
    bool echo = false;  // print the canonical germ file and exit
};

std::optional<Rat> parse_at(const std::string& at, const MapGerm& germ, MapGerm& out) {
    out = germ;
    if (at.empty()) return std::nullopt;
    size_t eq = at.find('=');
    if (eq == std::string::npos) throw error("--at expects name=value");
    std::string name = at.substr(0, eq);
    std::string val = at.substr(eq + 1);
    if (!germ.ring->parameter || *germ.ring->parameter != name)
        throw error("--at parameter '" + name + "' is not the ring parameter");
    size_t slash = val.find('/');
    Rat q = slash == std::string::npos
                ? Rat(Int(val))
                : Rat(Int(val.substr(0, slash)), Int(val.substr(slash + 1)));
    q.canonicalize();
    out = germ.specialize_parameter(q);
    return q;
}

int default_cutoff() {
    if (const char* env = std::getenv("GERMKIT_JET_CUTOFF")) return std::atoi(env);
    return 12;
}

void emit(const Json& report, const CommonOpts& opts) {
    if (opts.json) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << render_text(report);
    }
}

double ms_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string param_name(const MapGerm& g) { return g.ring->parameter.value_or("@"); }

int cmd_analyze(const std::string& path, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    if (opts.echo) {
        std::cout << germ_file_echo(gf);
        return kExitOk;
    }
    MapGerm f;
    parse_at(opts.at, gf.germ, f);
    Json rep = report_header("analyze", {path});
    Json& res = rep["results"];
    res["n"] = f.n();
    res["p"] = f.p();
    res["corank"] = corank(f);
    bool undecided = false;
    try {
        CodimResult kc = stabilized_codim(f, Group::K, false, opts.jet_cutoff);
        res["K_cod"] = codim_to_json(kc, param_name(f), opts.verbose_certificates);
        CodimResult ke = stabilized_codim(f, Group::K, true, opts.jet_cutoff);
        res["Ke_cod"] = ke.value;
        res["fst"] = true;
    } catch (const NotFinitelyDetermined& e) {
        res["K_cod"] = "undecided";
        res["fst"] = false;
        undecided = true;
    }
    DeltaResult d = delta(f, opts.jet_cutoff);
    if (d.finite) {
        res["delta"] = d.value;
        MapGerm core = rank_reduce(f, opts.jet_cutoff + 1);
        HilbertData h = local_algebra(core, d.certificate_k);
        res["hilbert"] = h.dims_by_degree;
    } else {
        res["delta"] = "not finite at cutoff";
    }
    if (f.n() == 2 && f.p() == 2)
        res["plane_type"] = plane_germ_type_name(plane_germ_type(f));
    report_finish(rep, ms_since(start));
    emit(rep, opts);
    return undecided ? kExitUndecided : kExitOk;
}

int cmd_codim(const std::string& path, const std::string& group, bool extended,
              const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    MapGerm f;
    parse_at(opts.at, gf.germ, f);
    auto g = parse_group(group);
    if (!g) throw error("unknown group '" + group + "' (want R, C, K, L or A)");
    Json rep = report_header("codim", {path});
    Json& res = rep["results"];
    res["group"] = group;
    res["extended"] = extended;
    try {
        CodimResult r = stabilized_codim(f, *g, extended, opts.jet_cutoff);
        res["codim"] = codim_to_json(r, param_name(f), opts.verbose_certificates);
        report_finish(rep, ms_since(start));
        emit(rep, opts);
        return kExitOk;
    } catch (const NotFinitelyDetermined& e) {
        res["codim"] = "undecided";
        res["cutoff"] = e.cutoff;
        report_finish(rep, ms_since(start));
        emit(rep, opts);
        return kExitUndecided;
    }
}

int cmd_determinacy(const std::string& path, const std::string& group, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    MapGerm f;
    parse_at(opts.at, gf.germ, f);
    auto g = parse_group(group);
    if (!g) throw error("unknown group '" + group + "'");
    Json rep = report_header("determinacy", {path});
    Json& res = rep["results"];
    DeterminacyOutcome out = determinacy_bound(f, *g, opts.jet_cutoff);
    if (out.decided()) {
        res["certificate"] = certificate_to_json(*out.certificate);
        res["determined_order"] = out.certificate->order_bound;
    } else {
        res["certificate"] = "undecided";
        res["cutoff"] = out.cutoff;
    }
    report_finish(rep, ms_since(start));
    emit(rep, opts);
    return out.decided() ? kExitOk : kExitUndecided;
}

int cmd_stability(const std::string& path, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    MapGerm f;
    parse_at(opts.at, gf.germ, f);
    Json rep = report_header("stability", {path});
    Json& res = rep["results"];
    StabilityReport sr = infinitesimally_stable(f);
    res["stable"] = sr.stable;
    res["jet_order_used"] = sr.jet_order_used;
    if (sr.witness) res["witness"] = sr.witness->to_string();
    report_finish(rep, ms_since(start));
    emit(rep, opts);
    return kExitOk;
}

int cmd_unfold(const std::string& path, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    MapGerm f;
    parse_at(opts.at, gf.germ, f);
    Json rep = report_header("unfold", {path});
    Json& res = rep["results"];
    try {
        Unfolding u = stable_unfolding(f, opts.jet_cutoff);
        res["r"] = u.sigmas.size();
        Json sig = Json::array();
        for (const auto& s : u.sigmas) sig.push_back(s.to_string());
        res["sigmas"] = sig;
        Json comps = Json::array();
        for (const auto& c : u.germ.components) comps.push_back(c.to_string());
        res["unfolding"] = comps;
        res["vars"] = u.germ.ring->variables;
        report_finish(rep, ms_since(start));
        emit(rep, opts);
        return kExitOk;
    } catch (const NotFstError&) {
        res["error"] = "germ is not certified of finite singularity type at the cutoff";
        report_finish(rep, ms_since(start));
        emit(rep, opts);
        return kExitUndecided;
    }
}

int cmd_classify(const std::string& path, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    MapGerm f;
    parse_at(opts.at, gf.germ, f);
    Json rep = report_header("classify", {path});
    Json& res = rep["results"];
    ClassifyResult cr = classify(f, opts.jet_cutoff);
    res["fst"] = cr.fst;
    Json cands = Json::array();
    for (const auto& c : cr.candidates) {
        Json j;
        j["table"] = c.table;
        j["name"] = c.name;
        for (const auto& [k, v] : c.assignment) j["params"][k] = v;
        cands.push_back(j);
    }
    res["candidates"] = cands;
    report_finish(rep, ms_since(start));
    emit(rep, opts);
    return cr.fst ? kExitOk : kExitUndecided;
}

int cmd_nicedim(int n, int p, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    Json rep = report_header("nicedim", {std::to_string(n), std::to_string(p)});
    Json& res = rep["results"];
    PairClass c = classify_pair(n, p);
    res["class"] = pair_class_name(c.kind);
    if (c.sigma_value) res["sigma"] = *c.sigma_value;
    else res["sigma"] = "infinite";
    res["exceptional"] = c.exceptional;
    res["extra_nice_boundary"] = extra_nice_boundary(n, p);
    report_finish(rep, ms_since(start));
    if (opts.json) {
        std::cout << rep.dump(2) << "\n";
    } else {
        std::cout << pair_class_name(c.kind) << ", sigma="
                  << (c.sigma_value ? std::to_string(*c.sigma_value) : std::string("infinite"));
        if (c.exceptional) std::cout << " (exceptional pair)";
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_atlas_verify(const std::string& table, int jobs, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    std::vector<AtlasEntry> entries;
    if (table.empty()) {
        entries = builtin_atlas();
    } else {
        entries = table_entries(table);
    }
    struct Task {
        const AtlasEntry* entry;
        IntAssignment assignment;
    };
    std::vector<Task> tasks;
    for (const auto& e : entries)
        for (const auto& asg : sample_assignments(e)) tasks.push_back({&e, asg});
    std::vector<VerificationReport> reports(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            reports[i] = verify_entry(*tasks[i].entry, tasks[i].assignment, std::nullopt,
                                      opts.jet_cutoff);
        }
    };
    if (jobs > 1) {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    } else {
        worker();
    }
    bool all_pass = true;
    bool any_inconclusive = false;
    Json rep = report_header("atlas-verify", {table.empty() ? "all" : table});
    Json rows = Json::array();
    for (size_t i = 0; i < tasks.size(); ++i) {
        const auto& r = reports[i];
        std::string verdict = r.passed() ? "PASS" : (r.inconclusive() ? "INCONCLUSIVE" : "FAIL");
        if (!r.passed()) all_pass = false;
        if (r.inconclusive()) any_inconclusive = true;
        std::ostringstream label;
        label << r.table << "/" << r.name;
        for (const auto& [k, v] : r.assignment) label << " " << k << "=" << v;
        if (!opts.json)
            std::cout << "[" << verdict << "] " << label.str() << "\n";
        Json row;
        row["entry"] = label.str();
        row["verdict"] = verdict;
        Json checks = Json::array();
        for (const auto& c : r.checks) {
            Json cj;
            cj["invariant"] = c.invariant;
            cj["expected"] = c.expected;
            if (c.computed) cj["computed"] = *c.computed;
            cj["status"] = c.status == CheckStatus::Pass
                               ? "pass"
                               : (c.status == CheckStatus::Fail ? "fail" : "inconclusive");
            checks.push_back(cj);
        }
        row["checks"] = checks;
        rows.push_back(row);
    }
    rep["results"]["rows"] = rows;
    rep["results"]["all_pass"] = all_pass;
    report_finish(rep, ms_since(start));
    if (opts.json) std::cout << rep.dump(2) << "\n";
    else std::cout << (all_pass ? "all rows PASS" : "FAILURES present") << "\n";
    if (!all_pass) return any_inconclusive ? kExitUndecided : kExitInternal;
    return kExitOk;
}

int cmd_ideal_check(const std::string& path, int power, int times, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    MapGerm f;
    parse_at(opts.at, gf.germ, f);
    Json rep = report_header("ideal-check", {path});
    Json& res = rep["results"];
    res["power"] = power;
    if (times > 0) {
        IdealPowerEquality eq = ideal_times_power_equals(f.components, times, power);
        res["times_maximal"] = times;
        res["contains_power"] = eq.contains_power;
        res["inside_power"] = eq.inside_power;
        res["equal"] = eq.equal();
        report_finish(rep, ms_since(start));
        emit(rep, opts);
        return eq.equal() ? kExitOk : kExitUndecided;
    }
    PowerContainment pc = power_subset_ideal(f.components, power);
    res["contains_power"] = pc.holds;
    if (pc.holds && opts.verbose_certificates) {
        Json combos = Json::array();
        for (size_t i = 0; i < pc.certificate->monomials.size(); ++i) {
            Json item;
            item["monomial"] = pc.certificate->monomials[i].to_string(*f.ring);
            Json terms = Json::array();
            for (const auto& t : pc.certificate->combos[i]) {
                Json tj;
                tj["multiplier"] = t.multiplier.to_string(*f.ring);
                tj["generator"] = t.generator;
                tj["coeff"] = t.coeff.to_string(param_name(f));
                terms.push_back(tj);
            }
            item["terms"] = terms;
            combos.push_back(item);
        }
        res["certificate"] = combos;
    }
    report_finish(rep, ms_since(start));
    emit(rep, opts);
    return pc.holds ? kExitOk : kExitUndecided;
}

int cmd_trivialize(const std::string& path, const std::string& group, int order,
                   const std::string& time_var, bool lipschitz, const CommonOpts& opts) {
    auto start = std::chrono::steady_clock::now();
    GermFile gf = parse_germ_file(path);
    const MapGerm& f = gf.germ;
    int t_index = f.ring->var_index(time_var);
    if (t_index < 0) throw error("time variable '" + time_var + "' not among ring variables");
    Family fam{f, t_index};
    Json rep = report_header(lipschitz ? "trivialize-lipschitz" : "trivialize", {path});
    Json& res = rep["results"];
    if (lipschitz) {
        std::optional<Rat> at;
        if (!opts.at.empty()) {
            size_t eq = opts.at.find('=');
            std::string val = eq == std::string::npos ? opts.at : opts.at.substr(eq + 1);
            at = Rat(Int(val));
        }
        ControlPackage pkg = control_package(fam, at);
        if (!pkg.identity) {
            res["identity"] = "no solution";
        } else {
            res["identity"] = "exact";
            res["entry_degree"] = pkg.identity->entry_degree;
            res["rho_sq"] = pkg.identity->rho_sq.to_string();
            Json rowsj = Json::array();
            for (const auto& row : pkg.identity->matrix) {
                Json rj = Json::array();
                for (const auto& e : row) rj.push_back(e.to_string());
                rowsj.push_back(rj);
            }
            res["matrix"] = rowsj;
        }
        res["gram_bound"] = pkg.gram == GramOutcome::Positive ? "positive" : "inconclusive";
        res["granted"] = pkg.granted;
        report_finish(rep, ms_since(start));
        emit(rep, opts);
        return pkg.granted ? kExitOk : kExitUndecided;
    }
    TrivialityGroup g = group == "C"   ? TrivialityGroup::C
                        : group == "K" ? TrivialityGroup::K
                        : group == "A" ? TrivialityGroup::A
                                       : throw error("trivialize group must be C, K or A");
    auto cert = thom_levine_certificate(fam, g, order);
    if (!cert) {
        res["certificate"] = "none at this order (not a disproof of triviality)";
        report_finish(rep, ms_since(start));
        emit(rep, opts);
        return kExitUndecided;
    }
    res["jet_order"] = cert->jet_order;
    Json vj = Json::array();
    for (const auto& v : cert->v) vj.push_back(v.to_string());
    res["v"] = vj;
    if (g == TrivialityGroup::A) {
        Json wj = Json::array();
        for (const auto& w : cert->w) wj.push_back(w.to_string());
        res["w"] = wj;
    } else {
        Json mj = Json::array();
        for (const auto& row : cert->matrix) {
            Json rj = Json::array();
            for (const auto& e : row) rj.push_back(e.to_string());
            mj.push_back(rj);
        }
        res["matrix"] = mj;
    }
    report_finish(rep, ms_since(start));
    emit(rep, opts);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"germkit: exact invariants of polynomial map-germs"};
    app.require_subcommand(1);

    CommonOpts opts;
    opts.jet_cutoff = default_cutoff();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--jet-cutoff", opts.jet_cutoff, "determinacy search cutoff");
        sub->add_option("--at", opts.at, "specialize the parameter, e.g. --at l=3");
        sub->add_flag("--json", opts.json, "machine-readable output");
        sub->add_flag("--verbose-certificates", opts.verbose_certificates,
                      "embed full certificate data in reports");
        sub->add_flag("--echo", opts.echo, "echo the canonical germ file and exit (analyze)");
    };

    std::string path, group = "K", table, time_var = "t";
    bool extended = false, full = false, lipschitz = false;
    int n = 0, p = 0, power = 3, times = 0, order = 3, jobs = 1;

    CLI::App* analyze = app.add_subcommand("analyze", "corank, codimensions, local algebra");
    analyze->add_option("file", path)->required();
    add_common(analyze);

    CLI::App* codim = app.add_subcommand("codim", "stabilized G-codimension");
    codim->add_option("file", path)->required();
    codim->add_option("--group", group, "R, C, K, L or A");
    codim->add_flag("--extended", extended, "extended tangent space");
    add_common(codim);

    CLI::App* det = app.add_subcommand("determinacy", "finite determinacy certificate");
    det->add_option("file", path)->required();
    det->add_option("--group", group);
    add_common(det);

    CLI::App* stab = app.add_subcommand("stability", "infinitesimal stability test");
    stab->add_option("file", path)->required();
    add_common(stab);

    CLI::App* unfold = app.add_subcommand("unfold", "stable unfolding from Nf");
    unfold->add_option("file", path)->required();
    add_common(unfold);

    CLI::App* classify_cmd = app.add_subcommand("classify", "match against the atlas");
    classify_cmd->add_option("file", path)->required();
    add_common(classify_cmd);

    CLI::App* nicedim_cmd = app.add_subcommand("nicedim", "nice-dimension classification");
    nicedim_cmd->add_option("n", n)->required();
    nicedim_cmd->add_option("p", p)->required();
    add_common(nicedim_cmd);

    CLI::App* averify = app.add_subcommand("atlas-verify", "verify classification tables");
    averify->add_option("--table", table, "restrict to one table");
    averify->add_option("--jobs", jobs, "parallel workers");
    add_common(averify);

    CLI::App* ideal = app.add_subcommand("ideal-check", "ideal power containment certificates");
    ideal->add_option("file", path)->required();
    ideal->add_option("--power", power, "check M^power inside the component ideal");
    ideal->add_option("--times", times, "check I * M^times = M^power instead");
    add_common(ideal);

    CLI::App* triv = app.add_subcommand("trivialize", "Thom-Levine and Lipschitz certificates");
    triv->add_option("file", path)->required();
    triv->add_option("--group", group, "C, K or A");
    triv->add_option("--order", order, "jet order of the certificate");
    triv->add_option("--time", time_var, "deformation variable name");
    triv->add_flag("--lipschitz", lipschitz, "control-function certificate");
    add_common(triv);

    CLI::App* orbit = app.add_subcommand("open-orbit", "open-orbit test for BND normal forms");
    orbit->add_option("n", n)->required();
    orbit->add_option("p", p)->required();
    orbit->add_flag("--full", full, "full corollary conditions in the unfolding variables");
    add_common(orbit);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return cmd_analyze(path, opts);
        if (*codim) return cmd_codim(path, group, extended, opts);
        if (*det) return cmd_determinacy(path, group, opts);
        if (*stab) return cmd_stability(path, opts);
        if (*unfold) return cmd_unfold(path, opts);
        if (*classify_cmd) return cmd_classify(path, opts);
        if (*nicedim_cmd) return cmd_nicedim(n, p, opts);
        if (*averify) return cmd_atlas_verify(table, jobs, opts);
        if (*ideal) return cmd_ideal_check(path, power, times, opts);
        if (*triv) return cmd_trivialize(path, group, order, time_var, lipschitz, opts);
        if (*orbit) {
            std::optional<Rat> at;
            if (!opts.at.empty()) {
                size_t eq = opts.at.find('=');
                at = Rat(Int(eq == std::string::npos ? opts.at : opts.at.substr(eq + 1)));
            }
            UnimodularGerm F = unimodular_normal_form(n, p, at);
            bool pass = full ? open_orbit_test_full(F) : open_orbit_test(F);
            std::cout << (pass ? "open-orbit condition holds" : "open-orbit condition fails")
                      << " for " << F.label << "\n";
            return pass ? kExitOk : kExitUndecided;
        }
    } catch (const germkit::NotFinitelyDetermined& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return kExitUndecided;
    } catch (const germkit::NotFstError& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return kExitUndecided;
    } catch (const germkit::error& e) {
        std::string what = e.what();
        if (what.rfind("internal invariant violation", 0) == 0) {
            std::cerr << "internal error: " << what << "\n";
            return kExitInternal;
        }
        std::cerr << "error: " << what << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
