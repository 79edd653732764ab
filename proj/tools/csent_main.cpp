// csent command-line front end: state generation, measure computation and
// verification suites over the cross-symmetric-extension library.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csent/discord.hpp"
#include "csent/ent.hpp"
#include "csent/errors.hpp"
#include "csent/statefile.hpp"
#include "csent/verify_suites.hpp"

namespace {

using namespace csent;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitInput = 2;
constexpr int kExitValidation = 3;

std::string format_value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::uint64_t fnv1a(const unsigned char* data, size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_vector(const RVec& v) {
    std::uint64_t h = fnv1a(reinterpret_cast<const unsigned char*>(v.data()),
                            static_cast<size_t>(v.size()) * sizeof(double));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ReportLines {
    std::vector<std::pair<std::string, std::string>> fields;
    void add(const std::string& k, const std::string& v) { fields.emplace_back(k, v); }
    void add(const std::string& k, double v) { fields.emplace_back(k, format_value(v)); }

    void emit(bool as_json) const {
        if (as_json) {
            nlohmann::json j;
            for (const auto& [k, v] : fields) {
                try {
                    size_t pos = 0;
                    double num = std::stod(v, &pos);
                    if (pos == v.size()) {
                        j[k] = num;
                        continue;
                    }
                } catch (...) {
                }
                j[k] = v;
            }
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& [k, v] : fields) std::cout << k << " " << v << "\n";
        }
    }
};

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
    std::map<std::string, double> out;
    for (const auto& kv : raw) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ParseError("--param expects key=value, got '" + kv + "'");
        try {
            size_t pos = 0;
            double val = std::stod(kv.substr(eq + 1), &pos);
            if (pos != kv.size() - eq - 1) throw std::invalid_argument("trailing");
            out[kv.substr(0, eq)] = val;
        } catch (const std::exception&) {
            throw ParseError("--param value for '" + kv.substr(0, eq) + "' is not a number");
        }
    }
    return out;
}

double param_or(const std::map<std::string, double>& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

int cmd_gen(const std::string& family, const std::vector<std::string>& raw_params,
            const std::string& out_path, std::uint64_t seed) {
    auto params = parse_params(raw_params);
    Rng rng(seed);
    MultipartiteState state = werner(0.0);
    StateFileMeta meta;
    meta.family = family;
    meta.params = params;
    meta.params["seed"] = static_cast<double>(seed);

    if (family == "werner") {
        double p = param_or(params, "p", 0.5);
        meta.params["p"] = p;
        state = werner(p);
    } else if (family == "random-pure") {
        int da = static_cast<int>(param_or(params, "da", 2));
        int db = static_cast<int>(param_or(params, "db", 2));
        state = state_from_pure(random_pure(da * db, rng), bipartite_layout(da, db));
    } else if (family == "random-mixed") {
        int da = static_cast<int>(param_or(params, "da", 2));
        int db = static_cast<int>(param_or(params, "db", 2));
        int rank = static_cast<int>(param_or(params, "rank", da * db));
        state = make_state(random_density(da * db, rank, rng), bipartite_layout(da, db), false);
    } else if (family == "bell-diagonal") {
        RVec w(4);
        w << param_or(params, "p0", 0.25), param_or(params, "p1", 0.25),
            param_or(params, "p2", 0.25), param_or(params, "p3", 0.25);
        state = bell_diagonal(w / w.sum());
    } else if (family == "separable") {
        int da = static_cast<int>(param_or(params, "da", 2));
        int db = static_cast<int>(param_or(params, "db", 2));
        int terms = static_cast<int>(param_or(params, "terms", 4));
        RVec w(terms);
        double tot = 0.0;
        std::vector<std::pair<Vec, Vec>> members;
        for (int i = 0; i < terms; ++i) {
            w(i) = rng.uniform() + 1e-3;
            tot += w(i);
            members.emplace_back(random_pure(da, rng), random_pure(db, rng));
        }
        w /= tot;
        state = make_separable(w, members, bipartite_layout(da, db));
    } else if (family == "cc") {
        int da = static_cast<int>(param_or(params, "da", 2));
        int db = static_cast<int>(param_or(params, "db", 2));
        RMat probs(da, db);
        double tot = 0.0;
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < db; ++j) {
                probs(i, j) = rng.uniform() + 1e-3;
                tot += probs(i, j);
            }
        probs /= tot;
        state = make_cc(random_unitary(da, rng), random_unitary(db, rng), probs);
    } else {
        std::cerr << "unknown family '" << family << "'\n";
        return kExitInput;
    }

    state.validate();
    write_state_file(out_path, state, meta);
    std::cout << "wrote " << out_path << " (dim " << state.dim() << ")\n";
    return kExitOk;
}

int cmd_compute(const std::string& measure, const std::vector<std::string>& files,
                std::uint64_t seed, int restarts, double tol, bool as_json) {
    const bool pair_measure = measure == "fidelity-pair";
    if (files.empty() || (pair_measure && files.size() != 2) ||
        (!pair_measure && files.size() != 1)) {
        std::cerr << "measure '" << measure << "' expects " << (pair_measure ? 2 : 1)
                  << " state file(s)\n";
        return kExitInput;
    }

    MultipartiteState state = read_state_file(files[0]);
    const auto t0 = std::chrono::steady_clock::now();

    ReportLines rep;
    rep.add("measure", measure);
    rep.add("file", files[0]);

    if (pair_measure) {
        MultipartiteState other = read_state_file(files[1]);
        rep.add("file2", files[1]);
        rep.add("value", fidelity(state, other));
        rep.add("bound", "exact");
    } else if (measure == "bures-discord" || measure == "hs-discord" ||
               measure == "mid-bures" || measure == "mid-hs") {
        DiscordOpts opts;
        opts.seed = seed;
        opts.restarts = restarts;
        if (tol > 0) opts.tol = tol;
        DistanceKind kind = (measure == "bures-discord" || measure == "mid-bures")
                                ? DistanceKind::BuresSquared
                                : DistanceKind::HilbertSchmidt;
        DiscordReport dr = (measure == "bures-discord" || measure == "hs-discord")
                               ? geometric_discord(state, kind, opts)
                               : mid(state, kind, opts);
        rep.add("value", dr.value);
        rep.add("bound", "upper");
        RVec cert(dr.argmin_bases.params_a.size() + dr.argmin_bases.params_b.size());
        cert << dr.argmin_bases.params_a, dr.argmin_bases.params_b;
        rep.add("certificate", digest_vector(cert));
        rep.add("restarts", std::to_string(dr.restarts));
        rep.add("converged_fraction", dr.converged_fraction);
    } else if (measure == "bures-entanglement" || measure == "convex-roof-bures" ||
               measure == "cse-bures" || measure == "cse-hs") {
        EntOpts opts;
        opts.seed = seed;
        opts.restarts = restarts;
        EntReport er;
        if (measure == "bures-entanglement") er = bures_entanglement(state, opts);
        else if (measure == "convex-roof-bures") er = convex_roof_bures(state, opts);
        else if (measure == "cse-bures")
            er = cse_discord_min(state, DistanceKind::BuresSquared, opts);
        else er = cse_discord_min(state, DistanceKind::HilbertSchmidt, opts);
        rep.add("value", er.value);
        rep.add("bound", er.bound_direction == BoundDirection::Exact ? "exact" : "upper");
        rep.add("ansatz", er.ansatz);
        if (er.certificate.size() > 0) rep.add("certificate", digest_vector(er.certificate));
        rep.add("restarts", std::to_string(er.restarts));
        rep.add("converged_fraction", er.converged_fraction);
        if (er.ansatz.rfind("cse", 0) == 0)
            rep.add("certificate_residual", er.certificate_residual);
    } else {
        std::cerr << "unknown measure '" << measure << "'\n";
        return kExitInput;
    }

    rep.add("seed", std::to_string(seed));
    rep.emit(as_json);
    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "runtime_ms "
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, bool fast, bool as_json) {
    EntOpts opts;
    opts.seed = seed;
    opts.fast = fast;

    int scale = fast ? 1 : 2;
    SuiteResult result;
    if (suite == "distances") result = suite_distances(25 * scale, seed);
    else if (suite == "cse") result = suite_cse(20 * scale, seed);
    else if (suite == "hs-noncontractive") result = suite_hs_noncontractive();
    else if (suite == "theorem1") {
        opts.restarts = fast ? 6 : 8;
        opts.max_iters = 80;
        result = suite_theorem1(10 * scale, 5 * scale, seed, opts);
    } else if (suite == "theorem2") {
        result = suite_theorem2(5 * scale, seed, opts);
    } else if (suite == "theorem3") {
        result = suite_theorem3(3 * scale, seed, opts);
    } else if (suite == "faithfulness") {
        result = suite_faithfulness(5 * scale, 0, seed, opts);
    } else {
        std::cerr << "unknown suite '" << suite << "'\n";
        return kExitInput;
    }

    if (as_json) {
        nlohmann::json j;
        j["suite"] = result.suite;
        j["pass"] = result.pass();
        j["seed"] = seed;
        auto arr = nlohmann::json::array();
        for (const auto& c : result.checks) {
            nlohmann::json cj;
            cj["name"] = c.name;
            cj["pass"] = c.pass;
            cj["worst"] = c.worst;
            cj["count"] = c.count;
            if (!c.note.empty()) cj["note"] = c.note;
            arr.push_back(cj);
        }
        j["checks"] = arr;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << format_suite(result);
        std::cout << "seed " << seed << (fast ? " (fast mode)" : "") << "\n";
    }
    return result.pass() ? kExitOk : kExitAssertion;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-symmetric extension entanglement toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    int restarts = 0;
    double tol = 0.0;
    bool as_json = false;
    bool fast = false;

    auto* compute = app.add_subcommand("compute", "compute a measure on a state file");
    std::string measure;
    std::vector<std::string> files;
    compute->add_option("measure", measure,
                        "fidelity-pair | bures-discord | hs-discord | mid-bures | mid-hs | "
                        "bures-entanglement | convex-roof-bures | cse-bures | cse-hs")
        ->required();
    compute->add_option("files", files, "state file(s)")->required()->expected(1, 2);
    compute->add_option("--seed", seed, "optimizer seed");
    compute->add_option("--restarts", restarts, "multistart count (0 = default)");
    compute->add_option("--tol", tol, "inner solver tolerance");
    compute->add_flag("--json", as_json, "machine-readable report");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    verify->add_option("suite", suite,
                       "theorem1 | theorem2 | theorem3 | distances | cse | hs-noncontractive | "
                       "faithfulness")
        ->required();
    verify->add_option("--seed", seed, "suite seed");
    verify->add_flag("--fast", fast, "reduced sample counts, same tolerances");
    verify->add_flag("--json", as_json, "machine-readable report");

    auto* gen = app.add_subcommand("gen", "generate a state file");
    std::string family;
    std::string out_path;
    std::vector<std::string> raw_params;
    gen->add_option("family", family,
                    "random-pure | random-mixed | werner | bell-diagonal | separable | cc")
        ->required();
    gen->add_option("out", out_path, "output path")->required();
    gen->add_option("--param", raw_params, "family parameter key=value (repeatable)")
        ->type_size(1)->allow_extra_args(false);
    gen->add_option("--seed", seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (compute->parsed()) return cmd_compute(measure, files, seed, restarts, tol, as_json);
        if (verify->parsed()) return cmd_verify(suite, seed, fast, as_json);
        if (gen->parsed()) return cmd_gen(family, raw_params, out_path, seed);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NotPsdError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
