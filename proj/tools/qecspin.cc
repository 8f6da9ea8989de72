// Copyright 2026 The qecspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qecspin: batch driver. Subcommands:
//   code  build|info|save|load
//   check duality|selfdual|nishimori|bounds|expansion
//   decode sweep
//   mc    run
// Exit status: 0 pass, 1 check failure, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qecspin/analysis.h"
#include "qecspin/code_io.h"
#include "qecspin/codes.h"
#include "qecspin/decoder.h"
#include "qecspin/montecarlo.h"
#include "qecspin/runtime.h"
#include "qecspin/wegner.h"

using namespace qecspin;
using nlohmann::json;

namespace {

constexpr const char *kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CodeArgs {
    std::string family = "toric";
    std::string file;
    size_t L = 3;
    std::string h1 = "11", h2 = "11";
    size_t n1 = 3, n2 = 3, l = 2;
    size_t inner_L = 2;
    size_t h = 2, v = 3, nc = 6;
    uint64_t code_seed = 1;
    std::string layout = "col";
};

struct Globals {
    std::string config;
    std::string out_dir;
    size_t threads = 0;
};

// seed_alias: the code commands have no master seed, so --seed names the construction seed there.
void add_code_options(CLI::App *cmd, CodeArgs &a, bool seed_alias = false) {
    cmd->add_option("family", a.family, "toric | hp-cyclic | dt | gauge | gallager | file")
        ->check(CLI::IsMember({"toric", "hp-cyclic", "dt", "gauge", "gallager", "file"}));
    cmd->add_option("--file", a.file, "code JSON (family file)");
    cmd->add_option("--L", a.L, "toric size, or layer count for gauge");
    cmd->add_option("--h1", a.h1, "first polynomial, lowest degree first");
    cmd->add_option("--h2", a.h2, "second polynomial");
    cmd->add_option("--n1", a.n1, "first circulant size");
    cmd->add_option("--n2", a.n2, "second circulant size");
    cmd->add_option("--l", a.l, "dt: number of ones in the second polynomial");
    cmd->add_option("--inner-L", a.inner_L, "gauge: size of the inner toric code");
    cmd->add_option("--h", a.h, "gallager: small degree");
    cmd->add_option("--v", a.v, "gallager: large degree");
    cmd->add_option("--nc", a.nc, "gallager: seed-code length");
    cmd->add_option(seed_alias ? "--code-seed,--seed" : "--code-seed", a.code_seed, "gallager: construction seed");
    cmd->add_option("--layout", a.layout, "gallager: col (h per column) or row (h per row)")
        ->check(CLI::IsMember({"col", "row"}));
}

StabilizerCode build_code(const CodeArgs &a) {
    if (a.family == "toric") {
        return toric_code(a.L);
    }
    if (a.family == "hp-cyclic") {
        return cyclic_hp(a.h1, a.n1, a.h2, a.n2);
    }
    if (a.family == "dt") {
        return debierre_turban(a.n1, a.n2, a.l);
    }
    if (a.family == "gauge") {
        return gauge_code(toric_code(a.inner_L), a.L);
    }
    if (a.family == "gallager") {
        auto layout = a.layout == "row" ? GallagerLayout::kRowWeightH : GallagerLayout::kColumnWeightH;
        BinaryMatrix hm = gallager_ldpc(a.h, a.v, a.nc, a.code_seed, layout);
        return hp_code(hm, hm.transpose());
    }
    if (a.family == "file") {
        if (a.file.empty()) {
            throw UsageError("family 'file' needs --file");
        }
        return load_code(a.file);
    }
    throw UsageError("unknown code family " + a.family);
}

// Options that never change results: kept out of the hash so output is identical across runs.
bool hashed(const std::string &name) {
    return name != "config" && name != "out" && name != "threads" && name != "help" && name != "output";
}

std::string option_key(const CLI::Option *opt) {
    std::string name = opt->get_single_name();
    while (!name.empty() && name.front() == '-') {
        name.erase(name.begin());
    }
    return name;
}

std::vector<std::string> json_to_args(const json &v) {
    std::vector<std::string> out;
    auto one = [](const json &x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    if (v.is_array()) {
        for (const auto &x : v) {
            out.push_back(one(x));
        }
    } else {
        out.push_back(one(v));
    }
    return out;
}

// Fill options the command line left unset from the config file; flags win.
void apply_config(const json &cfg, std::vector<CLI::App *> apps) {
    std::set<std::string> used;
    for (CLI::App *app : apps) {
        for (CLI::Option *opt : app->get_options()) {
            std::string key = option_key(opt);
            if (key.empty() || !cfg.contains(key)) {
                continue;
            }
            used.insert(key);
            if (opt->count() > 0) {
                continue;
            }
            for (const auto &s : json_to_args(cfg[key])) {
                opt->add_result(s);
            }
            opt->run_callback();
        }
    }
    for (const auto &[key, _] : cfg.items()) {
        if (key != "command" && !used.count(key)) {
            throw UsageError("config key '" + key + "' does not match any option of this command");
        }
    }
}

// Effective parameter set after config and flags merge; also what gets hashed.
json effective_config(const std::string &command, std::vector<CLI::App *> apps) {
    json j;
    j["command"] = command;
    for (CLI::App *app : apps) {
        for (CLI::Option *opt : app->get_options()) {
            std::string key = option_key(opt);
            if (key.empty() || !hashed(key)) {
                continue;
            }
            std::vector<std::string> vals = opt->count() ? opt->results() : std::vector<std::string>{};
            if (vals.empty()) {
                std::string d = opt->get_default_str();
                if (d.empty() || d == "{}" || d == "[]") {
                    continue;
                }
                vals.push_back(d);
            }
            j[key] = vals.size() == 1 ? json(vals[0]) : json(vals);
        }
    }
    return j;
}

uint64_t fnv1a(const std::string &s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(uint64_t x) {
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << x;
    return o.str();
}

struct Header {
    std::string command;
    json config;
    uint64_t seed = 0;
    std::vector<std::string> codes;

    void write(std::ostream &out) const {
        out << "# qecspin " << kVersion << "\n";
        out << "# command: " << command << "\n";
        out << "# config_hash: fnv1a64:" << hex64(fnv1a(config.dump())) << "\n";
        out << "# config: " << config.dump() << "\n";
        out << "# seed: " << seed << "\n";
        for (const auto &c : codes) {
            out << "# code: " << c << "\n";
        }
    }
};

std::string resolve_output(const Globals &g, const std::string &name) {
    std::filesystem::path p(name);
    if (p.is_absolute()) {
        return p.string();
    }
    std::string dir = g.out_dir;
    if (dir.empty()) {
        const char *env = std::getenv("QECSPIN_OUT_DIR");
        dir = env ? env : ".";
    }
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / p).string();
}

std::string describe(const StabilizerCode &code, size_t cap) {
    CodeParams p = distance(code, cap);
    std::string s = code.name() + " " + p.str();
    s += p.d_exact ? " (d exact)" : " (d upper bound)";
    return s;
}

std::vector<double> p_grid(const std::vector<double> &list, const std::string &range) {
    if (range.empty()) {
        return list;
    }
    double lo, hi, step;
    char c1, c2;
    std::istringstream in(range);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 || hi < lo) {
        throw UsageError("--p-range wants lo:hi:step, got " + range);
    }
    std::vector<double> out;
    size_t count = size_t(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (size_t i = 0; i < count; i++) {
        // round so that 0.08 + 3·0.01 prints as 0.11
        out.push_back(std::round((lo + double(i) * step) * 1e12) / 1e12);
    }
    return out;
}

BinaryVector random_bits(size_t n, std::mt19937_64 &rng) {
    BinaryVector v(n);
    for (size_t i = 0; i < n; i++) {
        v.set(i, rng() & 1);
    }
    return v;
}

std::vector<Sector> parse_sectors(const std::string &s) {
    if (s == "all") {
        return {Sector::kX, Sector::kZ, Sector::kFull};
    }
    if (s == "xz") {
        return {Sector::kX, Sector::kZ};
    }
    return {parse_sector(s)};
}

// ---- check suites: each returns (pass, report) ----

struct CheckArgs {
    std::string suite;
    std::string sectors = "xz";
    std::vector<double> ps{0.05, 0.15};
    double beta = 0;
    size_t trials = 10;
    size_t samples = 200;
    size_t sweeps = 2000;
    double tol = 1e-9;
    uint64_t seed = 1;
};

json run_duality(const StabilizerCode &code, const CheckArgs &a, bool &pass) {
    json rows = json::array();
    std::mt19937_64 rng(stream_seed(a.seed, 1));
    double beta = a.beta > 0 ? a.beta : 0.6;
    for (Sector s : parse_sectors(a.sectors)) {
        CodeSector cs(code, s);
        WegnerModel model(cs.theta());
        WegnerModel dual = dual_model(model, beta);
        double worst = 0;
        for (size_t t = 0; t < a.trials; t++) {
            BinaryVector e = random_bits(model.num_bonds(), rng);
            BinaryVector m = random_bits(model.num_bonds(), rng);
            PartitionValue lhs = evaluate(model, {e, m}, beta);
            PartitionValue rhs = evaluate(dual, {m, e}, 1.0);
            double log_rhs = rhs.log_abs + duality_log_factor(model, beta);
            int sign_rhs = rhs.sign * (e.dot(m) ? -1 : 1);
            double scale = std::max(lhs.log_abs, log_rhs);
            double a_v = lhs.sign * std::exp(lhs.log_abs - scale);
            double b_v = sign_rhs * std::exp(log_rhs - scale);
            worst = std::max(worst, std::abs(a_v - b_v));
        }
        bool ok = worst <= a.tol;
        pass = pass && ok;
        rows.push_back({{"sector", sector_name(s)}, {"trials", a.trials}, {"beta", beta},
                        {"max_relative_residual", worst}, {"pass", ok}});
    }
    return rows;
}

json run_selfdual(const StabilizerCode &code, const CheckArgs &a, bool &pass) {
    json rows = json::array();
    for (Sector s : parse_sectors(a.sectors)) {
        SelfDualCheck r = clean_self_dual_check(code, s);
        bool ok = r.residual <= a.tol;
        pass = pass && ok;
        json j = to_json(r);
        j["pass"] = ok;
        rows.push_back(j);
    }
    return rows;
}

json run_nishimori(const StabilizerCode &code, const CheckArgs &a, bool &pass) {
    json rows = json::array();
    double beta = a.beta > 0 ? a.beta : 0.7;
    for (Sector s : parse_sectors(a.sectors)) {
        if (s == Sector::kFull) {
            continue;
        }
        CodeSector cs(code, s);
        if (cs.num_logicals() == 0) {
            continue;
        }
        BinaryVector m = cs.dual_logicals().row(0);
        for (double p : a.ps) {
            json j{{"sector", sector_name(s)}, {"p", p}, {"beta", beta}};
            bool ok;
            if (cs.num_bonds() <= 24) {
                NishimoriReport r = nishimori_identity_exact(cs, m, p, beta);
                ok = std::abs(r.identity_gap) <= a.tol && r.inequality_margin >= -a.tol;
                j["mode"] = "exact";
                j["identity_gap"] = r.identity_gap;
                j["inequality_margin"] = r.inequality_margin;
            } else {
                NishimoriReport r = nishimori_identity_check(cs, m, p, beta, a.samples, a.sweeps,
                                                             stream_seed(a.seed, uint64_t(s), uint64_t(p * 1e6)));
                ok = std::abs(r.identity_z()) <= 3 && r.inequality_z() >= -3;
                j["mode"] = "monte-carlo";
                j["samples"] = r.samples;
                j["identity_gap"] = r.identity_gap;
                j["identity_err"] = r.identity_err;
                j["inequality_margin"] = r.inequality_margin;
                j["inequality_err"] = r.inequality_err;
            }
            j["pass"] = ok;
            pass = pass && ok;
            rows.push_back(j);
        }
    }
    return rows;
}

json run_bounds(const StabilizerCode &code, const CheckArgs &a, bool &pass) {
    json rows = json::array();
    for (Sector s : parse_sectors(a.sectors)) {
        for (const BoundScan &scan : bound_scan(code, s, a.ps, a.tol)) {
            json j = to_json(scan);
            j["pass"] = scan.violations == 0;
            pass = pass && scan.violations == 0;
            rows.push_back(j);
        }
    }
    return rows;
}

json run_expansion(const StabilizerCode &code, const CheckArgs &a, bool &pass) {
    json rows = json::array();
    std::mt19937_64 rng(stream_seed(a.seed, 5));
    double beta = a.beta > 0 ? a.beta : 0.8;
    for (Sector s : parse_sectors(a.sectors)) {
        CodeSector cs(code, s);
        double worst = 0;
        for (size_t t = 0; t < a.trials; t++) {
            BinaryVector e = random_bits(cs.num_bonds(), rng);
            BinaryVector m = random_bits(cs.num_bonds(), rng);
            worst = std::max(worst, correlation_expansion_check(cs, e, m, beta).residual);
        }
        bool ok = worst <= a.tol;
        pass = pass && ok;
        rows.push_back({{"sector", sector_name(s)}, {"trials", a.trials}, {"beta", beta},
                        {"max_residual", worst}, {"pass", ok}});
    }
    return rows;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qecspin: stabilizer codes, their spin models, and ML decoding experiments"};
    // --h is a code parameter, so help is long-form only
    app.set_help_flag("--help", "print help");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Globals g;
    g.threads = default_threads();
    app.add_option("--config", g.config, "JSON file of option values; command-line flags win");
    app.add_option("--out", g.out_dir, "output directory (default $QECSPIN_OUT_DIR, else .)");
    app.add_option("--threads", g.threads, "worker threads; output does not depend on it");

    // code
    CLI::App *code_cmd = app.add_subcommand("code", "build, inspect, save and load codes");
    code_cmd->require_subcommand(1);
    CodeArgs code_args;
    size_t cap = 5;
    std::string code_out;
    CLI::App *code_build = code_cmd->add_subcommand("build", "construct a code and print [[n,k,d]]");
    add_code_options(code_build, code_args, true);
    code_build->add_option("--distance-cap", cap, "exact distance search up to this weight");
    CLI::App *code_info = code_cmd->add_subcommand("info", "parameters, ranks and sector distances");
    add_code_options(code_info, code_args, true);
    code_info->add_option("--distance-cap", cap, "exact distance search up to this weight");
    CLI::App *code_save = code_cmd->add_subcommand("save", "construct a code and write it as JSON");
    add_code_options(code_save, code_args, true);
    code_save->add_option("--output", code_out, "output file")->required();
    CLI::App *code_load = code_cmd->add_subcommand("load", "read a code JSON and print [[n,k,d]]");
    code_load->add_option("file", code_args.file, "code JSON")->required();
    code_load->add_option("--distance-cap", cap, "exact distance search up to this weight");

    // check
    CLI::App *check_cmd = app.add_subcommand("check", "run property suites; exit 1 on any failure");
    CheckArgs check;
    CodeArgs check_code;
    std::string check_out;
    check_cmd->add_option("suite", check.suite, "duality | selfdual | nishimori | bounds | expansion")
        ->required()
        ->check(CLI::IsMember({"duality", "selfdual", "nishimori", "bounds", "expansion"}));
    add_code_options(check_cmd, check_code);
    check_cmd->add_option("--sectors", check.sectors, "X | Z | full | xz | all")
        ->check(CLI::IsMember({"X", "Z", "full", "xz", "all"}));
    check_cmd->add_option("--p", check.ps, "error rates")->delimiter(',');
    check_cmd->add_option("--beta", check.beta, "inverse temperature (suite default when unset)");
    check_cmd->add_option("--trials", check.trials, "random instances per sector");
    check_cmd->add_option("--samples", check.samples, "disorder samples (Monte Carlo route)");
    check_cmd->add_option("--sweeps", check.sweeps, "sweeps per chain (Monte Carlo route)");
    check_cmd->add_option("--tol", check.tol, "absolute tolerance");
    check_cmd->add_option("--seed", check.seed, "master seed");
    check_cmd->add_option("--output", check_out, "also write the JSON report here");

    // decode
    CLI::App *decode_cmd = app.add_subcommand("decode", "ML decoding experiments");
    decode_cmd->require_subcommand(1);
    CLI::App *sweep_cmd = decode_cmd->add_subcommand("sweep", "success curves over a code family and p grid");
    std::vector<size_t> sweep_L{2, 3, 4};
    std::vector<std::string> sweep_files;
    std::vector<double> sweep_p{0.08, 0.09, 0.10, 0.11, 0.12, 0.13, 0.14};
    std::string sweep_range;
    size_t sweep_trials = 2000;
    uint64_t sweep_seed = 1;
    std::string sweep_out = "decode_sweep.csv";
    std::string sweep_curve = "zratio";
    sweep_cmd->add_option("--L", sweep_L, "toric sizes")->delimiter(',');
    sweep_cmd->add_option("--files", sweep_files, "code JSON files instead of toric sizes")->delimiter(',');
    sweep_cmd->add_option("--p", sweep_p, "error rates")->delimiter(',');
    sweep_cmd->add_option("--p-range", sweep_range, "lo:hi:step, replaces --p");
    sweep_cmd->add_option("--trials", sweep_trials, "error samples per point");
    sweep_cmd->add_option("--seed", sweep_seed, "master seed");
    sweep_cmd->add_option("--curve", sweep_curve, "zratio (Z_max/Z_tot average) or success (hit fraction)")
        ->check(CLI::IsMember({"zratio", "success"}));
    sweep_cmd->add_option("--output", sweep_out, "CSV file");

    // mc
    CLI::App *mc_cmd = app.add_subcommand("mc", "Metropolis estimates on sector spin models");
    mc_cmd->require_subcommand(1);
    CLI::App *mc_run = mc_cmd->add_subcommand("run", "disorder-averaged energy and specific heat");
    CodeArgs mc_code;
    std::string mc_sector = "X";
    double mc_p = 0.08, mc_beta = 0;
    size_t mc_samples = 20, mc_sweeps = 20000;
    long mc_burn = -1;
    uint64_t mc_seed = 1;
    std::string mc_out = "mc_run.csv", mc_trace;
    add_code_options(mc_run, mc_code);
    mc_run->add_option("--sector", mc_sector, "X | Z | full")->check(CLI::IsMember({"X", "Z", "full"}));
    mc_run->add_option("--p", mc_p, "error rate of the quenched disorder");
    mc_run->add_option("--beta", mc_beta, "inverse temperature (default: Nishimori β_p)");
    mc_run->add_option("--samples", mc_samples, "disorder samples");
    mc_run->add_option("--sweeps", mc_sweeps, "sweeps per sample including burn-in");
    mc_run->add_option("--burn-in", mc_burn, "burn-in sweeps (default: pilot run)");
    mc_run->add_option("--seed", mc_seed, "master seed");
    mc_run->add_option("--output", mc_out, "per-sample CSV");
    mc_run->add_option("--trace", mc_trace, "also dump the sample-0 sweep trace to this CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        CLI::App *group = app.get_subcommands().front();
        CLI::App *leaf = group->get_subcommands().empty() ? group : group->get_subcommands().front();
        std::string command = group == leaf ? group->get_name() : group->get_name() + " " + leaf->get_name();
        if (group == check_cmd) {
            command += " " + check.suite;
        }
        if (!g.config.empty()) {
            std::ifstream in(g.config);
            if (!in) {
                throw UsageError("cannot open config " + g.config);
            }
            json cfg;
            try {
                cfg = json::parse(in);
            } catch (const json::exception &e) {
                throw UsageError("config " + g.config + ": " + e.what());
            }
            if (!cfg.is_object()) {
                throw UsageError("config must be a JSON object");
            }
            apply_config(cfg, {&app, leaf});
        }
        json effective = effective_config(command, {leaf});

        if (group == code_cmd) {
            StabilizerCode code = leaf == code_load ? load_code(code_args.file) : build_code(code_args);
            if (leaf == code_save) {
                std::string path = resolve_output(g, code_out);
                save_code(code, path);
                std::cout << "wrote " << path << "\n";
            }
            std::cout << describe(code, cap) << "\n";
            if (leaf == code_info) {
                std::cout << "css: " << (code.is_css() ? "yes" : "no") << "\n";
                std::cout << "generators: " << code.num_generators() << " (rank " << code.rank() << ")\n";
                std::cout << "rate: " << (code.n() ? double(code.k()) / double(code.n()) : 0.0) << "\n";
                if (code.is_css()) {
                    std::cout << "rank G_X: " << rank(code.gx()) << ", rank G_Z: " << rank(code.gz()) << "\n";
                    for (Sector s : {Sector::kX, Sector::kZ}) {
                        CodeParams sp = sector_distance(code, s, cap);
                        std::cout << "sector " << sector_name(s) << ": d = "
                                  << (sp.d == kInfiniteDistance ? std::string("inf") : std::to_string(sp.d))
                                  << (sp.d_exact ? " (exact)" : " (upper bound)") << "\n";
                    }
                }
            }
            return 0;
        }

        if (group == check_cmd) {
            StabilizerCode code = build_code(check_code);
            bool pass = true;
            json rows;
            if (check.suite == "duality") {
                rows = run_duality(code, check, pass);
            } else if (check.suite == "selfdual") {
                rows = run_selfdual(code, check, pass);
            } else if (check.suite == "nishimori") {
                rows = run_nishimori(code, check, pass);
            } else if (check.suite == "bounds") {
                rows = run_bounds(code, check, pass);
            } else {
                rows = run_expansion(code, check, pass);
            }
            json report{{"version", kVersion},
                        {"command", command},
                        {"config_hash", "fnv1a64:" + hex64(fnv1a(effective.dump()))},
                        {"config", effective},
                        {"seed", check.seed},
                        {"code", describe(code, 4)},
                        {"results", rows},
                        {"pass", pass}};
            std::cout << report.dump(2) << "\n";
            std::cout << (pass ? "PASS" : "FAIL") << " " << command << "\n";
            if (!check_out.empty()) {
                std::ofstream out(resolve_output(g, check_out));
                out << report.dump(2) << "\n";
            }
            return pass ? 0 : 1;
        }

        if (leaf == sweep_cmd) {
            std::vector<StabilizerCode> family;
            std::vector<std::string> labels;
            if (!sweep_files.empty()) {
                for (const auto &f : sweep_files) {
                    family.push_back(load_code(f));
                    labels.push_back(std::filesystem::path(f).stem().string());
                }
            } else {
                for (size_t L : sweep_L) {
                    family.push_back(toric_code(L));
                    labels.push_back("L" + std::to_string(L));
                }
            }
            std::vector<double> ps = p_grid(sweep_p, sweep_range);
            ThresholdOptions opts;
            opts.threads = g.threads;
            opts.use_zratio = sweep_curve == "zratio";
            ThresholdScan scan = threshold_scan(family, labels, ps, sweep_trials, sweep_seed, opts);

            std::string path = resolve_output(g, sweep_out);
            std::ofstream out(path);
            Header h{command, effective, sweep_seed, {}};
            for (const auto &c : family) {
                h.codes.push_back(describe(c, 4));
            }
            h.write(out);
            out << "label,n,k,p,p_succ,stderr,success_rate,success_stderr,zratio,zratio_stderr\n";
            out << std::setprecision(10);
            for (size_t i = 0; i < family.size(); i++) {
                for (const CurvePoint &pt : scan.curves[i]) {
                    const PsuccEstimate &e = pt.estimate;
                    double y = opts.use_zratio ? e.zratio_mean : e.mean;
                    double ye = opts.use_zratio ? e.zratio_stderr : e.stderr;
                    out << labels[i] << ',' << family[i].n() << ',' << family[i].k() << ',' << pt.p << ',' << y << ','
                        << ye << ',' << e.mean << ',' << e.stderr << ',' << e.zratio_mean << ',' << e.zratio_stderr
                        << '\n';
                }
            }
            std::cout << "wrote " << path << "\n";
            for (size_t i = 0; i + 1 < family.size(); i++) {
                std::vector<double> a, b;
                for (const auto &pt : scan.curves[i]) {
                    a.push_back(opts.use_zratio ? pt.estimate.zratio_mean : pt.estimate.mean);
                }
                for (const auto &pt : scan.curves[i + 1]) {
                    b.push_back(opts.use_zratio ? pt.estimate.zratio_mean : pt.estimate.mean);
                }
                auto x = curve_crossing(ps, a, b);
                std::cout << "crossing " << labels[i] << "/" << labels[i + 1] << ": "
                          << (x ? std::to_string(*x) : std::string("none on grid")) << "\n";
            }
            if (scan.median) {
                std::cout << "threshold estimate: " << *scan.median << " (spread " << scan.spread << ")\n";
            } else {
                std::cout << "threshold estimate: none\n";
            }
            if (!scan.diagnostic.empty()) {
                std::cout << "note: " << scan.diagnostic << "\n";
            }
            return 0;
        }

        if (leaf == mc_run) {
            StabilizerCode code = build_code(mc_code);
            Sector s = parse_sector(mc_sector);
            CodeSector cs(code, s);
            WegnerModel model(cs.theta());
            double beta = mc_beta > 0 ? mc_beta : nishimori_beta(mc_p);
            std::optional<size_t> burn;
            if (mc_burn >= 0) {
                burn = size_t(mc_burn);
            }
            std::vector<EnergyCv> per(mc_samples);
            std::vector<BinaryVector> errors(mc_samples);
            for (size_t i = 0; i < mc_samples; i++) {
                std::mt19937_64 rng(stream_seed(mc_seed, i, 0));
                errors[i] = sample_error({mc_p}, cs.num_bonds(), rng);
            }
            parallel_for(mc_samples, g.threads, [&](size_t i) {
                per[i] = estimate_energy_and_cv(model, errors[i], beta, mc_sweeps, stream_seed(mc_seed, i, 1), burn);
            });

            std::string path = resolve_output(g, mc_out);
            std::ofstream out(path);
            Header h{command, effective, mc_seed, {describe(code, 4)}};
            h.write(out);
            out << "sample,error_weight,beta,energy,energy_stderr,cv,cv_stderr,tau,burn_in\n";
            out << std::setprecision(10);
            double cv_sum = 0, cv_sq = 0, u_sum = 0;
            for (size_t i = 0; i < mc_samples; i++) {
                const EnergyCv &r = per[i];
                out << i << ',' << errors[i].weight() << ',' << beta << ',' << r.energy.mean << ','
                    << r.energy.stderr << ',' << r.specific_heat.mean << ',' << r.specific_heat.stderr << ','
                    << r.energy.tau << ',' << r.energy.burn_in << '\n';
                cv_sum += r.specific_heat.mean;
                cv_sq += r.specific_heat.mean * r.specific_heat.mean;
                u_sum += r.energy.mean;
            }
            double n = double(mc_samples);
            double cv_mean = cv_sum / n;
            double cv_err = mc_samples > 1 ? std::sqrt(std::max(0.0, cv_sq / n - cv_mean * cv_mean) / (n - 1)) : 0;
            double bound = double(cs.num_bonds()) * beta * beta / (std::cosh(beta) * std::cosh(beta));
            std::cout << "wrote " << path << "\n";
            std::cout << std::setprecision(6) << "[U] = " << u_sum / n << "\n";
            std::cout << "[C] = " << cv_mean << " +- " << cv_err << "  (bound N_b beta^2/cosh^2 beta = " << bound
                      << ")\n";
            if (!mc_trace.empty()) {
                size_t b = burn ? *burn : pilot_burn_in(model, errors[0], beta, stream_seed(mc_seed, 0, 2));
                McRun run = metropolis_run(model, errors[0], beta, mc_sweeps, b, stream_seed(mc_seed, 0, 1));
                std::string tpath = resolve_output(g, mc_trace);
                std::ofstream t(tpath);
                h.write(t);
                run.trace.write_csv(t);
                std::cout << "wrote " << tpath << "\n";
            }
            return 0;
        }
    } catch (const UsageError &e) {
        std::cerr << "qecspin: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "qecspin: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "qecspin: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded &e) {
        std::cerr << "qecspin: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "qecspin: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
