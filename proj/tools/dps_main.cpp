// Command-line front end: spectra, Husimi snapshots, entropy/correlation
// series, gap estimates, angle potentials, and the cross-module validation
// suite. Every command resolves one RunConfig (JSON file overridden by
// flags) and emits a manifest with a checksum per output file.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dps/checks.hpp"
#include "dps/dynamics.hpp"
#include "dps/io.hpp"

namespace fs = std::filesystem;
using namespace dps;

namespace {

struct RunConfig {
    int np = 20;
    double chi = 1.5;
    double phase = 0.0;
    int state_i = 0;
    int state_j = 1;
    std::vector<double> s_set{-1.0, 0.0, 1.0};
    double t0 = 0.0;
    double tmax = 60.0;
    double dt = 0.05;
    std::vector<double> snapshots{0.0, 6.5, 15.9, 25.3};
    std::string functional = "all";
    int samples = 721;
    double threshold = 0.8;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = "out";
    Tolerances tol{};
};

const std::map<std::string, double Tolerances::*>& tolerance_fields() {
    static const std::map<std::string, double Tolerances::*> m{
        {"eig_residual_rel", &Tolerances::eig_residual_rel},
        {"hermitian_input", &Tolerances::hermitian_input},
        {"eig_trace_rel", &Tolerances::eig_trace_rel},
        {"kernel_trace", &Tolerances::kernel_trace},
        {"kernel_hermitian", &Tolerances::kernel_hermitian},
        {"kernel_psd_floor", &Tolerances::kernel_psd_floor},
        {"kernel_resolution", &Tolerances::kernel_resolution},
        {"kernel_real_residue", &Tolerances::kernel_real_residue},
        {"dual_path", &Tolerances::dual_path},
        {"grid_norm", &Tolerances::grid_norm},
        {"norm_check", &Tolerances::norm_check},
        {"entropy_clamp", &Tolerances::entropy_clamp},
        {"negative_mass", &Tolerances::negative_mass},
        {"mirror_symmetry", &Tolerances::mirror_symmetry},
        {"parity_purity", &Tolerances::parity_purity},
        {"conservation", &Tolerances::conservation},
    };
    return m;
}

void overlay_json(RunConfig& cfg, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParams("config: cannot read " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidParams(std::string("config: invalid JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "np") cfg.np = value.get<int>();
        else if (key == "chi") cfg.chi = value.get<double>();
        else if (key == "phase") cfg.phase = value.get<double>();
        else if (key == "state_i") cfg.state_i = value.get<int>();
        else if (key == "state_j") cfg.state_j = value.get<int>();
        else if (key == "s_set") cfg.s_set = value.get<std::vector<double>>();
        else if (key == "t0") cfg.t0 = value.get<double>();
        else if (key == "tmax") cfg.tmax = value.get<double>();
        else if (key == "dt") cfg.dt = value.get<double>();
        else if (key == "snapshots") cfg.snapshots = value.get<std::vector<double>>();
        else if (key == "functional") cfg.functional = value.get<std::string>();
        else if (key == "samples") cfg.samples = value.get<int>();
        else if (key == "threshold") cfg.threshold = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "threads") cfg.threads = value.get<unsigned>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "tolerances") {
            for (const auto& [tkey, tval] : value.items()) {
                auto it = tolerance_fields().find(tkey);
                if (it == tolerance_fields().end())
                    throw InvalidParams("config: unknown tolerance '" + tkey + "'");
                cfg.tol.*(it->second) = tval.get<double>();
            }
        } else {
            throw InvalidParams("config: unknown key '" + key + "'");
        }
    }
}

OrderedJson config_json(const RunConfig& cfg) {
    OrderedJson j;
    j["np"] = cfg.np;
    j["chi"] = cfg.chi;
    j["phase"] = cfg.phase;
    j["state_i"] = cfg.state_i;
    j["state_j"] = cfg.state_j;
    j["s_set"] = cfg.s_set;
    j["t0"] = cfg.t0;
    j["tmax"] = cfg.tmax;
    j["dt"] = cfg.dt;
    j["snapshots"] = cfg.snapshots;
    j["functional"] = cfg.functional;
    j["samples"] = cfg.samples;
    j["threshold"] = cfg.threshold;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["out"] = cfg.out;
    OrderedJson tols;
    for (const auto& [name, member] : tolerance_fields()) tols[name] = cfg.tol.*member;
    j["tolerances"] = tols;
    return j;
}

std::vector<SeriesKind> requested_kinds(const std::string& functional) {
    if (functional == "all")
        return {SeriesKind::eigen_entropy, SeriesKind::mutual_correlation};
    if (functional == "eigen-entropy") return {SeriesKind::eigen_entropy};
    if (functional == "mutual-correlation") return {SeriesKind::mutual_correlation};
    if (functional == "joint-entropy") return {SeriesKind::joint_entropy};
    throw InvalidParams("functional must be eigen-entropy, mutual-correlation, joint-entropy "
                        "or all");
}

KernelTable table_for(const RunConfig& cfg) {
    bool has_husimi = false;
    for (double s : cfg.s_set) has_husimi = has_husimi || s == -1.0;
    if (!has_husimi) throw InvalidParams("s_set must contain -1 for Husimi-based commands");
    return build_kernel_table(cfg.np + 1, cfg.s_set);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int cmd_spectrum(const RunConfig& cfg) {
    Timer timer;
    const auto spec = spectrum(LMGParams{cfg.np, cfg.chi}, cfg.tol);
    const fs::path dir(cfg.out);
    write_text_file(dir / "spectrum.json", spectrum_json(spec).dump(2) + "\n");
    Manifest manifest("spectrum", config_json(cfg));
    manifest.add_file(dir / "spectrum.json");
    manifest.write(dir, timer.seconds());
    std::printf("spectrum: N=%d gap=%s -> %s\n", spec.dim(), format_short(spec.gap()).c_str(),
                (dir / "spectrum.json").c_str());
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    Timer timer;
    const auto spec = spectrum(LMGParams{cfg.np, cfg.chi}, cfg.tol);
    const auto table = table_for(cfg);
    const auto rho0 = initial_state(spec, cfg.state_i, cfg.state_j, cfg.phase);
    const auto grids = husimi_snapshots(rho0, spec, table, cfg.snapshots);

    const fs::path dir(cfg.out);
    Manifest manifest("evolve", config_json(cfg));
    OrderedJson snaps = OrderedJson::array();
    for (std::size_t k = 0; k < grids.size(); ++k) {
        const fs::path file = dir / ("husimi_tau" + format_short(cfg.snapshots[k]) + ".csv");
        write_grid_csv(file, grids[k]);
        manifest.add_file(file);
        const AngleHalfMasses m = angle_half_masses(grids[k]);
        OrderedJson s;
        s["tau"] = cfg.snapshots[k];
        s["negative_mass"] = m.negative;
        s["zero_mass"] = m.zero;
        s["positive_mass"] = m.positive;
        s["localized"] = std::max(m.negative, m.positive) >= cfg.threshold;
        snaps.push_back(std::move(s));
        std::printf("evolve: tau=%s neg=%.6f pos=%.6f -> %s\n",
                    format_short(cfg.snapshots[k]).c_str(), m.negative, m.positive,
                    file.c_str());
    }
    manifest.add_note("snapshots", snaps);
    manifest.write(dir, timer.seconds());
    return 0;
}

int run_series(const RunConfig& cfg, bool with_gap) {
    Timer timer;
    const auto spec = spectrum(LMGParams{cfg.np, cfg.chi}, cfg.tol);
    const auto table = table_for(cfg);
    const auto rho0 = initial_state(spec, cfg.state_i, cfg.state_j, cfg.phase);
    const TimeGrid grid{cfg.t0, cfg.tmax, cfg.dt};
    const auto kinds = requested_kinds(cfg.functional);
    const auto all = series_multi(rho0, spec, table, grid, kinds, cfg.tol, cfg.threads);

    // estimate first: an undersampled series must fail before any file lands
    std::vector<GapEstimate> gaps;
    if (with_gap)
        for (const auto& s : all) gaps.push_back(estimate_gap(s, spec, cfg.tol));

    const fs::path dir(cfg.out);
    Manifest manifest(with_gap ? "gap" : "series", config_json(cfg));
    for (const auto& s : all) {
        const fs::path file = dir / (std::string("series_") + series_label(s.kind) + ".csv");
        write_series_csv(file, s);
        manifest.add_file(file);
        std::printf("%s: %zu samples -> %s\n", series_label(s.kind), s.taus.size(),
                    file.c_str());
    }
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        const GapEstimate& g = gaps[k];
        const fs::path file = dir / (std::string("gap_") + series_label(all[k].kind) + ".json");
        write_text_file(file, gap_json(g).dump(2) + "\n");
        manifest.add_file(file);
        std::printf("gap[%s]: delta=%s period=%s error=%.4f%%\n", g.method.c_str(),
                    format_short(g.delta).c_str(), format_short(g.period).c_str(),
                    g.percent_error);
    }
    manifest.write(dir, timer.seconds());
    return 0;
}

int cmd_potential(const RunConfig& cfg) {
    Timer timer;
    const LMGParams p{cfg.np, cfg.chi};
    const auto spec = spectrum(p, cfg.tol);
    const auto prof = potential_profile(p, cfg.samples);
    const auto rep = barrier_report(prof, spec);

    const fs::path dir(cfg.out);
    write_profile_csv(dir / "potential.csv", prof);
    write_text_file(dir / "barrier.json", barrier_json(rep, spec).dump(2) + "\n");
    Manifest manifest("potential", config_json(cfg));
    manifest.add_file(dir / "potential.csv");
    manifest.add_file(dir / "barrier.json");
    manifest.write(dir, timer.seconds());
    std::printf("potential: V(0)=%s wells at phi*=%s, %zu levels below barrier\n",
                format_short(rep.barrier_height).c_str(), format_short(rep.phi_star).c_str(),
                rep.levels_below_barrier.size());
    return 0;
}

int cmd_validate(const RunConfig& cfg, const std::vector<int>& dims, int random_states,
                 bool flip_theta, bool dump_kernels) {
    Timer timer;
    ValidationOptions opt;
    opt.seed = cfg.seed;
    if (!dims.empty()) opt.dims = dims;
    opt.random_states = random_states;
    opt.convention = flip_theta ? ThetaConvention::two_nz : ThetaConvention::two_pi_nz;

    const auto checks = run_validation_suite(opt, cfg.tol);
    bool all_pass = true;
    std::printf("%-42s %13s %13s  %s\n", "check", "measured", "bound", "result");
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        std::printf("%-42s %13.4e %13.4e  %s\n", c.name.c_str(), c.measured, c.bound,
                    c.pass ? "PASS" : "FAIL");
    }

    const fs::path dir(cfg.out);
    OrderedJson report;
    report["seed"] = opt.seed;
    report["dims"] = opt.dims;
    report["random_states"] = opt.random_states;
    report["theta_convention"] = flip_theta ? "two_nz" : "two_pi_nz";
    report["checks"] = checks_json(checks);
    report["all_pass"] = all_pass;
    write_text_file(dir / "validation_report.json", report.dump(2) + "\n");

    Manifest manifest("validate", config_json(cfg));
    manifest.add_file(dir / "validation_report.json");
    if (dump_kernels) {
        for (int n : opt.dims) {
            if (n > 9) continue;  // the dump is a debugging aid at desk dimensions
            const fs::path file = dir / ("kernels_N" + std::to_string(n) + ".txt");
            write_kernel_dump(file, build_kernel_table(n, {-1.0, 0.0, 1.0}, opt.convention));
            manifest.add_file(file);
        }
    }
    manifest.write(dir, timer.seconds());
    std::printf("validate: %s (%zu checks) -> %s\n", all_pass ? "all passed" : "FAILURES",
                checks.size(), (dir / "validation_report.json").c_str());
    return all_pass ? 0 : 1;
}

// Options bound to flags land in `flags`; after parsing, explicit flags are
// re-applied on top of the config file so the precedence is flags > file >
// defaults.
struct OptionBinding {
    CLI::Option* option;
    std::function<void(RunConfig&, const RunConfig&)> apply;
};

void add_common_options(CLI::App* sub, RunConfig& flags, std::vector<OptionBinding>& binds,
                        std::string& config_path) {
    sub->add_option("--config", config_path, "JSON config file (flags override it)");
    auto bind = [&](CLI::Option* opt, auto member) {
        binds.push_back({opt, [member](RunConfig& dst, const RunConfig& src) {
                             dst.*member = src.*member;
                         }});
    };
    bind(sub->add_option("--np", flags.np, "particle number (even)"), &RunConfig::np);
    bind(sub->add_option("--chi", flags.chi, "scaled coupling"), &RunConfig::chi);
    bind(sub->add_option("--phase", flags.phase, "relative phase of the initial combination"),
         &RunConfig::phase);
    bind(sub->add_option("--state-i", flags.state_i, "lower eigenstate index"),
         &RunConfig::state_i);
    bind(sub->add_option("--state-j", flags.state_j, "upper eigenstate index"),
         &RunConfig::state_j);
    bind(sub->add_option("--s-set", flags.s_set, "kernel s values")->delimiter(','),
         &RunConfig::s_set);
    bind(sub->add_option("--t0", flags.t0, "series start time"), &RunConfig::t0);
    bind(sub->add_option("--tmax", flags.tmax, "series end time"), &RunConfig::tmax);
    bind(sub->add_option("--dt", flags.dt, "series time step"), &RunConfig::dt);
    bind(sub->add_option("--snapshots", flags.snapshots, "snapshot times")->delimiter(','),
         &RunConfig::snapshots);
    bind(sub->add_option("--functional", flags.functional,
                         "eigen-entropy | mutual-correlation | joint-entropy | all"),
         &RunConfig::functional);
    bind(sub->add_option("--samples", flags.samples, "angle profile sample count"),
         &RunConfig::samples);
    bind(sub->add_option("--threshold", flags.threshold, "one-sided localization threshold"),
         &RunConfig::threshold);
    bind(sub->add_option("--seed", flags.seed, "seed for randomized validation"),
         &RunConfig::seed);
    bind(sub->add_option("--threads", flags.threads, "worker cap for series evaluation"),
         &RunConfig::threads);
    bind(sub->add_option("--out", flags.out, "output directory"), &RunConfig::out);
}

RunConfig resolve(const RunConfig& flags, const std::vector<OptionBinding>& binds,
                  const std::string& config_path) {
    RunConfig cfg;
    if (!config_path.empty()) overlay_json(cfg, config_path);
    for (const auto& b : binds)
        if (b.option->count() > 0) b.apply(cfg, flags);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete quasiprobability toolkit for the LMG model"};
    app.require_subcommand(1);

    struct SubState {
        CLI::App* sub = nullptr;
        RunConfig flags;
        std::vector<OptionBinding> binds;
        std::string config_path;
    };
    std::map<std::string, SubState> subs;
    for (const char* name : {"spectrum", "evolve", "series", "gap", "potential", "validate"}) {
        SubState& st = subs[name];
        st.sub = app.add_subcommand(name, "");
    }
    subs["spectrum"].sub->description("diagonalize the model and write the spectrum JSON");
    subs["evolve"].sub->description("write Husimi grid CSVs at the snapshot times");
    subs["series"].sub->description("write entropy/correlation time-series CSVs");
    subs["gap"].sub->description("series CSVs plus a gap JSON per functional");
    subs["potential"].sub->description("angle potential / effective mass profile and barrier report");
    subs["validate"].sub->description("run the cross-module invariant suite");
    for (auto& [name, st] : subs) add_common_options(st.sub, st.flags, st.binds, st.config_path);

    std::vector<int> val_dims;
    int val_random_states = 25;
    bool flip_theta = false;
    bool dump_kernels = false;
    subs["validate"].sub->add_option("--dims", val_dims, "dimensions to check")->delimiter(',');
    subs["validate"].sub->add_option("--random-states", val_random_states,
                                     "random density matrices per dimension");
    subs["validate"].sub->add_flag("--flip-theta-convention", flip_theta,
                                   "debug: build kernels with the alternate theta convention");
    subs["validate"].sub->add_flag("--dump-kernels", dump_kernels,
                                   "write plain-text kernel tables for small dimensions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [name, st] : subs) {
            if (!st.sub->parsed()) continue;
            const RunConfig cfg = resolve(st.flags, st.binds, st.config_path);
            if (name == "spectrum") return cmd_spectrum(cfg);
            if (name == "evolve") return cmd_evolve(cfg);
            if (name == "series") return run_series(cfg, false);
            if (name == "gap") return run_series(cfg, true);
            if (name == "potential") return cmd_potential(cfg);
            if (name == "validate")
                return cmd_validate(cfg, val_dims, val_random_states, flip_theta, dump_kernels);
        }
        return 2;
    } catch (const TooFewPeaks& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const InvalidParams& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const EvenDimension& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IndexOutOfRange& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 3;
    }
}
