#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dps/checks.hpp"
#include "dps/dynamics.hpp"
#include "dps/lmg.hpp"

namespace dps {

using OrderedJson = nlohmann::ordered_json;

// 17 significant digits: enough for bit-exact double round-trips.
inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Compact form used in file names (husimi_tau6.5.csv).
inline std::string format_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("checksum: cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary keeps \n endings everywhere
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << content;
}

// Grid CSV: header mu,nu,value; row-major with mu ascending, then nu.
inline void write_grid_csv(const std::filesystem::path& path, const RealGrid& grid) {
    const int l = half_side(grid.n);
    std::string out = "mu,nu,value\n";
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu)
            out += std::to_string(mu) + "," + std::to_string(nu) + "," +
                   format_g17(grid.at(mu, nu)) + "\n";
    write_text_file(path, out);
}

inline void write_series_csv(const std::filesystem::path& path, const ScalarSeries& s) {
    std::string out = "tau,value\n";
    for (std::size_t k = 0; k < s.taus.size(); ++k)
        out += format_g17(s.taus[k]) + "," + format_g17(s.values[k]) + "\n";
    write_text_file(path, out);
}

inline void write_profile_csv(const std::filesystem::path& path, const AngleProfile& p) {
    std::string out = "phi,V,Minv\n";
    for (std::size_t k = 0; k < p.phi.size(); ++k)
        out += format_g17(p.phi[k]) + "," + format_g17(p.v[k]) + "," + format_g17(p.minv[k]) +
               "\n";
    write_text_file(path, out);
}

inline OrderedJson spectrum_json(const LMGSpectrum& spec) {
    OrderedJson j;
    j["np"] = spec.np;
    j["chi"] = spec.chi;
    j["energies"] = spec.values;
    j["parities"] = spec.parity;
    j["gap"] = spec.gap();
    return j;
}

inline OrderedJson gap_json(const GapEstimate& g) {
    OrderedJson j;
    j["method"] = g.method;
    j["delta"] = g.delta;
    j["period"] = g.period;
    j["reference_delta"] = g.reference_delta;
    j["percent_error"] = g.percent_error;
    j["peak_times"] = g.peak_times;
    return j;
}

inline OrderedJson barrier_json(const BarrierReport& rep, const LMGSpectrum& spec) {
    OrderedJson j;
    j["has_barrier"] = rep.has_barrier;
    j["barrier_height"] = rep.barrier_height;
    j["well_depth"] = rep.well_depth;
    j["phi_star"] = rep.phi_star;
    j["levels_below_barrier"] = rep.levels_below_barrier;
    j["E0"] = spec.values.at(0);
    j["E1"] = spec.values.at(1);
    return j;
}

inline OrderedJson checks_json(const std::vector<CheckResult>& checks) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& c : checks) {
        OrderedJson j;
        j["name"] = c.name;
        j["measured"] = c.measured;
        j["bound"] = c.bound;
        j["pass"] = c.pass;
        arr.push_back(std::move(j));
    }
    return arr;
}

// Plain-text dump of a kernel table: one line per matrix entry,
// "s mu nu row col re im".
inline void write_kernel_dump(const std::filesystem::path& path, const KernelTable& table) {
    const int l = half_side(table.n);
    std::string out;
    for (double s : table.s_values)
        for (int mu = -l; mu <= l; ++mu)
            for (int nu = -l; nu <= l; ++nu) {
                const ComplexMatrix& t = table.T(s, mu, nu);
                for (int r = 0; r < table.n; ++r)
                    for (int c = 0; c < table.n; ++c)
                        out += format_short(s) + " " + std::to_string(mu) + " " +
                               std::to_string(nu) + " " + std::to_string(r) + " " +
                               std::to_string(c) + " " + format_g17(t(r, c).real()) + " " +
                               format_g17(t(r, c).imag()) + "\n";
            }
    write_text_file(path, out);
}

// Run manifest: resolved configuration plus a checksum for every file the
// command emitted. Wall time is informational; the checksums are the
// reproducibility contract.
class Manifest {
public:
    Manifest(std::string command, OrderedJson config)
        : command_(std::move(command)), config_(std::move(config)) {}

    void add_file(const std::filesystem::path& path) {
        files_.emplace_back(path.filename().string(), file_checksum(path));
    }

    void add_note(const std::string& key, OrderedJson value) { notes_[key] = std::move(value); }

    void write(const std::filesystem::path& dir, double wall_seconds) const {
        OrderedJson j;
        j["command"] = command_;
        j["config"] = config_;
        j["version"] = kVersion;
        j["wall_time_seconds"] = wall_seconds;
        if (!notes_.empty()) j["report"] = notes_;
        OrderedJson files = OrderedJson::array();
        for (const auto& [name, sum] : files_) {
            OrderedJson f;
            f["path"] = name;
            f["checksum"] = sum;
            files.push_back(std::move(f));
        }
        j["files"] = files;
        write_text_file(dir / "manifest.json", j.dump(2) + "\n");
    }

private:
    std::string command_;
    OrderedJson config_;
    OrderedJson notes_;
    std::vector<std::pair<std::string, std::string>> files_;
};

} // namespace dps
