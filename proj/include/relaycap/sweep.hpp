#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "relaycap/bounds.hpp"
#include "relaycap/common.hpp"
#include "relaycap/dpp.hpp"
#include "relaycap/fc.hpp"
#include "relaycap/mmse.hpp"
#include "relaycap/qci.hpp"
#include "relaycap/tci.hpp"

// Sweep orchestration: a flat key=value config describes a cartesian sweep
// over SNR, capacity, and a mode-specific parameter; results stream to CSV.
// Records are deterministic in the seed, so reruns are byte-identical.

namespace relaycap {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepMode {
    kUbSingle,
    kUbTwo,
    kCheckUbSingle,
    kCheckUbTwo,
    kDpp,
    kQci,
    kTci,
    kMmse,
    kFc,
    kFcSweepD,
};

inline const char* mode_name(SweepMode m) {
    switch (m) {
        case SweepMode::kUbSingle: return "ub-single";
        case SweepMode::kUbTwo: return "ub-two";
        case SweepMode::kCheckUbSingle: return "check-ub-single";
        case SweepMode::kCheckUbTwo: return "check-ub-two";
        case SweepMode::kDpp: return "dpp";
        case SweepMode::kQci: return "qci";
        case SweepMode::kTci: return "tci";
        case SweepMode::kMmse: return "mmse";
        case SweepMode::kFc: return "fc";
        case SweepMode::kFcSweepD: return "fc-sweep-d";
    }
    return "?";
}

struct SweepConfig {
    SweepMode mode = SweepMode::kUbSingle;
    std::vector<double> snr_db;
    std::vector<std::pair<double, double>> capacities;  // (c1, c2) per point
    std::int64_t trials = 100000;
    std::uint64_t seed = 42;
    std::vector<double> j_list = {2, 4, 8, 16};
    std::vector<double> s_th_grid;     // default 0:0.1:2
    std::vector<double> d_list;        // default log-spaced 1e-3..1, 12 points
    double v = 100.0;                  // DPP penalty weight
    std::vector<double> c_max_offsets = {0, 4, 8, 12, 16, 20};
    std::int64_t slots = 200000;
    std::string out;
    bool timings = false;  // fill wall_ms with measured times (breaks byte determinism)
};

struct SweepRecord {
    std::string mode;
    double snr_db = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double param = 0.0;
    double rate_bits = 0.0;
    double std_err = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::int64_t wall_ms = 0;
    bool ok = true;  // false -> rate_bits/std_err serialized as nan
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& value, const std::string& key) {
    const std::string v = trim(value);
    if (v.empty()) throw ParseError("empty value for key: " + key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) throw ParseError("invalid number for key: " + key);
    return x;
}

inline std::vector<double> parse_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, key));
    if (out.empty()) throw ParseError("empty list for key: " + key);
    return out;
}

inline SweepMode parse_mode(const std::string& value) {
    for (SweepMode m : {SweepMode::kUbSingle, SweepMode::kUbTwo, SweepMode::kCheckUbSingle,
                        SweepMode::kCheckUbTwo, SweepMode::kDpp, SweepMode::kQci, SweepMode::kTci,
                        SweepMode::kMmse, SweepMode::kFc, SweepMode::kFcSweepD})
        if (value == mode_name(m)) return m;
    throw ParseError("unknown mode: " + value);
}

inline std::string format_g9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

}  // namespace detail

inline SweepConfig parse_config(const std::string& text) {
    SweepConfig cfg;
    bool have_mode = false;
    std::vector<double> capacity, c1_list, c2_list;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got: " + line);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "mode") {
            cfg.mode = detail::parse_mode(value);
            have_mode = true;
        } else if (key == "snr_db") {
            cfg.snr_db = detail::parse_list(value, key);
        } else if (key == "capacity") {
            capacity = detail::parse_list(value, key);
        } else if (key == "c1") {
            c1_list = detail::parse_list(value, key);
        } else if (key == "c2") {
            c2_list = detail::parse_list(value, key);
        } else if (key == "trials") {
            cfg.trials = static_cast<std::int64_t>(detail::parse_number(value, key));
        } else if (key == "seed") {
            const double s = detail::parse_number(value, key);
            if (s < 0.0) throw ParseError("seed must be nonnegative for key: seed");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "j_list") {
            cfg.j_list = detail::parse_list(value, key);
        } else if (key == "s_th_grid") {
            cfg.s_th_grid = detail::parse_list(value, key);
        } else if (key == "d_list") {
            cfg.d_list = detail::parse_list(value, key);
        } else if (key == "v") {
            cfg.v = detail::parse_number(value, key);
        } else if (key == "c_max_offsets") {
            cfg.c_max_offsets = detail::parse_list(value, key);
        } else if (key == "slots") {
            cfg.slots = static_cast<std::int64_t>(detail::parse_number(value, key));
        } else if (key == "out") {
            cfg.out = value;
        } else {
            throw ParseError("unknown key: " + key);
        }
    }
    if (!have_mode) throw ParseError("missing required key: mode");
    if (cfg.snr_db.empty()) throw ParseError("missing required key: snr_db");

    if (!capacity.empty()) {
        if (!c1_list.empty() || !c2_list.empty())
            throw ParseError("key capacity conflicts with keys c1/c2");
        for (double c : capacity) cfg.capacities.emplace_back(c, c);
    } else if (!c1_list.empty() || !c2_list.empty()) {
        if (c1_list.size() != c2_list.size())
            throw ParseError("keys c1 and c2 must list the same number of values");
        for (std::size_t i = 0; i < c1_list.size(); ++i)
            cfg.capacities.emplace_back(c1_list[i], c2_list[i]);
    } else {
        throw ParseError("missing required key: capacity");
    }

    if (cfg.s_th_grid.empty()) cfg.s_th_grid = tci_default_grid();
    if (cfg.d_list.empty()) cfg.d_list = fc_default_d_grid();

    const bool mc_mode = cfg.mode == SweepMode::kCheckUbSingle || cfg.mode == SweepMode::kCheckUbTwo ||
                         cfg.mode == SweepMode::kMmse || cfg.mode == SweepMode::kFc ||
                         cfg.mode == SweepMode::kFcSweepD;
    if (mc_mode && cfg.trials < 2) throw ParseError("trials must be >= 2 for key: trials");
    if (cfg.mode == SweepMode::kDpp && cfg.slots < 1) throw ParseError("slots must be >= 1 for key: slots");
    if (cfg.mode == SweepMode::kDpp && cfg.v <= 0.0) throw ParseError("penalty weight must be > 0 for key: v");
    for (double j : cfg.j_list)
        if (j < 2.0 || j != std::floor(j)) throw ParseError("levels must be integers >= 2 for key: j_list");
    for (double d : cfg.d_list)
        if (!(d > 0.0 && d <= 1.0)) throw ParseError("distortions must lie in (0, 1] for key: d_list");
    return cfg;
}

namespace detail {

// The parameter axis of the cartesian sweep; singleton for modes whose
// parameter is chosen internally (dpp picks c_max, fc picks d).
inline std::vector<double> param_axis(const SweepConfig& cfg) {
    switch (cfg.mode) {
        case SweepMode::kQci: return cfg.j_list;
        case SweepMode::kTci: return cfg.s_th_grid;
        case SweepMode::kFcSweepD: return cfg.d_list;
        default: return {0.0};
    }
}

struct PointResult {
    double param = 0.0;
    double rate = 0.0;
    double std_err = 0.0;
    std::int64_t trials = 0;
};

inline PointResult eval_point(const SweepConfig& cfg, double snr_db, double c1, double c2,
                              double param) {
    NetworkParams p = NetworkParams::from_snr_db(snr_db, c1, c2);
    PointResult out;
    out.param = param;
    switch (cfg.mode) {
        case SweepMode::kUbSingle: {
            out.rate = coop_ub(p.sigma2, p.csum(), Network::kSingleUser).rate;
            break;
        }
        case SweepMode::kUbTwo: {
            out.rate = coop_ub(p.sigma2, p.csum(), Network::kTwoUser).rate;
            break;
        }
        case SweepMode::kCheckUbSingle: {
            const MCEstimate e = check_ub_single(p, cfg.trials, cfg.seed);
            out.rate = e.mean;
            out.std_err = e.std_err;
            out.trials = e.trials;
            break;
        }
        case SweepMode::kCheckUbTwo: {
            const MCEstimate e = check_ub_two(p, cfg.trials, cfg.seed);
            out.rate = e.mean;
            out.std_err = e.std_err;
            out.trials = e.trials;
            break;
        }
        case SweepMode::kDpp: {
            const DppSweepResult s = dpp_sweep_cmax(p, cfg.v, cfg.c_max_offsets, cfg.slots, cfg.seed);
            out.rate = s.best.estimate.mean;
            out.std_err = s.best.estimate.std_err;
            out.trials = s.best.estimate.trials;
            out.param = s.best_c_max;
            break;
        }
        case SweepMode::kQci: {
            out.rate = qci_rate(p, static_cast<int>(param));
            break;
        }
        case SweepMode::kTci: {
            out.rate = tci_rate(p, param);
            break;
        }
        case SweepMode::kMmse: {
            const MCEstimate e = mmse_rate(p, cfg.trials, cfg.seed);
            out.rate = e.mean;
            out.std_err = e.std_err;
            out.trials = e.trials;
            break;
        }
        case SweepMode::kFc: {
            const FcBest b = fc_best_d(p, cfg.d_list, cfg.trials, cfg.seed);
            out.rate = b.rate;
            out.std_err = b.std_err;
            out.trials = cfg.trials;
            out.param = b.d;
            break;
        }
        case SweepMode::kFcSweepD: {
            const MCEstimate e = fc_rate(p, param, cfg.trials, cfg.seed);
            out.rate = e.mean;
            out.std_err = e.std_err;
            out.trials = e.trials;
            break;
        }
    }
    return out;
}

}  // namespace detail

// Evaluates the cartesian product (snr, capacity, param) in config order.
// Isolated numeric failures become error records instead of aborting the sweep.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    std::vector<SweepRecord> records;
    const std::vector<double> axis = detail::param_axis(cfg);
    for (double snr : cfg.snr_db) {
        for (const auto& [c1, c2] : cfg.capacities) {
            for (double param : axis) {
                SweepRecord rec;
                rec.mode = mode_name(cfg.mode);
                rec.snr_db = snr;
                rec.c1 = c1;
                rec.c2 = c2;
                rec.param = param;
                rec.seed = cfg.seed;
                const auto start = std::chrono::steady_clock::now();
                try {
                    const detail::PointResult r = detail::eval_point(cfg, snr, c1, c2, param);
                    rec.param = r.param;
                    rec.rate_bits = r.rate;
                    rec.std_err = r.std_err;
                    rec.trials = r.trials;
                } catch (const std::exception&) {
                    rec.ok = false;
                    rec.rate_bits = kNaN;
                    rec.std_err = kNaN;
                }
                if (cfg.timings) {
                    const auto end = std::chrono::steady_clock::now();
                    rec.wall_ms =
                        std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
                }
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

inline void write_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
    os << "mode,snr_db,c1,c2,param,rate_bits,stderr,trials,seed,wall_ms\n";
    for (const auto& r : records) {
        os << r.mode << ',' << detail::format_g9(r.snr_db) << ',' << detail::format_g9(r.c1) << ','
           << detail::format_g9(r.c2) << ',' << detail::format_g9(r.param) << ','
           << detail::format_g9(r.rate_bits) << ',' << detail::format_g9(r.std_err) << ','
           << r.trials << ',' << r.seed << ',' << r.wall_ms << '\n';
    }
}

inline void write_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csv(records, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

// Post-hoc ordering check: every finite record rate must respect the
// cooperative upper bound of its network at the matched parameters.
inline bool verify_records(const std::vector<SweepRecord>& records, std::ostream& log) {
    bool all_ok = true;
    for (const auto& r : records) {
        if (!r.ok) continue;
        const Network net = (r.mode == "ub-two" || r.mode == "check-ub-two" || r.mode == "fc" ||
                             r.mode == "fc-sweep-d")
                                ? Network::kTwoUser
                                : Network::kSingleUser;
        const double sigma2 = snr_db_to_sigma2(r.snr_db);
        const double bound = coop_ub(sigma2, r.c1 + r.c2, net).rate;
        const double slack = 3.0 * r.std_err + 1e-9;
        const bool ok = r.rate_bits <= bound + slack;
        if (!ok) {
            log << "[verify] VIOLATION " << r.mode << " snr_db=" << r.snr_db << " c=(" << r.c1
                << "," << r.c2 << ") param=" << r.param << " rate=" << r.rate_bits
                << " bound=" << bound << "\n";
            all_ok = false;
        }
    }
    return all_ok;
}

}  // namespace relaycap
