#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "splitlab/error.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab::cli {

enum class Mode { Local, Global, Simulate, Bounds, WaveSpeed, Bracket };

inline std::string_view to_string(Mode m) noexcept {
    switch (m) {
        case Mode::Local: return "local-error";
        case Mode::Global: return "global-error";
        case Mode::Simulate: return "simulate";
        case Mode::Bounds: return "bounds";
        case Mode::WaveSpeed: return "wave-speed";
        case Mode::Bracket: return "bracket";
    }
    return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
    for (Mode m : {Mode::Local, Mode::Global, Mode::Simulate, Mode::Bounds, Mode::WaveSpeed, Mode::Bracket})
        if (to_string(m) == s) return m;
    if (s == "local") return Mode::Local;
    if (s == "global") return Mode::Global;
    return std::nullopt;
}

/// Every setting of a run. Optional members are filled with mode-dependent
/// defaults by resolve().
struct StudyConfig {
    Mode mode = Mode::Local;

    double k = 1.0;
    double D = 1.0;
    bool kD_unit = false;
    double x0 = -14.0;
    double x_min = -70.0;
    double x_max = 70.0;
    std::size_t n_points = 5001;

    std::optional<std::vector<SchemeId>> schemes;
    std::vector<double> dt_list;
    std::optional<double> dt_min;
    std::optional<double> dt_max;
    std::optional<std::size_t> count;
    bool log_spaced = true;
    std::optional<double> dt;
    std::optional<double> t_final;
    double snapshot_every = 5.0;
    double level = 0.5;

    double tol = 1e-10;
    double ref_tol = 1e-12;
    std::size_t max_substeps = 200000;

    std::string output;

    bool D_set = false;

    /// Where each key was last set ("line 4", "--dt-max"); used in error messages.
    std::map<std::string, std::string> sources;

    std::string source_of(const std::string& key) const {
        const auto it = sources.find(key);
        return it == sources.end() ? "default" : it->second;
    }
};

/// Keys accepted in config files; flags use the same names with '_' as '-'.
inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "mode",    "k",     "D",      "kD_unit",    "x0",  "x_min",   "x_max",          "n_points",
        "schemes", "scheme", "dt_list", "dt_min",   "dt_max", "count", "log_spaced",     "dt",
        "t_final", "snapshot_every", "level", "tol", "ref_tol", "max_substeps", "output"};
    return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] inline void fail(const std::string& where, const std::string& key, const std::string& what) {
    throw InvalidArgument(where + ": key '" + key + "': " + what);
}

inline double to_real(const std::string& v, const std::string& where, const std::string& key) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out)) fail(where, key, "expected a real number, got '" + v + "'");
    return out;
}

inline std::size_t to_count(const std::string& v, const std::string& where, const std::string& key) {
    std::size_t out = 0;
    const char* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) fail(where, key, "expected a non-negative integer, got '" + v + "'");
    return out;
}

inline bool to_bool(const std::string& v, const std::string& where, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    fail(where, key, "expected true or false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace detail

/// Applies one key/value pair. `where` names the source ("line 3", "--dt-min").
inline void apply_setting(StudyConfig& cfg, const std::string& key, const std::string& raw, const std::string& where) {
    using namespace detail;
    const std::string value = trim(raw);
    if (value.empty()) fail(where, key, "missing value");
    cfg.sources[key == "scheme" ? "schemes" : key] = where;
    if (key == "mode") {
        const auto m = parse_mode(value);
        if (!m) fail(where, key, "unknown mode '" + value + "'");
        cfg.mode = *m;
    } else if (key == "k") {
        cfg.k = to_real(value, where, key);
    } else if (key == "D") {
        cfg.D = to_real(value, where, key);
        cfg.D_set = true;
    } else if (key == "kD_unit") {
        cfg.kD_unit = to_bool(value, where, key);
    } else if (key == "x0") {
        cfg.x0 = to_real(value, where, key);
    } else if (key == "x_min") {
        cfg.x_min = to_real(value, where, key);
    } else if (key == "x_max") {
        cfg.x_max = to_real(value, where, key);
    } else if (key == "n_points") {
        cfg.n_points = to_count(value, where, key);
    } else if (key == "schemes" || key == "scheme") {
        std::vector<SchemeId> s;
        for (const std::string& tag : split_list(value)) {
            try {
                s.push_back(parse_scheme(tag));
            } catch (const InvalidArgument& e) {
                fail(where, key, e.what());
            }
        }
        cfg.schemes = std::move(s);
    } else if (key == "dt_list") {
        cfg.dt_list.clear();
        for (const std::string& item : split_list(value)) cfg.dt_list.push_back(to_real(item, where, key));
    } else if (key == "dt_min") {
        cfg.dt_min = to_real(value, where, key);
    } else if (key == "dt_max") {
        cfg.dt_max = to_real(value, where, key);
    } else if (key == "count") {
        cfg.count = to_count(value, where, key);
    } else if (key == "log_spaced") {
        cfg.log_spaced = to_bool(value, where, key);
    } else if (key == "dt") {
        cfg.dt = to_real(value, where, key);
    } else if (key == "t_final") {
        cfg.t_final = to_real(value, where, key);
    } else if (key == "snapshot_every") {
        cfg.snapshot_every = to_real(value, where, key);
    } else if (key == "level") {
        cfg.level = to_real(value, where, key);
    } else if (key == "tol") {
        cfg.tol = to_real(value, where, key);
    } else if (key == "ref_tol") {
        cfg.ref_tol = to_real(value, where, key);
    } else if (key == "max_substeps") {
        cfg.max_substeps = to_count(value, where, key);
    } else if (key == "output") {
        cfg.output = value;
    } else {
        throw InvalidArgument(where + ": unknown key '" + key + "'");
    }
}

/// Reads `key = value` lines into cfg without the final validation pass.
inline void apply_config_text(StudyConfig& cfg, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw InvalidArgument(where + ": expected 'key = value', got '" + body + "'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        if (key.empty()) throw InvalidArgument(where + ": missing key before '='");
        apply_setting(cfg, key, body.substr(eq + 1), where);
    }
}

namespace detail {

inline std::vector<double> spaced_steps(double lo, double hi, std::size_t n, bool log_spaced) {
    if (n == 1) return {lo};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = log_spaced ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo))) : lo + s * (hi - lo);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace detail

/// Validates every field and fills mode-dependent defaults.
inline StudyConfig resolve(StudyConfig cfg) {
    const auto fail = [&cfg](const std::string& key, const std::string& what) {
        detail::fail(cfg.source_of(key), key, what);
    };
    if (!(cfg.k > 0.0)) fail("k", "must be > 0");
    if (cfg.kD_unit) {
        if (cfg.D_set && std::abs(cfg.D * cfg.k - 1.0) > 1e-12) fail("D", "conflicts with kD_unit = true");
        cfg.D = 1.0 / cfg.k;
    }
    if (!(cfg.D > 0.0)) fail("D", "must be > 0");
    if (!(cfg.x_max > cfg.x_min)) fail("x_max", "must exceed x_min");
    if (cfg.n_points < 3) fail("n_points", "must be >= 3");
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) fail("tol", "must lie in (0, 1)");
    if (!(cfg.ref_tol > 0.0 && cfg.ref_tol < 1.0)) fail("ref_tol", "must lie in (0, 1)");
    if ((cfg.mode == Mode::Local || cfg.mode == Mode::Global) && cfg.ref_tol > cfg.tol / 100.0)
        fail("ref_tol", "must be at most tol / 100");
    if (cfg.max_substeps < 1 || cfg.max_substeps > 1000000000) fail("max_substeps", "must lie in [1, 1e9]");
    if (!(cfg.snapshot_every > 0.0)) fail("snapshot_every", "must be > 0");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) fail("level", "must lie in (0, 1)");

    if (!cfg.schemes) {
        if (cfg.mode == Mode::Global || cfg.mode == Mode::Simulate)
            cfg.schemes = std::vector<SchemeId>{SchemeId::S2};
        else
            cfg.schemes = std::vector<SchemeId>(kAllSchemes.begin(), kAllSchemes.end());
    }
    if (cfg.schemes->empty()) fail("schemes", "must name at least one scheme");
    if (cfg.mode == Mode::Simulate && cfg.schemes->size() != 1) fail("schemes", "simulate takes exactly one scheme");

    if (!cfg.t_final) {
        if (cfg.mode == Mode::Simulate || cfg.mode == Mode::WaveSpeed)
            cfg.t_final = 45.0;
        else
            cfg.t_final = cfg.k == 1.0 ? 45.0 : 50.0 / cfg.k;
    }
    if (!(*cfg.t_final > 0.0)) fail("t_final", "must be > 0");
    if (!cfg.dt) cfg.dt = 0.05;
    if (!(*cfg.dt > 0.0)) fail("dt", "must be > 0");

    const bool range_given = cfg.dt_min || cfg.dt_max || cfg.count;
    if (!cfg.dt_list.empty() && range_given) fail("dt_list", "cannot be combined with dt_min/dt_max/count");
    if (cfg.dt_list.empty()) {
        if (cfg.mode == Mode::Global && !range_given) {
            if (cfg.k == 1.0)
                cfg.dt_list = {0.025, 0.05, 0.1, 0.25, 0.5, 1.0};
            else
                for (double n : {100.0, 50.0, 20.0, 10.0, 5.0, 2.0, 1.0}) cfg.dt_list.push_back(*cfg.t_final / n);
        } else {
            const double lo = cfg.dt_min.value_or(1e-4);
            const double hi = cfg.dt_max.value_or(1.0);
            const std::size_t n = cfg.count.value_or(17);
            if (!(lo > 0.0)) fail("dt_min", "must be > 0");
            if (!(hi >= lo)) fail("dt_max", "must be >= dt_min");
            if (n < 1) fail("count", "must be >= 1");
            cfg.dt_list = detail::spaced_steps(lo, hi, n, cfg.log_spaced);
        }
    }
    for (double v : cfg.dt_list)
        if (!(v > 0.0)) fail("dt_list", "entries must be > 0");
    if (cfg.mode == Mode::Global) {
        for (double v : cfg.dt_list) {
            try {
                (void)step_count(*cfg.t_final, v);
            } catch (const InvalidArgument& e) {
                fail("dt_list", e.what());
            }
        }
    }
    if (cfg.mode == Mode::Simulate) {
        try {
            (void)step_count(*cfg.t_final, *cfg.dt);
            (void)step_count(cfg.snapshot_every, *cfg.dt);
        } catch (const InvalidArgument& e) {
            fail("dt", e.what());
        }
    }
    return cfg;
}

/// Parses and validates a config file body.
inline StudyConfig parse_config(std::string_view text) {
    StudyConfig cfg;
    apply_config_text(cfg, text);
    return resolve(std::move(cfg));
}

}  // namespace splitlab::cli
