// io.hpp: run-spec parsing/serialization, CSV output, and run orchestration
//
// Physical quantities are strings carrying a unit: "150 Hz", "2.6 kHz", "1 ms", "692 us",
// "30 G/cm", "1 cm", "1066.7 Hz/G". Counts, populations and seeds are bare numbers.
// Internal units: Hz, ms (schedule), s (tau_m), G/cm, cm, Hz/G.

#pragma once

#include "zeno/harness.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace zeno {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

struct FieldError {
    std::string field;
    std::string message;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<FieldError> errors)
        : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

    const std::vector<FieldError>& errors() const noexcept { return errors_; }

    bool mentions(std::string_view field) const {
        for (const auto& e : errors_)
            if (e.field == field) return true;
        return false;
    }

private:
    static std::string join(const std::vector<FieldError>& errors) {
        std::string out = "invalid run spec:";
        for (const auto& e : errors) out += "\n  " + e.field + ": " + e.message;
        return out;
    }

    std::vector<FieldError> errors_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --------------------------------- run spec ---------------------------------

enum class ScheduleKind { Free, Periodic, PeriodicThenFree, Sweep, Reheat };

inline const char* to_string(ScheduleKind k) noexcept {
    switch (k) {
        case ScheduleKind::Free: return "free";
        case ScheduleKind::Periodic: return "periodic";
        case ScheduleKind::PeriodicThenFree: return "periodic-then-free";
        case ScheduleKind::Sweep: return "sweep";
        case ScheduleKind::Reheat: return "reheat";
    }
    return "?";
}

struct TauGrid {
    double from_ms{0.0};
    double to_ms{0.0};
    int points{0};

    bool operator==(const TauGrid&) const = default;
};

// free: t_stop | periodic: tau, n | periodic-then-free: tau, n, t_stop (end time, ≥ nτ)
// sweep: n, grid | reheat: tau, n_past_qe
struct ScheduleSpec {
    ScheduleKind kind{ScheduleKind::Periodic};
    std::optional<double> tau_ms;
    std::optional<int> n;
    std::optional<double> t_stop_ms;
    std::optional<TauGrid> grid;
    std::optional<int> n_past_qe;

    bool operator==(const ScheduleSpec&) const = default;
};

struct RunSpec {
    SystemConfig system;
    ScheduleSpec schedule;
    Channel channel;
    EngineKind engine{EngineKind::Sector};
    std::string output;
    std::uint64_t seed{0};
    int samples_per_segment{64};

    bool operator==(const RunSpec&) const = default;
};

namespace detail {

using nlohmann::json;

struct UnitTable {
    const char* dimension;
    std::vector<std::pair<std::string_view, double>> units;  // unit -> factor to the internal unit
};

inline const UnitTable kFrequency{"frequency", {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}}};
inline const UnitTable kTimeMs{"time", {{"ms", 1.0}, {"s", 1e3}, {"us", 1e-3}, {"μs", 1e-3}}};
inline const UnitTable kTimeS{"time", {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"μs", 1e-6}}};
inline const UnitTable kGradient{"field gradient", {{"G/cm", 1.0}, {"mT/m", 0.1}, {"T/m", 100.0}}};
inline const UnitTable kLength{"length", {{"cm", 1.0}, {"mm", 0.1}, {"m", 100.0}}};
inline const UnitTable kGyro{"gyromagnetic ratio", {{"Hz/G", 1.0}, {"kHz/G", 1e3}, {"MHz/T", 1e2}}};

// Pairs an error list with the dotted path of the object under inspection.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<FieldError>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {}

    std::string field(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    void error(std::string_view key, std::string message) const { errors_.push_back({field(key), std::move(message)}); }

    bool has(std::string_view key) const { return obj_.contains(std::string(key)); }

    const json* get(std::string_view key, bool required) const {
        auto it = obj_.find(std::string(key));
        if (it == obj_.end()) {
            if (required) error(key, "required field is missing");
            return nullptr;
        }
        return &*it;
    }

    void reject_unknown(std::initializer_list<std::string_view> known) const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            bool ok = false;
            for (auto k : known) ok = ok || it.key() == k;
            if (!ok) error(it.key(), "unknown key");
        }
    }

    std::optional<double> quantity(std::string_view key, const UnitTable& table, bool required) const {
        const json* v = get(key, required);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            error(key, std::string("expected a ") + table.dimension + " string with a unit, e.g. \"" +
                           std::string(table.units.front().first) + "\"");
            return std::nullopt;
        }
        const std::string& text = v->get_ref<const std::string&>();
        double value = 0.0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        while (first < last && *first == ' ') ++first;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || !std::isfinite(value)) {
            error(key, "cannot read a number from \"" + text + "\"");
            return std::nullopt;
        }
        std::string_view unit(ptr, static_cast<std::size_t>(last - ptr));
        while (!unit.empty() && unit.front() == ' ') unit.remove_prefix(1);
        while (!unit.empty() && unit.back() == ' ') unit.remove_suffix(1);
        for (const auto& [name, factor] : table.units)
            if (unit == name) return value * factor;
        std::string allowed;
        for (const auto& u : table.units) allowed += (allowed.empty() ? "" : ", ") + std::string(u.first);
        error(key, "unit \"" + std::string(unit) + "\" is not a " + table.dimension + " unit (" + allowed + ")");
        return std::nullopt;
    }

    std::optional<double> number(std::string_view key, bool required) const {
        const json* v = get(key, required);
        if (!v) return std::nullopt;
        if (!v->is_number()) {
            error(key, "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<long long> integer(std::string_view key, bool required) const {
        const json* v = get(key, required);
        if (!v) return std::nullopt;
        if (!v->is_number_integer()) {
            error(key, "expected an integer");
            return std::nullopt;
        }
        return v->get<long long>();
    }

    std::optional<std::string> string(std::string_view key, bool required) const {
        const json* v = get(key, required);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            error(key, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    template <class E>
    std::optional<E> choice(std::string_view key, const std::map<std::string, E, std::less<>>& options, bool required) const {
        auto s = string(key, required);
        if (!s) return std::nullopt;
        auto it = options.find(*s);
        if (it != options.end()) return it->second;
        std::string allowed;
        for (const auto& o : options) allowed += (allowed.empty() ? "" : ", ") + o.first;
        error(key, "\"" + *s + "\" is not one of " + allowed);
        return std::nullopt;
    }

    std::optional<Reader> object(std::string_view key, bool required) const {
        const json* v = get(key, required);
        if (!v) return std::nullopt;
        if (!v->is_object()) {
            error(key, "expected an object");
            return std::nullopt;
        }
        return Reader(*v, field(key), errors_);
    }

private:
    const json& obj_;
    std::string path_;
    std::vector<FieldError>& errors_;
};

inline const std::map<std::string, Coupling, std::less<>> kCouplings{
    {"xx", Coupling::XX}, {"rw", Coupling::RW}, {"cr", Coupling::CR}, {"iso", Coupling::ISO}};
inline const std::map<std::string, AngularConvention, std::less<>> kConventions{
    {"two_pi", AngularConvention::TwoPi}, {"hz_as_rad", AngularConvention::HzAsRad}};
inline const std::map<std::string, ScheduleKind, std::less<>> kScheduleKinds{
    {"free", ScheduleKind::Free},   {"periodic", ScheduleKind::Periodic}, {"periodic-then-free", ScheduleKind::PeriodicThenFree},
    {"sweep", ScheduleKind::Sweep}, {"reheat", ScheduleKind::Reheat}};
inline const std::map<std::string, ChannelKind, std::less<>> kChannels{
    {"ideal", ChannelKind::Ideal}, {"s_only", ChannelKind::SOnly}, {"gradient", ChannelKind::Gradient}};
inline const std::map<std::string, GradientMode, std::less<>> kGradientModes{
    {"random", GradientMode::Random}, {"fixed", GradientMode::Fixed}};
inline const std::map<std::string, EngineKind, std::less<>> kEngines{
    {"sector", EngineKind::Sector}, {"full", EngineKind::Full}};

template <class E>
std::string name_of(const std::map<std::string, E, std::less<>>& options, E value) {
    for (const auto& [k, v] : options)
        if (v == value) return k;
    return "?";
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
            ++column;
        }
    }
    return {line, column};
}

inline void read_schedule(const Reader& r, ScheduleSpec& s) {
    r.reject_unknown({"kind", "tau", "n", "t_stop", "grid", "n_past_qe"});
    if (auto k = r.choice("kind", kScheduleKinds, true)) s.kind = *k;
    s.tau_ms = r.quantity("tau", kTimeMs, false);
    s.t_stop_ms = r.quantity("t_stop", kTimeMs, false);
    if (auto n = r.integer("n", false)) s.n = static_cast<int>(*n);
    if (auto n = r.integer("n_past_qe", false)) s.n_past_qe = static_cast<int>(*n);
    if (auto g = r.object("grid", false)) {
        g->reject_unknown({"from", "to", "points"});
        TauGrid grid;
        auto from = g->quantity("from", kTimeMs, true);
        auto to = g->quantity("to", kTimeMs, true);
        auto points = g->integer("points", true);
        if (from && to && points) {
            grid = {*from, *to, static_cast<int>(*points)};
            if (!(grid.from_ms > 0.0)) g->error("from", "must be > 0");
            if (!(grid.to_ms > grid.from_ms)) g->error("to", "must exceed grid.from");
            if (grid.points < 2) g->error("points", "must be >= 2");
            s.grid = grid;
        }
    }

    if (s.tau_ms && !(*s.tau_ms > 0.0)) r.error("tau", "must be > 0");
    if (s.n && *s.n < 0) r.error("n", "must be >= 0");
    if (s.n_past_qe && *s.n_past_qe < 0) r.error("n_past_qe", "must be >= 0");
    if (s.t_stop_ms && !(*s.t_stop_ms >= 0.0)) r.error("t_stop", "must be >= 0");
    if (r.has("t_stop") && r.has("grid")) r.error("grid", "t_stop and grid are mutually exclusive");

    auto need = [&](bool present, std::string_view key) {
        if (!present) r.error(key, std::string("required for schedule kind ") + to_string(s.kind));
    };
    auto forbid = [&](bool present, std::string_view key) {
        if (present) r.error(key, std::string("not used by schedule kind ") + to_string(s.kind));
    };
    switch (s.kind) {
        case ScheduleKind::Free:
            need(r.has("t_stop"), "t_stop");
            forbid(r.has("tau"), "tau");
            forbid(r.has("n"), "n");
            forbid(r.has("n_past_qe"), "n_past_qe");
            break;
        case ScheduleKind::Periodic:
            need(r.has("tau"), "tau");
            need(r.has("n"), "n");
            forbid(r.has("t_stop"), "t_stop");
            forbid(r.has("n_past_qe"), "n_past_qe");
            break;
        case ScheduleKind::PeriodicThenFree:
            need(r.has("tau"), "tau");
            need(r.has("n"), "n");
            need(r.has("t_stop"), "t_stop");
            forbid(r.has("n_past_qe"), "n_past_qe");
            if (s.tau_ms && s.n && s.t_stop_ms && *s.t_stop_ms < *s.tau_ms * *s.n)
                r.error("t_stop", "must be at least n * tau");
            break;
        case ScheduleKind::Sweep:
            need(r.has("n"), "n");
            need(r.has("grid"), "grid");
            forbid(r.has("tau"), "tau");
            forbid(r.has("n_past_qe"), "n_past_qe");
            break;
        case ScheduleKind::Reheat:
            need(r.has("tau"), "tau");
            need(r.has("n_past_qe"), "n_past_qe");
            forbid(r.has("n"), "n");
            forbid(r.has("t_stop"), "t_stop");
            break;
    }
    if (s.kind != ScheduleKind::Sweep) forbid(r.has("grid"), "grid");
}

inline void read_channel(const Reader& r, Channel& c) {
    r.reject_unknown({"kind", "gradient"});
    if (auto k = r.choice("kind", kChannels, true)) c.kind = *k;
    auto g = r.object("gradient", false);
    if (g && c.kind != ChannelKind::Gradient) r.error("gradient", "only valid with kind \"gradient\"");
    if (!g) return;
    g->reject_unknown({"mode", "max", "min", "sample_length", "tau_m", "gamma_S", "gamma_I", "slices"});
    GradientModel& m = c.gradient;
    if (auto v = g->choice("mode", kGradientModes, false)) m.mode = *v;
    if (auto v = g->quantity("max", kGradient, false)) m.max_gradient = *v;
    if (auto v = g->quantity("min", kGradient, false)) m.min_gradient = *v;
    if (auto v = g->quantity("sample_length", kLength, false)) m.sample_length = *v;
    if (auto v = g->quantity("tau_m", kTimeS, false)) m.tau_m = *v;
    if (auto v = g->quantity("gamma_S", kGyro, false)) m.gamma_S = *v;
    if (auto v = g->quantity("gamma_I", kGyro, false)) m.gamma_I = *v;
    if (auto v = g->integer("slices", false)) m.slices = static_cast<int>(*v);
    if (!(m.max_gradient >= 0.0)) g->error("max", "must be >= 0");
    if (!(m.min_gradient >= 0.0 && m.min_gradient <= m.max_gradient)) g->error("min", "must lie in [0, max]");
    if (!(m.sample_length > 0.0)) g->error("sample_length", "must be > 0");
    if (!(m.tau_m >= 0.0)) g->error("tau_m", "must be >= 0");
    if (m.slices < 2) g->error("slices", "must be >= 2");
}

}  // namespace detail

inline RunSpec parse_runspec(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, column] = detail::line_column(text, byte);
        std::string msg = e.what();
        if (auto p = msg.find("parse error"); p != std::string::npos) {
            if (auto colon = msg.find(": ", p); colon != std::string::npos) msg = msg.substr(colon + 2);
        }
        throw ParseError(line, column, msg);
    }

    std::vector<FieldError> errors;
    if (!doc.is_object()) throw ValidationError(std::vector<FieldError>{{"(root)", "expected a JSON object"}});
    const detail::Reader r(doc, "", errors);
    r.reject_unknown({"N", "J", "omega_S", "omega_I", "eps_S0", "eps_I0", "coupling", "angular_convention", "schedule",
                      "channel", "engine", "output", "seed", "samples_per_segment"});

    RunSpec spec;
    SystemConfig& cfg = spec.system;
    if (auto v = r.integer("N", true)) {
        if (*v < 1) r.error("N", "must be >= 1");
        else if (*v > 512) r.error("N", "must be <= 512");
        else cfg.N = static_cast<int>(*v);
    }
    if (auto v = r.quantity("J", detail::kFrequency, true)) {
        if (!(*v > 0.0)) r.error("J", "must be > 0");
        cfg.J = *v;
    }
    if (auto v = r.quantity("omega_S", detail::kFrequency, true)) {
        if (!(*v >= 0.0)) r.error("omega_S", "must be >= 0");
        cfg.omega_S = *v;
    }
    if (auto v = r.quantity("omega_I", detail::kFrequency, true)) {
        if (!(*v >= 0.0)) r.error("omega_I", "must be >= 0");
        cfg.omega_I = *v;
    }
    if (auto v = r.number("eps_S0", true)) {
        if (!(*v >= 0.0 && *v <= 1.0)) r.error("eps_S0", "must lie in [0, 1]");
        cfg.eps_S0 = *v;
    }
    if (auto v = r.number("eps_I0", true)) {
        if (!(*v >= 0.0 && *v <= 1.0)) r.error("eps_I0", "must lie in [0, 1]");
        cfg.eps_I0 = *v;
    }
    if (auto v = r.choice("coupling", detail::kCouplings, false)) cfg.coupling = *v;
    if (auto v = r.choice("angular_convention", detail::kConventions, false)) cfg.angular = *v;
    if (auto s = r.object("schedule", true)) detail::read_schedule(*s, spec.schedule);
    if (auto c = r.object("channel", false)) detail::read_channel(*c, spec.channel);
    if (auto v = r.choice("engine", detail::kEngines, false)) spec.engine = *v;
    if (auto v = r.string("output", false)) spec.output = *v;
    if (const auto* v = r.get("seed", false)) {
        if (v->is_number_unsigned()) spec.seed = v->get<std::uint64_t>();
        else r.error("seed", "expected a non-negative integer");
    }
    if (auto v = r.integer("samples_per_segment", false)) {
        if (*v < 1) r.error("samples_per_segment", "must be >= 1");
        else spec.samples_per_segment = static_cast<int>(*v);
    }

    if (spec.engine == EngineKind::Sector && spec.channel.kind != ChannelKind::Ideal)
        r.error("engine", "the sector engine supports only the ideal channel");
    if (spec.engine == EngineKind::Full && cfg.N > kFullSpaceMaxN)
        r.error("engine", "the full engine is limited to N <= " + std::to_string(kFullSpaceMaxN));
    if (spec.schedule.kind == ScheduleKind::Sweep && spec.channel.kind == ChannelKind::Gradient &&
        spec.channel.gradient.mode == GradientMode::Fixed)
        r.error("channel.gradient.mode", "fixed gradients are not supported by sweeps");

    if (!errors.empty()) throw ValidationError(std::move(errors));
    spec.channel.gradient.rng_seed = spec.seed;
    return spec;
}

// ------------------------------- serialization -------------------------------

inline std::string format_double(double v, const char* fmt = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

inline std::string to_json(const RunSpec& spec) {
    using detail::json;
    auto q = [](double v, const char* unit) { return format_double(v) + " " + unit; };
    const SystemConfig& cfg = spec.system;
    json doc = json::object();
    doc["N"] = cfg.N;
    doc["J"] = q(cfg.J, "Hz");
    doc["omega_S"] = q(cfg.omega_S, "Hz");
    doc["omega_I"] = q(cfg.omega_I, "Hz");
    doc["eps_S0"] = cfg.eps_S0;
    doc["eps_I0"] = cfg.eps_I0;
    doc["coupling"] = detail::name_of(detail::kCouplings, cfg.coupling);
    doc["angular_convention"] = detail::name_of(detail::kConventions, cfg.angular);

    json s = json::object();
    s["kind"] = to_string(spec.schedule.kind);
    if (spec.schedule.tau_ms) s["tau"] = q(*spec.schedule.tau_ms, "ms");
    if (spec.schedule.n) s["n"] = *spec.schedule.n;
    if (spec.schedule.t_stop_ms) s["t_stop"] = q(*spec.schedule.t_stop_ms, "ms");
    if (spec.schedule.n_past_qe) s["n_past_qe"] = *spec.schedule.n_past_qe;
    if (spec.schedule.grid)
        s["grid"] = {{"from", q(spec.schedule.grid->from_ms, "ms")},
                     {"to", q(spec.schedule.grid->to_ms, "ms")},
                     {"points", spec.schedule.grid->points}};
    doc["schedule"] = s;

    json c = json::object();
    c["kind"] = detail::name_of(detail::kChannels, spec.channel.kind);
    if (spec.channel.kind == ChannelKind::Gradient) {
        const GradientModel& g = spec.channel.gradient;
        c["gradient"] = {{"mode", detail::name_of(detail::kGradientModes, g.mode)},
                         {"max", q(g.max_gradient, "G/cm")},
                         {"min", q(g.min_gradient, "G/cm")},
                         {"sample_length", q(g.sample_length, "cm")},
                         {"tau_m", q(g.tau_m, "s")},
                         {"gamma_S", q(g.gamma_S, "Hz/G")},
                         {"gamma_I", q(g.gamma_I, "Hz/G")},
                         {"slices", g.slices}};
    }
    doc["channel"] = c;
    doc["engine"] = detail::name_of(detail::kEngines, spec.engine);
    if (!spec.output.empty()) doc["output"] = spec.output;
    doc["seed"] = spec.seed;
    doc["samples_per_segment"] = spec.samples_per_segment;
    return doc.dump(2) + "\n";
}

// ------------------------------------ CSV ------------------------------------

inline constexpr const char* kCsvHeader = "t_ms,eps_S,eps_I,pol_S,pol_ratio";

inline std::string format_csv(const Trajectory& traj) {
    if (traj.empty()) throw InvalidArgument("format_csv: trajectory is empty");
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : traj.rows) {
        out += format_double(r.t_ms, "%.12g") + "," + format_double(r.eps_S, "%.12g") + "," +
               format_double(r.eps_I, "%.12g") + "," + format_double(r.pol_S, "%.12g") + "," +
               format_double(r.pol_ratio, "%.12g") + "\n";
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

inline void emit_csv(const Trajectory& traj, const std::string& path) { write_file(path, format_csv(traj)); }

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// -------------------------------- execution ----------------------------------

inline Schedule build_schedule(const ScheduleSpec& s) {
    switch (s.kind) {
        case ScheduleKind::Free: return Schedule::free(s.t_stop_ms.value());
        case ScheduleKind::Periodic: return Schedule::periodic(s.tau_ms.value(), s.n.value());
        case ScheduleKind::PeriodicThenFree: {
            const double tau = s.tau_ms.value();
            const int n = s.n.value();
            return Schedule::periodic_then_free(tau, n, std::max(0.0, s.t_stop_ms.value() - tau * n));
        }
        case ScheduleKind::Sweep:
        case ScheduleKind::Reheat: break;
    }
    throw InvalidArgument("build_schedule: sweep and reheat specs do not map onto a single schedule");
}

// Runs a spec end to end. Sweeps come back with t_ms holding τ.
inline Trajectory execute(const RunSpec& spec, unsigned threads = 1, bool check_physical = false) {
    RunOptions opts;
    opts.samples_per_segment = spec.samples_per_segment;
    opts.check_physical = check_physical;
    Channel channel = spec.channel;
    channel.gradient.rng_seed = spec.seed;
    const ScheduleSpec& s = spec.schedule;
    switch (s.kind) {
        case ScheduleKind::Sweep: {
            const TauGrid& g = s.grid.value();
            return sweep_as_trajectory(spec.system, sweep_tau(spec.system, s.n.value(),
                                                              linear_grid(g.from_ms, g.to_ms, g.points), spec.engine,
                                                              channel, threads));
        }
        case ScheduleKind::Reheat:
            return reheating_probe(spec.system, s.tau_ms.value(), s.n_past_qe.value(), spec.engine, channel, opts)
                .trajectory;
        default: return run(spec.system, build_schedule(s), spec.engine, channel, opts);
    }
}

}  // namespace zeno
