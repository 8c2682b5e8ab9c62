// experiment.hpp: schedules, engines and trajectory generation
//
// Two engines evolve the same physics:
//   Sector  one dense block per bath total-spin sector (dimension 2(2I+1)); supports the Ideal
//           channel, which there coincides with the full-space S-only channel.
//   Full    the 2^(N+1)-dimensional product space; supports every channel.
//
// Schedule and trajectory times are in milliseconds.

#pragma once

#include "zeno/analytics.hpp"
#include "zeno/dephasing.hpp"
#include "zeno/hamiltonians.hpp"
#include "zeno/spin_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

namespace zeno {

// -------------------------------- schedule ----------------------------------

struct Segment {
    enum class Kind { Evolve, Dephase };
    Kind kind{Kind::Evolve};
    double duration_ms{0.0};
};

class Schedule {
public:
    Schedule() = default;

    static Schedule free(double t_ms) {
        Schedule s;
        s.evolve(t_ms);
        return s;
    }

    // n cycles of evolve(τ) followed by a dephasing event.
    static Schedule periodic(double tau_ms, int n) {
        if (!(tau_ms > 0.0)) throw InvalidArgument("Schedule: tau must be > 0");
        if (n < 0) throw InvalidArgument("Schedule: n must be >= 0");
        Schedule s;
        for (int i = 0; i < n; ++i) {
            s.evolve(tau_ms);
            s.dephase();
        }
        s.tau_ms_ = tau_ms;
        return s;
    }

    static Schedule periodic_then_free(double tau_ms, int n, double t_free_ms) {
        Schedule s = periodic(tau_ms, n);
        s.evolve(t_free_ms);
        return s;
    }

    Schedule& evolve(double duration_ms) {
        if (!(duration_ms >= 0.0) || !std::isfinite(duration_ms))
            throw InvalidArgument("Schedule: segment durations must be >= 0");
        segments_.push_back({Segment::Kind::Evolve, duration_ms});
        return *this;
    }

    Schedule& dephase() {
        segments_.push_back({Segment::Kind::Dephase, 0.0});
        return *this;
    }

    const std::vector<Segment>& segments() const noexcept { return segments_; }

    double total_ms() const noexcept {
        double t = 0.0;
        for (const auto& s : segments_) t += s.duration_ms;
        return t;
    }

    int measurement_count() const noexcept {
        return static_cast<int>(std::count_if(segments_.begin(), segments_.end(),
                                              [](const Segment& s) { return s.kind == Segment::Kind::Dephase; }));
    }

    // Interval τ when built by periodic()/periodic_then_free().
    std::optional<double> interval_ms() const noexcept { return tau_ms_; }

private:
    std::vector<Segment> segments_;
    std::optional<double> tau_ms_;
};

// ------------------------------- trajectory ---------------------------------

struct TrajectoryRow {
    double t_ms{0.0};
    double eps_S{0.0};
    double eps_I{0.0};
    double pol_S{0.0};
    double pol_ratio{0.0};
};

struct Trajectory {
    std::vector<TrajectoryRow> rows;

    bool empty() const noexcept { return rows.empty(); }
    const TrajectoryRow& back() const { return rows.back(); }
};

// Reference for pol_ratio: P_S(0), or P_I(0) when the qubit starts unpolarized; 0 when both vanish.
inline double polarization_reference(const SystemConfig& cfg) noexcept {
    const double pS = polarization(cfg.eps_S0);
    if (std::abs(pS) > 1e-15) return pS;
    const double pI = polarization(cfg.eps_I0);
    return std::abs(pI) > 1e-15 ? pI : 0.0;
}

// ------------------------------ channel/engine ------------------------------

enum class ChannelKind { Ideal, SOnly, Gradient };
enum class EngineKind { Sector, Full };

struct Channel {
    ChannelKind kind{ChannelKind::Ideal};
    GradientModel gradient{};

    bool operator==(const Channel&) const = default;
};

inline const char* to_string(ChannelKind c) noexcept {
    switch (c) {
        case ChannelKind::Ideal: return "ideal";
        case ChannelKind::SOnly: return "s_only";
        case ChannelKind::Gradient: return "gradient";
    }
    return "?";
}

inline const char* to_string(EngineKind e) noexcept { return e == EngineKind::Sector ? "sector" : "full"; }

struct RunOptions {
    int samples_per_segment{64};  // points per free segment, boundary-inclusive
    bool check_physical{false};   // verify trace/Hermiticity/positivity after every event
};

namespace detail {

struct Readout {
    double eps_S{0.0};
    double eps_I{0.0};
};

class Engine {
public:
    virtual ~Engine() = default;
    virtual void evolve(double t_seconds) = 0;
    virtual void dephase(std::uint64_t step) = 0;
    virtual Readout readout() const = 0;
    virtual void check(const char* where) const = 0;
};

// Unitaries are cached per duration: periodic schedules reuse the same few.
template <class Build>
const std::vector<Matrix>& cached_unitaries(std::map<double, std::vector<Matrix>>& cache, double t, Build&& build) {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, build(t)).first;
    return it->second;
}

class SectorEngine final : public Engine {
public:
    explicit SectorEngine(const SystemConfig& cfg) : states_(initial_sector_states(cfg)) {
        for (const auto& st : states_)
            propagators_.emplace_back(build_sector_hamiltonian(cfg, st.label), cfg.angular_factor());
    }

    void evolve(double t) override {
        const auto& U = cached_unitaries(cache_, t, [this](double d) {
            std::vector<Matrix> out;
            for (const auto& p : propagators_) out.push_back(p.unitary(d));
            return out;
        });
        for (std::size_t i = 0; i < states_.size(); ++i) states_[i].rho = propagate(states_[i].rho, U[i]);
    }

    void dephase(std::uint64_t) override { states_ = dephase_ideal(states_); }

    Readout readout() const override { return {qubit_population(states_), bath_population(states_)}; }

    void check(const char* where) const override { require_physical(states_, where); }

private:
    SectorStates states_;
    std::vector<Propagator> propagators_;
    std::map<double, std::vector<Matrix>> cache_;
};

class FullEngine final : public Engine {
public:
    FullEngine(const SystemConfig& cfg, const Channel& channel)
        : channel_(channel), propagator_(build_full_hamiltonian(cfg), cfg.angular_factor()) {
        FullState init = initial_full_state(cfg);
        if (channel.kind == ChannelKind::Gradient && channel.gradient.mode == GradientMode::Fixed)
            ensemble_.emplace(init, channel.gradient);
        else
            state_ = std::move(init);
    }

    void evolve(double t) override {
        const auto& U = cached_unitaries(cache_, t, [this](double d) { return std::vector<Matrix>{propagator_.unitary(d)}; });
        if (ensemble_)
            ensemble_->evolve(U.front());
        else
            state_.rho = propagate(state_.rho, U.front());
    }

    void dephase(std::uint64_t step) override {
        switch (channel_.kind) {
            case ChannelKind::Ideal: state_ = dephase_ideal(state_); break;
            case ChannelKind::SOnly: state_ = dephase_s_only(state_); break;
            case ChannelKind::Gradient:
                if (ensemble_)
                    ensemble_->apply_gradient(step);
                else
                    state_ = dephase_gradient(state_, channel_.gradient, step);
                break;
        }
    }

    Readout readout() const override {
        const FullState st = current();
        return {qubit_population(st), bath_population(st)};
    }

    void check(const char* where) const override { require_physical(current(), where); }

private:
    FullState current() const { return ensemble_ ? ensemble_->average() : state_; }

    Channel channel_;
    Propagator propagator_;
    FullState state_;
    std::optional<GradientEnsemble> ensemble_;
    std::map<double, std::vector<Matrix>> cache_;
};

inline std::unique_ptr<Engine> make_engine(const SystemConfig& cfg, EngineKind engine, const Channel& channel) {
    cfg.validate();
    if (engine == EngineKind::Sector) {
        if (channel.kind != ChannelKind::Ideal)
            throw InvalidArgument("run: the sector engine supports only the ideal channel");
        return std::make_unique<SectorEngine>(cfg);
    }
    if (channel.kind == ChannelKind::Gradient) channel.gradient.validate();
    return std::make_unique<FullEngine>(cfg, channel);
}

inline TrajectoryRow make_row(double t_ms, const Readout& r, double reference) {
    const double pol = polarization(r.eps_S);
    return {t_ms, r.eps_S, r.eps_I, pol, reference != 0.0 ? pol / reference : 0.0};
}

}  // namespace detail

inline Trajectory run(const SystemConfig& cfg, const Schedule& schedule, EngineKind engine, const Channel& channel,
                      const RunOptions& opts = {}) {
    if (opts.samples_per_segment < 1) throw InvalidArgument("run: samples_per_segment must be >= 1");
    auto eng = detail::make_engine(cfg, engine, channel);
    const double reference = polarization_reference(cfg);

    Trajectory traj;
    traj.rows.push_back(detail::make_row(0.0, eng->readout(), reference));
    double t0 = 0.0;
    std::uint64_t step = 0;
    for (const auto& seg : schedule.segments()) {
        if (seg.kind == Segment::Kind::Dephase) {
            eng->dephase(step++);
            if (opts.check_physical) eng->check("run: after dephasing");
            continue;
        }
        if (seg.duration_ms <= 0.0) continue;
        const int K = opts.samples_per_segment;
        const double dt_ms = seg.duration_ms / K;
        for (int j = 1; j <= K; ++j) {
            eng->evolve(dt_ms * 1e-3);
            traj.rows.push_back(detail::make_row(t0 + (j == K ? seg.duration_ms : j * dt_ms), eng->readout(), reference));
        }
        if (opts.check_physical) eng->check("run: after free evolution");
        t0 += seg.duration_ms;
    }
    return traj;
}

// --------------------------------- sweeps -----------------------------------

struct SweepPoint {
    double tau_ms{0.0};
    double eps_S{0.0};
    double eps_I{0.0};
};

// ε_S(nτ) for every τ in the grid; points are independent and run on `threads` workers.
inline std::vector<SweepPoint> sweep_tau(const SystemConfig& cfg, int n, const std::vector<double>& tau_grid_ms,
                                         EngineKind engine, const Channel& channel, unsigned threads = 1) {
    if (tau_grid_ms.empty()) throw InvalidArgument("sweep_tau: empty grid");
    if (n < 0) throw InvalidArgument("sweep_tau: n must be >= 0");
    for (double tau : tau_grid_ms)
        if (!(tau > 0.0)) throw InvalidArgument("sweep_tau: grid values must be > 0");
    detail::make_engine(cfg, engine, channel);  // surfaces configuration errors before spawning workers

    std::vector<SweepPoint> out(tau_grid_ms.size());
    auto work = [&](std::size_t i) {
        RunOptions opts;
        opts.samples_per_segment = 1;
        const Trajectory tr = run(cfg, Schedule::periodic(tau_grid_ms[i], n), engine, channel, opts);
        out[i] = {tau_grid_ms[i], tr.back().eps_S, tr.back().eps_I};
    };
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(tau_grid_ms.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < out.size(); ++i) work(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < out.size(); i += threads) work(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// ------------------------------- reheating ----------------------------------

struct ReheatingProbe {
    Trajectory trajectory;
    int n_qe{0};        // projections needed for the RW transient to decay below the tolerance
    int n_total{0};
};

// Smallest n with max_block |f1(τ)|^n <= tolerance for the RW blocks of cfg.
inline int quasi_equilibrium_count(const SystemConfig& cfg, double tau_ms, double tolerance = 1e-8) {
    double worst = 0.0;
    detail::for_each_rw_block(cfg, [&](const SectorLabel&, int, const SectorSpectrum& spec) {
        const BlockRecursion rec = block_recursion(spec, tau_ms * 1e-3, cfg.angular_factor());
        if (rec.f2 > 1e-14) worst = std::max(worst, std::abs(rec.f1));  // f2 = 0 blocks never move
    });
    if (worst >= 1.0 - 1e-15)
        throw InvalidArgument("quasi_equilibrium_count: tau is commensurate with a block period");
    if (worst == 0.0) return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(tolerance) / std::log(worst))));
}

// Projections continued n_past_qe steps beyond the RW quasi-equilibrium count.
inline ReheatingProbe reheating_probe(const SystemConfig& cfg, double tau_ms, int n_past_qe,
                                      EngineKind engine = EngineKind::Sector, const Channel& channel = {},
                                      const RunOptions& opts = {}, double qe_tolerance = 1e-8) {
    if (n_past_qe < 0) throw InvalidArgument("reheating_probe: n_past_qe must be >= 0");
    ReheatingProbe probe;
    probe.n_qe = quasi_equilibrium_count(cfg, tau_ms, qe_tolerance);
    probe.n_total = probe.n_qe + n_past_qe;
    probe.trajectory = run(cfg, Schedule::periodic(tau_ms, probe.n_total), engine, channel, opts);
    return probe;
}

}  // namespace zeno
