// analytics.hpp: closed forms for the RW dynamics with and without repeated projections
//
// Every formula here is checked against the RW sector engine with dephase_ideal. The printed
// versions of the free-evolution weight, the measured-evolution function and the recursion
// index were reconstructed so that this equivalence holds to 1e-9:
//
//   ε_S(t)  = ε_S(0) + (ε_I - ε_S)/(1 - ε_I) · F(t),   F(t)  = Σ_{I,M} W_M^I sin²(kΩ_M t)
//   ε_S(nτ) = ε_S(0) + (ε_I - ε_S)/(1 - ε_I) · F_n(τ), F_n(τ) = ½ Σ_{I,M} w_M^I (1 - f1_M(τ)^n)
//
// with w_M^I = λ_I ε_I^(N/2-M-1) (1-ε_I)^(N/2+M+1) the weight of the excited-qubit member of the
// block |+1/2; M⟩ <-> |-1/2; M+1⟩, W = w · (J̃/2)²/Ω², and f1 = 1 - 2 (J̃/2)²/Ω² sin²(kΩτ).
// The implementation multiplies through by (1 - ε_I) so that ε_I = 1 needs no special case.

#pragma once

#include "zeno/hamiltonians.hpp"
#include "zeno/spin_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace zeno {

// Per-block response to one evolve(τ) + project cycle, acting on the excited-qubit fraction x.
struct BlockRecursion {
    double f1{1.0};  // 1 - 2 f2
    double f2{0.0};  // (J̃/2)²/Ω² sin²(kΩτ)
    double f{1.0};   // cos(2kΩτ); equals f1 only at resonance
};

inline BlockRecursion block_recursion(const SectorSpectrum& spec, double tau_seconds, double angular_factor) {
    const double phase = angular_factor * spec.Omega * tau_seconds;
    const double s = std::sin(phase);
    BlockRecursion r;
    r.f2 = spec.transfer() * s * s;
    r.f1 = 1.0 - 2.0 * r.f2;
    r.f = std::cos(2.0 * phase);
    return r;
}

// x_n = f1^n x0 + f2 Σ_{m=0}^{n-1} f1^m
inline double x_after_n(double x0, const BlockRecursion& rec, long long n) {
    if (n < 0) throw InvalidArgument("x_after_n: n must be >= 0");
    const double fn = std::pow(rec.f1, static_cast<double>(n));
    const double geometric = rec.f1 == 1.0 ? static_cast<double>(n) : (1.0 - fn) / (1.0 - rec.f1);
    return fn * x0 + rec.f2 * geometric;
}

namespace detail {

// Visits every RW block (sector label, lower bath projection M, spectrum).
template <class F>
void for_each_rw_block(const SystemConfig& cfg, F&& visit) {
    for (const auto& label : bath_sectors(cfg.N)) {
        for (int twice_M = -label.twice_I; twice_M <= label.twice_I - 2; twice_M += 2)
            visit(label, twice_M, block_spectrum(cfg, label.twice_I, twice_M, Branch::RW));
    }
}

// w / (1 - ε_I): λ ε^(N/2-M-1) (1-ε)^(N/2+M), both exponents non-negative for M < I.
inline double scaled_block_weight(const SystemConfig& cfg, const SectorLabel& label, int twice_M) {
    const double eps = cfg.eps_I0;
    const int excited = (cfg.N - twice_M) / 2 - 1;
    return label.lambda * std::pow(eps, excited) * std::pow(1.0 - eps, cfg.N - excited - 1);
}

}  // namespace detail

// F(t) with W_M^I as reconstructed above; t in seconds.
inline double free_transfer_function(const SystemConfig& cfg, double t_seconds) {
    cfg.validate();
    const double k = cfg.angular_factor();
    double F = 0.0;
    detail::for_each_rw_block(cfg, [&](const SectorLabel& label, int twice_M, const SectorSpectrum& spec) {
        const double s = std::sin(k * spec.Omega * t_seconds);
        F += (1.0 - cfg.eps_I0) * detail::scaled_block_weight(cfg, label, twice_M) * spec.transfer() * s * s;
    });
    return F;
}

// ε_S(t) for free RW evolution of the product initial state.
inline double eps_free(const SystemConfig& cfg, double t_seconds) {
    cfg.validate();
    if (!(t_seconds >= 0.0)) throw InvalidArgument("eps_free: t must be >= 0");
    const double k = cfg.angular_factor();
    double G = 0.0;
    detail::for_each_rw_block(cfg, [&](const SectorLabel& label, int twice_M, const SectorSpectrum& spec) {
        const double s = std::sin(k * spec.Omega * t_seconds);
        G += detail::scaled_block_weight(cfg, label, twice_M) * spec.transfer() * s * s;
    });
    return cfg.eps_S0 + (cfg.eps_I0 - cfg.eps_S0) * G;
}

// F_n(τ) as reconstructed above.
inline double measured_transfer_function(const SystemConfig& cfg, double tau_seconds, long long n) {
    cfg.validate();
    const double k = cfg.angular_factor();
    double F = 0.0;
    detail::for_each_rw_block(cfg, [&](const SectorLabel& label, int twice_M, const SectorSpectrum& spec) {
        const BlockRecursion rec = block_recursion(spec, tau_seconds, k);
        F += 0.5 * (1.0 - cfg.eps_I0) * detail::scaled_block_weight(cfg, label, twice_M) *
             (1.0 - std::pow(rec.f1, static_cast<double>(n)));
    });
    return F;
}

// ε_S after n ideal projections at interval τ (RW dynamics).
inline double eps_measured(const SystemConfig& cfg, double tau_seconds, long long n) {
    cfg.validate();
    if (!(tau_seconds > 0.0)) throw InvalidArgument("eps_measured: tau must be > 0");
    if (n < 0) throw InvalidArgument("eps_measured: n must be >= 0");
    const double k = cfg.angular_factor();
    double G = 0.0;
    detail::for_each_rw_block(cfg, [&](const SectorLabel& label, int twice_M, const SectorSpectrum& spec) {
        const BlockRecursion rec = block_recursion(spec, tau_seconds, k);
        G += 0.5 * detail::scaled_block_weight(cfg, label, twice_M) * (1.0 - std::pow(rec.f1, static_cast<double>(n)));
    });
    return cfg.eps_S0 + (cfg.eps_I0 - cfg.eps_S0) * G;
}

// Upper bound on |ε_S(nτ) - ε_S^qe| (generic τ, every block with f2 > 0):
// ½ |ε_I - ε_S| Σ w/(1-ε_I) · max |f1|^n.
inline double approach_bound(const SystemConfig& cfg, double tau_seconds, long long n) {
    cfg.validate();
    const double k = cfg.angular_factor();
    double weight = 0.0, worst = 0.0;
    detail::for_each_rw_block(cfg, [&](const SectorLabel& label, int twice_M, const SectorSpectrum& spec) {
        weight += detail::scaled_block_weight(cfg, label, twice_M);
        worst = std::max(worst, std::abs(block_recursion(spec, tau_seconds, k).f1));
    });
    return 0.5 * std::abs(cfg.eps_I0 - cfg.eps_S0) * weight * std::pow(worst, static_cast<double>(n));
}

struct QuasiEquilibrium {
    double rw_any_N{0.0};    // steady state of the RW dynamics for the configured N
    double rw_N3{0.0};       // the same closed form specialised to N = 3
    double cr{0.0};          // CR-only steady state for the configured N
    double cr_N3{0.0};       // CR-only closed form for N = 3
    double large_N{0.0};     // N -> ∞ saturation value
    bool large_N_saturated{false};  // ε_I(0) = 1: the large-N form is 0/0, value set to 1/2
};

namespace detail {

// ½ Σ_I λ_I Σ_{M<I} ε^(N/2-M-1) (1-ε)^(N/2+M); equals [1 - Σ λ ε^(N/2+I)(1-ε)^(N/2-I)] / (2(1-ε)).
inline double rw_equilibrium_gain(int N, double eps_I) {
    double sum = 0.0;
    for (const auto& label : bath_sectors(N)) {
        for (int twice_M = -label.twice_I; twice_M <= label.twice_I - 2; twice_M += 2) {
            const int excited = (N - twice_M) / 2 - 1;
            sum += label.lambda * std::pow(eps_I, excited) * std::pow(1.0 - eps_I, N - excited - 1);
        }
    }
    return 0.5 * sum;
}

}  // namespace detail

inline QuasiEquilibrium eps_quasi_equilibrium(const SystemConfig& cfg) {
    cfg.validate();
    const double eS = cfg.eps_S0, eI = cfg.eps_I0;
    QuasiEquilibrium q;

    if (eI < 1.0) {
        double bracket = 1.0;
        for (const auto& label : bath_sectors(cfg.N)) {
            const int upper = (cfg.N + label.twice_I) / 2;
            bracket -= label.lambda * std::pow(eI, upper) * std::pow(1.0 - eI, cfg.N - upper);
        }
        q.rw_any_N = eS + (eI - eS) / (2.0 * (1.0 - eI)) * bracket;
        q.large_N = eS + (eI - eS) / (2.0 * (1.0 - eI));
    } else {
        q.rw_any_N = eS + (eI - eS) * detail::rw_equilibrium_gain(cfg.N, eI);
        q.large_N = 0.5;
        q.large_N_saturated = true;
    }
    q.rw_N3 = eS + 0.5 * (eI - eS) * (1.0 + eI * (1.0 - eI));

    // Flipping every bath spin maps the CR dynamics onto RW dynamics with ε_I -> 1 - ε_I.
    q.cr = eS + (1.0 - eI - eS) * detail::rw_equilibrium_gain(cfg.N, 1.0 - eI);
    q.cr_N3 = eS + 0.5 * (1.0 - eI - eS) * (1.0 + eI * (1.0 - eI));
    return q;
}

}  // namespace zeno
