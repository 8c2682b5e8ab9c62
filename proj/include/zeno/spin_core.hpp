// spin_core.hpp: configuration, bath total-spin sectors, and state construction/readout
//
// Conventions used throughout the library:
//   * Single-spin basis index 0 is m = +1/2 (the ground Zeeman state), index 1 is m = -1/2
//     (the excited state). A population ε always refers to the excited state and the
//     polarization is P = 1 - 2ε.
//   * Sector basis: |s; M⟩ ordered with s = +1/2 first, then s = -1/2; M descending from I to -I.
//   * Full space: qubit ⊗ bath_1 ⊗ ... ⊗ bath_N, qubit is the most significant bit.
//   * Frequencies are in Hz. Physics-level time arguments are in seconds.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeno {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedRepresentation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Readout of a state whose trace drifted away from one.
class InconsistentState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Trace, Hermiticity or positivity violated beyond tolerance during a run.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Coupling { XX, RW, CR, ISO };

// How Hz-valued parameters enter exp(-i H t): HzAsRad uses them as rad/s, TwoPi multiplies by 2π.
enum class AngularConvention { HzAsRad, TwoPi };

inline const char* to_string(Coupling c) noexcept {
    switch (c) {
        case Coupling::XX: return "XX";
        case Coupling::RW: return "RW";
        case Coupling::CR: return "CR";
        case Coupling::ISO: return "ISO";
    }
    return "?";
}

inline const char* to_string(AngularConvention a) noexcept {
    return a == AngularConvention::TwoPi ? "two_pi" : "hz_as_rad";
}

inline double angular_factor(AngularConvention a) noexcept {
    return a == AngularConvention::TwoPi ? 2.0 * std::numbers::pi : 1.0;
}

struct SystemConfig {
    double omega_S{0.0};  // Hz
    double omega_I{0.0};  // Hz
    double J{1.0};        // Hz
    int N{1};
    Coupling coupling{Coupling::XX};
    double eps_S0{0.5};
    double eps_I0{0.5};
    AngularConvention angular{AngularConvention::TwoPi};

    double angular_factor() const noexcept { return zeno::angular_factor(angular); }

    bool operator==(const SystemConfig&) const = default;

    void validate() const {
        if (!(J > 0.0) || !std::isfinite(J)) throw InvalidArgument("SystemConfig: J must be > 0");
        if (N < 1) throw InvalidArgument("SystemConfig: N must be >= 1");
        if (!(omega_S >= 0.0) || !std::isfinite(omega_S))
            throw InvalidArgument("SystemConfig: omega_S must be >= 0");
        if (!(omega_I >= 0.0) || !std::isfinite(omega_I))
            throw InvalidArgument("SystemConfig: omega_I must be >= 0");
        if (!(eps_S0 >= 0.0 && eps_S0 <= 1.0))
            throw InvalidArgument("SystemConfig: eps_S0 must lie in [0, 1]");
        if (!(eps_I0 >= 0.0 && eps_I0 <= 1.0))
            throw InvalidArgument("SystemConfig: eps_I0 must lie in [0, 1]");
    }

    // Thermal populations live in [0, 1/2]; anything above is an inverted spin.
    std::vector<std::string> warnings() const {
        std::vector<std::string> out;
        if (eps_S0 > 0.5) out.emplace_back("eps_S0 > 1/2 describes a population-inverted qubit");
        if (eps_I0 > 0.5) out.emplace_back("eps_I0 > 1/2 describes a population-inverted bath");
        return out;
    }
};

// ------------------------------- bath sectors -------------------------------

struct SectorLabel {
    int twice_I{0};
    double lambda{1.0};  // number of copies of the spin-I irrep inside N spin-1/2s

    double I() const noexcept { return 0.5 * twice_I; }
    int bath_dim() const noexcept { return twice_I + 1; }
    int dim() const noexcept { return 2 * (twice_I + 1); }
};

namespace detail {

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace detail

// Largest N for which λ_I is evaluated in exact integer arithmetic.
inline constexpr int kExactLambdaMaxN = 20;

// λ_I = N! / ((N/2+I)! (N/2-I)!) · (2I+1)/(N/2+I+1)
inline double sector_weight(int N, int twice_I) {
    if (N < 1) throw InvalidArgument("sector_weight: N must be >= 1");
    if (twice_I < 0 || twice_I > N || (N - twice_I) % 2 != 0)
        throw InvalidArgument("sector_weight: 2I must have the parity of N and not exceed N");
    const int upper = (N + twice_I) / 2;  // N/2 + I
    if (N <= kExactLambdaMaxN) {
        const std::uint64_t num = detail::binomial(N, upper) * static_cast<std::uint64_t>(twice_I + 1);
        const auto den = static_cast<std::uint64_t>(upper + 1);
        if (num % den != 0) throw std::logic_error("sector_weight: non-integral multiplicity");
        return static_cast<double>(num / den);
    }
    // log-space; relative accuracy ~1e-12, documented tolerance 1e-9
    const double log_binom = std::lgamma(N + 1.0) - std::lgamma(upper + 1.0) - std::lgamma(N - upper + 1.0);
    return std::exp(log_binom) * (twice_I + 1.0) / (upper + 1.0);
}

inline std::vector<SectorLabel> bath_sectors(int N) {
    if (N < 1) throw InvalidArgument("bath_sectors: N must be >= 1");
    std::vector<SectorLabel> out;
    for (int twice_I = N; twice_I >= 0; twice_I -= 2) out.push_back({twice_I, sector_weight(N, twice_I)});
    return out;
}

// Product-thermal weight of one bath configuration with total projection M:
// (N/2 - M) excited spins, each with population eps.
inline double bath_factor(double eps, int N, int twice_M) {
    const int excited = (N - twice_M) / 2;
    return std::pow(eps, excited) * std::pow(1.0 - eps, N - excited);
}

// -------------------------------- states ------------------------------------

struct SectorState {
    SectorLabel label;
    int n_bath{1};
    Matrix rho;  // summed over the λ identical copies; trace = sector probability

    int dim() const noexcept { return label.dim(); }

    // s_index 0 is S^z = +1/2; j counts down from M = I.
    Index index(int s_index, int j) const noexcept { return s_index * label.bath_dim() + j; }
    int twice_M(int j) const noexcept { return label.twice_I - 2 * j; }
};

using SectorStates = std::vector<SectorState>;

struct FullState {
    int n_bath{1};
    Matrix rho;

    int n_spins() const noexcept { return n_bath + 1; }
    Index dim() const noexcept { return Index{1} << n_spins(); }
};

// Bit helpers for the full product basis (bit set = spin down = excited).
inline bool qubit_excited(Index a, int n_bath) noexcept { return ((a >> n_bath) & 1) != 0; }

inline int bath_excitations(Index a, int n_bath) noexcept {
    const auto mask = (Index{1} << n_bath) - 1;
    return std::popcount(static_cast<std::uint64_t>(a & mask));
}

inline SectorState initial_sector_state(const SystemConfig& cfg, const SectorLabel& label) {
    cfg.validate();
    if (label.twice_I < 0 || label.twice_I > cfg.N || (cfg.N - label.twice_I) % 2 != 0)
        throw InvalidArgument("initial_sector_state: sector label does not belong to this N");
    SectorState st{label, cfg.N, Matrix::Zero(label.dim(), label.dim())};
    const double qubit[2] = {1.0 - cfg.eps_S0, cfg.eps_S0};
    for (int s = 0; s < 2; ++s) {
        for (int j = 0; j < label.bath_dim(); ++j) {
            const Index i = st.index(s, j);
            st.rho(i, i) = label.lambda * qubit[s] * bath_factor(cfg.eps_I0, cfg.N, st.twice_M(j));
        }
    }
    return st;
}

inline SectorStates initial_sector_states(const SystemConfig& cfg) {
    SectorStates out;
    for (const auto& label : bath_sectors(cfg.N)) out.push_back(initial_sector_state(cfg, label));
    return out;
}

inline FullState initial_full_state(const SystemConfig& cfg) {
    cfg.validate();
    FullState st{cfg.N, Matrix::Zero(Index{1} << (cfg.N + 1), Index{1} << (cfg.N + 1))};
    for (Index a = 0; a < st.dim(); ++a) {
        const double q = qubit_excited(a, cfg.N) ? cfg.eps_S0 : 1.0 - cfg.eps_S0;
        const int k = bath_excitations(a, cfg.N);
        st.rho(a, a) = q * std::pow(cfg.eps_I0, k) * std::pow(1.0 - cfg.eps_I0, cfg.N - k);
    }
    return st;
}

// -------------------------------- readout -----------------------------------

inline constexpr double kTraceTolerance = 1e-8;

namespace detail {

inline void require_normalized(double trace) {
    if (!(std::abs(trace - 1.0) <= kTraceTolerance))
        throw InconsistentState("state trace deviates from 1 by " + std::to_string(trace - 1.0));
}

}  // namespace detail

inline double qubit_population(const SectorStates& states) {
    double trace = 0.0, excited = 0.0;
    for (const auto& st : states) {
        for (int j = 0; j < st.label.bath_dim(); ++j) {
            trace += st.rho(st.index(0, j), st.index(0, j)).real();
            excited += st.rho(st.index(1, j), st.index(1, j)).real();
        }
    }
    detail::require_normalized(trace + excited);
    return excited;
}

inline double qubit_population(const FullState& st) {
    double trace = 0.0, excited = 0.0;
    for (Index a = 0; a < st.dim(); ++a) {
        const double p = st.rho(a, a).real();
        trace += p;
        if (qubit_excited(a, st.n_bath)) excited += p;
    }
    detail::require_normalized(trace);
    return excited;
}

// Mean excited population per bath spin.
inline double bath_population(const SectorStates& states) {
    if (states.empty()) throw InvalidArgument("bath_population: no sectors");
    double trace = 0.0, excitations = 0.0;
    const int N = states.front().n_bath;
    for (const auto& st : states) {
        for (int s = 0; s < 2; ++s) {
            for (int j = 0; j < st.label.bath_dim(); ++j) {
                const double p = st.rho(st.index(s, j), st.index(s, j)).real();
                trace += p;
                excitations += p * 0.5 * (N - st.twice_M(j));
            }
        }
    }
    detail::require_normalized(trace);
    return excitations / N;
}

inline double bath_population(const FullState& st) {
    double trace = 0.0, excitations = 0.0;
    for (Index a = 0; a < st.dim(); ++a) {
        const double p = st.rho(a, a).real();
        trace += p;
        excitations += p * bath_excitations(a, st.n_bath);
    }
    detail::require_normalized(trace);
    return st.n_bath > 0 ? excitations / st.n_bath : 0.0;
}

inline double polarization(double eps) noexcept { return 1.0 - 2.0 * eps; }

// ---------------------------- physicality checks ----------------------------

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kPositivityTolerance = -1e-10;

struct StateCheck {
    double hermiticity_error{0.0};  // max |ρ_ij - conj(ρ_ji)|
    double trace{0.0};
    double min_eigenvalue{0.0};

    bool ok(double expected_trace = 1.0) const noexcept {
        return hermiticity_error <= kHermiticityTolerance && std::abs(trace - expected_trace) <= kTraceTolerance &&
               min_eigenvalue >= kPositivityTolerance;
    }
};

inline StateCheck check_state(const Matrix& rho) {
    StateCheck c;
    c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    c.trace = rho.trace().real();
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = solver.eigenvalues().minCoeff();
    return c;
}

// Throws NumericFailure when ρ is not a density matrix of the given trace.
inline void require_physical(const Matrix& rho, double expected_trace, const char* where) {
    const StateCheck c = check_state(rho);
    if (!c.ok(expected_trace)) {
        throw NumericFailure(std::string(where) + ": non-physical state (hermiticity " +
                             std::to_string(c.hermiticity_error) + ", trace " + std::to_string(c.trace) +
                             ", min eigenvalue " + std::to_string(c.min_eigenvalue) + ")");
    }
}

inline void require_physical(const SectorStates& states, const char* where) {
    double total = 0.0;
    for (const auto& st : states) {
        const double tr = st.rho.trace().real();
        require_physical(st.rho, tr, where);
        total += tr;
    }
    if (std::abs(total - 1.0) > kTraceTolerance) throw NumericFailure(std::string(where) + ": total trace drifted");
}

inline void require_physical(const FullState& st, const char* where) { require_physical(st.rho, 1.0, where); }

}  // namespace zeno
