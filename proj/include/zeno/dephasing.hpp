// dephasing.hpp: simulated projective measurements
//
// Three channels:
//   dephase_ideal   pinching onto the z-product (energy) basis
//   dephase_s_only  pinching onto blocks of fixed (S^z, total bath M); bath zero-quantum
//                   coherences survive
//   dephase_gradient  ensemble average over sample slices of a z-gradient phase imprint
//
// A SectorState cannot resolve the λ_I copies of a sector, so its pinching onto |s; M⟩ is the
// sector image of the full-space S-only channel, not of the full product-basis projection.

#pragma once

#include "zeno/spin_core.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace zeno {

inline Matrix dephase_ideal(const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    out.diagonal() = rho.diagonal();
    return out;
}

inline SectorState dephase_ideal(const SectorState& st) {
    SectorState out = st;
    out.rho = dephase_ideal(st.rho);
    return out;
}

inline SectorStates dephase_ideal(const SectorStates& states) {
    SectorStates out;
    out.reserve(states.size());
    for (const auto& st : states) out.push_back(dephase_ideal(st));
    return out;
}

inline FullState dephase_ideal(const FullState& st) {
    FullState out = st;
    out.rho = dephase_ideal(st.rho);
    return out;
}

inline FullState dephase_s_only(const FullState& st) {
    FullState out = st;
    const Index d = st.dim();
    for (Index a = 0; a < d; ++a) {
        const bool sa = qubit_excited(a, st.n_bath);
        const int ma = bath_excitations(a, st.n_bath);
        for (Index b = 0; b < d; ++b) {
            if (qubit_excited(b, st.n_bath) != sa || bath_excitations(b, st.n_bath) != ma) out.rho(a, b) = 0.0;
        }
    }
    return out;
}

[[noreturn]] inline void dephase_s_only(const SectorState&) {
    throw UnsupportedRepresentation("dephase_s_only: needs the full product space; a sector state is already "
                                    "S-only dephased by dephase_ideal");
}

// ------------------------------ gradient model ------------------------------

enum class GradientMode { Random, Fixed };

struct GradientModel {
    GradientMode mode{GradientMode::Random};
    double max_gradient{30.0};  // G/cm, bound on |ΔB_z|
    double min_gradient{0.0};   // G/cm, floor on |ΔB_z|; 0 gives ΔB_z ~ uniform(-max, +max)
    double sample_length{1.0};  // h, cm
    double tau_m{100e-6};       // s
    double gamma_S{32000.0 / 30.0};   // Hz/G; 32 kHz spread at 30 G/cm over 1 cm
    double gamma_I{125000.0 / 30.0};  // Hz/G; 125 kHz spread at 30 G/cm over 1 cm
    int slices{256};
    std::uint64_t rng_seed{0};

    bool operator==(const GradientModel&) const = default;

    void validate() const {
        if (slices < 2) throw InvalidArgument("GradientModel: slices must be >= 2");
        if (!(max_gradient >= 0.0)) throw InvalidArgument("GradientModel: max_gradient must be >= 0");
        if (!(min_gradient >= 0.0 && min_gradient <= max_gradient))
            throw InvalidArgument("GradientModel: min_gradient must lie in [0, max_gradient]");
        if (!(sample_length > 0.0)) throw InvalidArgument("GradientModel: sample_length must be > 0");
        if (!(tau_m >= 0.0)) throw InvalidArgument("GradientModel: tau_m must be >= 0");
    }

    // Δω_h τ_m / 2π = γ_S |ΔB_z|max h τ_m
    double dephasing_cycles() const noexcept { return gamma_S * max_gradient * sample_length * tau_m; }
    bool weak_dephasing() const noexcept { return dephasing_cycles() < 5.0; }

    // Gradient strength (G/cm) used at `step`; Fixed mode always returns the step-0 draw.
    double strength(std::uint64_t step) const {
        if (mode == GradientMode::Fixed) step = 0;
        std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                          static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
        std::mt19937_64 gen(seq);
        const double magnitude = std::uniform_real_distribution<double>(min_gradient, max_gradient)(gen);
        return (gen() & 1U) ? magnitude : -magnitude;
    }

    // Stratified slice positions: midpoints of `slices` equal intervals of [-h/2, h/2].
    double slice_position(int j) const noexcept { return sample_length * ((j + 0.5) / slices - 0.5); }
};

namespace detail {

// Σ_k γ_k m_k for each product-basis state; spin 0 is S, the rest are I.
inline std::vector<double> gyro_weights(const FullState& st, const GradientModel& g) {
    std::vector<double> w(static_cast<std::size_t>(st.dim()));
    const int n = st.n_spins();
    for (Index a = 0; a < st.dim(); ++a) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const bool down = ((a >> (n - 1 - k)) & 1) != 0;
            sum += (k == 0 ? g.gamma_S : g.gamma_I) * (down ? -0.5 : 0.5);
        }
        w[static_cast<std::size_t>(a)] = sum;
    }
    return w;
}

// Pairwise (fixed-tree) sum of f(j) over j in [lo, hi).
template <class F>
Complex pairwise_sum(int lo, int hi, const F& f) {
    if (hi - lo == 1) return f(lo);
    const int mid = lo + (hi - lo) / 2;
    return pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f);
}

}  // namespace detail

// Slice-averaged phase imprint exp(-i φ(z)·Σγm) for one gradient step.
inline FullState dephase_gradient(const FullState& st, const GradientModel& g, std::uint64_t step) {
    g.validate();
    const double kick = 2.0 * std::numbers::pi * g.strength(step) * g.tau_m;  // rad per (Hz/G · cm)
    const auto w = detail::gyro_weights(st, g);
    FullState out = st;
    const Index d = st.dim();
    for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) {
            const double dw = w[static_cast<std::size_t>(a)] - w[static_cast<std::size_t>(b)];
            if (dw == 0.0) continue;  // populations and zero-quantum terms are untouched
            const Complex avg = detail::pairwise_sum(0, g.slices, [&](int j) {
                                    return std::polar(1.0, -kick * g.slice_position(j) * dw);
                                }) /
                                static_cast<double>(g.slices);
            out.rho(a, b) = st.rho(a, b) * avg;
        }
    }
    return out;
}

// Per-slice density matrices carried through a whole run; the sample average is formed only at
// readout, so phase correlations between successive gradient steps are retained.
class GradientEnsemble {
public:
    GradientEnsemble(const FullState& initial, GradientModel g) : model_(g), n_bath_(initial.n_bath) {
        model_.validate();
        weights_ = detail::gyro_weights(initial, model_);
        slices_.assign(static_cast<std::size_t>(model_.slices), initial.rho);
    }

    void evolve(const Matrix& U) {
        for (auto& rho : slices_) rho = U * rho * U.adjoint();
    }

    void apply_gradient(std::uint64_t step) {
        const double kick = 2.0 * std::numbers::pi * model_.strength(step) * model_.tau_m;
        for (int j = 0; j < model_.slices; ++j) {
            const double phi = kick * model_.slice_position(j);
            Eigen::VectorXcd phase(static_cast<Index>(weights_.size()));
            for (std::size_t a = 0; a < weights_.size(); ++a) phase(static_cast<Index>(a)) = std::polar(1.0, -phi * weights_[a]);
            auto& rho = slices_[static_cast<std::size_t>(j)];
            rho = phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
        }
    }

    FullState average() const {
        FullState out{n_bath_, Matrix::Zero(slices_.front().rows(), slices_.front().cols())};
        for (Index a = 0; a < out.rho.rows(); ++a) {
            for (Index b = 0; b < out.rho.cols(); ++b) {
                out.rho(a, b) = detail::pairwise_sum(0, model_.slices, [&](int j) {
                                    return slices_[static_cast<std::size_t>(j)](a, b);
                                }) /
                                static_cast<double>(model_.slices);
            }
        }
        return out;
    }

    const GradientModel& model() const noexcept { return model_; }

private:
    GradientModel model_;
    int n_bath_;
    std::vector<double> weights_;
    std::vector<Matrix> slices_;
};

}  // namespace zeno
