// hamiltonians.hpp: sector and full-space Hamiltonians, propagators, transfer coefficients
//
// H = -ω_S S^z - ω_I Σ_k I_k^z + H_SI   (the minus sign makes m = +1/2 the ground state)
//
//   RW : (J/2) Σ_k (S^+ I_k^- + S^- I_k^+)        flip-flop, conserves S^z + I^z
//   CR : (J/2) Σ_k (S^+ I_k^+ + S^- I_k^-)        flip-flip, conserves S^z - I^z
//   XX : RW + CR = 2J Σ_k S^x I_k^x
//   ISO: J Σ_k (S^x I_k^x + S^y I_k^y)            same operator as RW, built from Cartesian parts
//
// With this normalization the 2x2 RW block pairing |+1/2; M⟩ and |-1/2; M+1⟩ has diagonal splitting
// ω_S - ω_I and off-diagonal element J·n/2 with n = sqrt((I - M)(I + M + 1)), so its population
// transfer amplitude is exactly n²J² / (n²J² + (ω_S - ω_I)²).

#pragma once

#include "zeno/operators.hpp"
#include "zeno/spin_core.hpp"

#include <cmath>

namespace zeno {

enum class Branch { RW, CR };

// One 2x2 exchange block of the RW (or CR) dynamics.
struct SectorSpectrum {
    double Delta{0.0};   // half the diagonal splitting: (ω_S ∓ ω_I)/2, Hz
    double Jtilde{0.0};  // J·n, Hz
    double Omega{0.0};   // sqrt(Δ² + (J̃/2)²): half the eigenvalue splitting, Hz

    // Amplitude of sin²(Ω t) in the population exchange: (J̃/2)² / Ω².
    double transfer() const noexcept {
        if (Jtilde == 0.0) return 0.0;
        const double c = 0.5 * Jtilde;
        return c * c / (Omega * Omega);
    }
};

// RW block: |+1/2; M⟩ <-> |-1/2; M+1⟩, n² = (I - M)(I + M + 1).
// CR block: |+1/2; M⟩ <-> |-1/2; M-1⟩, n² = (I + M)(I - M + 1).
inline SectorSpectrum block_spectrum(const SystemConfig& cfg, int twice_I, int twice_M, Branch branch = Branch::RW) {
    if (std::abs(twice_M) > twice_I || (twice_I - twice_M) % 2 != 0)
        throw InvalidArgument("block_spectrum: M out of range for sector I");
    const double I = 0.5 * twice_I, M = 0.5 * twice_M;
    const double n2 = branch == Branch::RW ? (I - M) * (I + M + 1.0) : (I + M) * (I - M + 1.0);
    SectorSpectrum s;
    s.Delta = 0.5 * (branch == Branch::RW ? cfg.omega_S - cfg.omega_I : cfg.omega_S + cfg.omega_I);
    s.Jtilde = cfg.J * std::sqrt(std::max(n2, 0.0));
    s.Omega = std::hypot(s.Delta, 0.5 * s.Jtilde);
    return s;
}

struct TransferCoefficients {
    double rw{0.0};
    double cr{0.0};
};

// P_RW(n) = n²J²/(n²J² + (ω_S-ω_I)²), P_CR(n) = n²J²/(n²J² + (ω_S+ω_I)²)
inline TransferCoefficients transfer_coefficients(const SystemConfig& cfg, double n) {
    if (!(n >= 0.0)) throw InvalidArgument("transfer_coefficients: n must be >= 0");
    const double c = n * n * cfg.J * cfg.J;
    auto ratio = [c](double detuning) { return c == 0.0 ? 0.0 : c / (c + detuning * detuning); };
    return {ratio(cfg.omega_S - cfg.omega_I), ratio(cfg.omega_S + cfg.omega_I)};
}

// ----------------------------- Hamiltonians ---------------------------------

// Hamiltonian on the 2(2I+1)-dimensional space |s⟩ ⊗ |I, M⟩ of one bath sector.
inline Matrix build_sector_hamiltonian(const SystemConfig& cfg, const SectorLabel& label) {
    cfg.validate();
    if (label.twice_I < 0 || label.twice_I > cfg.N || (cfg.N - label.twice_I) % 2 != 0)
        throw InvalidArgument("build_sector_hamiltonian: sector label does not belong to this N");
    const SpinMatrices s = spin_matrices(1);
    const SpinMatrices b = spin_matrices(label.twice_I);
    const Matrix id_s = Matrix::Identity(2, 2);
    const Matrix id_b = Matrix::Identity(b.z.rows(), b.z.cols());

    Matrix H = -cfg.omega_S * kron(s.z, id_b) - cfg.omega_I * kron(id_s, b.z);
    const double half_J = 0.5 * cfg.J;
    switch (cfg.coupling) {
        case Coupling::RW:
            H += half_J * (kron(s.plus, b.minus) + kron(s.minus, b.plus));
            break;
        case Coupling::CR:
            H += half_J * (kron(s.plus, b.plus) + kron(s.minus, b.minus));
            break;
        case Coupling::XX:
            H += 2.0 * cfg.J * kron(s.x(), b.x());
            break;
        case Coupling::ISO:
            H += cfg.J * (kron(s.x(), b.x()) + kron(s.y(), b.y()));
            break;
    }
    return H;
}

// Largest bath handled by the dense full-space engine (dimension 2^17).
inline constexpr int kFullSpaceMaxN = 16;

// Hamiltonian on the 2^(N+1)-dimensional product space, assembled spin by spin.
inline Matrix build_full_hamiltonian(const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.N > kFullSpaceMaxN) throw InvalidArgument("build_full_hamiltonian: N exceeds the full-space cap");
    const int n = cfg.N + 1;
    const SpinMatrices s = spin_matrices(1);

    Matrix H = -cfg.omega_S * embed(s.z, 0, n);
    for (int k = 1; k < n; ++k) {
        H -= cfg.omega_I * embed(s.z, k, n);
        auto pair = [&](const Matrix& a, const Matrix& b) -> Matrix { return embed(a, 0, n) * embed(b, k, n); };
        switch (cfg.coupling) {
            case Coupling::RW:
                H += 0.5 * cfg.J * (pair(s.plus, s.minus) + pair(s.minus, s.plus));
                break;
            case Coupling::CR:
                H += 0.5 * cfg.J * (pair(s.plus, s.plus) + pair(s.minus, s.minus));
                break;
            case Coupling::XX:
                H += 2.0 * cfg.J * pair(s.x(), s.x());
                break;
            case Coupling::ISO:
                H += cfg.J * (pair(s.x(), s.x()) + pair(s.y(), s.y()));
                break;
        }
    }
    return H;
}

// ------------------------------ propagation ---------------------------------

// exp(-i k H t) from one Hermitian eigendecomposition; k is the angular factor.
class Propagator {
public:
    Propagator(const Matrix& H, double angular_factor) : factor_(angular_factor) {
        if (H.rows() != H.cols() || H.rows() == 0) throw InvalidArgument("Propagator: Hamiltonian must be square");
        Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
        if (solver.info() != Eigen::Success) throw NumericFailure("Propagator: eigendecomposition failed");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    Index dim() const noexcept { return vectors_.rows(); }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }

    Matrix unitary(double t_seconds) const {
        if (!(t_seconds >= 0.0)) throw InvalidArgument("Propagator: duration must be >= 0");
        Eigen::VectorXcd phases(energies_.size());
        for (Index i = 0; i < energies_.size(); ++i) phases(i) = std::polar(1.0, -factor_ * energies_(i) * t_seconds);
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

private:
    double factor_;
    Eigen::VectorXd energies_;
    Matrix vectors_;
};

inline Matrix propagate(const Matrix& rho, const Matrix& U) {
    if (rho.rows() != U.rows() || rho.cols() != U.cols())
        throw InvalidArgument("propagate: state and propagator dimensions differ");
    return U * rho * U.adjoint();
}

inline Matrix propagate(const Matrix& rho, const Matrix& H, double t_seconds, double angular_factor) {
    if (!(t_seconds >= 0.0)) throw InvalidArgument("propagate: duration must be >= 0");
    if (rho.rows() != H.rows() || rho.cols() != H.cols())
        throw InvalidArgument("propagate: state and Hamiltonian dimensions differ");
    if (t_seconds == 0.0) return rho;
    return propagate(rho, Propagator(H, angular_factor).unitary(t_seconds));
}

inline SectorState propagate(const SectorState& st, const Matrix& H, double t_seconds, double angular_factor) {
    SectorState out = st;
    out.rho = propagate(st.rho, H, t_seconds, angular_factor);
    return out;
}

inline FullState propagate(const FullState& st, const Matrix& H, double t_seconds, double angular_factor) {
    FullState out = st;
    out.rho = propagate(st.rho, H, t_seconds, angular_factor);
    return out;
}

}  // namespace zeno
