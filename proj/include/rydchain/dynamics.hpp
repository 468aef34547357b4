// dynamics.hpp
// Gate backends for addressed square pulses.
//
// Rotation convention: a pulse of rotation angle theta on a transition (lower, upper)
// acts as exp(-i theta sigma_y) with |lower> playing the role of |0>:
//   |lower> -> cos(theta)|lower> + sin(theta)|upper>.
// A named pi-pulse (population inversion) therefore has theta = pi/2. Under the
// interacting Hamiltonian the drive has matrix element 2*Omega and lasts theta/(2*Omega).
//
// Transitions: ground <-> Rydberg (0 -> 1) and Rydberg <-> hyperfine (1 -> 1~), so a
// pi-pulse maps |1> to +|1~>. Only the Rydberg level carries interaction energy.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "lattice.hpp"
#include "statekit.hpp"

namespace rydchain {

enum class Transition { GroundRydberg, HyperfineRydberg };

struct TransitionLevels {
    int lower;
    int upper;
};

inline constexpr TransitionLevels levels_of(Transition t) {
    return t == Transition::GroundRydberg ? TransitionLevels{level::ground, level::rydberg}
                                          : TransitionLevels{level::rydberg, level::hyperfine};
}

inline void check_transition(Transition t, LevelScheme scheme) {
    if (t == Transition::HyperfineRydberg && scheme != LevelScheme::ThreeLevel)
        throw Error(ErrorKind::Scheme, "hyperfine transition needs a three-level chain");
}

enum class PulseLabel { NamedPi, NamedHalfPi, Literal };

struct PulseStep {
    int site = 1;
    Transition transition = Transition::GroundRydberg;
    double theta = 0.0;
    PulseLabel label = PulseLabel::Literal;

    static PulseStep pi(int site, Transition t = Transition::GroundRydberg) {
        return {site, t, std::numbers::pi / 2, PulseLabel::NamedPi};
    }
    static PulseStep half_pi(int site, Transition t = Transition::GroundRydberg) {
        return {site, t, std::numbers::pi / 4, PulseLabel::NamedHalfPi};
    }
    static PulseStep literal(int site, Transition t, double theta) {
        PulseStep s{site, t, theta, PulseLabel::Literal};
        s.validate();
        return s;
    }

    // Negative angles are allowed: they are produced by area schedules with z < 0.
    void validate() const {
        if (!std::isfinite(theta) || std::abs(theta) > std::numbers::pi)
            throw Error(ErrorKind::Validation, "pulse angle must lie in [-pi, pi]");
        if (label == PulseLabel::NamedPi && theta != std::numbers::pi / 2)
            throw Error(ErrorKind::Validation, "named pi-pulse must have theta = pi/2");
        if (label == PulseLabel::NamedHalfPi && theta != std::numbers::pi / 4)
            throw Error(ErrorKind::Validation, "named pi/2-pulse must have theta = pi/4");
    }

    bool operator==(const PulseStep&) const = default;
};

// Post-processing gate i^power * sigma_y on one site, applied instantaneously.
struct PhasedSigmaY {
    int site = 1;
    int power = 0;

    bool operator==(const PhasedSigmaY&) const = default;
};

struct HamiltonianSpec {
    CouplingMatrix couplings;
    std::vector<double> detuning;
    InteractionRange interaction_range = InteractionRange::Full;

    static HamiltonianSpec resonant(CouplingMatrix c, InteractionRange range = InteractionRange::Full) {
        HamiltonianSpec h;
        h.detuning.assign(static_cast<std::size_t>(c.n_sites()), 0.0);
        h.couplings = std::move(c);
        h.interaction_range = range;
        return h;
    }

    int n_sites() const { return couplings.n_sites(); }

    void validate(int n_sites_expected) const {
        if (couplings.n_sites() != n_sites_expected)
            throw Error(ErrorKind::Shape, "coupling matrix size differs from chain length");
        if (detuning.size() != static_cast<std::size_t>(n_sites_expected))
            throw Error(ErrorKind::Shape, "detuning array length differs from chain length");
    }
};

namespace detail {

inline void check_site(const StateVector& psi, int site) {
    if (site < 1 || site > psi.n_sites())
        throw Error(ErrorKind::Index, "pulse site " + std::to_string(site) + " outside chain");
}

inline bool blockaded(const StateVector& psi, std::size_t index, int site, int radius) {
    const int lo = std::max(1, site - radius);
    const int hi = std::min(psi.n_sites(), site + radius);
    for (int j = lo; j <= hi; ++j)
        if (j != site && psi.level_at(index, j) == level::rydberg) return true;
    return false;
}

} // namespace detail

// Diagonal of the interaction + detuning Hamiltonian in the computational basis.
inline std::vector<double> diagonal_energies(const HamiltonianSpec& h, int n_sites, LevelScheme scheme) {
    h.validate(n_sites);
    const CouplingMatrix v = h.couplings.truncated(h.interaction_range);
    const StateVector shape = StateVector::zeros(n_sites, scheme);
    std::vector<double> e(shape.dim(), 0.0);
    std::vector<int> excited;
    excited.reserve(static_cast<std::size_t>(n_sites));
    for (std::size_t i = 0; i < shape.dim(); ++i) {
        excited.clear();
        for (int k = 1; k <= n_sites; ++k)
            if (shape.level_at(i, k) == level::rydberg) excited.push_back(k);
        double s = 0.0;
        for (std::size_t a = 0; a < excited.size(); ++a) {
            s += h.detuning[static_cast<std::size_t>(excited[a] - 1)];
            for (std::size_t b = a + 1; b < excited.size(); ++b) s += v.energy(excited[a], excited[b]);
        }
        e[i] = s;
    }
    return e;
}

// Perfect-blockade gate: the 0<->1 rotation on `site` happens only if no site within
// `blockade_radius` is in the Rydberg level (sites beyond the chain ends count as
// absent). The hyperfine transfer 1~<->1 is unconstrained.
inline StateVector apply_ideal_gate(StateVector psi, const PulseStep& step, int blockade_radius = 1) {
    step.validate();
    detail::check_site(psi, step.site);
    check_transition(step.transition, psi.scheme());
    const auto [lower, upper] = levels_of(step.transition);
    const double c = std::cos(step.theta);
    const double s = std::sin(step.theta);
    const std::size_t stride = psi.stride(step.site);
    const bool constrained = step.transition == Transition::GroundRydberg;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (psi.level_at(i, step.site) != lower) continue;
        if (constrained && detail::blockaded(psi, i, step.site, blockade_radius)) continue;
        const std::size_t j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) +
                                                       (upper - lower) * static_cast<std::ptrdiff_t>(stride));
        const cplx a = psi[i];
        const cplx b = psi[j];
        psi[i] = c * a - s * b;
        psi[j] = s * a + c * b;
    }
    return psi;
}

namespace detail {

// Closed-form exp(-i t H) of the 2x2 block
//   H = [[e_lo, -i c], [i c, e_hi]]
// applied to every (lower, upper) pair of the addressed site.
inline void apply_block_pulse(StateVector& psi, const PulseStep& step, std::span<const double> diag,
                              double omega) {
    const auto [lower, upper] = levels_of(step.transition);
    const double coupling = std::copysign(2.0 * omega, step.theta);
    const double t = std::abs(step.theta) / (2.0 * omega);
    const std::size_t stride = psi.stride(step.site);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (psi.level_at(i, step.site) != lower) continue;
        const std::size_t j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) +
                                                       (upper - lower) * static_cast<std::ptrdiff_t>(stride));
        const double mean = 0.5 * (diag[i] + diag[j]);
        const double half_gap = 0.5 * (diag[j] - diag[i]);
        const double w = std::hypot(half_gap, coupling);
        const double cw = std::cos(w * t);
        const double sw = w > 0.0 ? std::sin(w * t) / w : t;
        const cplx phase = std::polar(1.0, -mean * t);
        const cplx u00 = phase * cplx(cw, half_gap * sw);
        const cplx u11 = phase * cplx(cw, -half_gap * sw);
        const cplx u10 = phase * (coupling * sw);
        const cplx a = psi[i];
        const cplx b = psi[j];
        psi[i] = u00 * a - u10 * b;
        psi[j] = u10 * a + u11 * b;
    }
}

} // namespace detail

// Exact evolution under 2*Omega*sigma_y on the addressed transition plus the full
// interaction/detuning diagonal, for duration |theta|/(2*Omega). A negative angle is
// realised by reversing the drive phase.
inline StateVector apply_realistic_pulse(StateVector psi, const PulseStep& step, const HamiltonianSpec& h,
                                         double omega) {
    step.validate();
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw Error(ErrorKind::Parameter, "Rabi frequency must be positive");
    detail::check_site(psi, step.site);
    check_transition(step.transition, psi.scheme());
    const std::vector<double> diag = diagonal_energies(h, psi.n_sites(), psi.scheme());
    detail::apply_block_pulse(psi, step, diag, omega);
    return psi;
}

inline StateVector apply_post_gate(StateVector psi, const PhasedSigmaY& gate) {
    detail::check_site(psi, gate.site);
    static constexpr cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx ph = ipow[((gate.power % 4) + 4) % 4];
    // sigma_y = i(|1><0| - |0><1|) on the 0/1 levels; a hyperfine level is left alone.
    const std::size_t stride = psi.stride(gate.site);
    const cplx i1(0, 1);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (psi.level_at(i, gate.site) != level::ground) continue;
        const cplx a = psi[i];
        const cplx b = psi[i + stride];
        psi[i] = ph * (-i1) * b;
        psi[i + stride] = ph * i1 * a;
    }
    return psi;
}

inline constexpr int dense_max_sites = 12;

namespace detail {
inline void check_dense_sites(int n) {
    if (n < 1) throw Error(ErrorKind::Validation, "need at least one site");
    if (n > dense_max_sites)
        throw Error(ErrorKind::Capacity, "dense Hamiltonian limited to " + std::to_string(dense_max_sites) + " sites");
}
} // namespace detail

// H = sum_k 2 Omega_k sigma_y^(k) + sum_k Delta_k n_k + interactions (two-level chain).
inline Eigen::MatrixXcd build_full_hamiltonian(const HamiltonianSpec& h, const std::vector<double>& omega_per_site) {
    const int n = h.n_sites();
    detail::check_dense_sites(n);
    if (omega_per_site.size() != static_cast<std::size_t>(n))
        throw Error(ErrorKind::Shape, "Rabi frequency array length differs from chain length");
    const std::vector<double> diag = diagonal_energies(h, n, LevelScheme::TwoLevel);
    const StateVector shape = StateVector::zeros(n, LevelScheme::TwoLevel);
    const auto dim = static_cast<Eigen::Index>(shape.dim());
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) H(i, i) = diag[static_cast<std::size_t>(i)];
    for (int k = 1; k <= n; ++k) {
        const double c = 2.0 * omega_per_site[static_cast<std::size_t>(k - 1)];
        if (c == 0.0) continue;
        const auto stride = static_cast<Eigen::Index>(shape.stride(k));
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (shape.level_at(static_cast<std::size_t>(i), k) != level::ground) continue;
            H(i + stride, i) += cplx(0, c);
            H(i, i + stride) += cplx(0, -c);
        }
    }
    return H;
}

// Perfect-blockade Hamiltonian sum_k Omega_k P_{k-1} sigma_y^(k) P_{k+1},
// optionally with the next-nearest-neighbour term (V0/64) sum_k n_k n_{k+2}.
inline Eigen::MatrixXcd build_effective_hamiltonian(int n_sites, const std::vector<double>& omega_per_site,
                                                    bool include_nnn, double v0) {
    detail::check_dense_sites(n_sites);
    if (omega_per_site.size() != static_cast<std::size_t>(n_sites))
        throw Error(ErrorKind::Shape, "Rabi frequency array length differs from chain length");
    const StateVector shape = StateVector::zeros(n_sites, LevelScheme::TwoLevel);
    const auto dim = static_cast<Eigen::Index>(shape.dim());
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (include_nnn) {
            double e = 0.0;
            for (int k = 1; k + 2 <= n_sites; ++k)
                if (shape.level_at(idx, k) == level::rydberg && shape.level_at(idx, k + 2) == level::rydberg)
                    e += v0 / 64.0;
            H(i, i) = e;
        }
        for (int k = 1; k <= n_sites; ++k) {
            const double om = omega_per_site[static_cast<std::size_t>(k - 1)];
            if (om == 0.0 || shape.level_at(idx, k) != level::ground) continue;
            if (detail::blockaded(shape, idx, k, 1)) continue;
            const auto j = i + static_cast<Eigen::Index>(shape.stride(k));
            H(j, i) += cplx(0, om);
            H(i, j) += cplx(0, -om);
        }
    }
    return H;
}

struct GroundState {
    double energy;
    StateVector state;
};

inline constexpr Eigen::Index dense_max_dimension = 4096;

inline GroundState ground_state_dense(const Eigen::MatrixXcd& H) {
    const Eigen::Index dim = H.rows();
    if (dim != H.cols() || dim < 2) throw Error(ErrorKind::Shape, "Hamiltonian must be square, dimension >= 2");
    if (dim > dense_max_dimension) throw Error(ErrorKind::Capacity, "dense diagonalization limited to 4096");
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim) throw Error(ErrorKind::Shape, "dimension is not a power of two");
    const double scale = 1.0 + H.cwiseAbs().maxCoeff();
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorKind::Validation, "Hamiltonian is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "eigensolver failed");
    const double e0 = es.eigenvalues()(0);
    Eigen::VectorXcd v = es.eigenvectors().col(0);
    v.normalize();
    const double residual = (H * v - e0 * v).norm();
    if (residual > 1e-8 * scale)
        throw Error(ErrorKind::Numerical, "ground-state residual " + std::to_string(residual));
    std::vector<cplx> amps(v.data(), v.data() + dim);
    return {e0, StateVector(n, LevelScheme::TwoLevel, std::move(amps))};
}

} // namespace rydchain
