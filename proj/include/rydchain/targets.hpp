// targets.hpp
// Target states (antiferromagnetic GHZ, dimer-MPS) and fidelities.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "error.hpp"
#include "protocols.hpp"
#include "statekit.hpp"

namespace rydchain {

// (|0 x 0 x ...> + |x 0 x 0 ...>)/sqrt(2), x = 1~ on three-level chains and 1 on two-level ones.
inline StateVector ghz_target(int n_sites, LevelScheme scheme) {
    if (n_sites < 2) throw Error(ErrorKind::Validation, "GHZ target needs at least two sites");
    StateVector psi = StateVector::zeros(n_sites, scheme);
    const int x = scheme == LevelScheme::ThreeLevel ? level::hyperfine : level::rydberg;
    std::vector<int> a(static_cast<std::size_t>(n_sites)), b(static_cast<std::size_t>(n_sites));
    for (int k = 1; k <= n_sites; ++k) {
        a[static_cast<std::size_t>(k - 1)] = (k % 2 == 0) ? x : level::ground;
        b[static_cast<std::size_t>(k - 1)] = (k % 2 == 1) ? x : level::ground;
    }
    psi[psi.encode(a)] = 1.0 / std::numbers::sqrt2;
    psi[psi.encode(b)] = 1.0 / std::numbers::sqrt2;
    return psi;
}

// prod_k (1 + z P_left sigma+_k P_right) |0...0>, normalized; P_left/right project
// the R sites on either side onto the ground state. A complex z is accepted so that the
// same construction yields the sigma_y-gauge partner (z -> i z) of a real dimer state.
inline StateVector dimer_target_direct(int n_sites, cplx z, int R = 1) {
    if (R < 1) throw Error(ErrorKind::Validation, "blockade radius must be >= 1");
    StateVector psi = ground_state(n_sites, LevelScheme::TwoLevel);
    for (int k = 1; k <= n_sites; ++k) {
        const std::size_t stride = psi.stride(k);
        // every source index has site k in |0>, so in-place updates never feed on themselves
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            if (psi[i] == cplx(0.0) || psi.level_at(i, k) != level::ground) continue;
            bool free = true;
            for (int j = std::max(1, k - R); j <= std::min(n_sites, k + R) && free; ++j)
                if (j != k && psi.level_at(i, j) != level::ground) free = false;
            if (free) psi[i + stride] += z * psi[i];
        }
    }
    psi.normalize();
    return psi;
}

// Two-site transfer matrices of the nearest-neighbour dimer state. The auxiliary
// (bond) basis is ordered (excited, ground), so with l = (z, 1) and r = (0, 1)^T
//   X0 = [[0, 0], [z, 1]],  X1 = [[0, 1], [0, 0]].
struct MpsTensors {
    Eigen::Matrix2d X0;
    Eigen::Matrix2d X1;
    Eigen::RowVector2d l;
    Eigen::Vector2d r;

    static MpsTensors for_z(double z) {
        MpsTensors t;
        t.X0 << 0.0, 0.0, z, 1.0;
        t.X1 << 0.0, 1.0, 0.0, 0.0;
        t.l << z, 1.0;
        t.r << 0.0, 1.0;
        return t;
    }
};

// amplitude(i_1..i_N) = l X_{i_1} ... X_{i_N} r, then normalized.
inline StateVector dimer_target_mps(int n_sites, double z) {
    const MpsTensors t = MpsTensors::for_z(z);
    StateVector psi = StateVector::zeros(n_sites, LevelScheme::TwoLevel);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        Eigen::Vector2d v = t.r;
        for (int k = n_sites; k >= 1; --k) v = (psi.level_at(i, k) == 0 ? t.X0 : t.X1) * v;
        psi[i] = t.l.dot(v);
    }
    psi.normalize();
    return psi;
}

inline double fidelity_pure(const StateVector& target, const StateVector& final_state) {
    return std::norm(inner_product(target, final_state));
}

inline double fidelity_mixed_single_qubit(const std::array<cplx, 2>& target_ket, const SingleQubitDensity& rho) {
    if (std::abs(std::norm(target_ket[0]) + std::norm(target_ket[1]) - 1.0) > norm_tolerance)
        throw Error(ErrorKind::Validation, "target ket is not normalized");
    Eigen::Vector2cd psi(target_ket[0], target_ket[1]);
    return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

// Target of a plan, for the pure-state protocols.
inline StateVector plan_target(const ProtocolPlan& plan) {
    switch (plan.kind) {
    case ProtocolKind::GHZ2:
    case ProtocolKind::GHZ3: return ghz_target(plan.n_sites, plan.scheme);
    case ProtocolKind::DimerMPS: return dimer_target_direct(plan.n_sites, plan.z, plan.blockade_radius);
    case ProtocolKind::Transport: break;
    }
    throw Error(ErrorKind::Validation, "transport has a single-qubit target");
}

// Fidelity of an executed plan with its target: |<target|final>|^2, or <psi_1|rho_N|psi_1>
// for transport.
inline double plan_fidelity(const ProtocolPlan& plan, const StateVector& final_state) {
    if (plan.kind == ProtocolKind::Transport)
        return fidelity_mixed_single_qubit({plan.alpha, plan.beta}, reduce_to_site(final_state, plan.n_sites));
    return fidelity_pure(plan_target(plan), final_state);
}

} // namespace rydchain
