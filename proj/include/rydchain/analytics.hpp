// analytics.hpp
// Two-atom closed forms, the RK-point check, exponential decay fits and the
// maximal chain length that fits a time budget.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "dynamics.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "protocols.hpp"
#include "targets.hpp"

namespace rydchain {

inline void check_omega(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorKind::Parameter, "Rabi frequency must be positive");
}

// ---------------------------------------------------------------------------
// Two atoms, pulses pi/2 on site 1 then pi on site 2 (GHZ), or pi on site 2 then pi on
// site 1 (transport).
//
// gamma, delta_prime: complex closed forms. delta, gamma_prime, delta_double_prime:
// magnitudes. In the transport output the coefficient of beta|00> has magnitude |gamma|
// (transport_ground), and delta_double_prime = delta^2 completes the normalization.
struct TwoAtomCoefficients {
    cplx gamma;
    cplx delta;
    cplx gamma_prime;
    cplx delta_prime;
    cplx delta_double_prime;
    cplx transport_ground;
    double tau = 0.0;
};

inline TwoAtomCoefficients two_atom_coefficients(double v0, double omega) {
    check_omega(omega);
    using std::numbers::pi;
    const cplx i(0.0, 1.0);
    TwoAtomCoefficients c;
    c.tau = std::sqrt(v0 * v0 + 16.0 * omega * omega);
    const double ph = pi * c.tau / (8.0 * omega);
    c.gamma = std::exp(-i * (pi * v0 / (8.0 * omega))) * (std::cos(ph) + i * v0 * std::sin(ph) / c.tau);
    // 1 - |gamma|^2 = (4 Omega sin(ph) / tau)^2, without cancellation near |gamma| = 1
    const double d = 4.0 * omega * std::abs(std::sin(ph)) / c.tau;
    c.delta = d;
    c.gamma_prime = d;
    const double ph2 = pi * c.tau / (4.0 * omega);
    c.delta_prime = 2.0 * std::exp(-i * (pi * v0 / (4.0 * omega))) * omega *
                    (-i * v0 + i * v0 * std::cos(ph2) + c.tau * std::sin(ph2)) / (c.tau * c.tau);
    c.transport_ground = std::abs(c.gamma);
    c.delta_double_prime = d * d;
    return c;
}

inline double ghz_fidelity_two_atoms(double v0, double omega) {
    return 0.25 * std::norm(1.0 + two_atom_coefficients(v0, omega).gamma);
}

// First local maximum of ghz_fidelity_two_atoms in V0/Omega over (0, upper].
inline double ghz_two_atom_leftmost_peak(double upper = 30.0, double step = 1e-3) {
    auto f = [](double r) { return ghz_fidelity_two_atoms(r, 1.0); };
    double prev = f(step), cur = f(2 * step);
    for (double r = 2 * step; r + step <= upper; r += step) {
        const double next = f(r + step);
        if (cur >= prev && cur > next) {
            // golden-section refinement on [r - step, r + step]
            double lo = r - step, hi = r + step;
            const double g = (std::sqrt(5.0) - 1.0) / 2.0;
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            double f1 = f(x1), f2 = f(x2);
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + g * (hi - lo);
                    f2 = f(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - g * (hi - lo);
                    f1 = f(x1);
                }
            }
            return 0.5 * (lo + hi);
        }
        prev = cur;
        cur = next;
    }
    throw Error(ErrorKind::Numerical, "no interior fidelity maximum below the upper bound");
}

// ---------------------------------------------------------------------------
// RK point

struct RkPoint {
    double delta = 0.0;
    double z = 0.0;
};

inline RkPoint rk_point(double v0, double omega) {
    check_omega(omega);
    if (!(v0 > 0.0)) throw Error(ErrorKind::Parameter, "V0 must be positive");
    return {64.0 * omega * omega / v0 - 3.0 * v0 / 64.0, -v0 / (64.0 * omega)};
}

struct RkOptions {
    InteractionRange range = InteractionRange::NearestNeighborOnly;
    // Ends of an open chain miss one next-nearest neighbour; shift their detuning by V0/64.
    bool open_chain_correction = false;
};

// Omega sum_k sigma_y^(k) + Delta sum_k n_k + interactions, at the RK detuning.
inline Eigen::MatrixXcd rk_hamiltonian(int n_sites, double v0, double omega, const RkOptions& opt = {}) {
    const RkPoint p = rk_point(v0, omega);
    HamiltonianSpec h = HamiltonianSpec::resonant(ideal_couplings(n_sites, v0), opt.range);
    std::fill(h.detuning.begin(), h.detuning.end(), p.delta);
    if (opt.open_chain_correction && n_sites >= 3) {
        h.detuning.front() += v0 / 64.0;
        h.detuning.back() += v0 / 64.0;
    }
    // build_full_hamiltonian drives with 2 Omega_k sigma_y
    return build_full_hamiltonian(h, std::vector<double>(static_cast<std::size_t>(n_sites), omega / 2.0));
}

struct RkCheck {
    RkPoint point;
    double ground_energy = 0.0;
    double overlap = 0.0;
};

// Squared overlap of the dense ground state with the dimer state at the RK z. The
// sigma_y drive makes the ground state the z -> i z partner of the real dimer state.
inline RkCheck rk_check(int n_sites, double v0, double omega, const RkOptions& opt = {}) {
    if (n_sites < 2) throw Error(ErrorKind::Validation, "RK check needs at least two sites");
    if (n_sites > 10) throw Error(ErrorKind::Capacity, "RK check limited to 10 sites");
    RkCheck out;
    out.point = rk_point(v0, omega);
    const GroundState gs = ground_state_dense(rk_hamiltonian(n_sites, v0, omega, opt));
    out.ground_energy = gs.energy;
    out.overlap = fidelity_pure(dimer_target_direct(n_sites, cplx(0.0, out.point.z)), gs.state);
    return out;
}

// ---------------------------------------------------------------------------
// f(N) = a exp(-b (N - 2)), unweighted least squares in linear space.

struct DecayFit {
    double a = 0.0;
    double b = 0.0;
    double sa = 0.0;
    double sb = 0.0;
    double rss = 0.0;
    std::vector<double> residuals;
};

namespace detail {
struct DecayFunctor {
    using Scalar = double;
    const std::vector<std::pair<double, double>>& pts;

    int inputs() const { return 2; }
    int values() const { return static_cast<int>(pts.size()); }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
        for (std::size_t i = 0; i < pts.size(); ++i)
            r(static_cast<Eigen::Index>(i)) = x(0) * std::exp(-x(1) * (pts[i].first - 2.0)) - pts[i].second;
        return 0;
    }
    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double t = pts[i].first - 2.0;
            const double e = std::exp(-x(1) * t);
            J(static_cast<Eigen::Index>(i), 0) = e;
            J(static_cast<Eigen::Index>(i), 1) = -x(0) * t * e;
        }
        return 0;
    }
};
} // namespace detail

inline DecayFit fit_exponential_decay(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw Error(ErrorKind::Numerical, "decay fit needs at least three points");
    std::set<double> distinct;
    for (const auto& [n, f] : points) {
        if (!std::isfinite(n) || !std::isfinite(f)) throw Error(ErrorKind::Numerical, "non-finite fit input");
        distinct.insert(n);
    }
    if (distinct.size() < 2) throw Error(ErrorKind::Numerical, "decay fit needs at least two distinct N");

    // start from the log-linear fit when all values are positive
    Eigen::VectorXd x(2);
    bool positive = true;
    for (const auto& p : points) positive = positive && p.second > 0.0;
    if (positive) {
        Eigen::MatrixXd A(points.size(), 2);
        Eigen::VectorXd y(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            A(static_cast<Eigen::Index>(i), 0) = 1.0;
            A(static_cast<Eigen::Index>(i), 1) = -(points[i].first - 2.0);
            y(static_cast<Eigen::Index>(i)) = std::log(points[i].second);
        }
        const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
        x << std::exp(c(0)), c(1);
    } else {
        double mean = 0.0;
        for (const auto& p : points) mean += p.second;
        x << mean / static_cast<double>(points.size()), 0.0;
    }

    detail::DecayFunctor fn{points};
    Eigen::LevenbergMarquardt<detail::DecayFunctor> lm(fn);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 2000;
    const auto status = lm.minimize(x);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !x.allFinite())
        throw Error(ErrorKind::Numerical, "decay fit failed");

    DecayFit fit;
    fit.a = x(0);
    fit.b = x(1);
    Eigen::VectorXd r(points.size());
    fn(x, r);
    fit.residuals.assign(r.data(), r.data() + r.size());
    fit.rss = r.squaredNorm();
    Eigen::MatrixXd J(points.size(), 2);
    fn.df(x, J);
    const Eigen::Matrix2d JtJ = J.transpose() * J;
    const double s2 = fit.rss / static_cast<double>(points.size() - 2);
    const Eigen::Matrix2d cov = s2 * JtJ.inverse();
    fit.sa = std::sqrt(std::max(0.0, cov(0, 0)));
    fit.sb = std::sqrt(std::max(0.0, cov(1, 1)));
    return fit;
}

// ---------------------------------------------------------------------------
// Largest N whose protocol_duration fits tau_exp; 1 if N = 2 does not fit, n_cap if
// every length up to n_cap does.

inline ProtocolPlan plan_for_length(ProtocolKind kind, int n, double z) {
    switch (kind) {
    case ProtocolKind::GHZ2: return plan_ghz(n, LevelScheme::TwoLevel);
    case ProtocolKind::GHZ3: return plan_ghz(n, LevelScheme::ThreeLevel);
    case ProtocolKind::DimerMPS: return plan_dimer_mps(n, z);
    case ProtocolKind::Transport: return plan_transport(n, 1.0, 0.0);
    }
    throw Error(ErrorKind::Validation, "unknown protocol");
}

inline int estimate_n_max(ProtocolKind kind, double z, double omega, double tau_exp,
                          HyperfinePolicy policy = HyperfinePolicy::Instantaneous, int n_cap = 1000) {
    check_omega(omega);
    if (!(tau_exp >= 0.0)) throw Error(ErrorKind::Parameter, "time budget must be non-negative");
    int best = 1;
    for (int n = 2; n <= n_cap; ++n) {
        if (protocol_duration(plan_for_length(kind, n, z), omega, policy) > tau_exp) break;
        best = n;
    }
    return best;
}

} // namespace rydchain
