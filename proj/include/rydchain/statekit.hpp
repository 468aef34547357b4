// statekit.hpp
// Dense state vectors over chains of 2- or 3-level atoms.
//
// Basis ordering: an index is the radix-d number i_1 i_2 ... i_N with site 1 as the
// most significant digit (d = local dimension). Digit values are the level labels:
//   0 -> ground |0>, 1 -> Rydberg |1>, 2 -> hyperfine |1~> (three-level chains only).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace rydchain {

using cplx = std::complex<double>;

enum class LevelScheme { TwoLevel, ThreeLevel };

inline constexpr int local_dim(LevelScheme scheme) { return scheme == LevelScheme::TwoLevel ? 2 : 3; }

inline const char* to_string(LevelScheme scheme) {
    return scheme == LevelScheme::TwoLevel ? "two-level" : "three-level";
}

namespace level {
inline constexpr int ground = 0;
inline constexpr int rydberg = 1;
inline constexpr int hyperfine = 2;
} // namespace level

inline constexpr std::size_t default_max_amplitudes = std::size_t{1} << 20;
inline constexpr double norm_tolerance = 1e-10;

// Hilbert-space dimension of an n-site chain; throws Capacity above `max_amplitudes`.
inline std::size_t chain_dimension(int n_sites, LevelScheme scheme,
                                   std::size_t max_amplitudes = default_max_amplitudes) {
    if (n_sites < 1) throw Error(ErrorKind::Validation, "chain needs at least one site");
    const std::size_t d = static_cast<std::size_t>(local_dim(scheme));
    std::size_t dim = 1;
    for (int k = 0; k < n_sites; ++k) {
        if (dim > max_amplitudes / d)
            throw Error(ErrorKind::Capacity, std::to_string(n_sites) + "-site " + to_string(scheme) +
                                                 " chain exceeds " + std::to_string(max_amplitudes) +
                                                 " amplitudes");
        dim *= d;
    }
    return dim;
}

class StateVector {
public:
    StateVector(int n_sites, LevelScheme scheme, std::vector<cplx> amplitudes)
        : n_sites_(n_sites), scheme_(scheme), amplitudes_(std::move(amplitudes)) {
        // capacity is checked against the actual length, not the default cap
        const std::size_t expected = chain_dimension(n_sites, scheme, amplitudes_.size() + 1);
        if (expected != amplitudes_.size())
            throw Error(ErrorKind::Shape, "amplitude array of length " + std::to_string(amplitudes_.size()) +
                                              " does not match " + std::to_string(expected));
        strides_.resize(static_cast<std::size_t>(n_sites));
        std::size_t s = 1;
        for (int site = n_sites; site >= 1; --site) {
            strides_[static_cast<std::size_t>(site - 1)] = s;
            s *= static_cast<std::size_t>(local_dim(scheme));
        }
    }

    static StateVector zeros(int n_sites, LevelScheme scheme,
                             std::size_t max_amplitudes = default_max_amplitudes) {
        return StateVector(n_sites, scheme,
                           std::vector<cplx>(chain_dimension(n_sites, scheme, max_amplitudes)));
    }

    int n_sites() const noexcept { return n_sites_; }
    LevelScheme scheme() const noexcept { return scheme_; }
    int local_dimension() const noexcept { return local_dim(scheme_); }
    std::size_t dim() const noexcept { return amplitudes_.size(); }

    std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
    std::span<cplx> amplitudes() noexcept { return amplitudes_; }
    cplx operator[](std::size_t i) const { return amplitudes_[i]; }
    cplx& operator[](std::size_t i) { return amplitudes_[i]; }

    // Index step between consecutive levels of a 1-based site.
    std::size_t stride(int site) const { return strides_[static_cast<std::size_t>(site - 1)]; }

    int level_at(std::size_t index, int site) const {
        return static_cast<int>((index / stride(site)) % static_cast<std::size_t>(local_dimension()));
    }

    std::vector<int> decode(std::size_t index) const {
        std::vector<int> occ(static_cast<std::size_t>(n_sites_));
        for (int site = 1; site <= n_sites_; ++site) occ[static_cast<std::size_t>(site - 1)] = level_at(index, site);
        return occ;
    }

    std::size_t encode(std::span<const int> levels) const {
        if (levels.size() != static_cast<std::size_t>(n_sites_))
            throw Error(ErrorKind::Shape, "occupation list length differs from chain length");
        std::size_t index = 0;
        for (int site = 1; site <= n_sites_; ++site) {
            const int l = levels[static_cast<std::size_t>(site - 1)];
            if (l < 0 || l >= local_dimension())
                throw Error(ErrorKind::Validation, "level " + std::to_string(l) + " not in " + to_string(scheme_));
            index += static_cast<std::size_t>(l) * stride(site);
        }
        return index;
    }

    double squared_norm() const {
        double s = 0.0;
        for (const cplx& a : amplitudes_) s += std::norm(a);
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    bool is_normalized(double tol = norm_tolerance) const { return std::abs(norm() - 1.0) <= tol; }

    void normalize() {
        const double n = norm();
        if (n == 0.0) throw Error(ErrorKind::Validation, "cannot normalize the zero vector");
        for (cplx& a : amplitudes_) a /= n;
    }

    void check_normalized(const char* context) const {
        if (!is_normalized())
            throw Error(ErrorKind::Numerical, std::string(context) + ": norm drifted to " + std::to_string(norm()));
    }

    bool same_shape(const StateVector& other) const noexcept {
        return n_sites_ == other.n_sites_ && scheme_ == other.scheme_;
    }

private:
    int n_sites_;
    LevelScheme scheme_;
    std::vector<cplx> amplitudes_;
    std::vector<std::size_t> strides_;
};

// Single-site reduced density matrix of a two-level chain.
class SingleQubitDensity {
public:
    static constexpr double tolerance = 1e-12;

    explicit SingleQubitDensity(const Eigen::Matrix2cd& rho) : rho_(rho) {
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tolerance)
            throw Error(ErrorKind::Validation, "density matrix is not Hermitian");
        if (std::abs(rho_.trace() - cplx(1.0)) > tolerance)
            throw Error(ErrorKind::Validation, "density matrix trace differs from 1");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho_);
        if (es.eigenvalues().minCoeff() < -tolerance)
            throw Error(ErrorKind::Validation, "density matrix has a negative eigenvalue");
    }

    const Eigen::Matrix2cd& matrix() const noexcept { return rho_; }
    cplx operator()(int r, int c) const { return rho_(r, c); }

private:
    Eigen::Matrix2cd rho_;
};

inline StateVector ground_state(int n_sites, LevelScheme scheme,
                                std::size_t max_amplitudes = default_max_amplitudes) {
    StateVector psi = StateVector::zeros(n_sites, scheme, max_amplitudes);
    psi[0] = 1.0;
    return psi;
}

// <a|b>, conjugate-linear in a.
inline cplx inner_product(const StateVector& a, const StateVector& b) {
    if (!a.same_shape(b)) throw Error(ErrorKind::Shape, "inner product of states with different shapes");
    cplx s = 0.0;
    const auto av = a.amplitudes();
    const auto bv = b.amplitudes();
    for (std::size_t i = 0; i < av.size(); ++i) s += std::conj(av[i]) * bv[i];
    return s;
}

inline SingleQubitDensity reduce_to_site(const StateVector& psi, int site) {
    if (psi.scheme() != LevelScheme::TwoLevel)
        throw Error(ErrorKind::Scheme, "single-qubit reduction needs a two-level chain");
    if (site < 1 || site > psi.n_sites())
        throw Error(ErrorKind::Index, "site " + std::to_string(site) + " outside 1.." + std::to_string(psi.n_sites()));
    const std::size_t s = psi.stride(site);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (psi.level_at(i, site) != 0) continue;
        const cplx a0 = psi[i];
        const cplx a1 = psi[i + s];
        rho(0, 0) += std::norm(a0);
        rho(1, 1) += std::norm(a1);
        rho(0, 1) += a0 * std::conj(a1);
    }
    rho(1, 0) = std::conj(rho(0, 1));
    return SingleQubitDensity(rho);
}

// (alpha|0> + beta|1>) on site 1, every other site in |0>.
inline StateVector embed_initial_qubit(cplx alpha, cplx beta, int n_sites) {
    const double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > norm_tolerance)
        throw Error(ErrorKind::Validation, "initial qubit (alpha, beta) is not normalized: |alpha|^2+|beta|^2 = " +
                                               std::to_string(n2));
    StateVector psi = StateVector::zeros(n_sites, LevelScheme::TwoLevel);
    psi[0] = alpha;
    psi[psi.stride(1)] = beta;
    return psi;
}

} // namespace rydchain
