// lattice.hpp
// Chain geometry, Gaussian positional disorder and van der Waals coupling matrices.
//
// Units: lengths in micrometres, energies as angular frequencies in rad/us.
// The chain runs along the third axis: the ideal position of site k is (0, 0, k r0).

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace rydchain {

using Vec3 = Eigen::Vector3d;

namespace presets {
inline constexpr double spacing_r0_um = 4.1;
inline constexpr double sigma_tight_um = 0.120;
inline constexpr double sigma_loose_um = 1.0;
} // namespace presets

// Converts a frequency quoted as 2*pi x MHz to rad/us.
inline constexpr double from_mhz(double mhz) { return 2.0 * std::numbers::pi * mhz; }

struct LatticeSpec {
    int n_sites = 2;
    double spacing_r0 = presets::spacing_r0_um;
    double v0 = 0.0;  // nearest-neighbour interaction C6 / r0^6

    void validate() const {
        if (n_sites < 1) throw Error(ErrorKind::Validation, "lattice needs at least one site");
        if (!(spacing_r0 > 0.0) || !std::isfinite(spacing_r0))
            throw Error(ErrorKind::Validation, "lattice spacing must be positive");
        if (!(v0 >= 0.0) || !std::isfinite(v0)) throw Error(ErrorKind::Validation, "V0 must be non-negative");
    }

    double c6() const { return v0 * std::pow(spacing_r0, 6); }
};

enum class DisorderKind { None, Isotropic, Anisotropic, Custom };

struct DisorderSpec {
    std::array<double, 3> sigma{0.0, 0.0, 0.0};
    DisorderKind kind = DisorderKind::None;

    static DisorderSpec none() { return {}; }
    static DisorderSpec isotropic(double s = presets::sigma_tight_um) {
        return {{s, s, s}, DisorderKind::Isotropic};
    }
    static DisorderSpec anisotropic() {
        return {{presets::sigma_loose_um, presets::sigma_tight_um, presets::sigma_tight_um},
                DisorderKind::Anisotropic};
    }
    static DisorderSpec custom(std::array<double, 3> s) {
        DisorderSpec d{s, DisorderKind::Custom};
        d.validate();
        return d;
    }

    // Preset names used on the command line and in CSV output.
    static DisorderSpec from_preset(const std::string& name) {
        if (name == "none") return none();
        if (name == "iso") return isotropic();
        if (name == "aniso") return anisotropic();
        throw Error(ErrorKind::Usage, "unknown disorder preset '" + name + "' (none|iso|aniso)");
    }

    std::string preset_name() const {
        switch (kind) {
        case DisorderKind::None: return "none";
        case DisorderKind::Isotropic: return "iso";
        case DisorderKind::Anisotropic: return "aniso";
        case DisorderKind::Custom: return "custom";
        }
        return "custom";
    }

    bool is_zero() const { return sigma[0] == 0.0 && sigma[1] == 0.0 && sigma[2] == 0.0; }

    void validate() const {
        for (double s : sigma)
            if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorKind::Validation, "disorder widths must be >= 0");
        if ((kind == DisorderKind::None) != is_zero())
            throw Error(ErrorKind::Validation, "disorder kind None requires zero widths and vice versa");
    }
};

struct AtomConfiguration {
    std::vector<Vec3> positions;

    int n_sites() const { return static_cast<int>(positions.size()); }
};

// Which pairs keep their van der Waals energy, counted by index distance |k-m|.
enum class InteractionRange { Full, NearestNeighborOnly, NextNearestNeighbor };

inline int max_index_distance(InteractionRange range) {
    switch (range) {
    case InteractionRange::NearestNeighborOnly: return 1;
    case InteractionRange::NextNearestNeighbor: return 2;
    case InteractionRange::Full: break;
    }
    return 1 << 30;
}

inline const char* to_string(InteractionRange range) {
    switch (range) {
    case InteractionRange::Full: return "full";
    case InteractionRange::NearestNeighborOnly: return "nn";
    case InteractionRange::NextNearestNeighbor: return "nnn";
    }
    return "full";
}

inline InteractionRange interaction_range_from_string(const std::string& s) {
    if (s == "full") return InteractionRange::Full;
    if (s == "nn") return InteractionRange::NearestNeighborOnly;
    if (s == "nnn") return InteractionRange::NextNearestNeighbor;
    throw Error(ErrorKind::Usage, "unknown interaction range '" + s + "' (full|nn|nnn)");
}

// Symmetric pair-energy matrix, zero diagonal. Sites are 1-based in energy().
class CouplingMatrix {
public:
    CouplingMatrix() = default;
    explicit CouplingMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw Error(ErrorKind::Shape, "coupling matrix must be square");
    }

    int n_sites() const { return static_cast<int>(m_.rows()); }
    double energy(int k, int m) const { return m_(k - 1, m - 1); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    CouplingMatrix truncated(InteractionRange range) const {
        const int reach = max_index_distance(range);
        Eigen::MatrixXd t = m_;
        for (Eigen::Index i = 0; i < t.rows(); ++i)
            for (Eigen::Index j = 0; j < t.cols(); ++j)
                if (std::abs(i - j) > reach) t(i, j) = 0.0;
        return CouplingMatrix(std::move(t));
    }

private:
    Eigen::MatrixXd m_;
};

// ---------------------------------------------------------------------------
// Deterministic seeding and Gaussian sampling.
//
// Seeds are combined with the splitmix64 finalizer; each realization then draws from
// its own std::mt19937_64 stream, and standard normals come from the Box-Muller
// transform (std::normal_distribution is not reproducible across standard libraries).

inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6A09E667F3BCC909ull;
    for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
    return h;
}

class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1), both from 53 random bits
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// ---------------------------------------------------------------------------

inline AtomConfiguration ideal_configuration(const LatticeSpec& spec) {
    spec.validate();
    AtomConfiguration cfg;
    cfg.positions.reserve(static_cast<std::size_t>(spec.n_sites));
    for (int k = 1; k <= spec.n_sites; ++k) cfg.positions.emplace_back(0.0, 0.0, k * spec.spacing_r0);
    return cfg;
}

inline AtomConfiguration sample_configuration(const LatticeSpec& spec, const DisorderSpec& disorder,
                                              std::uint64_t seed) {
    disorder.validate();
    AtomConfiguration cfg = ideal_configuration(spec);
    if (disorder.is_zero()) return cfg;
    GaussianSampler gauss(seed);
    for (Vec3& r : cfg.positions)
        for (int axis = 0; axis < 3; ++axis) r[axis] += disorder.sigma[static_cast<std::size_t>(axis)] * gauss.next();
    return cfg;
}

// V_km = V0 (r0 / |r_k - r_m|)^6 over the full 3-D distance.
inline CouplingMatrix coupling_matrix(const AtomConfiguration& config, double v0, double r0) {
    if (!(r0 > 0.0)) throw Error(ErrorKind::Validation, "r0 must be positive");
    const int n = config.n_sites();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        if (!config.positions[static_cast<std::size_t>(k)].allFinite())
            throw Error(ErrorKind::Geometry, "non-finite atom position");
        for (int j = k + 1; j < n; ++j) {
            const double d = (config.positions[static_cast<std::size_t>(k)] -
                              config.positions[static_cast<std::size_t>(j)]).norm();
            if (!(d > 0.0))
                throw Error(ErrorKind::Geometry,
                            "atoms " + std::to_string(k + 1) + " and " + std::to_string(j + 1) + " coincide");
            const double ratio = r0 / d;
            const double r3 = ratio * ratio * ratio;
            m(k, j) = m(j, k) = v0 * r3 * r3;
        }
    }
    return CouplingMatrix(std::move(m));
}

// Couplings of the undisturbed chain, V0 / |k-m|^6.
inline CouplingMatrix ideal_couplings(int n_sites, double v0, InteractionRange range = InteractionRange::Full) {
    LatticeSpec spec{n_sites, 1.0, v0};
    return coupling_matrix(ideal_configuration(spec), v0, 1.0).truncated(range);
}

} // namespace rydchain
