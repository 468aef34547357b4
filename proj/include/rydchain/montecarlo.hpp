// montecarlo.hpp
// Disorder-averaged fidelity sweeps over chain lengths and V0/Omega grids.
//
// Energies are measured in units of Omega (Omega = 1, V0 = grid value) on a chain of
// spacing presets::spacing_r0_um, so disorder widths keep their micrometre meaning.
// Each realization draws one atom configuration that stays fixed for the whole run.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "dynamics.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "protocols.hpp"
#include "statekit.hpp"
#include "targets.hpp"

namespace rydchain {

struct SweepSpec {
    ProtocolKind kind = ProtocolKind::GHZ2;
    double z = 1.0;     // dimer-MPS
    int R = 1;          // dimer-MPS
    cplx alpha = 1.0;   // transport
    cplx beta = 0.0;    // transport
    std::vector<int> n_values;
    std::vector<double> grid;  // V0 / Omega
    DisorderSpec disorder;
    int realizations = 1000;
    std::uint64_t master_seed = 0;
    InteractionRange range = InteractionRange::Full;
    double spacing_r0 = presets::spacing_r0_um;
    int workers = 0;  // 0: RYDCHAIN_WORKERS, else hardware concurrency
    bool keep_raw = false;

    void validate() const {
        if (realizations < 1) throw Error(ErrorKind::Validation, "realizations must be >= 1");
        if (n_values.empty()) throw Error(ErrorKind::Validation, "no chain lengths given");
        for (int n : n_values)
            if (n < 1) throw Error(ErrorKind::Validation, "chain lengths must be positive");
        if (grid.empty()) throw Error(ErrorKind::Validation, "empty V0/Omega grid");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]))
                throw Error(ErrorKind::Validation, "V0/Omega values must be finite and >= 0");
            if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorKind::Validation, "grid must be strictly increasing");
        }
        if (!(spacing_r0 > 0.0)) throw Error(ErrorKind::Validation, "lattice spacing must be positive");
        if (workers < 0) throw Error(ErrorKind::Validation, "worker count must be >= 0");
        disorder.validate();
    }
};

struct SweepRecord {
    std::string protocol;
    int n_sites = 0;
    double v0_over_omega = 0.0;
    std::string disorder;
    int realizations = 0;
    double mean_fidelity = 0.0;
    double std_error = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::string error;         // non-empty if the cell could not be computed
    std::vector<double> raw;   // per-realization values when keep_raw is set

    bool ok() const { return error.empty(); }
};

inline int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RYDCHAIN_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

inline ProtocolPlan sweep_plan(const SweepSpec& spec, int n_sites) {
    switch (spec.kind) {
    case ProtocolKind::GHZ2: return plan_ghz(n_sites, LevelScheme::TwoLevel);
    case ProtocolKind::GHZ3: return plan_ghz(n_sites, LevelScheme::ThreeLevel);
    case ProtocolKind::DimerMPS: return plan_dimer_mps(n_sites, spec.z, spec.R);
    case ProtocolKind::Transport: return plan_transport(n_sites, spec.alpha, spec.beta);
    }
    throw Error(ErrorKind::Validation, "unknown protocol");
}

inline std::uint64_t realization_seed(const SweepSpec& spec, int n_sites, std::size_t grid_index,
                                      std::size_t realization) {
    return derive_seed({spec.master_seed, static_cast<std::uint64_t>(n_sites), grid_index, realization});
}

inline double realization_fidelity(const SweepSpec& spec, const ProtocolPlan& plan, std::size_t grid_index,
                                   std::size_t realization) {
    const double v0 = spec.grid.at(grid_index);
    const LatticeSpec lat{plan.n_sites, spec.spacing_r0, v0};
    const AtomConfiguration cfg =
        sample_configuration(lat, spec.disorder, realization_seed(spec, plan.n_sites, grid_index, realization));
    RealisticBackend backend;
    backend.hamiltonian = HamiltonianSpec::resonant(coupling_matrix(cfg, v0, spec.spacing_r0), spec.range);
    backend.omega = 1.0;
    return plan_fidelity(plan, execute(plan, backend));
}

inline double realization_fidelity(const SweepSpec& spec, int n_sites, std::size_t grid_index,
                                   std::size_t realization) {
    spec.validate();
    return realization_fidelity(spec, sweep_plan(spec, n_sites), grid_index, realization);
}

inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t n_grid = spec.grid.size();
    const auto reals = static_cast<std::size_t>(spec.realizations);
    const std::size_t n_cells = spec.n_values.size() * n_grid;

    // plans per chain length; lengths that cannot be planned or stored fail their cells
    std::vector<ProtocolPlan> plans(spec.n_values.size());
    std::vector<std::string> plan_error(spec.n_values.size());
    for (std::size_t a = 0; a < spec.n_values.size(); ++a) {
        try {
            plans[a] = sweep_plan(spec, spec.n_values[a]);
            chain_dimension(plans[a].n_sites, plans[a].scheme);
        } catch (const Error& e) {
            plan_error[a] = e.what();
        }
    }

    std::vector<double> values(n_cells * reals, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> cell_error(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) cell_error[c] = plan_error[c / n_grid];

    // work unit: one realization of one cell; results land in fixed slots
    std::atomic<std::size_t> next{0};
    std::vector<std::string> unit_error(n_cells * reals);
    auto worker = [&] {
        for (;;) {
            const std::size_t u = next.fetch_add(1);
            if (u >= values.size()) return;
            const std::size_t c = u / reals;
            if (!cell_error[c].empty()) continue;
            try {
                values[u] = realization_fidelity(spec, plans[c / n_grid], c % n_grid, u % reals);
            } catch (const Error& e) {
                unit_error[u] = e.what();
            }
        }
    };
    const int n_workers = std::min<int>(worker_count(spec.workers), static_cast<int>(std::max<std::size_t>(1, values.size())));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }

    std::vector<SweepRecord> out;
    out.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        SweepRecord rec;
        rec.protocol = to_string(spec.kind);
        rec.n_sites = spec.n_values[c / n_grid];
        rec.v0_over_omega = spec.grid[c % n_grid];
        rec.disorder = spec.disorder.preset_name();
        rec.realizations = spec.realizations;
        rec.error = cell_error[c];
        for (std::size_t r = 0; r < reals && rec.error.empty(); ++r)
            if (!unit_error[c * reals + r].empty()) rec.error = unit_error[c * reals + r];
        if (!rec.ok()) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rec.mean_fidelity = rec.std_error = rec.min = rec.max = nan;
            out.push_back(std::move(rec));
            continue;
        }
        const double* v = values.data() + c * reals;
        double sum = 0.0;
        rec.min = v[0];
        rec.max = v[0];
        for (std::size_t r = 0; r < reals; ++r) {
            sum += v[r];
            rec.min = std::min(rec.min, v[r]);
            rec.max = std::max(rec.max, v[r]);
        }
        rec.mean_fidelity = sum / static_cast<double>(reals);
        if (reals > 1) {
            double ss = 0.0;
            for (std::size_t r = 0; r < reals; ++r) ss += (v[r] - rec.mean_fidelity) * (v[r] - rec.mean_fidelity);
            rec.std_error = std::sqrt(ss / static_cast<double>(reals - 1)) / std::sqrt(static_cast<double>(reals));
        }
        if (spec.keep_raw) rec.raw.assign(v, v + reals);
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace rydchain
