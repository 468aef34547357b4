// Acceptance checks: one PASS/FAIL line per criterion, details indented below.
// Exit status is 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rydchain.hpp"

using namespace rydchain;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void note(const std::string& s) { notes.push_back(s); }
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string num(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RealisticBackend ideal_chain(int n, double ratio, InteractionRange range = InteractionRange::Full) {
    RealisticBackend b;
    b.hamiltonian = HamiltonianSpec::resonant(ideal_couplings(n, ratio), range);
    b.omega = 1.0;
    return b;
}

// 1 ---------------------------------------------------------------------------
Outcome c1_two_atom_ghz() {
    Outcome o;
    Timer t;
    const ProtocolPlan p = plan_ghz(2, LevelScheme::TwoLevel);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = 0.1 + (100.0 - 0.1) * i / 99.0;
        worst = std::max(worst, std::abs(plan_fidelity(p, execute(p, ideal_chain(2, r))) - ghz_fidelity_two_atoms(r, 1.0)));
    }
    const double s = t.seconds();
    o.require(worst <= 1e-10, "max |F_sim - |1+gamma|^2/4| = " + num(worst, 3) + " over 100 points in [0.1, 100]");
    o.require(s < 1.0, "runtime " + num(s, 3) + " s");
    return o;
}

// 2 ---------------------------------------------------------------------------
Outcome c2_two_atom_transport() {
    Outcome o;
    Timer t;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = 0.5 + 2.5 * i;
        const TwoAtomCoefficients c = two_atom_coefficients(r, 1.0);
        // coefficients refer to the state before the final sigma_y correction
        ProtocolPlan pa = plan_transport(2, 1.0, 0.0), pb = plan_transport(2, 0.0, 1.0);
        pa.post_steps.clear();
        pb.post_steps.clear();
        const StateVector a = execute(pa, ideal_chain(2, r));
        const StateVector b = execute(pb, ideal_chain(2, r));
        worst = std::max({worst, std::abs(std::abs(a[3]) - std::abs(c.gamma_prime)),
                          std::abs(std::abs(b[3]) - std::abs(c.delta_prime)),
                          std::abs(std::abs(b[1]) - std::abs(c.delta_double_prime)),
                          std::abs(std::abs(a[1]) - std::abs(c.gamma)),
                          std::abs(std::abs(b[0]) - std::abs(c.transport_ground))});
    }
    const double s = t.seconds();
    o.require(worst <= 1e-10, "max magnitude deviation (|gamma'|, |delta'|, |delta''|) = " + num(worst, 3) + " at 20 points");
    o.require(s < 1.0, "runtime " + num(s, 3) + " s");
    return o;
}

// 3 ---------------------------------------------------------------------------
Outcome c3_limits() {
    Outcome o;
    const ProtocolPlan g3 = plan_ghz(2, LevelScheme::ThreeLevel);
    const double f_small = plan_fidelity(g3, execute(g3, ideal_chain(2, 1e-4)));
    o.require(std::abs(f_small - 0.25) <= 1e-3, "GHZ3 N=2 at V0/Omega=1e-4: F = " + num(f_small, 8));
    for (int n : {2, 4}) {
        const ProtocolPlan p = plan_ghz(n, LevelScheme::ThreeLevel);
        const double f = plan_fidelity(p, execute(p, ideal_chain(n, 1e4)));
        o.require(f >= 0.999, "GHZ3 N=" + std::to_string(n) + " at V0/Omega=1e4: F = " + num(f, 8));
    }
    const ProtocolPlan g2 = plan_ghz(4, LevelScheme::TwoLevel);
    const double f2 = plan_fidelity(g2, execute(g2, ideal_chain(4, 1e4)));
    o.require(f2 < 0.1, "GHZ2 N=4 at V0/Omega=1e4: F = " + num(f2, 6));
    return o;
}

// 4 ---------------------------------------------------------------------------
Outcome c4_ideal_exactness() {
    Outcome o;
    Timer t;
    double worst = 0.0;
    int runs = 0;
    for (int n = 2; n <= 8; ++n) {
        const ProtocolPlan p = plan_ghz(n, LevelScheme::ThreeLevel);
        worst = std::max(worst, std::abs(1.0 - plan_fidelity(p, execute(p, IdealBackend{}))));
        ++runs;
    }
    for (int n = 1; n <= 8; ++n)
        for (double z : {0.1, 1.0, 10.0})
            for (int R : {1, 2}) {
                const ProtocolPlan p = plan_dimer_mps(n, z, R);
                worst = std::max(worst, std::abs(1.0 - plan_fidelity(p, execute(p, IdealBackend{}))));
                ++runs;
            }
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int i = 0; i < 10; ++i) {
        cplx a(g(rng), g(rng)), b(g(rng), g(rng));
        const double nrm = std::sqrt(std::norm(a) + std::norm(b));
        a /= nrm;
        b /= nrm;
        for (int n = 2; n <= 8; ++n) {
            const ProtocolPlan p = plan_transport(n, a, b);
            worst = std::max(worst, std::abs(1.0 - plan_fidelity(p, execute(p, IdealBackend{}))));
            ++runs;
        }
    }
    const double s = t.seconds();
    o.require(worst <= 1e-10, "max |1 - F| = " + num(worst, 3) + " over " + std::to_string(runs) + " ideal runs");
    o.require(s < 10.0, "runtime " + num(s, 3) + " s");
    return o;
}

// 5 ---------------------------------------------------------------------------
Outcome c5_mps_solvers() {
    Outcome o;
    double closed = 0.0, poly = 0.0;
    for (int n = 1; n <= 12; ++n)
        for (double z : {0.1, 1.0, 10.0}) {
            const auto c = mps_cosines_closed_form(n, z);
            const auto r1 = mps_area_schedule(n, z, 1).thetas;
            for (int k = 0; k < n; ++k) closed = std::max(closed, std::abs(std::cos(r1[k]) - c[k]));
            for (int R : {1, 2, 3}) {
                const auto a = mps_area_schedule(n, z, R).thetas;
                const auto b = mps_area_schedule_polynomial(n, z, R).thetas;
                for (int k = 0; k < n; ++k) poly = std::max(poly, std::abs(a[k] - b[k]));
            }
        }
    o.require(closed <= 1e-12, "recursion vs closed form (R=1): max |cos diff| = " + num(closed, 3));
    o.require(poly <= 1e-8, "recursion vs polynomial (R=1,2,3): max |theta diff| = " + num(poly, 3));
    return o;
}

// 6 ---------------------------------------------------------------------------
Outcome c6_amplitude_law() {
    Outcome o;
    double worst = 0.0;
    long configs = 0;
    for (int n = 1; n <= 8; ++n)
        for (double z : {0.1, 1.0, 10.0, -0.5})
            for (int R : {1, 2}) {
                const StateVector psi = execute(plan_dimer_mps(n, z, R), IdealBackend{});
                for (std::size_t i = 0; i < psi.dim(); ++i) {
                    int exc = 0;
                    bool allowed = true;
                    for (int k = 1; k <= n; ++k) {
                        if (psi.level_at(i, k) != 1) continue;
                        ++exc;
                        for (int j = k + 1; j <= std::min(n, k + R); ++j)
                            if (psi.level_at(i, j) == 1) allowed = false;
                    }
                    const cplx expect = allowed ? std::pow(z, exc) : 0.0;
                    const double dev = std::abs(psi[i] / psi[0] - expect) / std::max(1.0, std::abs(expect));
                    worst = std::max(worst, dev);
                    ++configs;
                }
            }
    o.require(worst <= 1e-12, "max relative deviation of C(config)/C(0...0) from z^n = " + num(worst, 3) + " over " +
                                  std::to_string(configs) + " configurations");
    return o;
}

// 7 ---------------------------------------------------------------------------
struct Cell {
    double mean, se;
};

Cell run_cell(ProtocolKind kind, double z, int n, double ratio, const DisorderSpec& d, int reals) {
    SweepSpec s;
    s.kind = kind;
    s.z = z;
    if (kind == ProtocolKind::Transport) {
        s.alpha = 1.0 / std::numbers::sqrt2;
        s.beta = 1.0 / std::numbers::sqrt2;
    }
    s.n_values = {n};
    s.grid = {ratio};
    s.disorder = d;
    s.realizations = d.is_zero() ? 1 : reals;
    s.master_seed = 2018;
    const SweepRecord r = run_sweep(s).at(0);
    if (!r.ok()) throw Error(ErrorKind::Numerical, r.error);
    return {r.mean_fidelity, r.std_error};
}

DecayFit fit_over(ProtocolKind kind, double z, const std::vector<int>& ns, double ratio, const DisorderSpec& d, int reals) {
    std::vector<std::pair<double, double>> pts;
    for (int n : ns) pts.emplace_back(n, run_cell(kind, z, n, ratio, d, reals).mean);
    return fit_exponential_decay(pts);
}

Outcome c7_disorder() {
    Outcome o;
    Timer t;
    const int reals = 1000;
    const DisorderSpec none = DisorderSpec::none(), iso = DisorderSpec::isotropic(), aniso = DisorderSpec::anisotropic();
    struct P {
        const char* name;
        ProtocolKind kind;
        double z;
    };
    const P protocols[] = {{"ghz2", ProtocolKind::GHZ2, 0.0},
                           {"ghz3", ProtocolKind::GHZ3, 0.0},
                           {"mps(z=10)", ProtocolKind::DimerMPS, 10.0},
                           {"transport", ProtocolKind::Transport, 0.0}};
    for (const P& p : protocols)
        for (double ratio : {6.9, 15.5})
            for (int n : {4, 6}) {
                const Cell a = run_cell(p.kind, p.z, n, ratio, none, reals);
                const Cell b = run_cell(p.kind, p.z, n, ratio, iso, reals);
                const Cell c = run_cell(p.kind, p.z, n, ratio, aniso, reals);
                const double sep = (a.mean - c.mean) / std::hypot(a.se, c.se);
                const bool ok = a.mean >= b.mean && b.mean >= c.mean && sep >= 2.0;
                o.require(ok, std::string(p.name) + " V0/Omega=" + num(ratio) + " N=" + std::to_string(n) +
                                  ": none " + num(a.mean) + " >= iso " + num(b.mean) + " +- " + num(b.se, 2) +
                                  " >= aniso " + num(c.mean) + " +- " + num(c.se, 2) + ", separation " + num(sep, 3) +
                                  " SE");
            }

    // exponential fits against reference coefficients
    struct Row {
        const char* name;
        ProtocolKind kind;
        std::vector<int> ns;
        double ratio;
        double a_iso, b_iso, a_aniso, b_aniso;
    };
    const Row rows[] = {
        {"transport", ProtocolKind::Transport, {2, 3, 4, 5, 6, 7}, 6.9, 0.94, 0.051, 0.73, 0.09},
        {"transport", ProtocolKind::Transport, {2, 3, 4, 5, 6, 7}, 15.5, 0.97, 0.036, 0.93, 0.055},
        {"ghz2", ProtocolKind::GHZ2, {2, 4, 6, 8}, 6.9, 0.93, 0.035, 0.80, 0.110},
        {"ghz2", ProtocolKind::GHZ2, {2, 4, 6, 8}, 15.5, 0.970, 0.0234, 0.94, 0.039},
    };
    for (const Row& r : rows) {
        const DecayFit fn = fit_over(r.kind, 0.0, r.ns, r.ratio, none, reals);
        const DecayFit fi = fit_over(r.kind, 0.0, r.ns, r.ratio, iso, reals);
        const DecayFit fa = fit_over(r.kind, 0.0, r.ns, r.ratio, aniso, reals);
        const std::string tag = std::string(r.name) + " V0/Omega=" + num(r.ratio) + ": ";
        o.note(tag + "none a=" + num(fn.a) + " b=" + num(fn.b, 3) + " | iso a=" + num(fi.a) + " b=" + num(fi.b) +
               " | aniso a=" + num(fa.a) + " b=" + num(fa.b));
        if (r.kind == ProtocolKind::Transport && r.ratio == 6.9)
            o.require(fn.b < fi.b && fi.b < fa.b, tag + "b(none) < b(iso) < b(aniso)");
        auto within = [&](const char* which, const DecayFit& f, double a_ref, double b_ref) {
            o.require(std::abs(f.a - a_ref) <= 0.05 && std::abs(f.b - b_ref) <= 0.5 * b_ref,
                      tag + which + " a=" + num(f.a, 4) + " (ref " + num(a_ref) + "), b=" + num(f.b, 4) +
                          " (ref " + num(b_ref) + ")");
        };
        within("iso", fi, r.a_iso, r.b_iso);
        within("aniso", fa, r.a_aniso, r.b_aniso);
    }
    const double s = t.seconds();
    o.require(s < 1800.0, "runtime " + num(s, 4) + " s");
    return o;
}

// 8 ---------------------------------------------------------------------------
Outcome c8_flatness() {
    Outcome o;
    double lo = 1.0, hi = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (int n = 2; n <= 7; ++n) {
        const ProtocolPlan p = plan_transport(n, 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2);
        const double f = plan_fidelity(p, execute(p, ideal_chain(n, 6.9)));
        lo = std::min(lo, f);
        hi = std::max(hi, f);
        pts.emplace_back(n, f);
    }
    const DecayFit fit = fit_exponential_decay(pts);
    o.note("fit a=" + num(fit.a, 8) + " b=" + num(fit.b, 3));
    o.require(hi - lo < 1e-3, "spread over N=2..7: " + num(hi - lo, 3));
    o.require(lo >= 0.999, "minimum fidelity " + num(lo, 8));
    return o;
}

// 9 ---------------------------------------------------------------------------
Outcome c9_rk() {
    Outcome o;
    Timer t;
    const RkCheck nn = rk_check(6, 64.0, 1.0);
    const double s = t.seconds();
    o.require(nn.overlap >= 0.99, "nearest-neighbour interactions, N=6, V0/Omega=64, Delta=" + num(nn.point.delta) +
                                      ", z=" + num(nn.point.z) + ": overlap " + num(nn.overlap));
    o.require(s < 5.0, "runtime " + num(s, 3) + " s");
    struct V {
        const char* name;
        InteractionRange range;
        bool corr;
    };
    for (const V& v : {V{"full range", InteractionRange::Full, false}, V{"nnn range", InteractionRange::NextNearestNeighbor, false},
                       V{"nn + end-site shift", InteractionRange::NearestNeighborOnly, true},
                       V{"nnn + end-site shift", InteractionRange::NextNearestNeighbor, true},
                       V{"full + end-site shift", InteractionRange::Full, true}}) {
        RkOptions opt{v.range, v.corr};
        o.note(std::string("variant ") + v.name + ": overlap " + num(rk_check(6, 64.0, 1.0, opt).overlap));
    }
    return o;
}

// 10 --------------------------------------------------------------------------
Outcome c10_nmax() {
    Outcome o;
    const double omega = from_mhz(8.4) / 6.9;
    const int tr = estimate_n_max(ProtocolKind::Transport, 0.0, omega, 2.0);
    const int m10 = estimate_n_max(ProtocolKind::DimerMPS, 10.0, omega, 2.0);
    const int ghz = estimate_n_max(ProtocolKind::GHZ3, 0.0, omega, 2.0);
    const int m1 = estimate_n_max(ProtocolKind::DimerMPS, 1.0, omega, 2.0);
    o.note("pulse time |theta|/(2 Omega), hyperfine pulses instantaneous, Omega = " + num(omega) + " rad/us");
    o.require(tr < m10 && m10 < ghz && ghz < m1, "ordering transport " + std::to_string(tr) + " < mps(z=10) " +
                                                     std::to_string(m10) + " < ghz " + std::to_string(ghz) +
                                                     " < mps(z=1) " + std::to_string(m1));
    const int got[] = {tr, m10, ghz, m1}, ref[] = {6, 7, 9, 13};
    const char* names[] = {"transport", "mps(z=10)", "ghz", "mps(z=1)"};
    for (int i = 0; i < 4; ++i)
        o.require(std::abs(got[i] - ref[i]) <= 3,
                  std::string(names[i]) + " N_max " + std::to_string(got[i]) + " vs " + std::to_string(ref[i]) + " +- 3");
    return o;
}

// 11 --------------------------------------------------------------------------
Outcome c11_determinism() {
    Outcome o;
    SweepSpec s;
    s.kind = ProtocolKind::Transport;
    s.alpha = 0.6;
    s.beta = cplx(0.0, 0.8);
    s.n_values = {3, 4, 5};
    s.grid = {5.0, 6.9, 15.5};
    s.disorder = DisorderSpec::anisotropic();
    s.realizations = 50;
    s.master_seed = 99;
    std::string ref;
    for (int w : {1, 2, 4, 16}) {
        s.workers = w;
        std::ostringstream os;
        write_sweep_csv(os, run_sweep(s));
        if (ref.empty()) ref = os.str();
        o.require(os.str() == ref, std::to_string(w) + " workers: CSV body identical to the 1-worker run");
    }
    std::ostringstream again;
    s.workers = 3;
    write_sweep_csv(again, run_sweep(s));
    o.require(again.str() == ref, "rerun with 3 workers identical");
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1 two-atom GHZ oracle", c1_two_atom_ghz},
        {"2 two-atom transport oracle", c2_two_atom_transport},
        {"3 interaction limits", c3_limits},
        {"4 ideal-backend exactness", c4_ideal_exactness},
        {"5 MPS solver cross-validation", c5_mps_solvers},
        {"6 dimer amplitude law", c6_amplitude_law},
        {"7 disorder reproduction", c7_disorder},
        {"8 no-disorder transport flatness", c8_flatness},
        {"9 RK-point ground state", c9_rk},
        {"10 N_max ordering", c10_nmax},
        {"11 sweep determinism", c11_determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.note(std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %s\n", o.pass ? "PASS" : "FAIL", name);
        for (const std::string& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
