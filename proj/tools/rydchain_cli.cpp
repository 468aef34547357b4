// rydchain command-line front end.
//
//   rydchain sweep     --protocol ghz2 --n 2..7 --grid 0.1:30:300 --disorder iso --out f.csv
//   rydchain mps-areas --n 6 --z 1 --R 2 --method polynomial --out areas.csv
//   rydchain fit       --input f.csv
//   rydchain rk-check  --n 6 --v0-over-omega 64 --range nn
//   rydchain nmax      --tau-exp 2 --v0 8.4 --ratio 6.9
//   rydchain plan      --protocol mps --n 5 --z 1
//
// Exit codes: 0 success, 2 usage / invalid input, 3 numerical failure, 4 capacity.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rydchain.hpp"

using namespace rydchain;

namespace {

std::vector<int> parse_n_list(const std::string& s) {
    std::vector<int> out;
    const auto dots = s.find("..");
    try {
        if (dots != std::string::npos) {
            const int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
            if (hi < lo) throw Error(ErrorKind::Usage, "empty range '" + s + "'");
            for (int n = lo; n <= hi; ++n) out.push_back(n);
        } else {
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::Usage, "bad chain-length list '" + s + "' (use 2..7 or 2,4,6)");
    }
    return out;
}

// "lo:hi:count" (inclusive, linear) or a comma-separated list.
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    auto num = [&](const std::string& t) { return detail::parse_double(t, 0); };
    try {
        if (s.find(':') != std::string::npos) {
            std::stringstream ss(s);
            std::string a, b, c;
            std::getline(ss, a, ':');
            std::getline(ss, b, ':');
            std::getline(ss, c, ':');
            const double lo = num(a), hi = num(b);
            const int count = detail::parse_int(c, 0);
            if (count < 1) throw Error(ErrorKind::Usage, "grid count must be >= 1");
            for (int i = 0; i < count; ++i)
                out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
        } else {
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) out.push_back(num(tok));
        }
    } catch (const Error&) {
        throw Error(ErrorKind::Usage, "bad grid '" + s + "' (use lo:hi:count or v1,v2,...)");
    }
    return out;
}

// "re" or "re,im"
cplx parse_complex(const std::string& s) {
    try {
        const auto comma = s.find(',');
        if (comma == std::string::npos) return {detail::parse_double(s, 0), 0.0};
        return {detail::parse_double(s.substr(0, comma), 0), detail::parse_double(s.substr(comma + 1), 0)};
    } catch (const Error&) {
        throw Error(ErrorKind::Usage, "bad complex number '" + s + "'");
    }
}

std::string complex_text(cplx c) { return fmt(c.real()) + "," + fmt(c.imag()); }

struct ProtocolArgs {
    std::string protocol = "ghz2";
    double z = 1.0;
    int R = 1;
    std::string alpha = "1";
    std::string beta;
    CLI::Option* z_opt = nullptr;
    CLI::Option* R_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* beta_opt = nullptr;

    void add(CLI::App* app) {
        app->add_option("--protocol", protocol, "ghz2 | ghz3 | mps | transport")
            ->check(CLI::IsMember({"ghz2", "ghz3", "mps", "transport"}));
        z_opt = app->add_option("--z", z, "dimer-MPS weight z");
        R_opt = app->add_option("--R", R, "dimer-MPS blockade radius");
        alpha_opt = app->add_option("--alpha", alpha, "transport amplitude of |0> (re or re,im)");
        beta_opt = app->add_option("--beta", beta, "transport amplitude of |1>; default sqrt(1-|alpha|^2)");
    }

    ProtocolKind kind() const { return protocol_kind_from_string(protocol); }

    // Flag combinations that make no sense for the chosen protocol are usage errors.
    void check() const {
        const ProtocolKind k = kind();
        if (k != ProtocolKind::DimerMPS && (z_opt->count() || R_opt->count()))
            throw Error(ErrorKind::Usage, "--z/--R only apply to --protocol mps");
        if (k != ProtocolKind::Transport && (alpha_opt->count() || beta_opt->count()))
            throw Error(ErrorKind::Usage, "--alpha/--beta only apply to --protocol transport");
        if (R < 1) throw Error(ErrorKind::Usage, "--R must be >= 1");
    }

    cplx alpha_value() const { return parse_complex(alpha); }
    cplx beta_value() const {
        if (!beta.empty()) return parse_complex(beta);
        const double a2 = std::norm(alpha_value());
        if (a2 > 1.0) throw Error(ErrorKind::Usage, "|alpha| > 1");
        return std::sqrt(1.0 - a2);
    }
};

int cmd_sweep(const ProtocolArgs& pa, const std::string& n_list, const std::string& grid, const std::string& disorder,
              int realizations, std::uint64_t seed, const std::string& range, const std::string& out,
              const std::string& raw_out, int workers) {
    pa.check();
    SweepSpec spec;
    spec.kind = pa.kind();
    spec.z = pa.z;
    spec.R = pa.R;
    if (spec.kind == ProtocolKind::Transport) {
        spec.alpha = pa.alpha_value();
        spec.beta = pa.beta_value();
    }
    spec.n_values = parse_n_list(n_list);
    spec.grid = parse_grid(grid);
    spec.disorder = DisorderSpec::from_preset(disorder);
    spec.realizations = realizations > 0 ? realizations : (spec.kind == ProtocolKind::DimerMPS ? 100 : 1000);
    spec.master_seed = seed;
    spec.range = interaction_range_from_string(range);
    spec.workers = workers;
    spec.keep_raw = !raw_out.empty();
    spec.validate();

    const std::vector<SweepRecord> records = run_sweep(spec);

    RunManifest m;
    m.command = "sweep";
    m.set("protocol", to_string(spec.kind));
    if (spec.kind == ProtocolKind::DimerMPS) {
        m.set("z", fmt(spec.z));
        m.set("R", std::to_string(spec.R));
    }
    if (spec.kind == ProtocolKind::Transport) {
        m.set("alpha", complex_text(spec.alpha));
        m.set("beta", complex_text(spec.beta));
    }
    m.set("n", n_list);
    std::string g;
    for (double v : spec.grid) g += (g.empty() ? "" : ",") + fmt(v);
    m.set("grid", g);
    m.set("disorder", spec.disorder.preset_name());
    m.set("sigma_um", fmt(spec.disorder.sigma[0]) + "," + fmt(spec.disorder.sigma[1]) + "," + fmt(spec.disorder.sigma[2]));
    m.set("realizations", std::to_string(spec.realizations));
    m.set("range", to_string(spec.range));
    m.set("spacing_um", fmt(spec.spacing_r0));
    m.set("omega", "1");
    m.master_seed = seed;
    m.timestamp = utc_timestamp();

    std::ostringstream body;
    write_sweep_csv(body, records);
    write_with_manifest(out, m, body.str());
    if (!raw_out.empty()) {
        std::ostringstream rb;
        write_raw_csv(rb, records);
        write_with_manifest(raw_out, m, rb.str());
    }

    int failed = 0;
    for (const SweepRecord& r : records)
        if (!r.ok()) {
            ++failed;
            std::cerr << "N=" << r.n_sites << " v0_over_omega=" << fmt(r.v0_over_omega) << ": " << r.error << '\n';
        }
    std::cout << "wrote " << records.size() << " rows to " << out << '\n';
    if (failed == 0) return 0;
    // every failing cell being a capacity problem maps to the capacity exit code
    for (const SweepRecord& r : records)
        if (!r.ok() && r.error.find("capacity") == std::string::npos) return 3;
    return 4;
}

int cmd_mps_areas(int n, double z, int R, const std::string& method, const std::string& out) {
    const AreaSchedule rec = mps_area_schedule(n, z, R);
    const AreaSchedule pol = mps_area_schedule_polynomial(n, z, R);
    double diff = 0.0;
    for (std::size_t k = 0; k < rec.thetas.size(); ++k) diff = std::max(diff, std::abs(rec.thetas[k] - pol.thetas[k]));
    const AreaSchedule& chosen = method == "polynomial" ? pol : rec;

    std::ostringstream body;
    body << "k,theta\n";
    for (std::size_t k = 0; k < chosen.thetas.size(); ++k) body << k + 1 << ',' << fmt(chosen.thetas[k]) << '\n';
    RunManifest m;
    m.command = "mps-areas";
    m.set("n", std::to_string(n));
    m.set("z", fmt(z));
    m.set("R", std::to_string(R));
    m.set("method", method);
    m.timestamp = utc_timestamp();
    write_with_manifest(out, m, body.str());

    std::cout << "max_abs_diff=" << fmt(diff) << '\n';
    if (diff > 1e-8) {
        std::cerr << "recursion and polynomial methods disagree\n";
        return 3;
    }
    return 0;
}

int cmd_fit(const std::string& input) {
    std::ifstream f(input);
    if (!f) throw Error(ErrorKind::Usage, "cannot open " + input);
    const DecayFit fit = fit_exponential_decay(read_fit_csv(f));
    std::cout << "f(N) = a exp(-b (N-2))\n";
    std::cout << "a = " << fmt(fit.a) << " +- " << fmt(fit.sa) << '\n';
    std::cout << "b = " << fmt(fit.b) << " +- " << fmt(fit.sb) << '\n';
    std::cout << "rss = " << fmt(fit.rss) << '\n';
    std::cout << "a=" << fmt(fit.a) << " b=" << fmt(fit.b) << " sa=" << fmt(fit.sa) << " sb=" << fmt(fit.sb) << '\n';
    return 0;
}

int cmd_rk_check(int n, double ratio, double omega, const std::string& range, bool correction) {
    RkOptions opt;
    opt.range = interaction_range_from_string(range);
    opt.open_chain_correction = correction;
    const RkCheck r = rk_check(n, ratio * omega, omega, opt);
    std::cout << "delta=" << fmt(r.point.delta) << '\n';
    std::cout << "z=" << fmt(r.point.z) << '\n';
    std::cout << "ground_energy=" << fmt(r.ground_energy) << '\n';
    std::cout << "overlap=" << fmt(r.overlap) << '\n';
    return 0;
}

int cmd_nmax(double tau, double v0_mhz, double ratio, const std::string& policy, std::vector<double> zs) {
    if (!(ratio > 0.0) || !(v0_mhz > 0.0)) throw Error(ErrorKind::Usage, "--v0 and --ratio must be positive");
    const double omega = from_mhz(v0_mhz) / ratio;
    const HyperfinePolicy pol = policy == "same" ? HyperfinePolicy::SameAsOmega : HyperfinePolicy::Instantaneous;
    std::cout << "omega=" << fmt(omega) << '\n';
    std::cout << "transport=" << estimate_n_max(ProtocolKind::Transport, 0.0, omega, tau, pol) << '\n';
    std::cout << "ghz=" << estimate_n_max(ProtocolKind::GHZ3, 0.0, omega, tau, pol) << '\n';
    for (double z : zs)
        std::cout << "mps(z=" << fmt(z) << ")=" << estimate_n_max(ProtocolKind::DimerMPS, z, omega, tau, pol) << '\n';
    return 0;
}

int cmd_plan(const ProtocolArgs& pa, int n) {
    pa.check();
    ProtocolPlan p;
    switch (pa.kind()) {
    case ProtocolKind::GHZ2: p = plan_ghz(n, LevelScheme::TwoLevel); break;
    case ProtocolKind::GHZ3: p = plan_ghz(n, LevelScheme::ThreeLevel); break;
    case ProtocolKind::DimerMPS: p = plan_dimer_mps(n, pa.z, pa.R); break;
    case ProtocolKind::Transport: p = plan_transport(n, pa.alpha_value(), pa.beta_value()); break;
    }
    for (const std::string& w : p.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << to_text(p);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg chain state-preparation simulator"};
    app.require_subcommand(1);

    // sweep
    ProtocolArgs sweep_pa;
    std::string sweep_n = "2", sweep_grid, sweep_disorder = "none", sweep_range = "full", sweep_out, sweep_raw;
    int sweep_reals = 0, sweep_workers = 0;
    std::uint64_t sweep_seed = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "disorder-averaged fidelity over N and V0/Omega");
    sweep_pa.add(sweep);
    sweep->add_option("--n", sweep_n, "chain lengths, 2..7 or 2,4,6");
    sweep->add_option("--grid", sweep_grid, "V0/Omega values, lo:hi:count or v1,v2,...")->required();
    sweep->add_option("--disorder", sweep_disorder, "none | iso | aniso")->check(CLI::IsMember({"none", "iso", "aniso"}));
    sweep->add_option("--realizations", sweep_reals, "samples per cell (default 1000, 100 for mps)");
    sweep->add_option("--seed", sweep_seed, "master seed");
    sweep->add_option("--range", sweep_range, "full | nn | nnn")->check(CLI::IsMember({"full", "nn", "nnn"}));
    sweep->add_option("--out", sweep_out, "CSV output path (manifest written to <out>.manifest)")->required();
    sweep->add_option("--raw", sweep_raw, "optional per-realization CSV");
    sweep->add_option("--workers", sweep_workers, "worker threads (default: RYDCHAIN_WORKERS or all cores)");

    // mps-areas
    int areas_n = 0, areas_R = 1;
    double areas_z = 0.0;
    std::string areas_method = "recursion", areas_out;
    CLI::App* areas = app.add_subcommand("mps-areas", "dimer-MPS rotation angles");
    areas->add_option("--n", areas_n, "chain length")->required();
    areas->add_option("--z", areas_z, "weight z")->required();
    areas->add_option("--R", areas_R, "blockade radius");
    areas->add_option("--method", areas_method, "recursion | polynomial")
        ->check(CLI::IsMember({"recursion", "polynomial"}));
    areas->add_option("--out", areas_out, "CSV output path")->required();

    // fit
    std::string fit_input;
    CLI::App* fit = app.add_subcommand("fit", "fit a exp(-b (N-2)) to (N, fidelity) data");
    fit->add_option("--input,input", fit_input, "CSV with N and fidelity columns")->required();

    // rk-check
    int rk_n = 6;
    double rk_ratio = 64.0, rk_omega = 1.0;
    std::string rk_range = "nn";
    bool rk_corr = false;
    CLI::App* rk = app.add_subcommand("rk-check", "ground state at the RK point vs the dimer state");
    rk->add_option("--n", rk_n, "chain length (<= 10)");
    rk->add_option("--v0-over-omega", rk_ratio, "V0/Omega");
    rk->add_option("--omega", rk_omega, "Rabi frequency");
    rk->add_option("--range", rk_range, "full | nn | nnn")->check(CLI::IsMember({"full", "nn", "nnn"}));
    rk->add_flag("--boundary-correction", rk_corr, "shift end-site detunings by V0/64");

    // nmax
    double nm_tau = 2.0, nm_v0 = 8.4, nm_ratio = 6.9;
    std::string nm_policy = "instantaneous";
    std::vector<double> nm_z{10.0, 1.0};
    CLI::App* nmax = app.add_subcommand("nmax", "longest chain that fits a time budget");
    nmax->add_option("--tau-exp", nm_tau, "time budget in us");
    nmax->add_option("--v0", nm_v0, "V0 in units of 2pi x MHz");
    nmax->add_option("--ratio", nm_ratio, "V0/Omega");
    nmax->add_option("--policy", nm_policy, "hyperfine pulse duration: instantaneous | same")
        ->check(CLI::IsMember({"instantaneous", "same"}));
    nmax->add_option("--z", nm_z, "dimer-MPS weights to report");

    // plan
    ProtocolArgs plan_pa;
    int plan_n = 2;
    CLI::App* plan = app.add_subcommand("plan", "print a pulse sequence");
    plan_pa.add(plan);
    plan->add_option("--n", plan_n, "chain length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*sweep)
            return cmd_sweep(sweep_pa, sweep_n, sweep_grid, sweep_disorder, sweep_reals, sweep_seed, sweep_range,
                             sweep_out, sweep_raw, sweep_workers);
        if (*areas) return cmd_mps_areas(areas_n, areas_z, areas_R, areas_method, areas_out);
        if (*fit) return cmd_fit(fit_input);
        if (*rk) return cmd_rk_check(rk_n, rk_ratio, rk_omega, rk_range, rk_corr);
        if (*nmax) return cmd_nmax(nm_tau, nm_v0, nm_ratio, nm_policy, nm_z);
        if (*plan) return cmd_plan(plan_pa, plan_n);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    return 2;
}
