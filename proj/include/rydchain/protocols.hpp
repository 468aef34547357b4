// protocols.hpp
// Pulse sequences for GHZ preparation, dimer-MPS preparation and single-qubit transport,
// the dimer-MPS pulse-area solvers, plan execution and duration accounting.

#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "detail/polynomial_roots.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "statekit.hpp"

namespace rydchain {

enum class ProtocolKind { GHZ2, GHZ3, DimerMPS, Transport };

inline const char* to_string(ProtocolKind k) {
    switch (k) {
    case ProtocolKind::GHZ2: return "ghz2";
    case ProtocolKind::GHZ3: return "ghz3";
    case ProtocolKind::DimerMPS: return "mps";
    case ProtocolKind::Transport: return "transport";
    }
    return "?";
}

inline ProtocolKind protocol_kind_from_string(const std::string& s) {
    if (s == "ghz2") return ProtocolKind::GHZ2;
    if (s == "ghz3") return ProtocolKind::GHZ3;
    if (s == "mps") return ProtocolKind::DimerMPS;
    if (s == "transport") return ProtocolKind::Transport;
    throw Error(ErrorKind::Usage, "unknown protocol '" + s + "' (ghz2|ghz3|mps|transport)");
}

struct ProtocolPlan {
    ProtocolKind kind = ProtocolKind::GHZ2;
    int n_sites = 0;
    LevelScheme scheme = LevelScheme::TwoLevel;
    std::vector<PulseStep> steps;
    std::vector<PhasedSigmaY> post_steps;
    int blockade_radius = 1;  // used by the ideal backend
    // kind-specific parameters
    double z = 0.0;
    cplx alpha = 1.0;
    cplx beta = 0.0;
    std::vector<std::string> warnings;

    // State every protocol starts from.
    StateVector initial_state() const {
        if (kind == ProtocolKind::Transport) return embed_initial_qubit(alpha, beta, n_sites);
        return ground_state(n_sites, scheme);
    }
};

struct AreaSchedule {
    std::vector<double> thetas;
    double z = 0.0;
    int R = 1;
};

// ---------------------------------------------------------------------------
// GHZ

// Half-pi on site 1, then for k = 1..N-1 a pi-pulse on site k+1 followed (three-level
// chains only) by a pi-pulse on the hyperfine transition of site k; the three-level
// sequence ends with the hyperfine transfer of site N.
inline ProtocolPlan plan_ghz(int n_sites, LevelScheme scheme) {
    if (n_sites < 2) throw Error(ErrorKind::Validation, "GHZ protocol needs at least two sites");
    ProtocolPlan plan;
    plan.kind = scheme == LevelScheme::ThreeLevel ? ProtocolKind::GHZ3 : ProtocolKind::GHZ2;
    plan.n_sites = n_sites;
    plan.scheme = scheme;
    plan.steps.push_back(PulseStep::half_pi(1));
    for (int k = 1; k < n_sites; ++k) {
        plan.steps.push_back(PulseStep::pi(k + 1));
        if (scheme == LevelScheme::ThreeLevel) plan.steps.push_back(PulseStep::pi(k, Transition::HyperfineRydberg));
    }
    if (scheme == LevelScheme::ThreeLevel) plan.steps.push_back(PulseStep::pi(n_sites, Transition::HyperfineRydberg));
    if (n_sites % 2 != 0) plan.warnings.emplace_back("odd chain: GHZ components differ in excitation number");
    return plan;
}

// ---------------------------------------------------------------------------
// Dimer-MPS pulse areas.

namespace detail {
inline void check_schedule_args(int n_sites, double z, int R) {
    if (n_sites < 1) throw Error(ErrorKind::Validation, "schedule needs at least one site");
    if (R < 1) throw Error(ErrorKind::Validation, "blockade radius must be >= 1");
    if (!std::isfinite(z)) throw Error(ErrorKind::Validation, "z must be finite");
}
} // namespace detail

// Nearest-neighbour closed form for cos(theta_k), k = 1..N, written in terms of
// rho = (1 - s)/(1 + s), s = sqrt(1 + 4 z^2), to stay finite for long chains.
inline std::vector<double> mps_cosines_closed_form(int n_sites, double z) {
    detail::check_schedule_args(n_sites, z, 1);
    const double s = std::sqrt(1.0 + 4.0 * z * z);
    const double rho = (1.0 - s) / (1.0 + s);
    std::vector<double> c(static_cast<std::size_t>(n_sites));
    for (int k = 1; k <= n_sites; ++k) {
        const int m = n_sites + 2 - k;
        const double num = 1.0 - std::pow(rho, m);
        const double den = 1.0 - std::pow(rho, m + 1);
        c[static_cast<std::size_t>(k - 1)] = std::sqrt(2.0 * num / ((1.0 + s) * den));
    }
    return c;
}

// Backward recursion tan(theta_j) = z * prod_{k=j+1}^{j+R} cos(theta_k) with
// cos(theta_{N+j}) = 1; all cosines positive, sign(sin) = sign(z).
inline AreaSchedule mps_area_schedule(int n_sites, double z, int R = 1) {
    detail::check_schedule_args(n_sites, z, R);
    AreaSchedule sched{std::vector<double>(static_cast<std::size_t>(n_sites)), z, R};
    std::vector<double> cosines(static_cast<std::size_t>(n_sites + R), 1.0);
    for (int j = n_sites; j >= 1; --j) {
        double prod = 1.0;
        for (int k = j + 1; k <= j + R; ++k) prod *= cosines[static_cast<std::size_t>(k - 1)];
        const double theta = std::atan(z * prod);
        sched.thetas[static_cast<std::size_t>(j - 1)] = theta;
        cosines[static_cast<std::size_t>(j - 1)] = std::cos(theta);
    }
    if (R == 1) {
        const std::vector<double> closed = mps_cosines_closed_form(n_sites, z);
        for (int k = 0; k < n_sites; ++k)
            if (std::abs(closed[static_cast<std::size_t>(k)] - cosines[static_cast<std::size_t>(k)]) > 1e-12)
                throw Error(ErrorKind::Numerical, "recursion disagrees with closed form at site " + std::to_string(k + 1));
    }
    return sched;
}

// Solution through the linear recurrence q_{k+1} = q_k + a q_{k-R} (a = z^2),
// q_{-R} = ... = q_0 = 1, expanded in the roots of lambda^{R+1} = lambda^R + a with
// Vandermonde coefficients A_j = lambda_j^R prod_{i!=j}(1-lambda_i)/(lambda_j-lambda_i).
// tan^2(theta_{N+1-k}) = a q_{k-1-R} / q_{k-1}.
inline AreaSchedule mps_area_schedule_polynomial(int n_sites, double z, int R = 1) {
    detail::check_schedule_args(n_sites, z, R);
    AreaSchedule sched{std::vector<double>(static_cast<std::size_t>(n_sites), 0.0), z, R};
    if (z == 0.0) return sched;  // q_k = 1 for all k
    const double a = z * z;
    std::vector<double> coeffs(static_cast<std::size_t>(R + 2), 0.0);
    coeffs[0] = -a;
    coeffs[static_cast<std::size_t>(R)] = -1.0;
    coeffs[static_cast<std::size_t>(R + 1)] = 1.0;
    const auto roots = detail::polynomial_roots(coeffs).roots;

    using C = std::complex<double>;
    std::vector<C> amp(roots.size());
    for (std::size_t j = 0; j < roots.size(); ++j) {
        C num = std::pow(roots[j], R);
        C den = 1.0;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (i == j) continue;
            num *= 1.0 - roots[i];
            den *= roots[j] - roots[i];
        }
        amp[j] = num / den;
    }
    auto q = [&](int k) {
        C s = 0.0;
        for (std::size_t j = 0; j < roots.size(); ++j) s += amp[j] * std::pow(roots[j], k);
        return s.real();
    };
    for (int k = 1; k <= n_sites; ++k) {
        const double qa = q(k - 1 - R);
        const double qb = q(k - 1);
        if (!(qa > 0.0) || !(qb > 0.0))
            throw Error(ErrorKind::Numerical, "root expansion produced non-positive q at step " + std::to_string(k));
        const double tan_abs = std::sqrt(a * qa / qb);
        sched.thetas[static_cast<std::size_t>(n_sites - k)] = std::atan(std::copysign(tan_abs, z));
    }
    return sched;
}

inline ProtocolPlan plan_dimer_mps(int n_sites, double z, int R = 1) {
    const AreaSchedule sched = mps_area_schedule(n_sites, z, R);
    ProtocolPlan plan;
    plan.kind = ProtocolKind::DimerMPS;
    plan.n_sites = n_sites;
    plan.scheme = LevelScheme::TwoLevel;
    plan.blockade_radius = R;
    plan.z = z;
    for (int k = 1; k <= n_sites; ++k)
        plan.steps.push_back(
            PulseStep::literal(k, Transition::GroundRydberg, sched.thetas[static_cast<std::size_t>(k - 1)]));
    return plan;
}

// ---------------------------------------------------------------------------
// Transport

inline ProtocolPlan plan_transport(int n_sites, cplx alpha, cplx beta) {
    if (n_sites < 2) throw Error(ErrorKind::Validation, "transport needs at least two sites");
    (void)embed_initial_qubit(alpha, beta, 1);  // validates normalization
    ProtocolPlan plan;
    plan.kind = ProtocolKind::Transport;
    plan.n_sites = n_sites;
    plan.scheme = LevelScheme::TwoLevel;
    plan.alpha = alpha;
    plan.beta = beta;
    for (int k = 1; k < n_sites; ++k) {
        plan.steps.push_back(PulseStep::pi(k + 1));
        plan.steps.push_back(PulseStep::pi(k));
    }
    if (n_sites % 2 == 0) plan.post_steps.push_back(PhasedSigmaY{n_sites, n_sites - 1});
    return plan;
}

// ---------------------------------------------------------------------------
// Execution

struct IdealBackend {};

struct RealisticBackend {
    HamiltonianSpec hamiltonian;
    double omega = 1.0;
    double hyperfine_omega = 0.0;  // 0 -> same as omega
};

using Backend = std::variant<IdealBackend, RealisticBackend>;

inline StateVector execute(const ProtocolPlan& plan, const Backend& backend, StateVector state) {
    if (state.n_sites() != plan.n_sites || state.scheme() != plan.scheme)
        throw Error(ErrorKind::Shape, "initial state does not match the plan");
    if (const auto* real = std::get_if<RealisticBackend>(&backend)) {
        if (!(real->omega > 0.0)) throw Error(ErrorKind::Parameter, "Rabi frequency must be positive");
        const double hf = real->hyperfine_omega > 0.0 ? real->hyperfine_omega : real->omega;
        const std::vector<double> diag = diagonal_energies(real->hamiltonian, state.n_sites(), state.scheme());
        for (const PulseStep& step : plan.steps) {
            step.validate();
            detail::check_site(state, step.site);
            check_transition(step.transition, state.scheme());
            detail::apply_block_pulse(state, step, diag,
                                      step.transition == Transition::HyperfineRydberg ? hf : real->omega);
            state.check_normalized("realistic pulse");
        }
    } else {
        for (const PulseStep& step : plan.steps) {
            state = apply_ideal_gate(std::move(state), step, plan.blockade_radius);
            state.check_normalized("ideal gate");
        }
    }
    for (const PhasedSigmaY& g : plan.post_steps) state = apply_post_gate(std::move(state), g);
    return state;
}

inline StateVector execute(const ProtocolPlan& plan, const Backend& backend) {
    return execute(plan, backend, plan.initial_state());
}

// ---------------------------------------------------------------------------
// Durations

enum class HyperfinePolicy { SameAsOmega, Instantaneous };

// Sum of |theta|/(2 Omega) over ground-Rydberg pulses; hyperfine pulses per policy;
// post-processing gates are free.
inline double protocol_duration(const ProtocolPlan& plan, double omega,
                                HyperfinePolicy policy = HyperfinePolicy::Instantaneous) {
    if (!(omega > 0.0)) throw Error(ErrorKind::Parameter, "Rabi frequency must be positive");
    double t = 0.0;
    for (const PulseStep& s : plan.steps) {
        if (s.transition == Transition::HyperfineRydberg && policy == HyperfinePolicy::Instantaneous) continue;
        t += std::abs(s.theta) / (2.0 * omega);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Plan text format. One pulse per line "<site> <transition> <theta>", transition being
// "01" (ground-Rydberg) or "1t" (hyperfine-Rydberg); post-processing gates as
// "<site> iy <power>". Lines starting with '#' are comments; the first one carries
// the metadata "# rydchain-plan kind=<k> n=<N> scheme=<2|3> radius=<R> z=<z>
// alpha=<re>,<im> beta=<re>,<im>".

namespace detail {
inline std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& tok, int line_no) {
    double v = 0.0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    return v;
}

inline int parse_int(const std::string& tok, int line_no) {
    int v = 0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad integer '" + tok + "'");
    return v;
}
} // namespace detail

inline std::string to_text(const ProtocolPlan& plan) {
    std::ostringstream os;
    os << "# rydchain-plan kind=" << to_string(plan.kind) << " n=" << plan.n_sites
       << " scheme=" << local_dim(plan.scheme) << " radius=" << plan.blockade_radius
       << " z=" << detail::format_double(plan.z) << " alpha=" << detail::format_double(plan.alpha.real()) << ','
       << detail::format_double(plan.alpha.imag()) << " beta=" << detail::format_double(plan.beta.real()) << ','
       << detail::format_double(plan.beta.imag()) << '\n';
    for (const PulseStep& s : plan.steps)
        os << s.site << ' ' << (s.transition == Transition::GroundRydberg ? "01" : "1t") << ' '
           << detail::format_double(s.theta) << '\n';
    for (const PhasedSigmaY& g : plan.post_steps) os << g.site << " iy " << g.power << '\n';
    return os.str();
}

inline ProtocolPlan plan_from_text(const std::string& text) {
    ProtocolPlan plan;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (line[0] == '#') {
            std::string tag;
            ls >> tag >> tag;
            if (tag != "rydchain-plan") continue;
            std::string kv;
            while (ls >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad header field");
                const std::string key = kv.substr(0, eq);
                const std::string val = kv.substr(eq + 1);
                if (key == "kind") plan.kind = protocol_kind_from_string(val);
                else if (key == "n") plan.n_sites = detail::parse_int(val, line_no);
                else if (key == "scheme") plan.scheme = detail::parse_int(val, line_no) == 3 ? LevelScheme::ThreeLevel : LevelScheme::TwoLevel;
                else if (key == "radius") plan.blockade_radius = detail::parse_int(val, line_no);
                else if (key == "z") plan.z = detail::parse_double(val, line_no);
                else if (key == "alpha" || key == "beta") {
                    const auto comma = val.find(',');
                    if (comma == std::string::npos)
                        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": complex needs re,im");
                    const cplx c(detail::parse_double(val.substr(0, comma), line_no),
                                 detail::parse_double(val.substr(comma + 1), line_no));
                    (key == "alpha" ? plan.alpha : plan.beta) = c;
                }
            }
            have_header = true;
            continue;
        }
        std::string site_tok, tr_tok, val_tok, extra;
        if (!(ls >> site_tok >> tr_tok >> val_tok) || (ls >> extra))
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected three fields");
        const int site = detail::parse_int(site_tok, line_no);
        if (tr_tok == "iy") {
            plan.post_steps.push_back(PhasedSigmaY{site, detail::parse_int(val_tok, line_no)});
            continue;
        }
        Transition tr;
        if (tr_tok == "01") tr = Transition::GroundRydberg;
        else if (tr_tok == "1t") tr = Transition::HyperfineRydberg;
        else throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown transition '" + tr_tok + "'");
        const double theta = detail::parse_double(val_tok, line_no);
        PulseLabel label = PulseLabel::Literal;
        if (theta == std::numbers::pi / 2) label = PulseLabel::NamedPi;
        else if (theta == std::numbers::pi / 4) label = PulseLabel::NamedHalfPi;
        PulseStep step{site, tr, theta, label};
        try {
            step.validate();
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
        plan.steps.push_back(step);
    }
    if (!have_header) throw Error(ErrorKind::Parse, "missing '# rydchain-plan' header line");
    for (const PulseStep& s : plan.steps)
        if (s.site < 1 || s.site > plan.n_sites) throw Error(ErrorKind::Parse, "pulse site outside chain");
    return plan;
}

} // namespace rydchain
