#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rydchain/protocols.hpp"
#include "rydchain/targets.hpp"

using namespace rydchain;
using std::numbers::pi;

namespace {
RealisticBackend realistic(int n, double v0, InteractionRange r = InteractionRange::Full) {
    RealisticBackend b;
    b.hamiltonian = HamiltonianSpec::resonant(ideal_couplings(n, v0), r);
    b.omega = 1.0;
    return b;
}
} // namespace

TEST(Protocols, GhzThreeLevelSteps) {
    const ProtocolPlan p = plan_ghz(2, LevelScheme::ThreeLevel);
    ASSERT_EQ(p.steps.size(), 4u);
    EXPECT_EQ(p.steps[0], PulseStep::half_pi(1));
    EXPECT_EQ(p.steps[1], PulseStep::pi(2));
    EXPECT_EQ(p.steps[2], PulseStep::pi(1, Transition::HyperfineRydberg));
    EXPECT_EQ(p.steps[3], PulseStep::pi(2, Transition::HyperfineRydberg));
    EXPECT_EQ(p.kind, ProtocolKind::GHZ3);
    EXPECT_EQ(plan_ghz(5, LevelScheme::ThreeLevel).steps.size(), 10u);
}

TEST(Protocols, GhzTwoLevelSteps) {
    const ProtocolPlan p = plan_ghz(4, LevelScheme::TwoLevel);
    ASSERT_EQ(p.steps.size(), 4u);
    for (int k = 2; k <= 4; ++k) EXPECT_EQ(p.steps[static_cast<std::size_t>(k - 1)], PulseStep::pi(k));
    EXPECT_TRUE(p.warnings.empty());
    EXPECT_FALSE(plan_ghz(3, LevelScheme::TwoLevel).warnings.empty());
    EXPECT_THROW(plan_ghz(1, LevelScheme::TwoLevel), Error);
}

TEST(Protocols, GhzIdealFidelity) {
    for (int n = 2; n <= 6; ++n)
        for (LevelScheme s : {LevelScheme::TwoLevel, LevelScheme::ThreeLevel}) {
            const ProtocolPlan p = plan_ghz(n, s);
            EXPECT_NEAR(plan_fidelity(p, execute(p, IdealBackend{})), 1.0, 1e-12) << n;
        }
}

TEST(Protocols, AreaScheduleBasics) {
    for (double t : mps_area_schedule(5, 0.0).thetas) EXPECT_EQ(t, 0.0);
    for (int n : {1, 4, 9}) {
        EXPECT_NEAR(mps_area_schedule(n, 1.0).thetas.back(), pi / 4, 1e-15);
        EXPECT_NEAR(std::tan(mps_area_schedule(n, 2.5).thetas.back()), 2.5, 1e-14);
    }
    const auto s = mps_area_schedule(3, 1.0).thetas;
    EXPECT_NEAR(s[0], 0.6847, 5e-5);
    EXPECT_NEAR(s[1], 0.6155, 5e-5);
    EXPECT_NEAR(s[2], 0.7854, 5e-5);
    EXPECT_NEAR(s[1], std::atan(1.0 / std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(s[0], std::atan(std::sqrt(2.0 / 3.0)), 1e-15);
}

TEST(Protocols, ClosedFormCosines) {
    for (double z : {0.1, 1.0, 10.0}) {
        const auto s = mps_area_schedule(12, z);
        const auto c = mps_cosines_closed_form(12, z);
        for (int k = 0; k < 12; ++k) EXPECT_NEAR(std::cos(s.thetas[k]), c[k], 1e-12);
    }
}

TEST(Protocols, PolynomialMethodMatchesRecursion) {
    for (int R : {1, 2, 3})
        for (double z : {0.1, 1.0, 10.0, -2.0}) {
            const auto a = mps_area_schedule(12, z, R).thetas;
            const auto b = mps_area_schedule_polynomial(12, z, R).thetas;
            for (int k = 0; k < 12; ++k) EXPECT_NEAR(a[k], b[k], 1e-8) << R << " " << z << " " << k;
        }
    for (double t : mps_area_schedule_polynomial(4, 0.0, 2).thetas) EXPECT_EQ(t, 0.0);
}

TEST(Protocols, DimerAmplitudeRatios) {
    const ProtocolPlan p = plan_dimer_mps(3, 1.0);
    const StateVector psi = execute(p, IdealBackend{});
    const cplx c0 = psi[0];
    for (std::size_t idx : {4u, 2u, 1u}) EXPECT_NEAR(std::abs(psi[idx] / c0 - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(psi[5] / c0 - 1.0), 0.0, 1e-12);
    for (std::size_t idx : {3u, 6u, 7u}) EXPECT_EQ(psi[idx], cplx(0.0));
}

TEST(Protocols, DimerVacuumAndFidelity) {
    const StateVector v = execute(plan_dimer_mps(3, 0.0), IdealBackend{});
    EXPECT_NEAR(std::abs(v[0] - 1.0), 0.0, 1e-15);
    const ProtocolPlan p = plan_dimer_mps(6, 10.0);
    EXPECT_NEAR(plan_fidelity(p, execute(p, IdealBackend{})), 1.0, 1e-10);
    const ProtocolPlan q = plan_dimer_mps(7, -0.8, 2);
    EXPECT_NEAR(plan_fidelity(q, execute(q, IdealBackend{})), 1.0, 1e-10);
}

TEST(Protocols, TransportIdeal) {
    const cplx alpha(0.6, 0.0), beta(0.0, 0.8);
    for (int n = 2; n <= 7; ++n) {
        const ProtocolPlan p = plan_transport(n, alpha, beta);
        EXPECT_EQ(p.post_steps.empty(), n % 2 == 1);
        const SingleQubitDensity rho = reduce_to_site(execute(p, IdealBackend{}), n);
        EXPECT_NEAR(std::abs(rho(0, 0) - std::norm(alpha)), 0.0, 1e-14) << n;
        EXPECT_NEAR(std::abs(rho(1, 1) - std::norm(beta)), 0.0, 1e-14) << n;
        EXPECT_NEAR(std::abs(rho(0, 1) - alpha * std::conj(beta)), 0.0, 1e-14) << n;
    }
    for (int n = 2; n <= 6; ++n) {
        const ProtocolPlan p = plan_transport(n, 1.0, 0.0);
        const SingleQubitDensity rho = reduce_to_site(execute(p, IdealBackend{}), n);
        EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-14);
    }
    EXPECT_THROW(plan_transport(3, 1.0, 1.0), Error);
}

TEST(Protocols, ExecuteEmptyPlan) {
    ProtocolPlan p;
    p.kind = ProtocolKind::GHZ2;
    p.n_sites = 2;
    StateVector psi = StateVector::zeros(2, LevelScheme::TwoLevel);
    psi[1] = cplx(0.6, 0.0);
    psi[2] = cplx(0.0, 0.8);
    const StateVector out = execute(p, IdealBackend{}, psi);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(out[i], psi[i]);
    EXPECT_THROW(execute(p, IdealBackend{}, ground_state(3, LevelScheme::TwoLevel)), Error);
}

TEST(Protocols, RealisticBlockadeLimit) {
    const ProtocolPlan plans[] = {plan_ghz(4, LevelScheme::TwoLevel), plan_ghz(4, LevelScheme::ThreeLevel),
                                  plan_dimer_mps(5, 1.0), plan_transport(5, 0.6, 0.8)};
    for (const ProtocolPlan& p : plans) {
        const StateVector a = execute(p, IdealBackend{});
        const StateVector b = execute(p, realistic(p.n_sites, 1e6, InteractionRange::NearestNeighborOnly));
        EXPECT_GE(std::norm(inner_product(a, b)), 1.0 - 1e-6) << to_string(p.kind);
    }
}

TEST(Protocols, Durations) {
    ProtocolPlan one;
    one.n_sites = 1;
    one.steps.push_back(PulseStep::pi(1));
    EXPECT_NEAR(protocol_duration(one, 7.65), 0.1027, 1e-4);
    EXPECT_EQ(protocol_duration(ProtocolPlan{}, 1.0), 0.0);

    const ProtocolPlan m = plan_dimer_mps(6, 1.5);
    double s = 0.0;
    for (double t : mps_area_schedule(6, 1.5).thetas) s += t;
    EXPECT_NEAR(protocol_duration(m, 2.0), s / 4.0, 1e-15);

    const ProtocolPlan g = plan_ghz(4, LevelScheme::ThreeLevel);
    EXPECT_NEAR(protocol_duration(g, 1.0), (pi / 4 + 3 * pi / 2) / 2, 1e-15);
    EXPECT_NEAR(protocol_duration(g, 1.0, HyperfinePolicy::SameAsOmega), (pi / 4 + 7 * pi / 2) / 2, 1e-15);
    EXPECT_THROW(protocol_duration(g, 0.0), Error);
}

TEST(Protocols, PlanTextRoundTrip) {
    const ProtocolPlan plans[] = {plan_ghz(3, LevelScheme::ThreeLevel), plan_dimer_mps(5, -0.3, 2),
                                  plan_transport(4, cplx(0.6, 0.0), cplx(0.0, -0.8))};
    for (const ProtocolPlan& p : plans) {
        const ProtocolPlan q = plan_from_text(to_text(p));
        EXPECT_EQ(q.kind, p.kind);
        EXPECT_EQ(q.n_sites, p.n_sites);
        EXPECT_EQ(q.scheme, p.scheme);
        EXPECT_EQ(q.blockade_radius, p.blockade_radius);
        EXPECT_EQ(q.z, p.z);
        EXPECT_EQ(q.alpha, p.alpha);
        EXPECT_EQ(q.beta, p.beta);
        EXPECT_EQ(q.steps, p.steps);
        EXPECT_EQ(q.post_steps, p.post_steps);
    }
}

TEST(Protocols, PlanTextErrors) {
    const std::string good = to_text(plan_ghz(2, LevelScheme::TwoLevel));
    try {
        plan_from_text(good + "2 01 abc\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
    EXPECT_THROW(plan_from_text("1 01 0.5\n"), Error);
}

TEST(Protocols, KindNames) {
    for (ProtocolKind k : {ProtocolKind::GHZ2, ProtocolKind::GHZ3, ProtocolKind::DimerMPS, ProtocolKind::Transport})
        EXPECT_EQ(protocol_kind_from_string(to_string(k)), k);
    EXPECT_THROW(protocol_kind_from_string("ghz"), Error);
}
