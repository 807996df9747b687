// diagnostics: adiabaticity condition, envelope fits, resummations, Bessel values, reports

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dualseries/diagnostics.hpp"
#include "support/reference.hpp"

using namespace dualseries;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const TimeGrid& grid, double (*f)(double)) {
    std::vector<double> out;
    for (double t : grid.points()) out.push_back(f(t));
    return out;
}

}  // namespace

TEST(AdiabaticityLhs, StaticHamiltonianIsZero) {
    const auto m = make_callable(2, [](double) { return sigma_x() + sigma_z() * 2.0; });
    EXPECT_EQ(adiabaticity_lhs(m, 1.0), 0.0);
}

TEST(AdiabaticityLhs, SchwingerIsStationaryAndLinearInFieldRate) {
    const auto a = make_schwinger_spin(1.0, 0.02, 1.0);
    const auto b = make_schwinger_spin(1.0, 0.01, 1.0);
    const double la = adiabaticity_lhs(a, 0.0);
    for (double t : {1.0, 7.5, 30.0}) EXPECT_NEAR(adiabaticity_lhs(a, t), la, 1e-6 * la);
    EXPECT_NEAR(la / adiabaticity_lhs(b, 0.0), 2.0, 0.02);
    // Two ordered pairs, each hbar (hbar w0 / 2)(w sin th) / (hbar w0)^2.
    EXPECT_NEAR(la, 0.02 * std::sin(1.0) / 1.0, 1e-8);
}

TEST(AdiabaticityLhs, DrivenTlsTracksQuotedScaling) {
    const double eps = 2.0, V = 0.3, w0 = 1.5;
    const auto m = make_driven_tls(eps, V, w0);
    for (double t : {0.2, 0.7, 1.9}) {
        const double gap = std::sqrt(eps * eps + 4 * V * V * std::pow(std::cos(w0 * t), 2));
        const double quoted = V * w0 * std::abs(std::sin(w0 * t)) / (eps * eps);
        const double exact = 2.0 * eps * V * w0 * std::abs(std::sin(w0 * t)) / (gap * gap * gap);
        EXPECT_NEAR(adiabaticity_lhs(m, t), exact, 1e-7);
        EXPECT_GT(adiabaticity_lhs(m, t) / quoted, 0.5);
    }
}

TEST(AdiabaticityLhs, InvariantUnderEnergyShift) {
    const auto base = make_schwinger_spin(1.0, 0.3, 0.7);
    const auto shifted = make_callable(2, [&](double t) {
        return eval_hamiltonian(base, t) + CMat::identity(2) * (3.0 * std::sin(t));
    });
    for (double t : {0.0, 2.0, 5.0}) EXPECT_NEAR(adiabaticity_lhs(base, t), adiabaticity_lhs(shifted, t), 1e-10);
}

TEST(AdiabaticityLhs, ScalesInverselyWithSlowdown) {
    const double s = 4.0;
    const auto fast = make_driven_tls(1.0, 0.5, 1.0);
    const auto slow = make_driven_tls(1.0, 0.5, 1.0 / s);
    EXPECT_NEAR(adiabaticity_lhs(slow, 0.9 * s) * s / adiabaticity_lhs(fast, 0.9), 1.0, 0.01);
}

TEST(AdiabaticityLhs, Errors) {
    EXPECT_THROW(adiabaticity_lhs(make_schwinger_spin(1.0, 0.1, 0.3), 0.0, 0.0), Error);
    try {
        adiabaticity_lhs(make_callable(2, [](double t) { return sigma_z() * t; }), 0.0);
        FAIL() << "expected DegenerateSpectrum";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateSpectrum);
    }
}

TEST(SecularSlope, BoundedOscillation) {
    const TimeGrid grid(0.0, 20 * kPi, 4000);
    const auto fit = secular_slope(sample(grid, [](double t) { return std::abs(std::sin(t)); }), grid, kPi);
    EXPECT_EQ(fit.windows, 20u);
    EXPECT_LE(std::abs(fit.slope), 3 * fit.slope_stderr + 1e-12);
    EXPECT_FALSE(fit.detected);
}

TEST(SecularSlope, LinearRamp) {
    const TimeGrid grid(0.0, 50.0, 1000);
    const auto fit = secular_slope(sample(grid, [](double t) { return 0.1 * t; }), grid, 2.0);
    EXPECT_NEAR(fit.slope, 0.1, 1e-12);
    EXPECT_TRUE(fit.detected);
}

TEST(SecularSlope, TranslationChangesOnlyIntercept) {
    const TimeGrid grid(0.0, 80.0, 4000);
    auto f = sample(grid, [](double t) { return (1.0 + 0.05 * t) * std::abs(std::cos(1.3 * t)); });
    const auto a = secular_slope(f, grid, 2 * kPi / 1.3);
    for (auto& v : f) v += 7.0;
    const auto b = secular_slope(f, grid, 2 * kPi / 1.3);
    EXPECT_NEAR(a.slope, b.slope, 1e-12);
    EXPECT_NEAR(b.intercept - a.intercept, 7.0, 1e-10);
}

TEST(SecularSlope, NeedsTenWindows) {
    const TimeGrid grid(0.0, 9.0, 900);
    const auto f = sample(grid, [](double t) { return t; });
    try {
        secular_slope(f, grid, 1.0);
        FAIL() << "expected WindowTooShort";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WindowTooShort);
    }
    EXPECT_THROW(secular_slope(f, grid, std::nan("")), Error);
    EXPECT_THROW(secular_slope(std::vector<double>(5, 0.0), grid, 0.5), Error);
}

TEST(SecularSlope, JaynesCummingsSecondOrderEnvelope) {
    const double g = 1.0, lambda = 10.0;
    const double rabi = 2 * g, delta = rabi / lambda;
    const double period = 2 * kPi / rabi;
    const TimeGrid grid(0.0, 20 * period, 20 * 400);
    const auto s = dual_dyson_expand(make_jaynes_cummings(g, delta, 0), grid, 2);
    std::vector<double> mag;
    for (const auto& u : s.orders[2]) mag.push_back(std::abs(u(0, 1)));
    const auto fit = secular_slope(mag, grid, period);
    const double expect = rabi / (4 * lambda * lambda);
    EXPECT_NEAR(fit.slope / expect, 1.0, 0.05);
    EXPECT_TRUE(fit.detected);
}

TEST(SchwingerSecularity, Branches) {
    const auto at_res = first_order_secularity_schwinger(make_schwinger_spin(1.0, 2.0, 2 * kPi / 3));
    EXPECT_EQ(at_res.branch, SecularBranch::Resonant);
    EXPECT_NEAR(at_res.rate, 1.0 * std::sin(2 * kPi / 3), 1e-12);
    EXPECT_NEAR(at_res.detuning, 0.0, 1e-12);

    const auto aligned = first_order_secularity_schwinger(make_schwinger_spin(1.0, 0.5, 0.0));
    EXPECT_EQ(aligned.rate, 0.0);

    const auto off = first_order_secularity_schwinger(make_schwinger_spin(1.0, 0.1, 1.0));
    EXPECT_EQ(off.branch, SecularBranch::OffResonant);
    const double wt = 1.0 + 0.1 * std::cos(1.0);
    EXPECT_NEAR(off.rate, 0.01 * std::pow(std::sin(1.0), 2) / (4 * wt), 1e-15);
}

TEST(SchwingerSecularity, TransverseResonanceRate) {
    // theta = pi/2 is resonant only as omega0 -> 0; a wide tolerance admits a small omega0.
    const auto r = first_order_secularity_schwinger(make_schwinger_spin(1e-3, 0.4, kPi / 2), 2.0);
    EXPECT_EQ(r.branch, SecularBranch::Resonant);
    EXPECT_NEAR(r.rate, 0.2, 1e-12);
}

TEST(SchwingerSecularity, OffResonantSecondOrderEnvelope) {
    const double w0 = 1.0, w = 0.1, th = 1.0;
    const auto m = make_schwinger_spin(w0, w, th);
    const double wt = m.schwinger().omega_tilde();
    const double period = 2 * kPi / wt;
    const TimeGrid grid(0.0, 30 * period, 30 * 200);
    const auto s = dual_dyson_expand(m, grid, 2);
    std::vector<double> mag;
    for (const auto& u : s.orders[2]) mag.push_back(spectral_norm(u));
    const auto fit = secular_slope(mag, grid, period);
    EXPECT_NEAR(fit.slope / first_order_secularity_schwinger(m).rate, 1.0, 0.10);
}

TEST(JcShift, Values) {
    const auto shifted = resum_jc_shift(make_jaynes_cummings(1.0, 10.0, 0));
    const auto& p = shifted.jaynes_cummings();
    EXPECT_NEAR(p.delta, 10.2, 1e-14);
    EXPECT_DOUBLE_EQ(p.base_delta, 10.0);
    EXPECT_TRUE(p.is_resummed());
    const double om = std::sqrt(104.0);
    EXPECT_LE(std::abs(p.delta - om), std::pow(2.0, 4) / (8 * 1000.0));
    EXPECT_DOUBLE_EQ(resum_jc_shift(make_jaynes_cummings(0.0, 3.0, 0)).jaynes_cummings().delta, 3.0);
    try {
        resum_jc_shift(make_jaynes_cummings(1.0, 0.0, 0));
        FAIL() << "expected ZeroDetuning";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroDetuning);
    }
}

TEST(JcShift, ResummedDysonMatchesExactBetterThanPlain) {
    const double g = 0.1, delta = 1.0;
    const auto m = make_jaynes_cummings(g, delta, 0);
    const TimeGrid grid(0.0, 50.0 / delta, 5000);
    const auto plain = dyson_expand(m, grid, 2);
    const auto resummed = resummed_jc_dyson(resum_jc_shift(m), grid, 2);
    double before = 0.0, after = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const CMat exact = ref::jc_exact(g, delta, 0, grid.at(k));
        before = std::max(before, max_abs_diff(partial_sum(plain, 2, k), exact));
        after = std::max(after, max_abs_diff(resummed[k], exact));
    }
    EXPECT_LT(after, 0.2 * before);
    EXPECT_THROW(resummed_jc_dyson(m, grid, 2), Error);
    EXPECT_THROW(resummed_jc_dyson(resum_jc_shift(m), grid, 3), Error);
}

TEST(Bessel, AgainstAscendingSeries) {
    EXPECT_NEAR(bessel_jn(0, 5.0), -0.177597, 1e-6);
    for (int n = -6; n <= 6; ++n)
        for (double z : {0.3, 2.0, 5.0, 10.0, -3.5}) EXPECT_NEAR(bessel_jn(n, z), ref::bessel_series(n, z), 1e-11);
}

TEST(JacobiAnger, ZeroArgument) {
    const auto c = jacobi_anger_coeffs(0.0, 5);
    ASSERT_EQ(c.size(), 11u);
    for (int n = -5; n <= 5; ++n) EXPECT_EQ(c[static_cast<std::size_t>(n + 5)], n == 0 ? 1.0 : 0.0);
}

TEST(JacobiAnger, Reconstruction) {
    const auto error = [](double z, double phi, int n_max) {
        const auto c = jacobi_anger_coeffs(z, n_max);
        cplx sum = 0.0;
        for (int n = -n_max; n <= n_max; ++n) sum += c[static_cast<std::size_t>(n + n_max)] * std::polar(1.0, n * phi);
        return std::abs(sum - std::polar(1.0, z * std::sin(phi)));
    };
    EXPECT_LE(error(5.0, 0.7, 40), 1e-10);
    double prev = 1e9;
    for (int n_max = 6; n_max <= 14; ++n_max) {
        const double e = error(5.0, 0.7, n_max);
        EXPECT_LT(e, prev) << n_max;
        prev = e;
    }
    const auto c = jacobi_anger_coeffs(2.5, 4);
    for (int n = 1; n <= 4; ++n) EXPECT_DOUBLE_EQ(c[static_cast<std::size_t>(4 - n)], (n % 2 ? -1.0 : 1.0) * c[static_cast<std::size_t>(4 + n)]);
    EXPECT_THROW(jacobi_anger_coeffs(1.0, -1), Error);
}

TEST(RequiredSubsteps, MeetsHalfTheBound) {
    const auto m = make_schwinger_spin(10.0, 0.1, 0.5);
    const TimeGrid grid(0.0, 1.0, 10);
    NumericOptions opts;
    const std::size_t n = required_substeps(m, grid, opts);
    EXPECT_LE(5.0 * grid.dt() / static_cast<double>(n), 0.05 + 1e-12);
    EXPECT_GT(5.0 * grid.dt() / static_cast<double>(n - 1), 0.05);
}

TEST(ValidityReport, SlowSchwingerIsReliable) {
    const auto m = make_schwinger_spin(1.0, 0.01, kPi / 3);
    const auto r = validity_report(m, TimeGrid(0.0, 10.0, 2000), 1);
    EXPECT_EQ(r.verdict, Verdict::ConditionReliable);
    EXPECT_LT(r.condition_lhs_max, 0.1);
    EXPECT_LT(r.error_max, 0.1);
    EXPECT_EQ(r.oracle, OracleKind::ClosedFormSchwinger);
    EXPECT_NEAR(r.recovered_parameter, 0.01 * std::sin(kPi / 3) / m.schwinger().omega_bar(), 1e-15);
    EXPECT_NEAR(r.recovered_parameter_alt, 0.01 * std::sin(kPi / 3) / m.schwinger().omega_tilde(), 1e-15);
    for (const auto& [t, v] : r.condition_lhs) EXPECT_GE(v, 0.0);
    for (const auto& [t, v] : r.error_curve) EXPECT_GE(v, 0.0);
    EXPECT_EQ(r.regime, "off_resonant");
}

TEST(ValidityReport, ResonantSchwingerShowsSecularGrowth) {
    // omega0 + omega cos(theta) = 0 with omega0 = 1, omega = 2, theta = 2 pi / 3.
    const auto m = make_schwinger_spin(1.0, 2.0, 2 * kPi / 3);
    const auto r = validity_report(m, TimeGrid(0.0, 40.0, 8000), 1);
    EXPECT_EQ(r.verdict, Verdict::SecularGrowthDetected);
    EXPECT_GT(r.secular_slope, 3 * r.slope_stderr);
    EXPECT_EQ(r.regime, "resonant");
}

TEST(ValidityReport, StrongDriveInversion) {
    const double w0 = 1.0;
    const auto m = make_driven_tls(0.1, 5.0, w0);
    const auto r = validity_report(m, TimeGrid(0.0, 100.0 / w0, 10000), 1);
    EXPECT_GT(r.condition_lhs_max, 1.0);
    EXPECT_LE(r.resummed_error_max, 0.05);
    EXPECT_EQ(r.oracle, OracleKind::NumericMidpoint);
    EXPECT_EQ(r.regime, "strong_drive");
    EXPECT_LE(r.condition_lhs.size(), 1002u);
    EXPECT_EQ(r.condition_lhs.back().first, 100.0);
}
