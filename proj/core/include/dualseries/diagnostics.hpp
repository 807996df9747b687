// diagnostics.hpp: adiabaticity condition, secular-growth detection, resummations, report

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dualseries/expansion.hpp"
#include "dualseries/models.hpp"
#include "dualseries/numerics.hpp"
#include "dualseries/oracle.hpp"
#include "dualseries/spectral.hpp"

namespace dualseries {

enum class Verdict { ConditionReliable, SecularGrowthDetected, Inconclusive };

std::string_view to_string(Verdict verdict) noexcept;

// Textbook condition: sum over n != m of hbar |<n;t|dH/dt|m;t>| / (E_n - E_m)^2.
// dH/dt comes from a central difference of half-width fd_step.
double adiabaticity_lhs(const HamiltonianModel& model, double t, double fd_step = 1e-5,
                        const SpectralOptions& opts = {});

struct SecularFit {
    double slope{0.0};
    double slope_stderr{0.0};
    double intercept{0.0};
    std::size_t windows{0};
    bool detected{false};
    std::vector<std::pair<double, double>> envelope;  // (time of window max, max)
};

// Envelope = one maximum per period_hint window; least-squares line through it.
// Detected when slope > 3 stderr and slope * span > 0.1 |intercept|.
SecularFit secular_slope(std::span<const double> magnitudes, const TimeGrid& grid, double period_hint);

enum class SecularBranch { Resonant, OffResonant };

struct SchwingerSecularity {
    SecularBranch branch{SecularBranch::OffResonant};
    double rate{0.0};      // [1/time]
    double detuning{0.0};  // omega0 + omega cos(theta)
};

// Resonant (|omega0 + omega cos theta| < tol_fraction * omega0): growth rate (omega/2)|sin theta|
// of the first-order generator. Otherwise: second-order coefficient omega^2 sin^2(theta) / (4|omega_tilde|).
SchwingerSecularity first_order_secularity_schwinger(const HamiltonianModel& model,
                                                     double tol_fraction = 0.01);

// Jaynes-Cummings model with delta -> delta + R_n^2 / (2 delta); the original detuning is kept
// in base_delta.
HamiltonianModel resum_jc_shift(const HamiltonianModel& model);

// Dyson partial sum of order 1 or 2 computed at the shifted detuning, with the order-2 secular
// diagonal removed and the phases referred back to the original detuning. Compared against the
// exact propagator of the unshifted model.
std::vector<CMat> resummed_jc_dyson(const HamiltonianModel& shifted, const TimeGrid& grid,
                                    std::size_t order, const ExpansionOptions& opts = {});

// Integer-order Bessel function of the first kind.
double bessel_jn(int n, double z);

// J_n(z) for n = -n_max..n_max, by normalised downward recurrence.
std::vector<double> jacobi_anger_coeffs(double z, int n_max);

struct ReportOptions {
    ExpansionOptions expansion{};
    NumericOptions numeric{};
    bool numeric_oracle{false};  // force the integrator even when a closed form exists
    double period_hint{std::numeric_limits<double>::quiet_NaN()};  // NaN: the model's own period
    double fd_step{1e-5};
    std::size_t max_curve_samples{1001};
    double lhs_threshold{0.1};
    double error_threshold{0.1};
};

struct DiagnosticsReport {
    ModelKind model{ModelKind::GenericSampled};
    std::size_t order{0};
    std::vector<std::pair<double, double>> condition_lhs;
    double condition_lhs_max{0.0};
    double secular_slope{std::numeric_limits<double>::quiet_NaN()};
    double slope_stderr{std::numeric_limits<double>::quiet_NaN()};
    std::size_t secular_order{0};
    std::vector<SecularFit> per_order;  // index j-1 holds order j; windows == 0 when not fitted
    std::vector<std::pair<double, double>> error_curve;
    double error_max{0.0};
    std::vector<std::pair<double, double>> resummed_error_curve;
    double resummed_error_max{std::numeric_limits<double>::quiet_NaN()};
    double recovered_parameter{std::numeric_limits<double>::quiet_NaN()};
    double recovered_parameter_alt{std::numeric_limits<double>::quiet_NaN()};
    std::string regime;
    OracleKind oracle{OracleKind::NumericMidpoint};
    Verdict verdict{Verdict::Inconclusive};
};

// Integrator substeps needed to keep max|E| h / hbar under half the stepper bound on this grid.
std::size_t required_substeps(const HamiltonianModel& model, const TimeGrid& grid, const NumericOptions& opts);

// Dual series of the given model, mapped to the Schroedinger frame. The driven two-level system
// is expanded in its interaction picture and transformed back.
SeriesPropagator schroedinger_dual_series(const HamiltonianModel& model, const TimeGrid& grid,
                                          std::size_t order, const ExpansionOptions& opts = {});

DiagnosticsReport validity_report(const HamiltonianModel& model, const TimeGrid& grid, std::size_t order,
                                  const ReportOptions& opts = {});

}  // namespace dualseries
