// models.hpp: catalog of time-dependent two-level Hamiltonians plus generic user models
//
// Frequencies are in rad/time, energies in energy units, and hbar is carried explicitly
// (default 1) so that every formula can be checked with hbar != 1.

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string_view>
#include <variant>
#include <vector>

#include "dualseries/numerics.hpp"

namespace dualseries {

enum class ModelKind {
    JaynesCummings,
    SchwingerSpin,
    DrivenTLS,
    DrivenTLSInteraction,
    GenericSampled,
};

std::string_view to_string(ModelKind kind) noexcept;

enum class Picture { Schroedinger, Interaction };

// Two-dimensional block {|1,n+1>, |2,n>} of the interaction-picture Jaynes-Cummings model.
struct JaynesCummingsParams {
    double g{0.0};      // coupling [rad/time]
    double delta{0.0};  // detuning [rad/time]
    int photon_n{0};
    // Set by resum_jc_shift: the detuning the shifted model was derived from.
    double base_delta{std::numeric_limits<double>::quiet_NaN()};

    double rabi() const noexcept;         // R_n = 2 g sqrt(n+1)
    double omega() const noexcept;        // Omega_n = sqrt(delta^2 + R_n^2)
    double lambda() const noexcept;       // R_n / delta
    double coupling() const noexcept;     // g sqrt(n+1)
    bool is_resummed() const noexcept;
};

struct SchwingerParams {
    double omega0{1.0};  // [rad/time]
    double omega{0.0};   // [rad/time]
    double theta{0.0};   // [rad]

    double omega_tilde() const noexcept;  // omega0 + omega cos(theta)
    double omega_bar() const noexcept;    // sqrt(omega0^2 + omega^2 + 2 omega0 omega cos(theta))
};

struct DrivenTlsParams {
    double epsilon{0.0};  // level splitting [energy]
    double V{0.0};        // drive amplitude [energy]
    double omega0{1.0};   // drive frequency [rad/time]
};

// Either piecewise-linear interpolation of Hermitian samples on a uniform grid, or an
// arbitrary callable.
struct GenericParams {
    std::size_t dim{2};
    std::vector<double> times;
    std::vector<CMat> samples;
    std::function<CMat(double)> callable;
    double period_hint{std::numeric_limits<double>::quiet_NaN()};
};

class HamiltonianModel {
public:
    using Params = std::variant<JaynesCummingsParams, SchwingerParams, DrivenTlsParams, GenericParams>;

    HamiltonianModel(ModelKind kind, Params params, double hbar);

    ModelKind kind() const noexcept { return kind_; }
    double hbar() const noexcept { return hbar_; }
    std::size_t dim() const noexcept;
    const Params& params() const noexcept { return params_; }

    const JaynesCummingsParams& jaynes_cummings() const;
    const SchwingerParams& schwinger() const;
    const DrivenTlsParams& driven_tls() const;
    const GenericParams& generic() const;

private:
    ModelKind kind_;
    Params params_;
    double hbar_;
};

HamiltonianModel make_jaynes_cummings(double g, double delta, int photon_n, double hbar = 1.0);
HamiltonianModel make_schwinger_spin(double omega0, double omega, double theta, double hbar = 1.0);
HamiltonianModel make_driven_tls(double epsilon, double V, double omega0,
                                 Picture picture = Picture::Schroedinger, double hbar = 1.0);
HamiltonianModel make_sampled(const TimeGrid& grid, std::vector<CMat> samples, double hbar = 1.0,
                              double period_hint = std::numeric_limits<double>::quiet_NaN());
HamiltonianModel make_callable(std::size_t dim, std::function<CMat(double)> fn, double hbar = 1.0,
                               double period_hint = std::numeric_limits<double>::quiet_NaN());

CMat eval_hamiltonian(const HamiltonianModel& model, double t);

// Natural oscillation period used to window envelopes; NaN when the model has none.
double characteristic_period(const HamiltonianModel& model);

// Interaction-picture frame of the driven two-level system: U_S(t) = F(t) U_I(t) with
// F(t) = exp(i eps t sigma_z / (2 hbar)).
CMat interaction_frame(const HamiltonianModel& model, double t);

// The same driven TLS in the other picture.
HamiltonianModel with_picture(const HamiltonianModel& model, Picture picture);

// True when the instantaneous eigenvalue branches cross by construction (the
// interaction-picture driven TLS has E = +-V cos(omega0 t)).
bool has_crossing_branches(const HamiltonianModel& model) noexcept;

}  // namespace dualseries
