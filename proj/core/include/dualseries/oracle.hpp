// oracle.hpp: reference propagators: closed forms for the catalog models and a numeric integrator

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dualseries/models.hpp"
#include "dualseries/numerics.hpp"

namespace dualseries {

enum class OracleKind { ClosedFormJC, ClosedFormSchwinger, ResummedDrivenTLS, NumericMidpoint };

std::string_view to_string(OracleKind kind) noexcept;

// Exact propagator of the Jaynes-Cummings block, assembled from the probability amplitudes.
CMat exact_jc_propagator(const HamiltonianModel& model, double t);

// Exact propagator of the rotating-field spin.
CMat exact_schwinger_propagator(const HamiltonianModel& model, double t);

// exp((i/hbar)(V/omega0) sin(omega0 t) sigma_x) exp((i/hbar)(eps/2) J0(2V/(hbar omega0)) t sigma_z),
// mapped into the interaction frame when the model is the interaction-picture variant.
CMat resummed_driven_tls_propagator(const HamiltonianModel& model, double t);

enum class Stepper {
    ExponentialMidpoint,     // exp(-i h H(t + h/2) / hbar), second order
    CommutatorFreeMagnus4,   // two exponentials at the Gauss nodes, fourth order
};

struct NumericOptions {
    Stepper stepper{Stepper::CommutatorFreeMagnus4};
    std::size_t substeps{1};  // integrator steps per grid interval
    double max_phase_step{0.1};  // bound on max|E| h / hbar
};

// U(t_k) on every grid point; U(t0) = I.
std::vector<CMat> numeric_propagate(const HamiltonianModel& model, const TimeGrid& grid,
                                    const NumericOptions& opts = {});

// The closed form matching the model when one exists, the numeric integrator otherwise.
OracleKind default_oracle(const HamiltonianModel& model) noexcept;

std::vector<CMat> oracle_path(const HamiltonianModel& model, const TimeGrid& grid, OracleKind kind,
                              const NumericOptions& opts = {});

}  // namespace dualseries
