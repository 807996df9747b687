// oracle.cpp: closed-form and numerically integrated propagators

#include "dualseries/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualseries/diagnostics.hpp"

namespace dualseries {

std::string_view to_string(OracleKind kind) noexcept {
    switch (kind) {
        case OracleKind::ClosedFormJC: return "closed_form_jc";
        case OracleKind::ClosedFormSchwinger: return "closed_form_schwinger";
        case OracleKind::ResummedDrivenTLS: return "resummed_driven_tls";
        case OracleKind::NumericMidpoint: return "numeric";
    }
    return "unknown";
}

CMat exact_jc_propagator(const HamiltonianModel& model, double t) {
    const auto& p = model.jaynes_cummings();
    const double rabi = p.rabi();
    const double om = p.omega();
    const double c = std::cos(0.5 * om * t);
    // sin(x)/om stays finite as om -> 0
    const double s_over = om > 0.0 ? std::sin(0.5 * om * t) / om : 0.5 * t;
    const cplx lo = std::polar(1.0, -0.5 * p.delta * t);
    const cplx hi = std::polar(1.0, 0.5 * p.delta * t);
    return CMat(2, {(c + kImag * p.delta * s_over) * lo, -kImag * rabi * s_over * lo,
                    -kImag * rabi * s_over * hi, (c - kImag * p.delta * s_over) * hi});
}

CMat exact_schwinger_propagator(const HamiltonianModel& model, double t) {
    const auto& p = model.schwinger();
    const double wb = p.omega_bar();
    const double c = std::cos(0.5 * wb * t);
    const double s_over = wb > 0.0 ? std::sin(0.5 * wb * t) / wb : 0.5 * t;
    const double along = p.omega + p.omega0 * std::cos(p.theta);
    const double across = p.omega0 * std::sin(p.theta);
    const cplx lo = std::polar(1.0, -0.5 * p.omega * t);
    const cplx hi = std::polar(1.0, 0.5 * p.omega * t);
    return CMat(2, {(c + kImag * along * s_over) * lo, kImag * across * s_over * lo,
                    kImag * across * s_over * hi, (c - kImag * along * s_over) * hi});
}

CMat resummed_driven_tls_propagator(const HamiltonianModel& model, double t) {
    const auto& p = model.driven_tls();
    const double hbar = model.hbar();
    const double fast = p.V / (hbar * p.omega0) * std::sin(p.omega0 * t);
    const double slow = 0.5 * p.epsilon / hbar * bessel_jn(0, 2.0 * p.V / (hbar * p.omega0)) * t;
    CMat u = mat_exp_su2(sigma_x() * (kImag * fast)) * mat_exp_su2(sigma_z() * (kImag * slow));
    if (model.kind() == ModelKind::DrivenTLSInteraction) u = interaction_frame(model, t).adjoint() * u;
    return u;
}

namespace {

double energy_scale(const CMat& h) {
    if (h.dim() == 2) {
        const auto p = pauli_decompose(h);
        return std::abs(p.a0) + p.norm();
    }
    return spectral_norm(h);
}

}  // namespace

std::vector<CMat> numeric_propagate(const HamiltonianModel& model, const TimeGrid& grid,
                                    const NumericOptions& opts) {
    if (opts.substeps == 0) throw Error(ErrorCode::InvalidParam, "substeps must be at least 1");
    const std::size_t n = model.dim();
    const double hbar = model.hbar();
    const double h = grid.dt() / static_cast<double>(opts.substeps);
    const double scale = h / hbar;

    const double r3 = std::sqrt(3.0);
    const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
    const double a1 = (3.0 - 2.0 * r3) / 12.0, a2 = (3.0 + 2.0 * r3) / 12.0;

    auto guard = [&](const CMat& hm, double t) {
        if (energy_scale(hm) * scale > opts.max_phase_step) {
            throw Error(ErrorCode::StepTooLarge,
                        "max|E| h / hbar = " + std::to_string(energy_scale(hm) * scale) + " at t=" +
                            std::to_string(t) + "; refine the grid or raise substeps");
        }
    };

    std::vector<CMat> out;
    out.reserve(grid.size());
    CMat u = CMat::identity(n);
    out.push_back(u);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double tk = grid.at(k);
        for (std::size_t s = 0; s < opts.substeps; ++s) {
            const double t = tk + static_cast<double>(s) * h;
            if (opts.stepper == Stepper::ExponentialMidpoint) {
                const CMat hm = eval_hamiltonian(model, t + 0.5 * h);
                guard(hm, t);
                u = unitary_exp(hm * scale) * u;
            } else {
                const CMat h1 = eval_hamiltonian(model, t + c1 * h);
                const CMat h2 = eval_hamiltonian(model, t + c2 * h);
                guard(h1, t);
                guard(h2, t);
                const CMat early = (h1 * a2 + h2 * a1) * scale;
                const CMat late = (h1 * a1 + h2 * a2) * scale;
                u = unitary_exp(late) * (unitary_exp(early) * u);
            }
        }
        out.push_back(u);
    }
    return out;
}

OracleKind default_oracle(const HamiltonianModel& model) noexcept {
    switch (model.kind()) {
        case ModelKind::JaynesCummings: return OracleKind::ClosedFormJC;
        case ModelKind::SchwingerSpin: return OracleKind::ClosedFormSchwinger;
        default: return OracleKind::NumericMidpoint;
    }
}

std::vector<CMat> oracle_path(const HamiltonianModel& model, const TimeGrid& grid, OracleKind kind,
                              const NumericOptions& opts) {
    if (kind == OracleKind::NumericMidpoint) return numeric_propagate(model, grid, opts);
    std::vector<CMat> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.at(k);
        switch (kind) {
            case OracleKind::ClosedFormJC: out.push_back(exact_jc_propagator(model, t)); break;
            case OracleKind::ClosedFormSchwinger: out.push_back(exact_schwinger_propagator(model, t)); break;
            case OracleKind::ResummedDrivenTLS: out.push_back(resummed_driven_tls_propagator(model, t)); break;
            case OracleKind::NumericMidpoint: break;
        }
    }
    return out;
}

}  // namespace dualseries
