// models.cpp: evaluation of the catalog Hamiltonians

#include "dualseries/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dualseries {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::JaynesCummings: return "jaynes_cummings";
        case ModelKind::SchwingerSpin: return "schwinger";
        case ModelKind::DrivenTLS: return "driven_tls";
        case ModelKind::DrivenTLSInteraction: return "driven_tls_interaction";
        case ModelKind::GenericSampled: return "sampled";
    }
    return "unknown";
}

double JaynesCummingsParams::coupling() const noexcept {
    return g * std::sqrt(static_cast<double>(photon_n) + 1.0);
}
double JaynesCummingsParams::rabi() const noexcept { return 2.0 * coupling(); }
double JaynesCummingsParams::omega() const noexcept { return std::hypot(delta, rabi()); }
double JaynesCummingsParams::lambda() const noexcept { return rabi() / delta; }
bool JaynesCummingsParams::is_resummed() const noexcept { return !std::isnan(base_delta); }

double SchwingerParams::omega_tilde() const noexcept { return omega0 + omega * std::cos(theta); }
double SchwingerParams::omega_bar() const noexcept {
    return std::sqrt(omega0 * omega0 + omega * omega + 2.0 * omega0 * omega * std::cos(theta));
}

HamiltonianModel::HamiltonianModel(ModelKind kind, Params params, double hbar)
    : kind_(kind), params_(std::move(params)), hbar_(hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw Error(ErrorCode::InvalidParam, "hbar must be positive and finite");
    }
}

std::size_t HamiltonianModel::dim() const noexcept {
    if (const auto* gp = std::get_if<GenericParams>(&params_)) return gp->dim;
    return 2;
}

const JaynesCummingsParams& HamiltonianModel::jaynes_cummings() const {
    if (kind_ != ModelKind::JaynesCummings) {
        throw Error(ErrorCode::WrongModelKind, "model is not Jaynes-Cummings");
    }
    return std::get<JaynesCummingsParams>(params_);
}

const SchwingerParams& HamiltonianModel::schwinger() const {
    if (kind_ != ModelKind::SchwingerSpin) {
        throw Error(ErrorCode::WrongModelKind, "model is not the Schwinger spin");
    }
    return std::get<SchwingerParams>(params_);
}

const DrivenTlsParams& HamiltonianModel::driven_tls() const {
    if (kind_ != ModelKind::DrivenTLS && kind_ != ModelKind::DrivenTLSInteraction) {
        throw Error(ErrorCode::WrongModelKind, "model is not the driven two-level system");
    }
    return std::get<DrivenTlsParams>(params_);
}

const GenericParams& HamiltonianModel::generic() const {
    if (kind_ != ModelKind::GenericSampled) {
        throw Error(ErrorCode::WrongModelKind, "model is not a generic sampled model");
    }
    return std::get<GenericParams>(params_);
}

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParam, std::string(name) + " must be finite");
}

}  // namespace

HamiltonianModel make_jaynes_cummings(double g, double delta, int photon_n, double hbar) {
    require_finite(g, "g");
    require_finite(delta, "delta");
    if (g < 0.0) throw Error(ErrorCode::InvalidParam, "coupling g must be non-negative");
    if (photon_n < 0) throw Error(ErrorCode::InvalidParam, "photon number must be non-negative");
    JaynesCummingsParams p;
    p.g = g;
    p.delta = delta;
    p.photon_n = photon_n;
    return {ModelKind::JaynesCummings, p, hbar};
}

HamiltonianModel make_schwinger_spin(double omega0, double omega, double theta, double hbar) {
    require_finite(omega0, "omega0");
    require_finite(omega, "omega");
    require_finite(theta, "theta");
    if (!(omega0 > 0.0)) throw Error(ErrorCode::InvalidParam, "omega0 must be positive");
    return {ModelKind::SchwingerSpin, SchwingerParams{omega0, omega, theta}, hbar};
}

HamiltonianModel make_driven_tls(double epsilon, double V, double omega0, Picture picture, double hbar) {
    require_finite(epsilon, "epsilon");
    require_finite(V, "V");
    require_finite(omega0, "omega0");
    if (V < 0.0) throw Error(ErrorCode::InvalidParam, "drive amplitude V must be non-negative");
    if (!(omega0 > 0.0)) throw Error(ErrorCode::InvalidParam, "drive frequency omega0 must be positive");
    const auto kind = picture == Picture::Schroedinger ? ModelKind::DrivenTLS
                                                       : ModelKind::DrivenTLSInteraction;
    return {kind, DrivenTlsParams{epsilon, V, omega0}, hbar};
}

HamiltonianModel make_sampled(const TimeGrid& grid, std::vector<CMat> samples, double hbar,
                              double period_hint) {
    if (samples.size() != grid.size()) {
        throw Error(ErrorCode::InvalidParam, "sampled model needs one matrix per grid point");
    }
    const std::size_t dim = samples.front().dim();
    for (const auto& s : samples) {
        if (s.dim() != dim) throw Error(ErrorCode::InvalidParam, "samples have mixed dimensions");
        if (hermiticity_defect(s) > 1e-12 * std::max(1.0, max_abs(s))) {
            throw Error(ErrorCode::InvalidParam, "sampled Hamiltonian is not Hermitian");
        }
    }
    GenericParams p;
    p.dim = dim;
    p.times = grid.points();
    p.samples = std::move(samples);
    p.period_hint = period_hint;
    return {ModelKind::GenericSampled, std::move(p), hbar};
}

HamiltonianModel make_callable(std::size_t dim, std::function<CMat(double)> fn, double hbar,
                               double period_hint) {
    if (dim == 0 || dim > CMat::kMaxDim) throw Error(ErrorCode::InvalidParam, "dimension must be in [1, 8]");
    if (!fn) throw Error(ErrorCode::InvalidParam, "callable model needs a function");
    GenericParams p;
    p.dim = dim;
    p.callable = std::move(fn);
    p.period_hint = period_hint;
    return {ModelKind::GenericSampled, std::move(p), hbar};
}

namespace {

CMat eval_generic(const GenericParams& p, double t) {
    if (p.callable) return p.callable(t);
    const auto& ts = p.times;
    if (t <= ts.front()) return p.samples.front();
    if (t >= ts.back()) return p.samples.back();
    const double h = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    auto k = static_cast<std::size_t>((t - ts.front()) / h);
    k = std::min(k, ts.size() - 2);
    const double w = (t - ts[k]) / h;
    return p.samples[k] * (1.0 - w) + p.samples[k + 1] * w;
}

}  // namespace

CMat eval_hamiltonian(const HamiltonianModel& model, double t) {
    const double hbar = model.hbar();
    switch (model.kind()) {
        case ModelKind::JaynesCummings: {
            const auto& p = model.jaynes_cummings();
            const double c = hbar * p.coupling();
            return CMat(2, {0.0, std::polar(c, -p.delta * t), std::polar(c, p.delta * t), 0.0});
        }
        case ModelKind::SchwingerSpin: {
            const auto& p = model.schwinger();
            const double a = -0.5 * hbar * p.omega0;
            const double s = std::sin(p.theta), c = std::cos(p.theta);
            return CMat(2, {a * c, std::polar(a * s, -p.omega * t), std::polar(a * s, p.omega * t), -a * c});
        }
        case ModelKind::DrivenTLS: {
            const auto& p = model.driven_tls();
            const double drive = -p.V * std::cos(p.omega0 * t);
            return CMat(2, {-0.5 * p.epsilon, drive, drive, 0.5 * p.epsilon});
        }
        case ModelKind::DrivenTLSInteraction: {
            const auto& p = model.driven_tls();
            const double drive = -p.V * std::cos(p.omega0 * t);
            const double phase = p.epsilon * t / hbar;
            return CMat(2, {0.0, std::polar(drive, -phase), std::polar(drive, phase), 0.0});
        }
        case ModelKind::GenericSampled:
            return eval_generic(model.generic(), t);
    }
    throw Error(ErrorCode::WrongModelKind, "unknown model kind");
}

double characteristic_period(const HamiltonianModel& model) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (model.kind()) {
        case ModelKind::JaynesCummings: {
            const double w = model.jaynes_cummings().omega();
            return w > 0.0 ? two_pi / w : std::numeric_limits<double>::quiet_NaN();
        }
        case ModelKind::SchwingerSpin: {
            const auto& p = model.schwinger();
            const double w = std::max(std::abs(p.omega_tilde()), std::abs(p.omega));
            return two_pi / (w > 0.0 ? w : p.omega0);
        }
        case ModelKind::DrivenTLS:
        case ModelKind::DrivenTLSInteraction:
            return two_pi / model.driven_tls().omega0;
        case ModelKind::GenericSampled:
            return model.generic().period_hint;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

CMat interaction_frame(const HamiltonianModel& model, double t) {
    const auto& p = model.driven_tls();
    const double phase = 0.5 * p.epsilon * t / model.hbar();
    return CMat(2, {std::polar(1.0, phase), 0.0, 0.0, std::polar(1.0, -phase)});
}

HamiltonianModel with_picture(const HamiltonianModel& model, Picture picture) {
    const auto& p = model.driven_tls();
    return make_driven_tls(p.epsilon, p.V, p.omega0, picture, model.hbar());
}

bool has_crossing_branches(const HamiltonianModel& model) noexcept {
    return model.kind() == ModelKind::DrivenTLSInteraction;
}

}  // namespace dualseries
