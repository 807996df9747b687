// diagnostics.cpp: condition evaluation, envelope fits, resummations and the validity report

#include "dualseries/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

namespace dualseries {

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::ConditionReliable: return "ConditionReliable";
        case Verdict::SecularGrowthDetected: return "SecularGrowthDetected";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

double adiabaticity_lhs(const HamiltonianModel& model, double t, double fd_step, const SpectralOptions& opts) {
    if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidParam, "finite-difference step must be positive");
    const SpectralFrame frame = instantaneous_eigensystem(model, t, opts);
    const CMat hdot = (eval_hamiltonian(model, t + fd_step) - eval_hamiltonian(model, t - fd_step)) *
                      (1.0 / (2.0 * fd_step));
    const CMat& b = frame.vectors;
    const CMat proj = b.adjoint() * hdot * b;
    const std::size_t n = frame.energies.size();
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (r == c) continue;
            const double gap = frame.energies[r] - frame.energies[c];
            sum += model.hbar() * std::abs(proj(r, c)) / (gap * gap);
        }
    }
    return sum;
}

SecularFit secular_slope(std::span<const double> magnitudes, const TimeGrid& grid, double period_hint) {
    if (magnitudes.size() != grid.size()) {
        throw Error(ErrorCode::DimensionMismatch, "magnitude series does not match the grid");
    }
    if (!(period_hint > 0.0) || !std::isfinite(period_hint)) {
        throw Error(ErrorCode::WindowTooShort, "no usable period hint for envelope windows");
    }
    const auto full = static_cast<std::size_t>(std::floor(grid.span() / period_hint * (1.0 + 1e-12)));

    SecularFit fit;
    if (full == 0) throw Error(ErrorCode::WindowTooShort, "grid span is shorter than one window");
    const double last = grid.t0() + static_cast<double>(full) * period_hint + 1e-9 * grid.dt();
    std::vector<std::pair<double, double>> best(full, {0.0, -std::numeric_limits<double>::infinity()});
    std::vector<bool> seen(full, false);
    for (std::size_t k = 0; k < grid.size() && grid.at(k) <= last; ++k) {
        const auto w = std::min(full - 1, static_cast<std::size_t>((grid.at(k) - grid.t0()) / period_hint));
        if (magnitudes[k] > best[w].second) best[w] = {grid.at(k), magnitudes[k]};
        seen[w] = true;
    }
    for (std::size_t w = 0; w < full; ++w)
        if (seen[w]) fit.envelope.push_back(best[w]);
    fit.windows = fit.envelope.size();
    if (fit.windows < 10) {
        throw Error(ErrorCode::WindowTooShort,
                    "only " + std::to_string(fit.windows) + " envelope windows; at least 10 are required");
    }

    double tm = 0.0, ym = 0.0;
    for (const auto& [t, y] : fit.envelope) {
        tm += t;
        ym += y;
    }
    const auto m = static_cast<double>(fit.windows);
    tm /= m;
    ym /= m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [t, y] : fit.envelope) {
        sxx += (t - tm) * (t - tm);
        sxy += (t - tm) * (y - ym);
    }
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * tm;
    double rss = 0.0;
    for (const auto& [t, y] : fit.envelope) {
        const double r = y - fit.intercept - fit.slope * t;
        rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (m - 2.0) / sxx);
    fit.detected = fit.slope > 3.0 * fit.slope_stderr && fit.slope * grid.span() > 0.1 * std::abs(fit.intercept);
    return fit;
}

SchwingerSecularity first_order_secularity_schwinger(const HamiltonianModel& model, double tol_fraction) {
    const auto& p = model.schwinger();
    SchwingerSecularity out;
    out.detuning = p.omega_tilde();
    const double coupling = 0.5 * p.omega * std::abs(std::sin(p.theta));
    if (std::abs(out.detuning) < tol_fraction * p.omega0) {
        out.branch = SecularBranch::Resonant;
        out.rate = coupling;
    } else {
        out.branch = SecularBranch::OffResonant;
        out.rate = coupling * coupling / std::abs(out.detuning);
    }
    return out;
}

HamiltonianModel resum_jc_shift(const HamiltonianModel& model) {
    const auto& p = model.jaynes_cummings();
    if (p.delta == 0.0) throw Error(ErrorCode::ZeroDetuning, "detuning shift needs a non-zero detuning");
    const double r = p.rabi();
    JaynesCummingsParams q = p;
    q.delta = p.delta + r * r / (2.0 * p.delta);
    q.base_delta = p.is_resummed() ? p.base_delta : p.delta;
    return {ModelKind::JaynesCummings, q, model.hbar()};
}

std::vector<CMat> resummed_jc_dyson(const HamiltonianModel& shifted, const TimeGrid& grid, std::size_t order,
                                    const ExpansionOptions& opts) {
    const auto& p = shifted.jaynes_cummings();
    if (!p.is_resummed()) throw Error(ErrorCode::InvalidParam, "model carries no detuning shift");
    if (order < 1 || order > 2) throw Error(ErrorCode::OrderOutOfRange, "resummed Dyson sum supports orders 1 and 2");
    const SeriesPropagator s = dyson_expand(shifted, grid, order, 1.0, opts);
    const double drift = 0.5 * (p.delta - p.base_delta);
    const double r = p.rabi();
    const double secular = r * r / (4.0 * p.delta);

    std::vector<CMat> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.at(k);
        CMat u = partial_sum(s, order, k);
        if (order >= 2) {
            u(0, 0) -= kImag * secular * t;
            u(1, 1) += kImag * secular * t;
        }
        const CMat phase(2, {std::polar(1.0, drift * t), 0.0, 0.0, std::polar(1.0, -drift * t)});
        out.push_back(phase * u);
    }
    return out;
}

namespace {

// J_0..J_nmax(z) for z >= 0 by Miller's downward recurrence, normalised with
// J_0 + 2 sum_k J_2k = 1.
std::vector<double> bessel_table(double z, int n_max) {
    std::vector<double> j(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (z == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const double top = std::max(static_cast<double>(n_max), z);
    int start = static_cast<int>(top + 20.0 + 3.0 * std::sqrt(top + 10.0));
    start += start % 2;
    std::vector<double> buf(static_cast<std::size_t>(start) + 2, 0.0);
    buf[static_cast<std::size_t>(start)] = 1e-300;
    for (int k = start; k >= 1; --k) {
        const auto uk = static_cast<std::size_t>(k);
        buf[uk - 1] = 2.0 * k / z * buf[uk] - buf[uk + 1];
        if (std::abs(buf[uk - 1]) > 1e250) {
            for (auto& v : buf) v *= 1e-250;
        }
    }
    double norm = buf[0];
    for (std::size_t k = 2; k < buf.size(); k += 2) norm += 2.0 * buf[k];
    for (int n = 0; n <= n_max; ++n) j[static_cast<std::size_t>(n)] = buf[static_cast<std::size_t>(n)] / norm;
    return j;
}

}  // namespace

double bessel_jn(int n, double z) {
    const int an = std::abs(n);
    double v = bessel_table(std::abs(z), an)[static_cast<std::size_t>(an)];
    if (z < 0.0 && an % 2 == 1) v = -v;
    if (n < 0 && an % 2 == 1) v = -v;
    return v;
}

std::vector<double> jacobi_anger_coeffs(double z, int n_max) {
    if (n_max < 0) throw Error(ErrorCode::InvalidParam, "n_max must be non-negative");
    const auto table = bessel_table(std::abs(z), n_max);
    std::vector<double> out(2 * static_cast<std::size_t>(n_max) + 1);
    for (int n = -n_max; n <= n_max; ++n) {
        const int an = std::abs(n);
        double v = table[static_cast<std::size_t>(an)];
        const bool odd = an % 2 == 1;
        if (odd && (z < 0.0) != (n < 0)) v = -v;
        out[static_cast<std::size_t>(n + n_max)] = v;
    }
    return out;
}

std::size_t required_substeps(const HamiltonianModel& model, const TimeGrid& grid, const NumericOptions& opts) {
    double peak = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) peak = std::max(peak, spectral_norm(eval_hamiltonian(model, grid.at(k))));
    const double phase = peak * grid.dt() / model.hbar();
    const auto need = static_cast<std::size_t>(std::ceil(phase / (0.5 * opts.max_phase_step)));
    return std::max<std::size_t>({opts.substeps, need, 1});
}

SeriesPropagator schroedinger_dual_series(const HamiltonianModel& model, const TimeGrid& grid, std::size_t order,
                                          const ExpansionOptions& opts) {
    if (model.kind() != ModelKind::DrivenTLS) return dual_dyson_expand(model, grid, order, 1.0, opts);
    SeriesPropagator s = dual_dyson_expand(with_picture(model, Picture::Interaction), grid, order, 1.0, opts);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const CMat f = interaction_frame(model, grid.at(k));
        for (auto& path : s.orders) path[k] = f * path[k];
    }
    return s;
}

namespace {

std::vector<std::pair<double, double>> strided(const TimeGrid& grid, const std::vector<double>& v,
                                               std::size_t max_samples) {
    const std::size_t stride = std::max<std::size_t>(1, (v.size() + max_samples - 1) / std::max<std::size_t>(max_samples, 1));
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k < v.size(); k += stride) out.emplace_back(grid.at(k), v[k]);
    if ((v.size() - 1) % stride != 0) out.emplace_back(grid.at(v.size() - 1), v.back());
    return out;
}

void fill_recovered(const HamiltonianModel& model, DiagnosticsReport& r) {
    switch (model.kind()) {
        case ModelKind::JaynesCummings: {
            const auto& p = model.jaynes_cummings();
            r.recovered_parameter = p.delta / p.rabi();
            r.regime = std::abs(p.rabi()) > std::abs(p.delta) ? "adiabatic" : "perturbative";
            break;
        }
        case ModelKind::SchwingerSpin: {
            const auto& p = model.schwinger();
            const double num = p.omega * std::sin(p.theta);
            r.recovered_parameter = std::abs(num / p.omega_bar());
            r.recovered_parameter_alt = std::abs(num / p.omega_tilde());
            r.regime = first_order_secularity_schwinger(model).branch == SecularBranch::Resonant ? "resonant"
                                                                                                  : "off_resonant";
            break;
        }
        case ModelKind::DrivenTLS:
        case ModelKind::DrivenTLSInteraction: {
            const auto& p = model.driven_tls();
            const double unit = model.hbar() * p.omega0;
            const auto coeffs = jacobi_anger_coeffs(2.0 * p.V / unit, 40);
            double peak = 0.0;
            for (std::size_t i = 41; i < coeffs.size(); ++i) peak = std::max(peak, std::abs(coeffs[i]));
            r.recovered_parameter = std::abs(p.epsilon) * peak / unit;
            r.regime = p.V > unit ? "strong_drive" : "weak_drive";
            break;
        }
        case ModelKind::GenericSampled:
            r.regime = "generic";
            break;
    }
}

}  // namespace

DiagnosticsReport validity_report(const HamiltonianModel& model, const TimeGrid& grid, std::size_t order,
                                  const ReportOptions& opts) {
    DiagnosticsReport r;
    r.model = model.kind();
    r.order = order;
    fill_recovered(model, r);

    std::vector<double> lhs(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        lhs[k] = adiabaticity_lhs(model, grid.at(k), opts.fd_step, opts.expansion.spectral);
    }
    r.condition_lhs_max = *std::max_element(lhs.begin(), lhs.end());
    r.condition_lhs = strided(grid, lhs, opts.max_curve_samples);

    const SeriesPropagator series = schroedinger_dual_series(model, grid, order, opts.expansion);

    NumericOptions numeric = opts.numeric;
    r.oracle = opts.numeric_oracle ? OracleKind::NumericMidpoint : default_oracle(model);
    if (r.oracle == OracleKind::NumericMidpoint) numeric.substeps = required_substeps(model, grid, numeric);
    const std::vector<CMat> exact = oracle_path(model, grid, r.oracle, numeric);

    std::vector<double> err(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) err[k] = max_abs_diff(partial_sum(series, order, k), exact[k]);
    r.error_max = *std::max_element(err.begin(), err.end());
    r.error_curve = strided(grid, err, opts.max_curve_samples);

    if (model.kind() == ModelKind::DrivenTLS || model.kind() == ModelKind::DrivenTLSInteraction) {
        std::vector<double> rerr(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            rerr[k] = max_abs_diff(resummed_driven_tls_propagator(model, grid.at(k)), exact[k]);
        }
        r.resummed_error_max = *std::max_element(rerr.begin(), rerr.end());
        r.resummed_error_curve = strided(grid, rerr, opts.max_curve_samples);
    }

    const double period = std::isnan(opts.period_hint) ? characteristic_period(model) : opts.period_hint;
    for (std::size_t j = 1; j <= order; ++j) {
        std::vector<double> mag(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) mag[k] = spectral_norm(series.orders[j][k]);
        SecularFit fit;
        try {
            fit = secular_slope(mag, grid, period);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::WindowTooShort) throw;
        }
        r.per_order.push_back(std::move(fit));
    }

    // Headline fit: the lowest order with detected growth, else the highest fitted order.
    const auto& fits = r.per_order;
    auto head = std::find_if(fits.begin(), fits.end(), [](const SecularFit& f) { return f.detected; });
    const bool any_detected = head != fits.end();
    if (!any_detected) {
        auto back = std::find_if(fits.rbegin(), fits.rend(), [](const SecularFit& f) { return f.windows > 0; });
        head = back == fits.rend() ? fits.end() : std::prev(back.base());
    }
    if (head != fits.end()) {
        r.secular_slope = head->slope;
        r.slope_stderr = head->slope_stderr;
        r.secular_order = static_cast<std::size_t>(head - fits.begin()) + 1;
    }

    if (any_detected) {
        r.verdict = Verdict::SecularGrowthDetected;
    } else if (r.condition_lhs_max < opts.lhs_threshold && r.error_max < opts.error_threshold) {
        r.verdict = Verdict::ConditionReliable;
    } else {
        r.verdict = Verdict::Inconclusive;
    }
    return r;
}

}  // namespace dualseries
