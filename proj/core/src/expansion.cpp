// expansion.cpp: recursive series terms by cumulative quadrature

#include "dualseries/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dualseries {

std::string_view to_string(SeriesKind kind) noexcept {
    return kind == SeriesKind::Dyson ? "dyson" : "dual";
}

namespace {

void check_order(std::size_t max_order) {
    if (max_order > kMaxSeriesOrder) {
        throw Error(ErrorCode::OrderOutOfRange,
                    "series order " + std::to_string(max_order) + " exceeds the cap of " +
                        std::to_string(kMaxSeriesOrder));
    }
}

void check_lambda(double lambda) {
    if (!std::isfinite(lambda) || lambda == 0.0) {
        throw Error(ErrorCode::InvalidParam, "lambda must be finite and non-zero");
    }
}

// Everything the dual series needs from one frame path, with energies scaled by lambda.
struct AdiabaticFrame {
    std::vector<CMat> moving;    // B(t_k) Phi(t_k): columns exp(i phi_n) |n;t_k>
    std::vector<CMat> h_prime;   // H'(t_k) in the frozen eigenbasis
    CMat frozen;                 // B(t0)
};

AdiabaticFrame adiabatic_frame(const FramePath& path, double lambda) {
    const std::size_t m = path.frames.size();
    const std::size_t n = path.levels();

    // phi_n = gamma_n - lambda * (1/hbar) int E_n
    std::vector<std::vector<double>> phi(n);
    for (std::size_t c = 0; c < n; ++c) {
        const auto theta = dynamical_phase(path, c);
        const auto gamma = geometric_phase(path, c);
        phi[c].resize(m);
        for (std::size_t k = 0; k < m; ++k) phi[c][k] = gamma[k] - lambda * theta[k];
    }

    AdiabaticFrame out;
    out.frozen = path.frames.front().vectors;
    out.moving.reserve(m);
    out.h_prime.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const CMat& b = path.frames[k].vectors;
        CMat mv = b;
        for (std::size_t c = 0; c < n; ++c) {
            const cplx ph = std::polar(1.0, phi[c][k]);
            for (std::size_t r = 0; r < n; ++r) mv(r, c) *= ph;
        }
        out.moving.push_back(std::move(mv));

        const CMat db = vector_derivative(path, k);
        const CMat coupling = b.adjoint() * db;  // <m;t|d/dt|n;t>

        CMat hp(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (r == c) continue;
                hp(r, c) = -path.hbar * std::polar(1.0, phi[c][k] - phi[r][k]) * kImag * coupling(r, c);
            }
        }
        out.h_prime.push_back(std::move(hp));
    }
    return out;
}

std::vector<CMat> u0_from(const AdiabaticFrame& af) {
    const CMat frozen_adj = af.frozen.adjoint();
    std::vector<CMat> u0;
    u0.reserve(af.moving.size());
    for (const auto& mv : af.moving) u0.push_back(mv * frozen_adj);
    u0.front() = CMat::identity(af.frozen.dim());
    return u0;
}

// Orders 0..K of the dual series on one grid.
std::vector<std::vector<CMat>> dual_orders(const HamiltonianModel& model, const TimeGrid& grid,
                                           std::size_t max_order, double lambda,
                                           const SpectralOptions& opts) {
    if (grid.steps() < 2) throw Error(ErrorCode::GridTooCoarse, "series expansion needs at least two steps");
    const FramePath path = build_frame_path(model, grid, opts);
    const AdiabaticFrame af = adiabatic_frame(path, lambda);
    const std::size_t m = grid.size();
    const std::size_t n = model.dim();
    const CMat frozen_adj = af.frozen.adjoint();
    const cplx factor = -kImag / model.hbar();

    std::vector<std::vector<CMat>> orders;
    orders.push_back(u0_from(af));
    std::vector<CMat> w(m, CMat::identity(n));
    for (std::size_t j = 1; j <= max_order; ++j) {
        std::vector<CMat> integrand(m);
        for (std::size_t k = 0; k < m; ++k) integrand[k] = af.h_prime[k] * w[k];
        w = cumulative_quadrature(integrand, grid);
        std::vector<CMat> uj(m);
        for (std::size_t k = 0; k < m; ++k) {
            w[k] *= factor;
            uj[k] = af.moving[k] * w[k] * frozen_adj;
        }
        uj.front() = CMat::zero(n);
        orders.push_back(std::move(uj));
    }
    return orders;
}

std::vector<std::vector<CMat>> dyson_orders(const HamiltonianModel& model, const TimeGrid& grid,
                                            std::size_t max_order, double lambda) {
    if (grid.steps() < 2) throw Error(ErrorCode::GridTooCoarse, "series expansion needs at least two steps");
    const std::size_t m = grid.size();
    const std::size_t n = model.dim();
    std::vector<CMat> h(m);
    for (std::size_t k = 0; k < m; ++k) h[k] = eval_hamiltonian(model, grid.at(k));
    const cplx factor = -kImag * lambda / model.hbar();

    std::vector<std::vector<CMat>> orders;
    orders.emplace_back(m, CMat::identity(n));
    for (std::size_t j = 1; j <= max_order; ++j) {
        std::vector<CMat> integrand(m);
        for (std::size_t k = 0; k < m; ++k) integrand[k] = h[k] * orders.back()[k];
        auto dj = cumulative_quadrature(integrand, grid);
        for (auto& d : dj) d *= factor;
        dj.front() = CMat::zero(n);
        orders.push_back(std::move(dj));
    }
    return orders;
}

template <class Engine>
void self_check(const std::vector<CMat>& fine, const TimeGrid& grid, const ExpansionOptions& opts,
                Engine&& engine) {
    if (!opts.self_check || grid.steps() % 2 != 0 || grid.steps() < 4) return;
    double sup = 0.0;
    for (const auto& u : fine) sup = std::max(sup, max_abs(u));
    if (sup < 1e-12) return;
    const TimeGrid coarse(grid.t0(), grid.t1(), grid.steps() / 2);
    const std::vector<CMat> rough = engine(coarse);
    double diff = 0.0;
    for (std::size_t k = 0; k < rough.size(); ++k) diff = std::max(diff, max_abs_diff(rough[k], fine[2 * k]));
    if (diff > opts.self_check_tol * sup) {
        throw Error(ErrorCode::QuadratureUnderResolved,
                    "highest order changes by " + std::to_string(100.0 * diff / sup) +
                        "% when the step is halved");
    }
}

}  // namespace

std::vector<CMat> adiabatic_u0(const HamiltonianModel& model, const TimeGrid& grid,
                               const SpectralOptions& opts) {
    return dual_orders(model, grid, 0, 1.0, opts).front();
}

std::vector<CMat> CorrectionPath::lab() const {
    const CMat adj = frozen_basis.adjoint();
    std::vector<CMat> out;
    out.reserve(eigen_coords.size());
    for (const auto& h : eigen_coords) out.push_back(frozen_basis * h * adj);
    return out;
}

CorrectionPath correction_hamiltonian(const HamiltonianModel& model, const TimeGrid& grid,
                                      const SpectralOptions& opts) {
    if (grid.steps() < 2) throw Error(ErrorCode::GridTooCoarse, "correction Hamiltonian needs at least two steps");
    const FramePath path = build_frame_path(model, grid, opts);
    AdiabaticFrame af = adiabatic_frame(path, 1.0);
    return CorrectionPath{std::move(af.h_prime), std::move(af.frozen)};
}

SeriesPropagator dual_dyson_expand(const HamiltonianModel& model, const TimeGrid& grid,
                                   std::size_t max_order, double lambda, const ExpansionOptions& opts) {
    check_order(max_order);
    check_lambda(lambda);
    SeriesPropagator s{SeriesKind::DualDyson, lambda, grid, max_order,
                       dual_orders(model, grid, max_order, lambda, opts.spectral)};
    self_check(s.orders.back(), grid, opts, [&](const TimeGrid& g) {
        return dual_orders(model, g, max_order, lambda, opts.spectral).back();
    });
    return s;
}

SeriesPropagator dyson_expand(const HamiltonianModel& model, const TimeGrid& grid,
                              std::size_t max_order, double lambda, const ExpansionOptions& opts) {
    check_order(max_order);
    check_lambda(lambda);
    SeriesPropagator s{SeriesKind::Dyson, lambda, grid, max_order,
                       dyson_orders(model, grid, max_order, lambda)};
    if (max_order > 0) {
        self_check(s.orders.back(), grid, opts, [&](const TimeGrid& g) {
            return dyson_orders(model, g, max_order, lambda).back();
        });
    }
    return s;
}

CMat partial_sum(const SeriesPropagator& series, std::size_t order, std::size_t k) {
    if (order > series.max_order) {
        throw Error(ErrorCode::OrderOutOfRange,
                    "order " + std::to_string(order) + " beyond computed " + std::to_string(series.max_order));
    }
    if (k >= series.grid.size()) throw Error(ErrorCode::InvalidGrid, "grid index out of range");
    CMat sum = series.orders[0][k];
    for (std::size_t j = 1; j <= order; ++j) sum += series.orders[j][k];
    return sum;
}

CMat partial_sum_at(const SeriesPropagator& series, std::size_t order, double t) {
    return partial_sum(series, order, series.grid.index_of(t));
}

std::vector<double> order_sup_norms(const SeriesPropagator& series) {
    std::vector<double> out;
    out.reserve(series.orders.size());
    for (const auto& path : series.orders) {
        double sup = 0.0;
        for (const auto& u : path) sup = std::max(sup, spectral_norm(u));
        out.push_back(sup);
    }
    return out;
}

}  // namespace dualseries
