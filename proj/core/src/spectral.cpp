// spectral.cpp: eigen-decomposition along a path and its phase bookkeeping

#include "dualseries/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dualseries {

SpectralFrame instantaneous_eigensystem(const HamiltonianModel& model, double t,
                                        const SpectralOptions& opts) {
    const CMat h = eval_hamiltonian(model, t);
    HermitianEigen eig = hermitian_eigen(h);
    const std::size_t n = eig.values.size();
    if (n > 1) {
        const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
        double gap = eig.values[1] - eig.values[0];
        for (std::size_t k = 2; k < n; ++k) gap = std::min(gap, eig.values[k] - eig.values[k - 1]);
        if (scale == 0.0 || gap < opts.gap_tol * scale) {
            throw Error(ErrorCode::DegenerateSpectrum,
                        "eigenvalue gap " + std::to_string(gap) + " at t=" + std::to_string(t));
        }
    }
    SpectralFrame frame;
    frame.t = t;
    frame.energies = std::move(eig.values);
    frame.vectors = std::move(eig.vectors);
    return frame;
}

namespace {

void scale_column(CMat& m, std::size_t col, cplx phase) {
    for (std::size_t r = 0; r < m.dim(); ++r) m(r, col) *= phase;
}

// Unit phase that turns z into a non-negative real.
cplx unphase(cplx z) {
    const double a = std::abs(z);
    return a > 0.0 ? std::conj(z) / a : cplx{1.0, 0.0};
}

// Reorders the levels of `next` so each tracks the branch with maximal overlap in `prev`.
void follow_branches(const SpectralFrame& prev, SpectralFrame& next) {
    const std::size_t n = prev.energies.size();
    std::vector<double> ov(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            ov[i * n + j] = std::abs(column_overlap(prev.vectors, i, next.vectors, j));

    std::vector<std::size_t> assign(n, n);
    std::vector<bool> used_prev(n, false), used_next(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used_prev[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (!used_next[j] && ov[i * n + j] > best) {
                    best = ov[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        assign[bi] = bj;
        used_prev[bi] = used_next[bj] = true;
    }

    SpectralFrame out;
    out.t = next.t;
    out.energies.resize(n);
    out.vectors = CMat(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.energies[i] = next.energies[assign[i]];
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, i) = next.vectors(r, assign[i]);
    }
    next = std::move(out);
}

}  // namespace

namespace {

// Relabels (when following) and rephases `cur` so that each overlap with `prev` is real positive.
void continue_frame(const SpectralFrame& prev, SpectralFrame& cur, bool follow, const SpectralOptions& opts) {
    const std::size_t n = prev.energies.size();
    if (cur.energies.size() != n) throw Error(ErrorCode::DimensionMismatch, "frames differ in size");
    if (follow) follow_branches(prev, cur);
    for (std::size_t c = 0; c < n; ++c) {
        const cplx ov = column_overlap(prev.vectors, c, cur.vectors, c);
        if (std::abs(ov) < opts.swap_threshold) {
            throw Error(ErrorCode::BranchSwapDetected,
                        "overlap " + std::to_string(std::abs(ov)) + " for level " + std::to_string(c) +
                            " at t=" + std::to_string(cur.t));
        }
        scale_column(cur.vectors, c, unphase(ov));
    }
}

void anchor(SpectralFrame& frame) {
    auto& v = frame.vectors;
    const std::size_t n = v.dim();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t big = 0;
        for (std::size_t r = 1; r < n; ++r)
            if (std::abs(v(r, c)) > std::abs(v(big, c))) big = r;
        scale_column(v, c, unphase(v(big, c)));
    }
}

}  // namespace

FramePath gauge_continue(std::vector<SpectralFrame> raw, const TimeGrid& grid, double hbar,
                         bool follow, const SpectralOptions& opts) {
    if (raw.size() < 2) throw Error(ErrorCode::InvalidGrid, "gauge continuation needs at least two frames");
    if (raw.size() != grid.size()) {
        throw Error(ErrorCode::DimensionMismatch, "frame count does not match the grid");
    }
    anchor(raw.front());
    for (std::size_t k = 1; k < raw.size(); ++k) continue_frame(raw[k - 1], raw[k], follow, opts);
    return FramePath{grid, hbar, std::move(raw), {}, {}};
}

namespace {

// Finite-difference weights in units of 1/h.
struct Stencil {
    int first;                 // offset of weights[0]
    std::vector<double> weights;
};

Stencil pick_stencil(std::ptrdiff_t k, std::ptrdiff_t lo, std::ptrdiff_t hi) {
    const std::ptrdiff_t avail = hi - lo + 1;
    if (avail >= 5) {
        if (k - 2 >= lo && k + 2 <= hi) return {-2, {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}};
        if (k == lo) return {0, {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12}};
        if (k == lo + 1) return {-1, {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12}};
        if (k == hi) return {-4, {3.0 / 12, -16.0 / 12, 36.0 / 12, -48.0 / 12, 25.0 / 12}};
        return {-3, {-1.0 / 12, 6.0 / 12, -18.0 / 12, 10.0 / 12, 3.0 / 12}};
    }
    if (k - 1 >= lo && k + 1 <= hi) return {-1, {-0.5, 0.0, 0.5}};
    if (k == lo) return {0, {-1.5, 2.0, -0.5}};
    return {-2, {0.5, -2.0, 1.5}};
}

}  // namespace

CMat vector_derivative(const FramePath& path, std::size_t k) {
    const auto m = static_cast<std::ptrdiff_t>(path.frames.size());
    if (m < 3) throw Error(ErrorCode::GridTooCoarse, "derivatives need at least three frames");
    const bool ghosts = path.lead.size() == 2 && path.tail.size() == 2;
    const std::ptrdiff_t lo = ghosts ? -2 : 0;
    const std::ptrdiff_t hi = ghosts ? m + 1 : m - 1;
    auto at = [&](std::ptrdiff_t i) -> const CMat& {
        if (i < 0) return path.lead[static_cast<std::size_t>(i + 2)].vectors;
        if (i >= m) return path.tail[static_cast<std::size_t>(i - m)].vectors;
        return path.frames[static_cast<std::size_t>(i)].vectors;
    };
    const auto ki = static_cast<std::ptrdiff_t>(k);
    const Stencil st = pick_stencil(ki, lo, hi);
    CMat d(path.levels());
    for (std::size_t w = 0; w < st.weights.size(); ++w) {
        if (st.weights[w] == 0.0) continue;
        d += at(ki + st.first + static_cast<std::ptrdiff_t>(w)) * st.weights[w];
    }
    return d * (1.0 / path.grid.dt());
}

void geometric_phase_rates(FramePath& path) {
    const std::size_t n = path.levels();
    for (std::size_t k = 0; k < path.frames.size(); ++k) {
        const CMat d = vector_derivative(path, k);
        auto& f = path.frames[k];
        f.gamma_rates.assign(n, 0.0);
        f.gamma_residuals.assign(n, 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            const cplx rate = kImag * column_overlap(f.vectors, c, d, c);
            f.gamma_rates[c] = rate.real();
            f.gamma_residuals[c] = rate.imag();
        }
    }
}

FramePath build_frame_path(const HamiltonianModel& model, const TimeGrid& grid,
                           const SpectralOptions& opts) {
    std::vector<SpectralFrame> raw;
    raw.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) raw.push_back(instantaneous_eigensystem(model, grid.at(k), opts));
    const bool follow = opts.crossing == CrossingPolicy::Follow ||
                        (opts.crossing == CrossingPolicy::Auto && has_crossing_branches(model));
    FramePath path = gauge_continue(std::move(raw), grid, model.hbar(), follow, opts);

    // Sampled models are clamped outside their data, so ghost frames would be constant.
    const bool extrapolates = model.kind() != ModelKind::GenericSampled || model.generic().samples.empty();
    if (extrapolates && grid.size() >= 5) {
        const double h = grid.dt();
        try {
            SpectralFrame back1 = instantaneous_eigensystem(model, grid.t0() - h, opts);
            SpectralFrame back2 = instantaneous_eigensystem(model, grid.t0() - 2.0 * h, opts);
            continue_frame(path.frames.front(), back1, follow, opts);
            continue_frame(back1, back2, follow, opts);
            SpectralFrame fwd1 = instantaneous_eigensystem(model, grid.t1() + h, opts);
            SpectralFrame fwd2 = instantaneous_eigensystem(model, grid.t1() + 2.0 * h, opts);
            continue_frame(path.frames.back(), fwd1, follow, opts);
            continue_frame(fwd1, fwd2, follow, opts);
            path.lead = {std::move(back2), std::move(back1)};
            path.tail = {std::move(fwd1), std::move(fwd2)};
        } catch (const Error&) {
            // no ghosts: one-sided stencils at the ends
        }
    }
    if (grid.size() >= 3) geometric_phase_rates(path);
    return path;
}

namespace {

void check_level(const FramePath& path, std::size_t level) {
    if (level >= path.levels()) throw Error(ErrorCode::InvalidParam, "level index out of range");
}

}  // namespace

std::vector<double> dynamical_phase(const FramePath& path, std::size_t level) {
    check_level(path, level);
    std::vector<double> e(path.frames.size());
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = path.frames[k].energies[level] / path.hbar;
    return cumulative_quadrature(e, path.grid);
}

double dynamical_phase(const FramePath& path, std::size_t level, double t) {
    const std::size_t k = path.grid.index_of(t);
    return dynamical_phase(path, level)[k];
}

std::vector<double> geometric_phase(const FramePath& path, std::size_t level) {
    check_level(path, level);
    std::vector<double> g(path.frames.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto& rates = path.frames[k].gamma_rates;
        if (rates.empty()) throw Error(ErrorCode::InvalidParam, "path has no geometric phase rates");
        g[k] = rates[level];
    }
    return cumulative_quadrature(g, path.grid);
}

}  // namespace dualseries
