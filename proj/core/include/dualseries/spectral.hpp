// spectral.hpp: instantaneous eigensystems, gauge continuation, dynamical and geometric phases

#pragma once

#include <cstddef>
#include <vector>

#include "dualseries/models.hpp"
#include "dualseries/numerics.hpp"

namespace dualseries {

// How gauge continuation treats branches that exchange order along the path.
//   Refuse: keep ascending order; a large reordering raises BranchSwapDetected.
//   Follow: relabel each frame by maximal overlap with its predecessor so every
//           level index tracks one smooth branch (energies may then cross).
//   Auto:   Follow for models whose branches cross by construction, else Refuse.
enum class CrossingPolicy { Auto, Refuse, Follow };

struct SpectralOptions {
    double gap_tol{1e-9};         // relative to the spectral norm of H(t)
    CrossingPolicy crossing{CrossingPolicy::Auto};
    double swap_threshold{0.5};   // minimal |<n;t_k|n;t_k+1>| accepted
};

struct SpectralFrame {
    double t{0.0};
    std::vector<double> energies;  // ascending unless a Follow path relabelled them
    CMat vectors;                  // column n is |n;t>
    std::vector<double> gamma_rates;      // Re <n;t|i d/dt|n;t>, empty until computed
    std::vector<double> gamma_residuals;  // Im part of the same stencil
};

struct FramePath {
    TimeGrid grid;
    double hbar{1.0};
    std::vector<SpectralFrame> frames;
    // Optional gauge-continued frames at t0 - 2h, t0 - h and t1 + h, t1 + 2h. When present,
    // derivatives use centred stencils at every grid point.
    std::vector<SpectralFrame> lead;
    std::vector<SpectralFrame> tail;

    std::size_t levels() const noexcept { return frames.empty() ? 0 : frames.front().energies.size(); }
};

// Ascending eigenvalues and orthonormal eigenvectors of H(t); phases are arbitrary.
SpectralFrame instantaneous_eigensystem(const HamiltonianModel& model, double t,
                                        const SpectralOptions& opts = {});

// Parallel-transport gauge: every consecutive overlap <n;t_k|n;t_k+1> is made real positive,
// and the first frame has its largest-magnitude component real positive.
FramePath gauge_continue(std::vector<SpectralFrame> raw, const TimeGrid& grid, double hbar,
                         bool follow_branches = false, const SpectralOptions& opts = {});

// d/dt of the eigenvector matrix at grid index k: five-point centred differences, one-sided
// five-point stencils at the ends when the path has no ghost frames, three-point stencils
// on paths shorter than five frames.
CMat vector_derivative(const FramePath& path, std::size_t k);

// Fills gamma_rates / gamma_residuals from vector_derivative.
// The rates depend on the gauge of the supplied path: a parallel-transported path has a
// rate that vanishes with the step, while a path in some other smooth gauge carries that gauge's Berry rate.
void geometric_phase_rates(FramePath& path);

// instantaneous_eigensystem on every grid point (plus ghost frames when the model can be
// evaluated beyond the grid), gauge_continue, geometric_phase_rates.
FramePath build_frame_path(const HamiltonianModel& model, const TimeGrid& grid,
                           const SpectralOptions& opts = {});

// (1/hbar) * integral_0^t E_n, cumulative over the grid.
std::vector<double> dynamical_phase(const FramePath& path, std::size_t level);
double dynamical_phase(const FramePath& path, std::size_t level, double t);

// integral_0^t gamma_rate_n, cumulative over the grid.
std::vector<double> geometric_phase(const FramePath& path, std::size_t level);

}  // namespace dualseries
