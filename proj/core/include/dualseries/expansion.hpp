// expansion.hpp: the lambda-scaled Dyson series and the adiabatic (dual-Dyson) series
//
// Both engines build order j from order j-1 by one cumulative quadrature:
//   Dyson:      D_j(t) = -(i/hbar) lambda  int_0^t H(t') D_{j-1}(t') dt'
//   dual-Dyson: W_j(t) = -(i/hbar)         int_0^t H'(t') W_{j-1}(t') dt',  U_j = U_0 W_j
// For the dual series lambda multiplies the energies of H; with fixed eigenvectors the
// order-j term then scales as lambda^-j.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dualseries/models.hpp"
#include "dualseries/numerics.hpp"
#include "dualseries/spectral.hpp"

namespace dualseries {

enum class SeriesKind { Dyson, DualDyson };

std::string_view to_string(SeriesKind kind) noexcept;

struct SeriesPropagator {
    SeriesKind kind{SeriesKind::Dyson};
    double lambda{1.0};
    TimeGrid grid{0.0, 1.0, 1};
    std::size_t max_order{0};
    std::vector<std::vector<CMat>> orders;  // orders[j][k] = U_j(t_k)
};

struct ExpansionOptions {
    SpectralOptions spectral{};
    // Re-run on the half-resolution grid and compare the highest order.
    bool self_check{true};
    double self_check_tol{0.01};
};

inline constexpr std::size_t kMaxSeriesOrder = 4;

// U_0(t) = sum_n exp(i gamma_n) exp(-(i/hbar) int E_n) |n;t><n;0|, with U_0(t0) = I.
std::vector<CMat> adiabatic_u0(const HamiltonianModel& model, const TimeGrid& grid,
                               const SpectralOptions& opts = {});

struct CorrectionPath {
    std::vector<CMat> eigen_coords;  // H'(t_k) in the basis {|n;0>}; zero diagonal
    CMat frozen_basis;               // columns |n;0>

    // The same operator written in the computational basis.
    std::vector<CMat> lab() const;
};

CorrectionPath correction_hamiltonian(const HamiltonianModel& model, const TimeGrid& grid,
                                      const SpectralOptions& opts = {});

SeriesPropagator dual_dyson_expand(const HamiltonianModel& model, const TimeGrid& grid,
                                   std::size_t max_order, double lambda = 1.0,
                                   const ExpansionOptions& opts = {});

SeriesPropagator dyson_expand(const HamiltonianModel& model, const TimeGrid& grid,
                              std::size_t max_order, double lambda = 1.0,
                              const ExpansionOptions& opts = {});

// Sum of orders 0..order at grid index k, or at grid time t.
CMat partial_sum(const SeriesPropagator& series, std::size_t order, std::size_t k);
CMat partial_sum_at(const SeriesPropagator& series, std::size_t order, double t);

// Largest spectral norm of each order over the grid.
std::vector<double> order_sup_norms(const SeriesPropagator& series);

}  // namespace dualseries
