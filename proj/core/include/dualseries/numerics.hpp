// numerics.hpp: small dense complex matrices, exact 2x2 exponentials, cumulative quadrature
//
// Everything here is value-semantic and reentrant. Matrices are tiny (dim <= 8), so CMat
// owns a flat row-major buffer and favours clarity over blocking tricks.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "dualseries/error.hpp"

namespace dualseries {

using cplx = std::complex<double>;
inline constexpr cplx kImag{0.0, 1.0};

class CMat {
public:
    static constexpr std::size_t kMaxDim = 8;

    CMat() = default;
    explicit CMat(std::size_t dim);
    CMat(std::size_t dim, std::initializer_list<cplx> row_major);

    static CMat identity(std::size_t dim);
    static CMat zero(std::size_t dim) { return CMat(dim); }

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    cplx& operator()(std::size_t row, std::size_t col) noexcept { return a_[row * dim_ + col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const noexcept {
        return a_[row * dim_ + col];
    }

    std::span<const cplx> entries() const noexcept { return a_; }

    CMat adjoint() const;
    cplx trace() const noexcept;

    CMat& operator+=(const CMat& rhs);
    CMat& operator-=(const CMat& rhs);
    CMat& operator*=(cplx s) noexcept;

    friend CMat operator+(CMat lhs, const CMat& rhs) { return lhs += rhs; }
    friend CMat operator-(CMat lhs, const CMat& rhs) { return lhs -= rhs; }
    friend CMat operator*(CMat m, cplx s) { return m *= s; }
    friend CMat operator*(cplx s, CMat m) { return m *= s; }
    friend CMat operator*(const CMat& lhs, const CMat& rhs);
    friend CMat operator-(CMat m) { return m *= -1.0; }

private:
    std::size_t dim_{0};
    std::vector<cplx> a_;
};

CMat sigma_x();
CMat sigma_y();
CMat sigma_z();

// Column n of a matrix as a vector, and the inner product <a|b> of two columns.
std::vector<cplx> column(const CMat& m, std::size_t n);
cplx column_overlap(const CMat& a, std::size_t ca, const CMat& b, std::size_t cb);

double max_abs(const CMat& m) noexcept;
double frobenius_norm(const CMat& m) noexcept;
double spectral_norm(const CMat& m);
double max_abs_diff(const CMat& a, const CMat& b);

// max-entry |U^dagger U - I|
double unitarity_defect(const CMat& u);
// max-entry |H - H^dagger|
double hermiticity_defect(const CMat& h);

// H = a0 I + ax sx + ay sy + az sz for a Hermitian 2x2 matrix.
struct PauliDecomposition {
    double a0{0.0};
    double ax{0.0};
    double ay{0.0};
    double az{0.0};
    double norm() const noexcept;
};
PauliDecomposition pauli_decompose(const CMat& h);
CMat pauli_compose(const PauliDecomposition& p);

// exp(A) for a 2x2 A = i(a0 I + a.sigma). Throws NonDecomposable when -iA is not Hermitian
// within `tol`.
CMat mat_exp_su2(const CMat& a, double tol = 1e-12);

// exp(A) for small general matrices by scaling-and-squaring a truncated Taylor series.
CMat mat_exp_taylor(const CMat& a);

// exp(-i * h) for Hermitian h: the closed form for 2x2, scaled Taylor otherwise.
CMat unitary_exp(const CMat& hermitian_generator);

// Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian matrix.
struct HermitianEigen {
    std::vector<double> values;
    CMat vectors;
};
HermitianEigen hermitian_eigen(const CMat& h);

// Uniform time discretisation; points t0 + k (t1 - t0) / steps, k = 0..steps.
class TimeGrid {
public:
    TimeGrid(double t0, double t1, std::size_t steps);

    double t0() const noexcept { return t0_; }
    double t1() const noexcept { return t1_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_ + 1; }
    double dt() const noexcept { return (t1_ - t0_) / static_cast<double>(steps_); }
    double span() const noexcept { return t1_ - t0_; }
    double at(std::size_t k) const noexcept;
    std::vector<double> points() const;

    // Index of the grid point equal to t within tol * dt; throws InvalidGrid otherwise.
    std::size_t index_of(double t, double tol = 1e-9) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_;
    double t1_;
    std::size_t steps_;
};

namespace detail {
void check_quadrature_input(std::size_t samples, const TimeGrid& grid);
}

// Cumulative integral of samples on a uniform grid: composite Simpson at even points and a
// quadratic-interpolation rule on the trailing interval at odd points, so every node is
// fourth-order accurate. result[0] is zero. Works for double and CMat samples.
template <class T>
std::vector<T> cumulative_quadrature(std::span<const T> f, const TimeGrid& grid) {
    detail::check_quadrature_input(f.size(), grid);
    const double h = grid.dt();
    std::vector<T> out(f.size(), f[0] * 0.0);
    out[1] = (5.0 * f[0] + 8.0 * f[1] - f[2]) * (h / 12.0);
    for (std::size_t k = 2; k < f.size(); ++k) {
        if (k % 2 == 0) {
            out[k] = out[k - 2] + (f[k - 2] + 4.0 * f[k - 1] + f[k]) * (h / 3.0);
        } else {
            out[k] = out[k - 1] + (8.0 * f[k - 1] + 5.0 * f[k] - f[k - 2]) * (h / 12.0);
        }
    }
    return out;
}

template <class T>
std::vector<T> cumulative_quadrature(const std::vector<T>& f, const TimeGrid& grid) {
    return cumulative_quadrature(std::span<const T>(f), grid);
}

}  // namespace dualseries
