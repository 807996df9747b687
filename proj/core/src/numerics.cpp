// numerics.cpp: CMat arithmetic, Pauli-basis exponentials, eigen-decomposition, grids

#include "dualseries/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dualseries {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParam: return "InvalidParam";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::NonDecomposable: return "NonDecomposable";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
        case ErrorCode::BranchSwapDetected: return "BranchSwapDetected";
        case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
        case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
        case ErrorCode::WrongModelKind: return "WrongModelKind";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::NotAtResonance: return "NotAtResonance";
        case ErrorCode::ZeroDetuning: return "ZeroDetuning";
    }
    return "Unknown";
}

// ----------------------------------------------------------------------------- CMat

CMat::CMat(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {
    if (dim == 0 || dim > kMaxDim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix dimension must be in [1, 8], got " + std::to_string(dim));
    }
}

CMat::CMat(std::size_t dim, std::initializer_list<cplx> row_major) : CMat(dim) {
    if (row_major.size() != dim * dim) {
        throw Error(ErrorCode::DimensionMismatch, "initializer has wrong number of entries");
    }
    std::copy(row_major.begin(), row_major.end(), a_.begin());
}

CMat CMat::identity(std::size_t dim) {
    CMat m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::adjoint() const {
    CMat out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

cplx CMat::trace() const noexcept {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, i);
    return s;
}

CMat& CMat::operator+=(const CMat& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "operator+ dimension mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "operator- dimension mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
    return *this;
}

CMat& CMat::operator*=(cplx s) noexcept {
    for (auto& x : a_) x *= s;
    return *this;
}

CMat operator*(const CMat& lhs, const CMat& rhs) {
    if (lhs.dim_ != rhs.dim_) throw Error(ErrorCode::DimensionMismatch, "operator* dimension mismatch");
    const std::size_t n = lhs.dim_;
    CMat out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = lhs(r, k);
            if (a == cplx{}) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += a * rhs(k, c);
        }
    }
    return out;
}

CMat sigma_x() { return CMat(2, {0.0, 1.0, 1.0, 0.0}); }
CMat sigma_y() { return CMat(2, {0.0, -kImag, kImag, 0.0}); }
CMat sigma_z() { return CMat(2, {1.0, 0.0, 0.0, -1.0}); }

std::vector<cplx> column(const CMat& m, std::size_t n) {
    std::vector<cplx> v(m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r) v[r] = m(r, n);
    return v;
}

cplx column_overlap(const CMat& a, std::size_t ca, const CMat& b, std::size_t cb) {
    cplx s{0.0, 0.0};
    for (std::size_t r = 0; r < a.dim(); ++r) s += std::conj(a(r, ca)) * b(r, cb);
    return s;
}

double max_abs(const CMat& m) noexcept {
    double best = 0.0;
    for (const auto& x : m.entries()) best = std::max(best, std::abs(x));
    return best;
}

double frobenius_norm(const CMat& m) noexcept {
    double s = 0.0;
    for (const auto& x : m.entries()) s += std::norm(x);
    return std::sqrt(s);
}

double spectral_norm(const CMat& m) {
    const auto eig = hermitian_eigen(m.adjoint() * m);
    return std::sqrt(std::max(0.0, eig.values.back()));
}

double max_abs_diff(const CMat& a, const CMat& b) { return max_abs(a - b); }

double unitarity_defect(const CMat& u) {
    return max_abs(u.adjoint() * u - CMat::identity(u.dim()));
}

double hermiticity_defect(const CMat& h) { return max_abs(h - h.adjoint()); }

// ------------------------------------------------------------------- Pauli algebra

double PauliDecomposition::norm() const noexcept { return std::sqrt(ax * ax + ay * ay + az * az); }

PauliDecomposition pauli_decompose(const CMat& h) {
    if (h.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "Pauli decomposition needs a 2x2 matrix");
    PauliDecomposition p;
    p.a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    p.az = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const cplx off = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
    p.ax = off.real();
    p.ay = -off.imag();
    return p;
}

CMat pauli_compose(const PauliDecomposition& p) {
    return CMat(2, {cplx{p.a0 + p.az, 0.0}, cplx{p.ax, -p.ay}, cplx{p.ax, p.ay},
                    cplx{p.a0 - p.az, 0.0}});
}

CMat mat_exp_su2(const CMat& a, double tol) {
    if (a.dim() != 2) throw Error(ErrorCode::NonDecomposable, "mat_exp_su2 needs a 2x2 matrix");
    const CMat h = a * (-kImag);
    if (hermiticity_defect(h) > tol) {
        throw Error(ErrorCode::NonDecomposable, "argument is not i times a Hermitian matrix");
    }
    const PauliDecomposition p = pauli_decompose(h);
    const double r = p.norm();
    const double c = std::cos(r);
    // sin(r)/r with the removable singularity handled.
    const double sinc = r > 1e-8 ? std::sin(r) / r : 1.0 - r * r / 6.0;
    const cplx phase = std::polar(1.0, p.a0);
    const cplx is = kImag * sinc;
    return CMat(2, {phase * (c + is * p.az), phase * is * cplx{p.ax, -p.ay},
                    phase * is * cplx{p.ax, p.ay}, phase * (c - is * p.az)});
}

CMat mat_exp_taylor(const CMat& a) {
    const double norm = max_abs(a) * static_cast<double>(a.dim());
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const CMat scaled = a * std::ldexp(1.0, -squarings);

    CMat sum = CMat::identity(a.dim());
    CMat term = CMat::identity(a.dim());
    for (int k = 1; k <= 18; ++k) {
        term = term * scaled;
        term *= 1.0 / k;
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

CMat unitary_exp(const CMat& hermitian_generator) {
    if (hermitian_generator.dim() == 2) return mat_exp_su2(hermitian_generator * (-kImag), 1e-9);
    return mat_exp_taylor(hermitian_generator * (-kImag));
}

// --------------------------------------------------------------- eigen-decomposition

namespace {

HermitianEigen eigen_2x2(const CMat& h) {
    const PauliDecomposition p = pauli_decompose(h);
    const double r = p.norm();
    HermitianEigen out{{p.a0 - r, p.a0 + r}, CMat(2)};
    if (r == 0.0) {
        out.vectors = CMat::identity(2);
        return out;
    }
    const double nx = p.ax / r, ny = p.ay / r, nz = p.az / r;
    // Columns: lower level (n.sigma = -1), upper level (n.sigma = +1). The branch on nz keeps
    // the normalisation away from zero.
    cplx lo0, lo1, up0, up1;
    if (nz >= 0.0) {
        const double s = 1.0 / std::sqrt(2.0 * (1.0 + nz));
        up0 = (1.0 + nz) * s;
        up1 = cplx{nx, ny} * s;
        lo0 = cplx{nx, -ny} * s;
        lo1 = -(1.0 + nz) * s;
    } else {
        const double s = 1.0 / std::sqrt(2.0 * (1.0 - nz));
        up0 = cplx{nx, -ny} * s;
        up1 = (1.0 - nz) * s;
        lo0 = (nz - 1.0) * s;
        lo1 = cplx{nx, ny} * s;
    }
    out.vectors = CMat(2, {lo0, up0, lo1, up1});
    return out;
}

HermitianEigen eigen_general(const CMat& h) {
    const auto n = static_cast<Eigen::Index>(h.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = h(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::DegenerateSpectrum, "Hermitian eigensolver did not converge");
    }
    HermitianEigen out{std::vector<double>(h.dim()), CMat(h.dim())};
    for (Eigen::Index i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            out.vectors(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
                solver.eigenvectors()(r, c);
    return out;
}

}  // namespace

HermitianEigen hermitian_eigen(const CMat& h) {
    if (h.dim() == 1) return {{h(0, 0).real()}, CMat::identity(1)};
    if (h.dim() == 2) return eigen_2x2(h);
    return eigen_general(h);
}

// ------------------------------------------------------------------------ TimeGrid

TimeGrid::TimeGrid(double t0, double t1, std::size_t steps) : t0_(t0), t1_(t1), steps_(steps) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
        throw Error(ErrorCode::InvalidGrid, "time grid needs finite t0 < t1");
    }
    if (steps < 1) throw Error(ErrorCode::InvalidGrid, "time grid needs at least one step");
}

double TimeGrid::at(std::size_t k) const noexcept {
    // Interpolate from both ends so the last point is exactly t1.
    const double w = static_cast<double>(k) / static_cast<double>(steps_);
    return t0_ + (t1_ - t0_) * w;
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> p(size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = at(k);
    return p;
}

std::size_t TimeGrid::index_of(double t, double tol) const {
    const double x = (t - t0_) / dt();
    const double k = std::round(x);
    if (k < 0.0 || k > static_cast<double>(steps_) || std::abs(x - k) > tol) {
        throw Error(ErrorCode::InvalidGrid, "time " + std::to_string(t) + " is not a grid point");
    }
    return static_cast<std::size_t>(k);
}

namespace detail {
void check_quadrature_input(std::size_t samples, const TimeGrid& grid) {
    if (grid.steps() < 2) {
        throw Error(ErrorCode::GridTooCoarse, "cumulative quadrature needs at least two steps");
    }
    if (samples != grid.size()) {
        throw Error(ErrorCode::DimensionMismatch, "sample count does not match the grid");
    }
}
}  // namespace detail

}  // namespace dualseries
