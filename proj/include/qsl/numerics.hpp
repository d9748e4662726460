#pragma once

// Dense complex linear algebra, matrix exponentials, fixed-step ODE
// propagation and quadrature for small (dim <= ~16) systems.

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qsl/errors.hpp"

namespace qsl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

// Amplitudes past this magnitude abort the run instead of overflowing into
// NaN geometry (non-Hermitian gain can grow exponentially).
inline constexpr double kOverflowGuard = 1e150;

inline bool all_finite(const ComplexMatrix& a) {
    return a.array().real().isFinite().all() && a.array().imag().isFinite().all();
}

inline bool all_finite(const ComplexVector& v) {
    return v.array().real().isFinite().all() && v.array().imag().isFinite().all();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12) {
    return a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// sin(z)/z with the removable singularity filled in by series.
inline Complex sinc(Complex z) {
    if (std::abs(z) < 1e-6) {
        const Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

/// sinh(z)/z with the removable singularity filled in by series.
inline Complex sinhc(Complex z) {
    if (std::abs(z) < 1e-6) {
        const Complex z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

// exp(s*A) by scaling-and-squaring with a Pade approximant; no
// eigendecomposition, so defective matrices (exceptional points) work.
inline ComplexMatrix mat_exp(const ComplexMatrix& a, double s = 1.0) {
    if (a.rows() != a.cols())
        throw invalid_input("mat_exp: matrix must be square");
    if (!all_finite(a) || !std::isfinite(s))
        throw invalid_input("mat_exp: non-finite input");
    return (s * a).exp();
}

struct TimeGrid {
    double t_max = 0.0;
    int steps = 0; // number of intervals; the sampled sequence has steps+1 entries

    void validate() const {
        if (!(t_max > 0.0) || !std::isfinite(t_max))
            throw invalid_input("TimeGrid: t_max must be positive and finite");
        if (steps < 2)
            throw invalid_input("TimeGrid: steps must be >= 2");
    }
    double dt() const { return t_max / steps; }
};

/// Right-hand side of a first-order ODE: dy/dt = rhs(t, y).
using OdeRhs = std::function<ComplexVector(double, const ComplexVector&)>;

// Classic fourth-order Runge-Kutta on a uniform grid. Fixed stepping keeps
// the samples uniformly spaced for the finite-difference and Simpson
// machinery downstream.
inline std::vector<ComplexVector> solve_ode(const OdeRhs& rhs, const ComplexVector& y0,
                                            const TimeGrid& grid) {
    grid.validate();
    if (!all_finite(y0))
        throw invalid_input("solve_ode: non-finite initial state");

    const double dt = grid.dt();
    std::vector<ComplexVector> out;
    out.reserve(static_cast<std::size_t>(grid.steps) + 1);
    out.push_back(y0);

    ComplexVector y = y0;
    for (int k = 0; k < grid.steps; ++k) {
        const double t = k * dt;
        const ComplexVector k1 = rhs(t, y);
        const ComplexVector k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
        const ComplexVector k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
        const ComplexVector k4 = rhs(t + dt, y + dt * k3);
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!all_finite(y) || y.cwiseAbs().maxCoeff() > kOverflowGuard) {
            std::ostringstream msg;
            msg << "solve_ode: state norm diverged at t = " << (k + 1) * dt;
            throw numeric_failure(msg.str());
        }
        out.push_back(y);
    }
    return out;
}

// Composite Simpson rule on uniform samples. An even sample count leaves an
// unpaired panel at the end, which falls back to the trapezoid rule there.
inline double integrate_samples(const std::vector<double>& values, double dt) {
    if (values.size() < 2)
        throw invalid_input("integrate_samples: need at least 2 samples");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw invalid_input("integrate_samples: dt must be positive and finite");
    for (double v : values)
        if (!std::isfinite(v))
            throw invalid_input("integrate_samples: non-finite sample");

    const std::size_t n = values.size();
    const std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 2; // last index of the Simpson part
    double sum = 0.0;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
        sum += (dt / 3.0) * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
    if (n % 2 == 0)
        sum += 0.5 * dt * (values[n - 2] + values[n - 1]);
    return sum;
}

// Partial trace over the second (ancilla) factor of a dim_s*dim_a pure state,
// laid out with the ancilla index fastest.
inline ComplexMatrix partial_trace_ancilla(const ComplexVector& psi, int dim_s, int dim_a) {
    if (psi.size() != static_cast<Eigen::Index>(dim_s) * dim_a)
        throw invalid_input("partial_trace_ancilla: dimension mismatch");
    ComplexMatrix rho = ComplexMatrix::Zero(dim_s, dim_s);
    for (int s = 0; s < dim_s; ++s)
        for (int sp = 0; sp < dim_s; ++sp)
            for (int a = 0; a < dim_a; ++a)
                rho(s, sp) += psi[s * dim_a + a] * std::conj(psi[sp * dim_a + a]);
    return rho;
}

} // namespace qsl
