#pragma once

// The Bethe-Lamb effective Hamiltonian for a driven two-level system with
// radiation damping, in the rotating wave approximation (hbar = 1):
//
//   H(t) = [ -i*gamma_1/2        Omega e^{ i Delta t} ]
//          [  Omega e^{-i Delta t}   -i*gamma_2/2     ]
//
// The propagator factorizes as U(t) = T(t) Z(t) exp(i M t) with a
// time-independent M, which yields closed forms for the evolved state and
// for every ingredient of the speed-limit bound.

#include <cmath>
#include <complex>

#include "qsl/dynamics.hpp"
#include "qsl/errors.hpp"
#include "qsl/geometry.hpp"
#include "qsl/models/gain_loss.hpp"
#include "qsl/numerics.hpp"

namespace qsl {

struct BetheLambParams {
    double gamma_1 = 0.0; // excited-state decay rate (1/s)
    double gamma_2 = 0.0; // ground-state decay rate (1/s)
    double Delta = 0.0;   // laser detuning frequency (rad/s)
    double Omega = 0.0;   // laser Rabi frequency (rad/s)

    void validate() const {
        if (!(gamma_1 >= 0.0) || !(gamma_2 >= 0.0))
            throw invalid_input("BetheLambParams: decay rates must be non-negative");
        if (!std::isfinite(Delta) || !std::isfinite(Omega))
            throw invalid_input("BetheLambParams: non-finite parameters");
    }

    double gamma() const { return 0.5 * (gamma_1 - gamma_2); }
    /// c2 = sqrt((gamma + i Delta)^2 - 4 Omega^2), principal branch.
    Complex c2() const {
        const Complex a(gamma(), Delta);
        return std::sqrt(a * a - 4.0 * Omega * Omega);
    }
};

inline ComplexMatrix bl_hamiltonian(const BetheLambParams& p, double t) {
    p.validate();
    ComplexMatrix h(2, 2);
    h << Complex(0.0, -0.5 * p.gamma_1), p.Omega * std::exp(kImag * p.Delta * t),
         p.Omega * std::exp(-kImag * p.Delta * t), Complex(0.0, -0.5 * p.gamma_2);
    return h;
}

// U(t) = T(t) Z(t) exp(iMt):
//   T = diag(e^{-gamma_1 t/2}, e^{-gamma_2 t/2}),
//   Z = diag(1, e^{-i t (Delta - i gamma)}),
//   M = [ 0  -Omega ; -Omega  Delta - i gamma ].
inline ComplexMatrix bl_propagator(const BetheLambParams& p, double t) {
    p.validate();
    if (!(t >= 0.0))
        throw invalid_input("bl_propagator: t must be non-negative");
    const Complex nu(p.Delta, -p.gamma());
    ComplexMatrix m(2, 2);
    m << Complex(0.0, 0.0), Complex(-p.Omega, 0.0),
         Complex(-p.Omega, 0.0), nu;
    ComplexMatrix u = mat_exp(kImag * m, t);
    // T(t)Z(t) collapses to diag(e^{-g1 t/2}, e^{-g1 t/2 - i Delta t}); the
    // combined form avoids the huge counteracting exponentials in Z and T
    // when the decay rates are strongly asymmetric.
    u.row(1) *= std::exp(-kImag * p.Delta * t);
    u *= std::exp(-0.5 * p.gamma_1 * t);
    return u;
}

namespace detail {

// z_1, z_2 of the closed-form evolved state, divided by c2 so the c2 -> 0
// point is regular; all reported quantities are homogeneous of degree zero
// in (z_1, z_2), so the scaling cancels.
struct BlAmplitudes {
    Complex w1;
    Complex w2;
};

inline BlAmplitudes bl_amplitudes(const BetheLambParams& p, double t) {
    const Complex a(p.gamma(), p.Delta); // gamma + i*Delta
    const Complex c2 = p.c2();
    const Complex half = 0.5 * c2 * t;
    const Complex ch = std::cosh(half);
    const Complex sh_over_c2 = 0.5 * t * sinhc(half); // sinh(c2 t/2)/c2
    const double r2 = std::sqrt(2.0);
    // The growing real exponential is a common positive factor of both
    // amplitudes; dividing it out extends the usable time range. Every
    // reported quantity is homogeneous of degree zero in (w1, w2).
    const double scale = std::exp(-half.real());
    BlAmplitudes z;
    z.w1 = scale * (ch / r2 - (a / r2 + r2 * kImag * p.Omega) * sh_over_c2);
    z.w2 = scale * (ch / r2 + (a / r2 - r2 * kImag * p.Omega) * sh_over_c2);
    return z;
}

} // namespace detail

// Normalized evolved state from the maximally coherent initial state,
//   |psi(t)> = (e^{i t Delta/2} z_1 |0> + e^{-i t Delta/2} z_2 |1>) / sqrt(|z_1|^2+|z_2|^2).
inline PureState bl_state(const BetheLambParams& p, double t) {
    p.validate();
    if (!(t >= 0.0))
        throw invalid_input("bl_state: t must be non-negative");
    const auto z = detail::bl_amplitudes(p, t);
    const double norm2 = std::norm(z.w1) + std::norm(z.w2);
    if (!(norm2 > 0.0) || !std::isfinite(norm2))
        throw numeric_failure("bl_state: vanishing or non-finite norm");
    const Complex phase = std::exp(kImag * (0.5 * p.Delta * t));
    ComplexVector v(2);
    v << phase * z.w1, std::conj(phase) * z.w2;
    return PureState(v / std::sqrt(norm2));
}

struct BetheLambQuantities {
    double S0_term = 0.0;   // geodesic distance from the initial state
    double var_Hplus = 0.0; // variance of the drive part
    double var_Gamma = 0.0; // variance of the decay rate operator
    double comm_term = 0.0; // i<[Gamma,H+]> on the evolved state
};

// Closed forms on the evolved state, with D = |z_1|^2 + |z_2|^2:
//   dH+^2      = Omega^2 (1 - 4 Re{z1 z2*}^2 / D^2),
//   dGamma^2   = gamma^2 |z1|^2 |z2|^2 / D^2,
//   i<[G,H+]>  = 2 Omega gamma Im{z1 z2*} / D,
//   S0         = 2 acos(|z1 e^{i t Delta/2} + z2 e^{-i t Delta/2}| / sqrt(2 D)).
inline BetheLambQuantities bl_quantities(const BetheLambParams& p, double t) {
    p.validate();
    if (!(t >= 0.0))
        throw invalid_input("bl_quantities: t must be non-negative");
    const auto z = detail::bl_amplitudes(p, t);
    const double d = std::norm(z.w1) + std::norm(z.w2);
    const Complex z12 = z.w1 * std::conj(z.w2);
    const double g = p.gamma();
    const Complex phase = std::exp(kImag * (0.5 * p.Delta * t));

    BetheLambQuantities q;
    const double overlap =
        std::clamp(std::abs(phase * z.w1 + std::conj(phase) * z.w2) / std::sqrt(2.0 * d), 0.0, 1.0);
    q.S0_term = 2.0 * std::acos(overlap);
    q.var_Hplus = p.Omega * p.Omega * (1.0 - 4.0 * z12.real() * z12.real() / (d * d));
    q.var_Gamma = g * g * std::norm(z.w1) * std::norm(z.w2) / (d * d);
    q.comm_term = 2.0 * p.Omega * g * z12.imag() / d;
    return q;
}

/// Evolution speed from the closed-form quantities.
inline double bl_speed(const BetheLambParams& p, double t) {
    const auto q = bl_quantities(p, t);
    const double radicand = q.var_Hplus + q.var_Gamma + q.comm_term;
    if (radicand < -kClampSlack)
        throw numeric_failure("bl_speed: negative squared speed");
    return 2.0 * std::sqrt(std::max(0.0, radicand));
}

/// Speed-limit report over the closed-form evolved-state trajectory.
inline BoundReport bl_bound(const BetheLambParams& p, double T, int steps) {
    p.validate();
    if (!(T > 0.0))
        throw invalid_input("bl_bound: T must be positive");
    TimeGrid grid{T, steps};
    grid.validate();
    std::vector<ComplexVector> samples;
    samples.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k)
        samples.push_back(bl_state(p, k * grid.dt()).amplitudes());
    return qsl_report(Trajectory(std::move(samples), grid.dt()));
}

} // namespace qsl
