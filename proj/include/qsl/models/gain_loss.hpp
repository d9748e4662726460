#pragma once

// Closed forms for the two-level gain-loss system: one mode pumped at rate
// gamma_G, one damped at rate gamma_L, coherently coupled at rate g.
//
//   H = [ -i*gamma_L   g        ]
//       [  g           i*gamma_G ]
//
// A single complex-arithmetic path serves the strong (g > kappa_plus), weak
// (g < kappa_plus) and exceptional (g = kappa_plus) regimes: every formula is
// written in terms of sigma = sin(delta*t)/delta, which is an even, entire
// function of delta.

#include <cmath>
#include <complex>
#include <string>

#include "qsl/dynamics.hpp"
#include "qsl/errors.hpp"
#include "qsl/geometry.hpp"
#include "qsl/numerics.hpp"

namespace qsl {

enum class CouplingRegime { strong, weak, exceptional };

inline std::string to_string(CouplingRegime r) {
    switch (r) {
    case CouplingRegime::strong: return "strong";
    case CouplingRegime::weak: return "weak";
    default: return "exceptional";
    }
}

struct GainLossParams {
    double g = 0.0;       // coherent exchange rate
    double gamma_L = 0.0; // loss rate
    double gamma_G = 0.0; // gain rate

    void validate() const {
        if (!(g >= 0.0) || !(gamma_L >= 0.0) || !(gamma_G >= 0.0))
            throw invalid_input("GainLossParams: rates must be non-negative");
    }

    // Derived quantities are recomputed on demand, never stored.
    double kappa_plus() const { return 0.5 * (gamma_L + gamma_G); }
    double kappa_minus() const { return 0.5 * (gamma_L - gamma_G); }
    double delta_sq() const { return g * g - kappa_plus() * kappa_plus(); }
    /// Principal square root; real in strong coupling, imaginary in weak.
    Complex delta() const { return std::sqrt(Complex(delta_sq())); }
};

/// Balanced gain and loss (gamma_G = gamma_L) as its own constructor.
inline GainLossParams pt_symmetric_params(double g, double gamma) {
    return GainLossParams{g, gamma, gamma};
}

inline ComplexMatrix gl_hamiltonian(const GainLossParams& p) {
    p.validate();
    ComplexMatrix h(2, 2);
    h << Complex(0.0, -p.gamma_L), Complex(p.g, 0.0),
         Complex(p.g, 0.0),        Complex(0.0, p.gamma_G);
    return h;
}

/// The maximally coherent two-level state (|0> + |1>)/sqrt(2).
inline PureState maximally_coherent_state() {
    ComplexVector v(2);
    v << Complex(1.0, 0.0), Complex(1.0, 0.0);
    return PureState(v / std::sqrt(2.0));
}

struct GainLossSpectrum {
    Complex lambda_plus;
    Complex lambda_minus;
    CouplingRegime regime;
};

// Eigenvalues lambda_+- = -i*kappa_minus +- delta; they coalesce at the
// exceptional point g = kappa_plus.
inline GainLossSpectrum gl_spectrum(const GainLossParams& p) {
    p.validate();
    const Complex d = p.delta();
    const Complex base(0.0, -p.kappa_minus());
    GainLossSpectrum s;
    s.lambda_plus = base + d;
    s.lambda_minus = base - d;
    const double scale = std::max(p.g, p.kappa_plus());
    if (std::abs(p.g - p.kappa_plus()) < 1e-12 * scale || scale == 0.0)
        s.regime = CouplingRegime::exceptional;
    else
        s.regime = (p.g > p.kappa_plus()) ? CouplingRegime::strong : CouplingRegime::weak;
    return s;
}

namespace detail {

/// sin(delta*t)/delta, finite at the exceptional point.
inline Complex gl_sigma(const GainLossParams& p, double t) {
    return t * sinc(p.delta() * t);
}

inline double require_real(Complex z, const char* what) {
    if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real())))
        throw numeric_failure(std::string(what) + ": imaginary residue beyond tolerance");
    return z.real();
}

} // namespace detail

// Non-unitary propagator generated by H:
//   U(t) = exp(-t*kappa_minus) * (cos(delta t) I + sigma * B),
//   B    = [ -kappa_plus  -i g ; -i g  kappa_plus ].
// Equivalent to the matrix exponential of -iHt for every regime.
inline ComplexMatrix gl_propagator(const GainLossParams& p, double t) {
    p.validate();
    if (!(t >= 0.0))
        throw invalid_input("gl_propagator: t must be non-negative");
    const double kp = p.kappa_plus();
    const Complex c = std::cos(p.delta() * t);
    const Complex s = detail::gl_sigma(p, t);
    const double damp = std::exp(-t * p.kappa_minus());
    ComplexMatrix u(2, 2);
    u << damp * (c - kp * s), damp * (-kImag * p.g * s),
         damp * (-kImag * p.g * s), damp * (c + kp * s);
    return u;
}

/// Normalized state evolved from the maximally coherent initial state.
inline PureState gl_state(const GainLossParams& p, double t) {
    ComplexVector raw = gl_propagator(p, t) * maximally_coherent_state().amplitudes();
    const double n = raw.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw numeric_failure("gl_state: vanishing or non-finite norm");
    return PureState(raw / n);
}

struct GainLossQuantities {
    double var_Hplus = 0.0; // variance of the Hermitian part g*sigma_x
    double var_Gamma = 0.0; // variance of the decay rate operator
    double comm_term = 0.0; // i<[Gamma,H+]> on the evolved state
    double V = 0.0;         // evolution speed 2*sqrt(sum of the three)
};

// Commutator term evaluated directly as an expectation on the evolved
// state. This is the authoritative path; closed-form displays are checked
// against it, never the other way round.
inline double gl_comm_oracle(const GainLossParams& p, double t) {
    const HermitianSplit split = split_hamiltonian(gl_hamiltonian(p));
    const ComplexMatrix comm = split.Gamma * split.H_plus - split.H_plus * split.Gamma;
    return detail::require_real(kImag * expectation(comm, gl_state(p, t)),
                                "gl_comm_oracle");
}

// Closed form of the commutator term on the normalized evolved state:
//   i<[Gamma,H+]> = -4 g^2 kp^2 sin^2(delta t) / (g^2 - kp^2 cos(2 delta t)).
inline double gl_comm_closed_form(const GainLossParams& p, double t) {
    const double kp = p.kappa_plus();
    const Complex s2 = detail::gl_sigma(p, t) * detail::gl_sigma(p, t);
    const Complex u = 1.0 + 2.0 * kp * kp * s2; // (g^2 - kp^2 cos(2 delta t))/delta^2
    return detail::require_real(-4.0 * p.g * p.g * kp * kp * s2 / u, "gl_comm_closed_form");
}

// The published display of the commutator term, kept verbatim for the
// formula audit: i<[Gamma,H+]> = -4 g^2 kp^2 exp(-2 t km) sin^2(delta t)/delta^2.
inline double gl_comm_published_display(const GainLossParams& p, double t) {
    const double kp = p.kappa_plus();
    const Complex s2 = detail::gl_sigma(p, t) * detail::gl_sigma(p, t);
    return detail::require_real(-4.0 * p.g * p.g * kp * kp * std::exp(-2.0 * t * p.kappa_minus()) * s2,
                                "gl_comm_published_display");
}

// Variances of H+ and Gamma on the evolved state, the commutator term, and
// the speed 2*sqrt(dH+^2 + dGamma^2 + i<[Gamma,H+]>). Everything is reduced
// by delta^2 before evaluation, so the exceptional point is regular:
//   u = (g^2 - kp^2 cos(2 delta t))/delta^2 = 1 + 2 kp^2 sigma^2.
inline GainLossQuantities gl_quantities(const GainLossParams& p, double t) {
    p.validate();
    if (!(t >= 0.0))
        throw invalid_input("gl_quantities: t must be non-negative");
    const double kp = p.kappa_plus();
    const Complex sig = detail::gl_sigma(p, t);
    const Complex s2 = sig * sig;
    const Complex c = std::cos(p.delta() * t);
    const Complex u = 1.0 + 2.0 * kp * kp * s2;

    GainLossQuantities q;
    q.var_Hplus = detail::require_real(p.g * p.g * (1.0 - 1.0 / (u * u)), "gl var_Hplus");
    q.var_Gamma = detail::require_real(
        kp * kp * (1.0 - 4.0 * kp * kp * s2 * c * c / (u * u)), "gl var_Gamma");
    q.comm_term = gl_comm_oracle(p, t);
    const double radicand = q.var_Hplus + q.var_Gamma + q.comm_term;
    if (radicand < -kClampSlack)
        throw numeric_failure("gl_quantities: negative squared speed");
    q.V = 2.0 * std::sqrt(std::max(0.0, radicand));
    return q;
}

// The published collected form of the speed,
//   V = 2 [2g^6 - 2g^4 kp^2 - g^2 (2 delta^4 + kp^4) - delta^2 kp^4 + kp^6]^{1/2}
//       / (sqrt(2) (g^2 - kp^2 cos(2 delta t))),
// retained as a comparison function for the formula audit only.
inline double gl_speed_published_display(const GainLossParams& p, double t) {
    const double kp = p.kappa_plus();
    const double kp2 = kp * kp, kp4 = kp2 * kp2, kp6 = kp4 * kp2;
    const double g2 = p.g * p.g, g4 = g2 * g2, g6 = g4 * g2;
    const double d2 = p.delta_sq(), d4 = d2 * d2;
    const double bracket = 2.0 * g6 - 2.0 * g4 * kp2 - g2 * (2.0 * d4 + kp4) - d2 * kp4 + kp6;
    const Complex s2 = detail::gl_sigma(p, t) * detail::gl_sigma(p, t);
    const double a = detail::require_real(d2 * (1.0 + 2.0 * kp2 * s2), "gl display denominator");
    return 2.0 * std::sqrt(std::max(0.0, bracket)) / (std::sqrt(2.0) * a);
}

/// Speed-limit report over the analytic evolved-state trajectory.
inline BoundReport gl_bound(const GainLossParams& p, double T, int steps) {
    p.validate();
    if (!(T > 0.0))
        throw invalid_input("gl_bound: T must be positive");
    TimeGrid grid{T, steps};
    grid.validate();
    std::vector<ComplexVector> samples;
    samples.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k)
        samples.push_back(gl_state(p, k * grid.dt()).amplitudes());
    return qsl_report(Trajectory(std::move(samples), grid.dt()));
}

} // namespace qsl
