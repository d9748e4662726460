#pragma once

// Generator handling: Hermitian/anti-Hermitian decomposition, propagation of
// states under arbitrary H(t), expectation/variance machinery, and the
// closed-form speed expressions for Hermitian and non-Hermitian generators.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "qsl/errors.hpp"
#include "qsl/geometry.hpp"
#include "qsl/numerics.hpp"

namespace qsl {

/// H = H_plus - i*Gamma with both parts Hermitian; Gamma is the decay rate
/// operator.
struct HermitianSplit {
    ComplexMatrix H_plus;
    ComplexMatrix Gamma;
};

inline HermitianSplit split_hamiltonian(const ComplexMatrix& h) {
    if (h.rows() != h.cols())
        throw invalid_input("split_hamiltonian: matrix must be square");
    if (!all_finite(h))
        throw invalid_input("split_hamiltonian: non-finite entries");
    HermitianSplit s;
    s.H_plus = 0.5 * (h + h.adjoint());
    s.Gamma = 0.5 * kImag * (h - h.adjoint());
    return s;
}

/// A (possibly time-dependent) generator H(t). The callable must be a pure
/// function of time so specs can be evaluated concurrently.
class GeneratorSpec {
public:
    using HamiltonianFn = std::function<ComplexMatrix(double)>;

    GeneratorSpec(int dim, HamiltonianFn h_of_t, bool hermitian, double hbar = 1.0)
        : dim_(dim), h_of_t_(std::move(h_of_t)), hermitian_(hermitian), hbar_(hbar),
          time_independent_(false) {
        check_common();
    }

    /// Time-independent generator; propagation can use the matrix exponential.
    GeneratorSpec(ComplexMatrix h, bool hermitian, double hbar = 1.0)
        : dim_(static_cast<int>(h.rows())), constant_h_(std::move(h)), hermitian_(hermitian),
          hbar_(hbar), time_independent_(true) {
        if (constant_h_.rows() != constant_h_.cols())
            throw invalid_input("GeneratorSpec: matrix must be square");
        check_common();
        check_matrix(constant_h_);
    }

    int dim() const { return dim_; }
    bool hermitian() const { return hermitian_; }
    double hbar() const { return hbar_; }
    bool time_independent() const { return time_independent_; }

    ComplexMatrix at(double t) const {
        if (time_independent_)
            return constant_h_;
        ComplexMatrix h = h_of_t_(t);
        check_matrix(h);
        return h;
    }

private:
    void check_common() const {
        if (dim_ < 1)
            throw invalid_input("GeneratorSpec: dimension must be positive");
        if (!(hbar_ > 0.0))
            throw invalid_input("GeneratorSpec: hbar must be positive");
    }
    void check_matrix(const ComplexMatrix& h) const {
        if (h.rows() != dim_ || h.cols() != dim_)
            throw invalid_input("GeneratorSpec: H(t) has wrong dimensions");
        if (!all_finite(h))
            throw invalid_input("GeneratorSpec: H(t) has non-finite entries");
        if (hermitian_ && !is_hermitian(h))
            throw invalid_input("GeneratorSpec: generator flagged hermitian is not");
    }

    int dim_;
    HamiltonianFn h_of_t_;
    ComplexMatrix constant_h_;
    bool hermitian_;
    double hbar_;
    bool time_independent_;
};

// Integrates i*hbar dpsi/dt = H(t) psi. Stored samples keep their raw norms;
// normalization is the geometry layer's business, and the raw amplitudes are
// what the norm-correction identities are tested against.
inline Trajectory evolve(const GeneratorSpec& spec, const PureState& psi0, const TimeGrid& grid,
                         double continuity_threshold = 0.9) {
    grid.validate();
    if (psi0.dim() != spec.dim())
        throw invalid_input("evolve: initial state dimension mismatch");

    std::vector<ComplexVector> samples;
    if (spec.time_independent()) {
        const ComplexMatrix a = (-kImag / spec.hbar()) * spec.at(0.0);
        samples.reserve(static_cast<std::size_t>(grid.steps) + 1);
        for (int k = 0; k <= grid.steps; ++k) {
            ComplexVector s = mat_exp(a, k * grid.dt()) * psi0.amplitudes();
            if (!all_finite(s) || s.cwiseAbs().maxCoeff() > kOverflowGuard)
                throw numeric_failure("evolve: state norm diverged at t = " +
                                      std::to_string(k * grid.dt()));
            samples.push_back(std::move(s));
        }
    } else {
        const double hbar = spec.hbar();
        auto rhs = [&spec, hbar](double t, const ComplexVector& y) -> ComplexVector {
            return (-kImag / hbar) * (spec.at(t) * y);
        };
        samples = solve_ode(rhs, psi0.amplitudes(), grid);
    }
    return Trajectory(std::move(samples), grid.dt(), spec.hbar(), continuity_threshold);
}

/// <psi~|A|psi~> on the normalized state.
inline Complex expectation(const ComplexMatrix& a, const PureState& psi) {
    if (a.rows() != a.cols() || a.rows() != psi.dim())
        throw invalid_input("expectation: dimension mismatch");
    const ComplexVector n = psi.normalized();
    return n.dot(a * n);
}

/// <A^2> - <A>^2 for Hermitian A, clamped to >= 0.
inline double variance(const ComplexMatrix& a, const PureState& psi) {
    if (!is_hermitian(a))
        throw invalid_input("variance: operator must be Hermitian");
    const ComplexVector n = psi.normalized();
    const ComplexVector an = a * n;
    const double mean = n.dot(an).real();
    const double second = an.squaredNorm(); // <A psi|A psi> = <A^2> for Hermitian A
    const double var = second - mean * mean;
    if (var < -1e-12)
        throw numeric_failure("variance: negative variance beyond roundoff");
    return std::max(0.0, var);
}

/// Evolution speed 2*dH/hbar for a Hermitian generator.
inline double speed_hermitian(const ComplexMatrix& h, const PureState& psi, double hbar = 1.0) {
    return 2.0 * std::sqrt(variance(h, psi)) / hbar;
}

// Evolution speed for an arbitrary generator H = H_plus - i*Gamma:
//   V = (2/hbar) sqrt(dH+^2 + dGamma^2 + i<[Gamma,H+]>).
// The commutator term is i times the expectation of an anti-Hermitian
// operator, hence real; its imaginary residue is pure roundoff.
inline double speed_nonhermitian(const HermitianSplit& split, const PureState& psi,
                                 double hbar = 1.0) {
    const ComplexMatrix comm = split.Gamma * split.H_plus - split.H_plus * split.Gamma;
    const Complex comm_term = kImag * expectation(comm, psi);
    const double radicand =
        variance(split.H_plus, psi) + variance(split.Gamma, psi) + comm_term.real();
    if (radicand < -kClampSlack)
        throw numeric_failure("speed_nonhermitian: negative squared speed; inconsistent inputs");
    return 2.0 * std::sqrt(std::max(0.0, radicand)) / hbar;
}

// Mandelstam-Tamm form of the bound for unitary evolution:
//   T_qsl = hbar*S0 / (2 * time-average of dH(t)).
// The time average uses the same Simpson rule as the arc length so the
// equivalence with qsl_report holds to quadrature accuracy.
inline BoundReport mt_bound(const Trajectory& traj, const GeneratorSpec& spec) {
    if (!spec.hermitian())
        throw invalid_input("mt_bound: requires a Hermitian generator");

    std::vector<double> dh(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        dh[i] = std::sqrt(variance(spec.at(static_cast<double>(i) * traj.dt()), traj.state(i)));

    BoundReport r;
    r.T = traj.duration();
    const double dh_avg = integrate_samples(dh, traj.dt()) / r.T;
    r.S = 2.0 * dh_avg * r.T / spec.hbar();
    r.S0 = geodesic_distance(traj.state(0), traj.state(traj.size() - 1));
    r.V_bar = 2.0 * dh_avg / spec.hbar();
    r.T_qsl = (dh_avg > 0.0) ? spec.hbar() * r.S0 / (2.0 * dh_avg) : 0.0;
    r.ratio = r.T_qsl / r.T;
    return r;
}

} // namespace qsl
