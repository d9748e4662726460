#pragma once

// Projective-Hilbert-space geometry: the generalized Fubini-Study distance,
// evolution speed, arc length, geodesic distance, and the speed-limit bound
// built from them. All quantities are invariant under rescaling any state by
// a nonzero complex factor; states are normalized on the fly and stored
// amplitudes are never modified.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "qsl/errors.hpp"
#include "qsl/numerics.hpp"

namespace qsl {

// Roundoff slack for clamping overlaps into [0,1] and speed radicands to >= 0.
inline constexpr double kClampSlack = 1e-10;

/// A ray in projective Hilbert space, stored as unnormalized amplitudes.
class PureState {
public:
    explicit PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() == 0)
            throw invalid_input("PureState: empty amplitude vector");
        if (!all_finite(amps_))
            throw invalid_input("PureState: non-finite amplitude");
        norm_ = amps_.norm();
        if (!(norm_ > 0.0))
            throw invalid_input("PureState: zero state does not define a ray");
    }

    const ComplexVector& amplitudes() const { return amps_; }
    double norm() const { return norm_; }
    Eigen::Index dim() const { return amps_.size(); }
    ComplexVector normalized() const { return amps_ / norm_; }

private:
    ComplexVector amps_;
    double norm_;
};

/// |<a~|b~>| for the normalized representatives of two rays.
inline double overlap_magnitude(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim())
        throw invalid_input("overlap: dimension mismatch");
    return std::abs(a.normalized().dot(b.normalized()));
}

// Generalized Fubini-Study distance S = 2 sqrt(1 - |<a~|b~>|^2), in [0, 2].
inline double fs_distance(const PureState& a, const PureState& b) {
    const double o = std::min(overlap_magnitude(a, b), 1.0);
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - o * o));
}

// Geodesic distance S0 = 2 acos(|<a~|b~>|), in [0, pi]. The overlap is
// clamped into [0,1] before acos; roundoff can push it past 1 near equal rays.
inline double geodesic_distance(const PureState& a, const PureState& b) {
    const double o = std::clamp(overlap_magnitude(a, b), 0.0, 1.0);
    return 2.0 * std::acos(o);
}

/// A uniformly sampled, continuous curve of rays.
class Trajectory {
public:
    // continuity_threshold: consecutive normalized overlaps below this value
    // mean the sampling is too coarse to define an arc length.
    Trajectory(std::vector<ComplexVector> samples, double dt, double hbar = 1.0,
               double continuity_threshold = 0.9)
        : samples_(std::move(samples)), dt_(dt), hbar_(hbar) {
        if (samples_.size() < 3)
            throw invalid_input("Trajectory: need at least 3 samples");
        if (!(dt_ > 0.0) || !std::isfinite(dt_))
            throw invalid_input("Trajectory: dt must be positive and finite");
        if (!(hbar_ > 0.0))
            throw invalid_input("Trajectory: hbar must be positive");

        normalized_.reserve(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const ComplexVector& s = samples_[i];
            if (s.size() != samples_[0].size())
                throw invalid_input("Trajectory: inconsistent sample dimensions");
            if (!all_finite(s))
                throw numeric_failure("Trajectory: non-finite sample at index " + std::to_string(i));
            const double n = s.norm();
            if (!(n > 0.0))
                throw invalid_input("Trajectory: zero-norm sample at index " + std::to_string(i));
            normalized_.push_back(s / n);
        }
        for (std::size_t i = 0; i + 1 < normalized_.size(); ++i) {
            const double o = std::abs(normalized_[i].dot(normalized_[i + 1]));
            if (o <= continuity_threshold) {
                std::ostringstream msg;
                msg << "Trajectory: consecutive overlap " << o << " at index " << i
                    << " below continuity threshold " << continuity_threshold
                    << "; refine the time grid";
                throw invalid_input(msg.str());
            }
        }
    }

    std::size_t size() const { return samples_.size(); }
    double dt() const { return dt_; }
    double hbar() const { return hbar_; }
    double duration() const { return dt_ * static_cast<double>(samples_.size() - 1); }
    const std::vector<ComplexVector>& samples() const { return samples_; }
    const ComplexVector& sample(std::size_t i) const { return samples_[i]; }
    const ComplexVector& normalized(std::size_t i) const { return normalized_[i]; }
    PureState state(std::size_t i) const { return PureState(samples_[i]); }

private:
    std::vector<ComplexVector> samples_;
    std::vector<ComplexVector> normalized_; // unit-norm copies, phases untouched
    double dt_;
    double hbar_;
};

/// Everything the speed-limit bound reports for one evolution window.
struct BoundReport {
    double T = 0.0;     // evolution time
    double S0 = 0.0;    // geodesic distance between initial and final ray
    double S = 0.0;     // Fubini-Study arc length actually traveled
    double V_bar = 0.0; // mean speed S/T
    double T_qsl = 0.0; // minimal evolution time S0/V_bar
    double ratio = 0.0; // T_qsl/T, the tightness of the bound
};

// Evolution speed V = 2 sqrt(<dpsi~|dpsi~> - (i<psi~|dpsi~>)^2) at one grid
// point, with the derivative of the *normalized* state taken by second-order
// finite differences (central in the interior, one-sided at the ends).
inline double speed_numeric(const Trajectory& traj, std::size_t index) {
    const std::size_t n = traj.size();
    if (index >= n)
        throw invalid_input("speed_numeric: index out of range");

    const double dt = traj.dt();
    ComplexVector dpsi;
    if (index == 0)
        dpsi = (-3.0 * traj.normalized(0) + 4.0 * traj.normalized(1) - traj.normalized(2)) / (2.0 * dt);
    else if (index == n - 1)
        dpsi = (3.0 * traj.normalized(n - 1) - 4.0 * traj.normalized(n - 2) + traj.normalized(n - 3)) / (2.0 * dt);
    else
        dpsi = (traj.normalized(index + 1) - traj.normalized(index - 1)) / (2.0 * dt);

    if (!all_finite(dpsi))
        throw numeric_failure("speed_numeric: non-finite derivative at index " + std::to_string(index));

    const Complex c = traj.normalized(index).dot(dpsi); // purely imaginary up to roundoff
    const Complex ic = kImag * c;
    const double radicand = (dpsi.squaredNorm() - ic * ic).real();
    if (radicand < -kClampSlack)
        throw numeric_failure("speed_numeric: negative squared speed at index " + std::to_string(index));
    return 2.0 * std::sqrt(std::max(0.0, radicand));
}

/// Speed at every grid point of a trajectory.
inline std::vector<double> speed_profile(const Trajectory& traj) {
    std::vector<double> v(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        v[i] = speed_numeric(traj, i);
    return v;
}

// The bound itself: T_qsl = S0/V_bar = T*S0/S. A path length below the
// geodesic distance violates the geometry and is reported as a
// grid-resolution error, never silently corrected.
inline BoundReport qsl_report(const Trajectory& traj) {
    BoundReport r;
    r.T = traj.duration();
    r.S = integrate_samples(speed_profile(traj), traj.dt());
    r.S0 = geodesic_distance(traj.state(0), traj.state(traj.size() - 1));
    if (r.S < r.S0 - 1e-4) {
        std::ostringstream msg;
        msg << "qsl_report: path length " << r.S << " below geodesic distance " << r.S0
            << "; the grid is too coarse for a reliable arc length";
        throw numeric_failure(msg.str());
    }
    r.V_bar = r.S / r.T;
    if (r.S > 0.0) {
        r.T_qsl = r.T * r.S0 / r.S;
    } else {
        r.T_qsl = 0.0; // the state never left its ray
    }
    r.ratio = r.T_qsl / r.T;
    return r;
}

} // namespace qsl
