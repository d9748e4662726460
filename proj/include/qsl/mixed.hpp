#pragma once

// Mixed-state speed limit via purification: a density-matrix trajectory is
// lifted to a continuous pure-state trajectory on system + ancilla, and the
// pure-state geometry is reused verbatim.
//
// The purification of a single density matrix is only defined up to the
// phases (and, inside degenerate subspaces, unitary mixing) of its
// eigenvectors. Differentiating a purified curve therefore needs a gauge.
// The canonical choice here is per-branch parallel transport: consecutive
// eigenvectors of the same branch have real positive overlap, and degenerate
// subspaces are aligned to the previous frame by orthogonal Procrustes.
// Partial traces are gauge-independent; speeds are not, so the gauge is part
// of every report this module emits.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsl/errors.hpp"
#include "qsl/geometry.hpp"
#include "qsl/numerics.hpp"

namespace qsl {

inline constexpr const char* kPurificationGauge = "per-branch parallel transport";

namespace detail {

struct SpectralData {
    std::vector<double> eigenvalues;   // clamped at 0, renormalized to sum 1
    ComplexMatrix eigenvectors;        // columns, orthonormal
};

// Validates one density-matrix sample and returns its clamped spectrum.
inline SpectralData density_spectrum(const ComplexMatrix& rho, std::size_t sample_index) {
    const auto where = [sample_index](const char* what) {
        std::ostringstream msg;
        msg << "density sample " << sample_index << ": " << what;
        return msg.str();
    };
    if (rho.rows() != rho.cols())
        throw invalid_input(where("matrix is not square"));
    if (!all_finite(rho))
        throw invalid_input(where("non-finite entries"));
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw invalid_input(where("not Hermitian within 1e-10"));
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw invalid_input(where("trace deviates from 1 beyond 1e-10"));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()));
    if (solver.info() != Eigen::Success)
        throw numeric_failure(where("eigendecomposition failed"));

    // Descending order so ancilla slot 0 carries the dominant branch; the
    // sort is stable so degenerate branches keep the solver's frame order.
    const auto& vals = solver.eigenvalues();
    std::vector<int> order(static_cast<std::size_t>(vals.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&vals](int a, int b) { return vals(a) > vals(b); });

    SpectralData out;
    out.eigenvectors.resize(rho.rows(), rho.cols());
    out.eigenvalues.resize(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.eigenvalues[k] = vals(order[k]);
        out.eigenvectors.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(order[k]);
    }
    double sum = 0.0;
    for (double& p : out.eigenvalues) {
        if (p < -1e-10)
            throw invalid_input(where("negative eigenvalue beyond tolerance"));
        if (p < 1e-12)
            p = 0.0;
        sum += p;
    }
    for (double& p : out.eigenvalues)
        p /= sum;
    return out;
}

inline ComplexVector assemble_purification(const SpectralData& s) {
    const int dim = static_cast<int>(s.eigenvalues.size());
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(dim) * dim);
    for (int i = 0; i < dim; ++i) {
        const double amp = std::sqrt(s.eigenvalues[i]);
        if (amp == 0.0)
            continue;
        for (int srow = 0; srow < dim; ++srow)
            psi[srow * dim + i] += amp * s.eigenvectors(srow, i);
    }
    return psi;
}

// Groups indices of near-equal eigenvalues (they share a subspace, so their
// eigenvectors are only defined up to mixing).
inline std::vector<std::vector<int>> degenerate_clusters(const std::vector<double>& vals) {
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < static_cast<int>(vals.size()); ++i) {
        if (!clusters.empty() && std::abs(vals[i] - vals[clusters.back().back()]) < 1e-10)
            clusters.back().push_back(i);
        else
            clusters.push_back({i});
    }
    return clusters;
}

// Gauge-fixes `current` against `previous`: eigenbranches are matched by
// maximal overlap, each branch phase is rotated so consecutive overlaps are
// real and positive, and degenerate clusters are aligned by Procrustes.
inline void align_spectrum(const SpectralData& previous, SpectralData& current,
                           std::size_t sample_index) {
    const int dim = static_cast<int>(current.eigenvalues.size());
    const auto clusters = degenerate_clusters(current.eigenvalues);

    // Overlap mass of each previous branch against each new cluster.
    ComplexMatrix cross = previous.eigenvectors.adjoint() * current.eigenvectors;
    std::vector<int> assignment(dim, -1); // new column -> previous branch
    std::vector<bool> prev_taken(dim, false);

    for (const auto& cluster : clusters) {
        // Pick the |cluster| best-matching previous branches, greedily by
        // overlap mass; ambiguity between two previous branches means the
        // sampling is too coarse to track branches at all.
        std::vector<int> chosen;
        for (std::size_t pick = 0; pick < cluster.size(); ++pick) {
            double best = -1.0, second = -1.0;
            int best_row = -1;
            for (int row = 0; row < dim; ++row) {
                if (prev_taken[row])
                    continue;
                double mass = 0.0;
                for (int col : cluster)
                    mass += std::norm(cross(row, col));
                if (mass > best) {
                    second = best;
                    best = mass;
                    best_row = row;
                } else if (mass > second) {
                    second = mass;
                }
            }
            if (second >= 0.0 && std::abs(best - second) < 1e-6 && cluster.size() == 1u) {
                std::ostringstream msg;
                msg << "purified_trajectory: ambiguous eigenbranch matching at sample "
                    << sample_index << " (overlaps within 1e-6); refine the time grid";
                throw invalid_input(msg.str());
            }
            prev_taken[best_row] = true;
            chosen.push_back(best_row);
        }

        if (cluster.size() == 1u) {
            assignment[cluster[0]] = chosen[0];
        } else {
            // Procrustes alignment of the degenerate frame to the previous
            // branches it replaces: current block <- current block * R with
            // R = U V^dagger from the SVD of (current block)^dagger * prev block.
            ComplexMatrix cur(dim, cluster.size()), prev(dim, cluster.size());
            for (std::size_t k = 0; k < cluster.size(); ++k) {
                cur.col(k) = current.eigenvectors.col(cluster[k]);
                prev.col(k) = previous.eigenvectors.col(chosen[k]);
            }
            Eigen::JacobiSVD<ComplexMatrix> svd(cur.adjoint() * prev,
                                                Eigen::ComputeFullU | Eigen::ComputeFullV);
            const ComplexMatrix rot = svd.matrixU() * svd.matrixV().adjoint();
            cur = cur * rot;
            for (std::size_t k = 0; k < cluster.size(); ++k) {
                current.eigenvectors.col(cluster[k]) = cur.col(k);
                assignment[cluster[k]] = chosen[k];
            }
        }
    }

    // Reorder new columns to sit on their previous branch slots, then fix
    // each branch phase (parallel transport).
    SpectralData reordered;
    reordered.eigenvalues.resize(dim);
    reordered.eigenvectors.resize(dim, dim);
    for (int col = 0; col < dim; ++col) {
        reordered.eigenvalues[assignment[col]] = current.eigenvalues[col];
        reordered.eigenvectors.col(assignment[col]) = current.eigenvectors.col(col);
    }
    for (int col = 0; col < dim; ++col) {
        const Complex o = previous.eigenvectors.col(col).dot(reordered.eigenvectors.col(col));
        if (std::abs(o) > 0.0)
            reordered.eigenvectors.col(col) *= std::conj(o) / std::abs(o);
    }
    current = std::move(reordered);
}

} // namespace detail

/// A uniformly sampled curve of density matrices.
class DensityTrajectory {
public:
    DensityTrajectory(std::vector<ComplexMatrix> samples, double dt, double hbar = 1.0)
        : samples_(std::move(samples)), dt_(dt), hbar_(hbar) {
        if (samples_.size() < 3)
            throw invalid_input("DensityTrajectory: need at least 3 samples");
        if (!(dt_ > 0.0) || !std::isfinite(dt_))
            throw invalid_input("DensityTrajectory: dt must be positive and finite");
        if (!(hbar_ > 0.0))
            throw invalid_input("DensityTrajectory: hbar must be positive");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (samples_[i].rows() != samples_[0].rows())
                throw invalid_input("DensityTrajectory: inconsistent dimensions");
            detail::density_spectrum(samples_[i], i); // validates
        }
    }

    std::size_t size() const { return samples_.size(); }
    double dt() const { return dt_; }
    double hbar() const { return hbar_; }
    int dim() const { return static_cast<int>(samples_[0].rows()); }
    const ComplexMatrix& sample(std::size_t i) const { return samples_[i]; }

private:
    std::vector<ComplexMatrix> samples_;
    double dt_;
    double hbar_;
};

// Purifies one density matrix against a fixed computational ancilla basis:
// |Psi> = sum_i sqrt(p_i) |phi_i>|a_i>, laid out with the ancilla index
// fastest. The partial trace over the ancilla recovers the input.
inline PureState purify(const ComplexMatrix& rho) {
    const auto s = detail::density_spectrum(rho, 0);
    return PureState(detail::assemble_purification(s));
}

// Lifts the whole trajectory with the parallel-transport gauge propagated
// sample to sample. Inherently sequential: the gauge at sample i depends on
// sample i-1.
inline Trajectory purified_trajectory(const DensityTrajectory& rhos,
                                      double continuity_threshold = 0.9) {
    std::vector<ComplexVector> samples;
    samples.reserve(rhos.size());

    detail::SpectralData previous = detail::density_spectrum(rhos.sample(0), 0);
    samples.push_back(detail::assemble_purification(previous));
    for (std::size_t i = 1; i < rhos.size(); ++i) {
        detail::SpectralData current = detail::density_spectrum(rhos.sample(i), i);
        detail::align_spectrum(previous, current, i);
        samples.push_back(detail::assemble_purification(current));
        previous = std::move(current);
    }
    return Trajectory(std::move(samples), rhos.dt(), rhos.hbar(), continuity_threshold);
}

/// Speed-limit report for a density-matrix trajectory.
inline BoundReport mixed_qsl(const DensityTrajectory& rhos) {
    return qsl_report(purified_trajectory(rhos));
}

} // namespace qsl
