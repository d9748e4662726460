#pragma once

// Execution layer behind the CLI: turns a validated ModelSpec into
// trajectories, bound curves and verification reports, and serializes them
// as CSV (curves) and JSON (reports). Output is deterministic: no randomness
// outside fixed-seed verification draws, numbers printed with 17 significant
// digits so doubles round-trip exactly.

#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsl/dynamics.hpp"
#include "qsl/errors.hpp"
#include "qsl/geometry.hpp"
#include "qsl/mixed.hpp"
#include "qsl/model_spec.hpp"
#include "qsl/models/bethe_lamb.hpp"
#include "qsl/models/gain_loss.hpp"
#include "qsl/numerics.hpp"

namespace qsl {

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

// Fastest rate the trajectory grid has to resolve, derived from the model.
inline double characteristic_rate(const ModelSpec& spec) {
    switch (spec.model) {
    case ModelKind::gain_loss:
    case ModelKind::pt_symmetric: {
        const auto& p = spec.gain_loss();
        return std::max(std::abs(p.delta()), p.kappa_plus());
    }
    case ModelKind::bethe_lamb: {
        const auto& p = spec.bethe_lamb();
        return std::max({std::abs(p.c2()), std::abs(p.Delta), p.gamma_2});
    }
    case ModelKind::hermitian_matrix:
    case ModelKind::matrix:
        return spec.matrix().H.operatorNorm() / spec.hbar;
    default:
        return 0.0;
    }
}

// Default grid rule: at least 2000 steps, at least 40 per characteristic
// period, capped so a misjudged sweep cannot exhaust memory (pass --steps to
// go beyond the cap).
inline int default_steps(const ModelSpec& spec, double t_max) {
    const double rate = characteristic_rate(spec);
    double steps = 2000.0;
    if (rate > 0.0 && std::isfinite(rate))
        steps = std::max(steps, 40.0 * std::ceil(t_max * rate));
    return static_cast<int>(std::min(steps, 2e6));
}

inline PureState initial_state_of(const ModelSpec& spec) {
    if (spec.initial_state)
        return PureState(*spec.initial_state);
    ComplexVector v = ComplexVector::Constant(spec.dim(), Complex(1.0, 0.0));
    return PureState(v / v.norm());
}

inline GeneratorSpec generator_of(const ModelSpec& spec) {
    switch (spec.model) {
    case ModelKind::gain_loss:
    case ModelKind::pt_symmetric:
        return GeneratorSpec(gl_hamiltonian(spec.gain_loss()), false, spec.hbar);
    case ModelKind::bethe_lamb: {
        const BetheLambParams p = spec.bethe_lamb();
        return GeneratorSpec(
            2, [p](double t) { return bl_hamiltonian(p, t); }, false, spec.hbar);
    }
    case ModelKind::hermitian_matrix:
        return GeneratorSpec(spec.matrix().H, true, spec.hbar);
    case ModelKind::matrix:
        return GeneratorSpec(spec.matrix().H, false, spec.hbar);
    default:
        throw invalid_input("tabulated model has no generator");
    }
}

/// Closed-form speed, available for the named models only.
inline std::optional<std::function<double(double)>> analytic_speed_of(const ModelSpec& spec) {
    switch (spec.model) {
    case ModelKind::gain_loss:
    case ModelKind::pt_symmetric: {
        const GainLossParams p = spec.gain_loss();
        return [p](double t) { return gl_quantities(p, t).V; };
    }
    case ModelKind::bethe_lamb: {
        const BetheLambParams p = spec.bethe_lamb();
        return [p](double t) { return bl_speed(p, t); };
    }
    default:
        return std::nullopt;
    }
}

// Raw-amplitude trajectory for an evolution run over the spec's own grid.
inline Trajectory evolve_trajectory(const ModelSpec& spec, std::optional<int> steps_override) {
    if (spec.model == ModelKind::tabulated) {
        const auto& states = spec.tabulated().states;
        const double dt = spec.grid.has_t_list()
                              ? spec.grid.t_list[1] - spec.grid.t_list[0]
                              : *spec.grid.t_max / *spec.grid.steps;
        return Trajectory(states, dt, spec.hbar);
    }
    if (spec.grid.has_t_list() && spec.grid.t_list.front() != 0.0)
        throw invalid_input("spec: model evolution grids must start at t = 0");
    const double t_max = spec.grid.duration();
    int steps = spec.grid.has_t_list() ? static_cast<int>(spec.grid.t_list.size()) - 1
                                       : spec.grid.steps.value_or(default_steps(spec, t_max));
    if (steps_override)
        steps = *steps_override;
    return evolve(generator_of(spec), initial_state_of(spec), TimeGrid{t_max, steps});
}

// Bound-report trajectory over [0, T]: closed-form state samples for the
// named models, generator evolution otherwise.
inline BoundReport bound_report(const ModelSpec& spec, double T, int steps) {
    switch (spec.model) {
    case ModelKind::gain_loss:
    case ModelKind::pt_symmetric:
        return gl_bound(spec.gain_loss(), T, steps);
    case ModelKind::bethe_lamb:
        return bl_bound(spec.bethe_lamb(), T, steps);
    case ModelKind::hermitian_matrix:
    case ModelKind::matrix:
        return qsl_report(
            evolve(generator_of(spec), initial_state_of(spec), TimeGrid{T, steps}));
    default:
        throw invalid_input("bound sweeps need a model that can be re-evolved; "
                            "tabulated input supports evolve only");
    }
}

// CSV with one row per grid sample: t, amplitudes, norm, the numeric speed,
// the closed-form speed when the model has one, and the running arc length.
// The running integral reproduces integrate_samples on every prefix.
inline void run_evolve(const ModelSpec& spec, const std::string& out_path,
                       std::optional<int> steps_override = std::nullopt) {
    const Trajectory traj = evolve_trajectory(spec, steps_override);
    const auto analytic = analytic_speed_of(spec);
    const std::vector<double> v = speed_profile(traj);
    const double dt = traj.dt();

    std::vector<double> s_cum(v.size(), 0.0);
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (k % 2 == 0)
            s_cum[k] = s_cum[k - 2] + (dt / 3.0) * (v[k - 2] + 4.0 * v[k - 1] + v[k]);
        else
            s_cum[k] = s_cum[k - 1] + 0.5 * dt * (v[k - 1] + v[k]);
    }
    // Odd samples above used the trapezoid fallback; even ones replace it
    // with the full Simpson pair, matching integrate_samples prefix by prefix.

    std::ofstream out(out_path);
    if (!out)
        throw invalid_input("cannot open output file '" + out_path + "'");
    out << "t";
    for (int c = 0; c < spec.dim(); ++c)
        out << ",re_" << c << ",im_" << c;
    out << ",norm,V_numeric";
    if (analytic)
        out << ",V_analytic";
    out << ",S_cum\n";

    const double t0 = spec.grid.has_t_list() ? spec.grid.t_list.front() : 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        out << detail::fmt17(t);
        const ComplexVector& s = traj.sample(k);
        for (Eigen::Index c = 0; c < s.size(); ++c)
            out << ',' << detail::fmt17(s[c].real()) << ',' << detail::fmt17(s[c].imag());
        out << ',' << detail::fmt17(s.norm());
        out << ',' << detail::fmt17(v[k]);
        if (analytic)
            out << ',' << detail::fmt17((*analytic)(t));
        out << ',' << detail::fmt17(s_cum[k]) << '\n';
    }
}

/// One bound row per sweep value, with the geometry invariants enforced.
inline std::vector<BoundReport> bound_rows(const ModelSpec& spec, const SweepSpec& sweep,
                                           std::optional<int> steps_override = std::nullopt) {
    sweep.validate();
    std::vector<BoundReport> rows;
    rows.reserve(sweep.values.size());
    for (double T : sweep.values) {
        const int steps = steps_override.value_or(default_steps(spec, T));
        const BoundReport r = bound_report(spec, T, steps);
        if (r.ratio < 0.0 || r.ratio > 1.0 + 1e-6)
            throw numeric_failure("bound sweep: ratio " + detail::fmt17(r.ratio) +
                                  " outside [0, 1] at T = " + detail::fmt17(T));
        rows.push_back(r);
    }
    return rows;
}

inline void run_bound(const ModelSpec& spec, const SweepSpec& sweep, const std::string& out_path,
                      std::optional<int> steps_override = std::nullopt) {
    const auto rows = bound_rows(spec, sweep, steps_override);
    std::ofstream out(out_path);
    if (!out)
        throw invalid_input("cannot open output file '" + out_path + "'");
    out << "T,S0,S,V_bar,T_qsl,ratio\n";
    for (const auto& r : rows) {
        out << detail::fmt17(r.T) << ',' << detail::fmt17(r.S0) << ',' << detail::fmt17(r.S)
            << ',' << detail::fmt17(r.V_bar) << ',' << detail::fmt17(r.T_qsl) << ','
            << detail::fmt17(r.ratio) << '\n';
    }
}

// Density-trajectory ingestion: {"dt": .., "hbar": .., "samples": [{re, im}]}.
inline DensityTrajectory parse_density_trajectory(const json& j) {
    detail::check_keys(j, {"dt", "hbar", "samples"}, "density trajectory");
    const double dt = detail::require_number(j, "dt", "density trajectory");
    double hbar = 1.0;
    if (j.contains("hbar"))
        hbar = detail::require_number(j, "hbar", "density trajectory");
    if (!j.contains("samples") || !j["samples"].is_array())
        throw invalid_input("density trajectory: requires array field 'samples'");

    std::vector<ComplexMatrix> samples;
    for (std::size_t i = 0; i < j["samples"].size(); ++i)
        samples.push_back(
            detail::matrix_from_json(j["samples"][i], "samples[" + std::to_string(i) + "]"));
    return DensityTrajectory(std::move(samples), dt, hbar);
}

inline DensityTrajectory ingest_density_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw invalid_input("cannot open density trajectory file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw invalid_input(std::string("density trajectory: JSON parse error: ") + e.what());
    }
    return parse_density_trajectory(j);
}

/// Bound report for a density-matrix trajectory, with the gauge on record.
inline json mixed_report_json(const DensityTrajectory& rhos) {
    const BoundReport r = mixed_qsl(rhos);
    return json{{"dim", rhos.dim()},
                {"samples", rhos.size()},
                {"purification_gauge", kPurificationGauge},
                {"T", r.T},
                {"S0", r.S0},
                {"S", r.S},
                {"V_bar", r.V_bar},
                {"T_qsl", r.T_qsl},
                {"ratio", r.ratio}};
}

} // namespace qsl
