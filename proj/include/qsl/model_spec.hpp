#pragma once

// JSON-backed run specifications for the command-line surface: which model to
// evolve, with which parameters, on which time grid, plus sweep definitions
// for bound curves. Specs are schema-validated before any computation and
// unknown keys are rejected outright.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qsl/errors.hpp"
#include "qsl/models/bethe_lamb.hpp"
#include "qsl/models/gain_loss.hpp"
#include "qsl/numerics.hpp"

namespace qsl {

using nlohmann::json;

enum class ModelKind { gain_loss, pt_symmetric, bethe_lamb, hermitian_matrix, matrix, tabulated };

inline std::string to_string(ModelKind k) {
    switch (k) {
    case ModelKind::gain_loss: return "gain_loss";
    case ModelKind::pt_symmetric: return "pt_symmetric";
    case ModelKind::bethe_lamb: return "bethe_lamb";
    case ModelKind::hermitian_matrix: return "hermitian_matrix";
    case ModelKind::matrix: return "matrix";
    default: return "tabulated";
    }
}

inline ModelKind model_kind_from_string(const std::string& s) {
    for (ModelKind k : {ModelKind::gain_loss, ModelKind::pt_symmetric, ModelKind::bethe_lamb,
                        ModelKind::hermitian_matrix, ModelKind::matrix, ModelKind::tabulated})
        if (to_string(k) == s)
            return k;
    throw invalid_input("spec: unknown model '" + s + "'");
}

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& context) {
    if (!j.is_object())
        throw invalid_input("spec: " + context + " must be a JSON object");
    for (const auto& item : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end())
            throw invalid_input("spec: unknown key '" + item.key() + "' in " + context);
    }
}

inline double require_number(const json& j, const char* key, const std::string& context) {
    if (!j.contains(key) || !j[key].is_number())
        throw invalid_input("spec: " + context + " requires numeric field '" + key + "'");
    return j[key].get<double>();
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& context) {
    check_keys(j, {"re", "im"}, context);
    if (!j.contains("re") || !j["re"].is_array())
        throw invalid_input("spec: " + context + " requires 're' as an array of rows");
    const auto& re = j["re"];
    const int n = static_cast<int>(re.size());
    if (n == 0)
        throw invalid_input("spec: " + context + " matrix is empty");
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    auto fill = [&](const json& part, bool imag_part) {
        if (static_cast<int>(part.size()) != n)
            throw invalid_input("spec: " + context + " matrix is not square");
        for (int r = 0; r < n; ++r) {
            if (!part[r].is_array() || static_cast<int>(part[r].size()) != n)
                throw invalid_input("spec: " + context + " matrix is not square");
            for (int c = 0; c < n; ++c) {
                if (!part[r][c].is_number())
                    throw invalid_input("spec: " + context + " matrix entries must be numbers");
                const double v = part[r][c].get<double>();
                m(r, c) += imag_part ? Complex(0.0, v) : Complex(v, 0.0);
            }
        }
    };
    fill(re, false);
    if (j.contains("im"))
        fill(j["im"], true);
    if (!all_finite(m))
        throw invalid_input("spec: " + context + " matrix has non-finite entries");
    return m;
}

inline json matrix_to_json(const ComplexMatrix& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rrow = json::array(), irow = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rrow.push_back(m(r, c).real());
            irow.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexVector vector_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty())
        throw invalid_input("spec: " + context + " must be a non-empty array of [re, im] pairs");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw invalid_input("spec: " + context + " entries must be [re, im] pairs");
        v[static_cast<Eigen::Index>(i)] = Complex(e[0].get<double>(), e[1].get<double>());
    }
    if (!all_finite(v))
        throw invalid_input("spec: " + context + " has non-finite entries");
    return v;
}

inline json vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(json::array({v[i].real(), v[i].imag()}));
    return out;
}

} // namespace detail

/// Time grid request: either {t_max, steps?} or an explicit uniform t_list.
struct GridSpec {
    std::optional<double> t_max;
    std::optional<int> steps;
    std::vector<double> t_list;

    bool has_t_list() const { return !t_list.empty(); }

    void validate() const {
        if (has_t_list()) {
            if (t_max || steps)
                throw invalid_input("spec: grid cannot mix t_list with t_max/steps");
            if (t_list.size() < 3)
                throw invalid_input("spec: grid t_list needs at least 3 entries");
            const double dt = t_list[1] - t_list[0];
            if (!(dt > 0.0))
                throw invalid_input("spec: grid t_list must be strictly increasing");
            for (std::size_t i = 0; i + 1 < t_list.size(); ++i) {
                const double step = t_list[i + 1] - t_list[i];
                if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
                    throw invalid_input("spec: grid t_list must be uniformly spaced");
            }
        } else {
            if (!t_max)
                throw invalid_input("spec: grid requires t_max or t_list");
            if (!(*t_max > 0.0) || !std::isfinite(*t_max))
                throw invalid_input("spec: grid t_max must be positive and finite");
            if (steps && *steps < 2)
                throw invalid_input("spec: grid steps must be >= 2");
        }
    }

    double duration() const { return has_t_list() ? t_list.back() - t_list.front() : *t_max; }
};

struct MatrixModelParams {
    ComplexMatrix H;
};

struct TabulatedParams {
    std::vector<ComplexVector> states;
};

struct ModelSpec {
    ModelKind model = ModelKind::gain_loss;
    std::variant<GainLossParams, BetheLambParams, MatrixModelParams, TabulatedParams> params;
    double hbar = 1.0;
    std::optional<ComplexVector> initial_state;
    GridSpec grid;

    const GainLossParams& gain_loss() const { return std::get<GainLossParams>(params); }
    const BetheLambParams& bethe_lamb() const { return std::get<BetheLambParams>(params); }
    const MatrixModelParams& matrix() const { return std::get<MatrixModelParams>(params); }
    const TabulatedParams& tabulated() const { return std::get<TabulatedParams>(params); }

    bool closed_form_model() const {
        return model == ModelKind::gain_loss || model == ModelKind::pt_symmetric ||
               model == ModelKind::bethe_lamb;
    }

    int dim() const {
        switch (model) {
        case ModelKind::hermitian_matrix:
        case ModelKind::matrix: return static_cast<int>(matrix().H.rows());
        case ModelKind::tabulated: return static_cast<int>(tabulated().states.front().size());
        default: return 2;
        }
    }
};

inline ModelSpec model_spec_from_json(const json& j) {
    detail::check_keys(j, {"model", "params", "hbar", "initial_state", "grid"}, "spec");
    if (!j.contains("model") || !j["model"].is_string())
        throw invalid_input("spec: requires string field 'model'");
    if (!j.contains("params"))
        throw invalid_input("spec: requires field 'params'");
    if (!j.contains("grid"))
        throw invalid_input("spec: requires field 'grid'");

    ModelSpec spec;
    spec.model = model_kind_from_string(j["model"].get<std::string>());
    const json& p = j["params"];

    switch (spec.model) {
    case ModelKind::gain_loss: {
        detail::check_keys(p, {"g", "gamma_L", "gamma_G"}, "params");
        GainLossParams gl{detail::require_number(p, "g", "gain_loss params"),
                          detail::require_number(p, "gamma_L", "gain_loss params"),
                          detail::require_number(p, "gamma_G", "gain_loss params")};
        gl.validate();
        spec.params = gl;
        break;
    }
    case ModelKind::pt_symmetric: {
        detail::check_keys(p, {"g", "gamma"}, "params");
        GainLossParams gl = pt_symmetric_params(detail::require_number(p, "g", "pt params"),
                                                detail::require_number(p, "gamma", "pt params"));
        gl.validate();
        spec.params = gl;
        break;
    }
    case ModelKind::bethe_lamb: {
        detail::check_keys(p, {"gamma_1", "gamma_2", "Delta", "Omega"}, "params");
        BetheLambParams bl{detail::require_number(p, "gamma_1", "bethe_lamb params"),
                           detail::require_number(p, "gamma_2", "bethe_lamb params"),
                           detail::require_number(p, "Delta", "bethe_lamb params"),
                           detail::require_number(p, "Omega", "bethe_lamb params")};
        bl.validate();
        spec.params = bl;
        break;
    }
    case ModelKind::hermitian_matrix:
    case ModelKind::matrix: {
        detail::check_keys(p, {"H"}, "params");
        if (!p.contains("H"))
            throw invalid_input("spec: matrix params require field 'H'");
        MatrixModelParams mp{detail::matrix_from_json(p["H"], "params.H")};
        if (spec.model == ModelKind::hermitian_matrix && !is_hermitian(mp.H))
            throw invalid_input("spec: hermitian_matrix model requires a Hermitian H");
        spec.params = std::move(mp);
        break;
    }
    case ModelKind::tabulated: {
        detail::check_keys(p, {"states"}, "params");
        if (!p.contains("states") || !p["states"].is_array() || p["states"].size() < 3)
            throw invalid_input("spec: tabulated params require >= 3 'states'");
        TabulatedParams tp;
        for (std::size_t i = 0; i < p["states"].size(); ++i) {
            tp.states.push_back(
                detail::vector_from_json(p["states"][i], "states[" + std::to_string(i) + "]"));
            if (tp.states.back().size() != tp.states.front().size())
                throw invalid_input("spec: tabulated states have inconsistent dimensions");
        }
        spec.params = std::move(tp);
        break;
    }
    }

    if (j.contains("hbar")) {
        if (!j["hbar"].is_number() || !(j["hbar"].get<double>() > 0.0))
            throw invalid_input("spec: hbar must be a positive number");
        spec.hbar = j["hbar"].get<double>();
    }
    if (spec.closed_form_model() && spec.hbar != 1.0)
        throw invalid_input("spec: closed-form models are defined with hbar = 1");

    if (j.contains("initial_state"))
        spec.initial_state = detail::vector_from_json(j["initial_state"], "initial_state");
    if (spec.initial_state) {
        if (spec.closed_form_model())
            throw invalid_input(
                "spec: closed-form models evolve the maximally coherent state; "
                "initial_state cannot be overridden");
        if (spec.model == ModelKind::tabulated)
            throw invalid_input("spec: tabulated model does not take an initial_state");
        if (spec.initial_state->size() != spec.dim())
            throw invalid_input("spec: initial_state dimension does not match the model");
        if (!(spec.initial_state->norm() > 0.0))
            throw invalid_input("spec: initial_state must be nonzero");
    }

    const json& g = j["grid"];
    detail::check_keys(g, {"t_max", "steps", "t_list"}, "grid");
    if (g.contains("t_max"))
        spec.grid.t_max = detail::require_number(g, "t_max", "grid");
    if (g.contains("steps")) {
        if (!g["steps"].is_number_integer())
            throw invalid_input("spec: grid steps must be an integer");
        spec.grid.steps = g["steps"].get<int>();
    }
    if (g.contains("t_list")) {
        if (!g["t_list"].is_array())
            throw invalid_input("spec: grid t_list must be an array");
        for (const auto& v : g["t_list"]) {
            if (!v.is_number())
                throw invalid_input("spec: grid t_list entries must be numbers");
            spec.grid.t_list.push_back(v.get<double>());
        }
    }
    spec.grid.validate();

    if (spec.model == ModelKind::tabulated) {
        const std::size_t want = spec.tabulated().states.size();
        if (spec.grid.has_t_list()) {
            if (spec.grid.t_list.size() != want)
                throw invalid_input("spec: tabulated states and grid t_list lengths differ");
        } else {
            if (!spec.grid.steps || static_cast<std::size_t>(*spec.grid.steps) + 1 != want)
                throw invalid_input(
                    "spec: tabulated model requires grid steps + 1 == number of states");
        }
    }
    return spec;
}

inline ModelSpec parse_model_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw invalid_input(std::string("spec: JSON parse error: ") + e.what());
    }
    return model_spec_from_json(j);
}

inline json to_json(const ModelSpec& spec) {
    json p;
    switch (spec.model) {
    case ModelKind::gain_loss:
        p = {{"g", spec.gain_loss().g},
             {"gamma_L", spec.gain_loss().gamma_L},
             {"gamma_G", spec.gain_loss().gamma_G}};
        break;
    case ModelKind::pt_symmetric:
        p = {{"g", spec.gain_loss().g}, {"gamma", spec.gain_loss().gamma_L}};
        break;
    case ModelKind::bethe_lamb:
        p = {{"gamma_1", spec.bethe_lamb().gamma_1},
             {"gamma_2", spec.bethe_lamb().gamma_2},
             {"Delta", spec.bethe_lamb().Delta},
             {"Omega", spec.bethe_lamb().Omega}};
        break;
    case ModelKind::hermitian_matrix:
    case ModelKind::matrix:
        p = {{"H", detail::matrix_to_json(spec.matrix().H)}};
        break;
    case ModelKind::tabulated: {
        json states = json::array();
        for (const auto& s : spec.tabulated().states)
            states.push_back(detail::vector_to_json(s));
        p = {{"states", std::move(states)}};
        break;
    }
    }

    json g;
    if (spec.grid.has_t_list())
        g = {{"t_list", spec.grid.t_list}};
    else {
        g["t_max"] = *spec.grid.t_max;
        if (spec.grid.steps)
            g["steps"] = *spec.grid.steps;
    }

    json out{{"model", to_string(spec.model)}, {"params", std::move(p)},
             {"hbar", spec.hbar}, {"grid", std::move(g)}};
    if (spec.initial_state)
        out["initial_state"] = detail::vector_to_json(*spec.initial_state);
    return out;
}

inline bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.t_max == b.t_max && a.steps == b.steps && a.t_list == b.t_list;
}

inline bool operator==(const ModelSpec& a, const ModelSpec& b) {
    if (a.model != b.model || a.hbar != b.hbar || !(a.grid == b.grid))
        return false;
    if (a.initial_state.has_value() != b.initial_state.has_value())
        return false;
    if (a.initial_state && *a.initial_state != *b.initial_state)
        return false;
    return to_json(a)["params"] == to_json(b)["params"];
}

/// Sweep over an observable's independent variable (the window length T).
struct SweepSpec {
    std::vector<double> values;

    void validate() const {
        if (values.empty())
            throw invalid_input("sweep: needs at least one value");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] > 0.0) || !std::isfinite(values[i]))
                throw invalid_input("sweep: values must be positive and finite");
            if (i > 0 && values[i] <= values[i - 1])
                throw invalid_input("sweep: values must be strictly increasing");
        }
    }

    static SweepSpec from_range(double min, double max, int count, bool log_spacing) {
        if (!(min > 0.0) || !(max > min) || count < 1)
            throw invalid_input("sweep: require 0 < min < max and count >= 1");
        SweepSpec s;
        if (count == 1) {
            s.values.push_back(min);
            return s;
        }
        for (int i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / (count - 1);
            s.values.push_back(log_spacing ? min * std::pow(max / min, f)
                                           : min + f * (max - min));
        }
        s.validate();
        return s;
    }

    /// Parses the CLI form "min:max:count[:log]".
    static SweepSpec parse(const std::string& text) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t pos = text.find(':', start);
            parts.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
            if (pos == std::string::npos)
                break;
            start = pos + 1;
        }
        if (parts.size() < 3 || parts.size() > 4)
            throw invalid_input("sweep: expected min:max:count[:log]");
        bool log_spacing = false;
        if (parts.size() == 4) {
            if (parts[3] == "log")
                log_spacing = true;
            else if (parts[3] != "linear")
                throw invalid_input("sweep: spacing must be 'log' or 'linear'");
        }
        try {
            return from_range(std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2]),
                              log_spacing);
        } catch (const std::logic_error&) {
            throw invalid_input("sweep: could not parse '" + text + "'");
        }
    }
};

} // namespace qsl
