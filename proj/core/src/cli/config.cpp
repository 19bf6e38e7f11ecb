#include "zenoqst/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace zenoqst::cli {

namespace {

template <class T>
void read_into(const std::optional<T>& v, T& target) {
    if (v) target = *v;
}

void require(const IniDocument& doc, bool ok, std::string_view section, std::string_view key, const std::string& msg) {
    if (ok) return;
    if (const auto* e = doc.find(section, key)) doc.fail(*e, msg);
    throw ConfigError(doc.source(), 0, std::string(section) + "." + std::string(key), msg);
}

void read_system(const IniDocument& doc, ExperimentConfig& cfg) {
    read_into(doc.get_int("system", "nodes"), cfg.nodes);
    require(doc, cfg.nodes >= 2, "system", "nodes", "need at least 2 nodes");
    read_into(doc.get_int("system", "photon_cutoff"), cfg.photon_cutoff);
    require(doc, cfg.photon_cutoff >= 1, "system", "photon_cutoff", "photon_cutoff must be >= 1");
    read_into(doc.get_bool("system", "restrict_to_sector"), cfg.restrict_to_sector);

    const auto length = doc.get_double("system", "fiber_length_m");
    const auto bandwidth = doc.get_double("system", "fiber_bandwidth");
    const auto speed = doc.get_double("system", "light_speed");
    if (length || bandwidth || speed) {
        require(doc, length && bandwidth, "system", length ? "fiber_bandwidth" : "fiber_length_m",
                "fiber_length_m and fiber_bandwidth must be given together");
        FiberSpec fiber;
        fiber.length_m = *length;
        fiber.decay_bandwidth = *bandwidth;
        if (speed) fiber.light_speed = *speed;
        require(doc, fiber.length_m > 0 && fiber.decay_bandwidth > 0 && fiber.light_speed > 0, "system",
                "fiber_length_m", "fiber parameters must be positive");
        cfg.fiber = fiber;
    }
}

void read_couplings(const IniDocument& doc, ExperimentConfig& cfg) {
    read_into(doc.get_double("couplings", "omega"), cfg.omega);
    read_into(doc.get_double("couplings", "g"), cfg.g);
    read_into(doc.get_double("couplings", "lambda"), cfg.lambda);
    read_into(doc.get_double("couplings", "zeno_threshold"), cfg.zeno_threshold);
    require(doc, cfg.omega > 0, "couplings", "omega", "omega must be > 0");
    require(doc, cfg.g > 0, "couplings", "g", "g must be > 0");
    require(doc, cfg.lambda > 0, "couplings", "lambda", "lambda must be > 0");
    require(doc, cfg.zeno_threshold > 0, "couplings", "zeno_threshold", "zeno_threshold must be > 0");
}

void read_noise(const IniDocument& doc, ExperimentConfig& cfg) {
    read_into(doc.get_double("noise", "kappa"), cfg.noise.cavity_decay);
    read_into(doc.get_double("noise", "kappa_f"), cfg.noise.fiber_decay);
    read_into(doc.get_double("noise", "gamma"), cfg.noise.spontaneous_emission);
    require(doc, cfg.noise.cavity_decay >= 0, "noise", "kappa", "rates must be >= 0");
    require(doc, cfg.noise.fiber_decay >= 0, "noise", "kappa_f", "rates must be >= 0");
    require(doc, cfg.noise.spontaneous_emission >= 0, "noise", "gamma", "rates must be >= 0");
}

// Physical rates in MHz, normalized by g.
void read_physical(const IniDocument& doc, ExperimentConfig& cfg) {
    if (!doc.has_section("physical")) return;
    if (doc.has_section("noise")) {
        const auto& e = *std::find_if(doc.entries().begin(), doc.entries().end(),
                                      [](const auto& x) { return x.section == "noise"; });
        doc.fail(e, "[noise] cannot be combined with [physical]");
    }
    for (const char* key : {"g", "lambda"}) {
        if (const auto* e = doc.find("couplings", key)) doc.fail(*e, "set in [physical]; remove from [couplings]");
    }
    const auto g = doc.get_double("physical", "g");
    require(doc, g.has_value() && *g > 0, "physical", "g", "[physical] requires g > 0");
    const auto lambda = doc.get_double("physical", "lambda");
    require(doc, lambda.has_value() && *lambda > 0, "physical", "lambda", "[physical] requires lambda > 0");
    cfg.g = 1.0;
    cfg.lambda = *lambda / *g;
    cfg.noise.cavity_decay = doc.get_double("physical", "kappa").value_or(0.0) / *g;
    cfg.noise.fiber_decay = doc.get_double("physical", "kappa_f").value_or(0.0) / *g;
    cfg.noise.spontaneous_emission = doc.get_double("physical", "gamma").value_or(0.0) / *g;
    require(doc, cfg.noise.cavity_decay >= 0 && cfg.noise.fiber_decay >= 0 && cfg.noise.spontaneous_emission >= 0,
            "physical", "kappa", "rates must be >= 0");
}

void read_protocol(const IniDocument& doc, ExperimentConfig& cfg) {
    read_into(doc.get_int("protocol", "sender"), cfg.sender);
    read_into(doc.get_int("protocol", "receiver"), cfg.receiver);
    read_into(doc.get_int("protocol", "atom_a"), cfg.atom_a);
    read_into(doc.get_int("protocol", "atom_b"), cfg.atom_b);
    read_into(doc.get_int("protocol", "helper"), cfg.helper);
    for (const char* key : {"sender", "receiver", "atom_a", "atom_b", "helper"}) {
        if (const auto* e = doc.find("protocol", key)) {
            const int v = std::stoi(e->value);
            if (v < 0 || v >= cfg.nodes) doc.fail(*e, "node index must be in [0, nodes)");
        }
    }
    for (const auto& e : doc.entries()) {
        if (e.section != "protocol" || e.key.rfind("qubit.", 0) != 0) continue;
        const auto node = parse_number(e.key.substr(6));
        if (!node || *node < 0 || *node >= cfg.nodes || *node != static_cast<int>(*node))
            doc.fail(e, "qubit.<node> needs a node index in [0, nodes)");
        const auto values = doc.get_doubles("protocol", e.key);
        if (values->size() != 4) doc.fail(e, "expected a_re, a_im, b_re, b_im");
        Qubit q{{(*values)[0], (*values)[1]}, {(*values)[2], (*values)[3]}};
        try {
            q.validate(1e-9);
        } catch (const std::invalid_argument&) {
            doc.fail(e, "qubit is not normalized");
        }
        // Renormalize away input rounding.
        const double n = std::sqrt(std::norm(q.a) + std::norm(q.b));
        cfg.qubits.atoms[static_cast<int>(*node)] = Qubit{q.a / n, q.b / n};
    }
}

void read_integrator(const IniDocument& doc, ExperimentConfig& cfg) {
    IntegratorSettings& s = cfg.integrator;
    if (const auto m = doc.get_string("integrator", "method")) {
        if (*m == "adaptive")
            s.method = StepMethod::dopri45;
        else if (*m == "rk4")
            s.method = StepMethod::rk4;
        else
            doc.fail(*doc.find("integrator", "method"), "expected adaptive or rk4");
    }
    read_into(doc.get_double("integrator", "abs_tol"), s.abs_tol);
    read_into(doc.get_double("integrator", "rel_tol"), s.rel_tol);
    read_into(doc.get_double("integrator", "max_step"), s.max_step);
    if (const auto p = doc.get_string("integrator", "trace_policy")) {
        if (*p == "off")
            s.trace_policy = TracePolicy::off;
        else if (*p == "warn")
            s.trace_policy = TracePolicy::warn;
        else if (*p == "renormalize")
            s.trace_policy = TracePolicy::renormalize;
        else
            doc.fail(*doc.find("integrator", "trace_policy"), "expected off, warn or renormalize");
    }
    if (const auto u = doc.get_string("integrator", "unitary")) {
        if (*u == "spectral")
            s.unitary = UnitaryMethod::spectral;
        else if (*u == "ode")
            s.unitary = UnitaryMethod::ode;
        else
            doc.fail(*doc.find("integrator", "unitary"), "expected spectral or ode");
    }
    require(doc, s.abs_tol > 0, "integrator", "abs_tol", "must be > 0");
    require(doc, s.rel_tol > 0, "integrator", "rel_tol", "must be > 0");
    require(doc, s.max_step > 0, "integrator", "max_step", "must be > 0");
}

SweepAxis read_axis(const IniDocument& doc, const std::string& prefix) {
    SweepAxis axis;
    const auto name = doc.get_string("sweep", prefix);
    require(doc, name.has_value(), "sweep", prefix, "missing axis parameter");
    const auto param = parse_parameter(*name);
    if (!param)
        doc.fail(*doc.find("sweep", prefix),
                 "unknown parameter '" + *name + "' (lambda/g, Omega/g, kappa/g, Gamma/g, kappa_f/lambda)");
    axis.parameter = *param;
    const auto range = doc.get_doubles("sweep", prefix + "_range");
    require(doc, range && range->size() == 2, "sweep", prefix + "_range", "expected 'min, max'");
    axis.min = (*range)[0];
    axis.max = (*range)[1];
    require(doc, axis.min >= 0 && axis.max >= axis.min, "sweep", prefix + "_range", "need 0 <= min <= max");
    read_into(doc.get_int("sweep", prefix + "_points"), axis.points);
    require(doc, axis.points >= 2, "sweep", prefix + "_points", "need at least 2 points");
    return axis;
}

void read_sweep(const IniDocument& doc, ExperimentConfig& cfg) {
    if (!doc.has_section("sweep")) return;
    SweepGrid grid{read_axis(doc, "axis1"), read_axis(doc, "axis2")};
    require(doc, grid.axis1.parameter != grid.axis2.parameter, "sweep", "axis2", "axes must differ");
    read_into(doc.get_int("sweep", "workers"), cfg.workers);
    require(doc, cfg.workers >= 0, "sweep", "workers", "must be >= 0");
    cfg.sweep = grid;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
    const IniDocument doc = IniDocument::parse(text, source);
    for (const auto& e : doc.entries()) {
        static const char* known[] = {"system", "couplings", "physical", "noise", "protocol", "integrator", "sweep"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return e.section == k; }) ==
            std::end(known))
            doc.fail(e, "unknown section [" + e.section + "]");
    }

    ExperimentConfig cfg;
    cfg.source = source;
    read_system(doc, cfg);
    read_couplings(doc, cfg);
    read_noise(doc, cfg);
    read_physical(doc, cfg);
    read_protocol(doc, cfg);
    read_integrator(doc, cfg);
    read_sweep(doc, cfg);
    doc.reject_unused();

    for (const auto& e : doc.entries()) cfg.echo.emplace_back(e.section + "." + e.key, e.value);
    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "", "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

ExperimentConfig load_preset(std::string_view name) {
    const auto text = preset_text(name);
    if (!text) {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("preset", 0, std::string(name), "unknown preset (available: " + known + ")");
    }
    return parse_config(*text, "preset:" + std::string(name));
}

}  // namespace zenoqst::cli
