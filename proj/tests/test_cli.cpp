#include "zenoqst/cli/commands.hpp"
#include "zenoqst/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace zenoqst;
using namespace zenoqst::cli;

namespace {

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text, "test.ini");
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 0;
}

SweepGrid small_grid() {
    SweepGrid g;
    g.axis1 = {SweepParameter::kappa_over_g, 0.0, 0.1, 3};
    g.axis2 = {SweepParameter::kappa_f_over_lambda, 0.0, 0.1, 3};
    return g;
}

}  // namespace

TEST_CASE("ini documents") {
    const auto doc = IniDocument::parse("# top\n[a]\nx = 1 # trailing\ny=2pi*3\n; other\n[b]\nz = on\n", "t");
    CHECK(doc.get_int("a", "x") == 1);
    CHECK(*doc.get_double("a", "y") == doctest::Approx(6 * M_PI));
    CHECK(doc.get_bool("b", "z") == true);
    CHECK_FALSE(doc.get_string("b", "missing").has_value());
    CHECK_NOTHROW(doc.reject_unused());

    const auto unused = IniDocument::parse("[a]\nx = 1\ny = 2\n", "t");
    unused.get_int("a", "x");
    CHECK_THROWS_WITH_AS(unused.reject_unused(), doctest::Contains("a.y"), ConfigError);

    CHECK_THROWS_AS(IniDocument::parse("[a]\nx = 1\nx = 2\n", "t"), ConfigError);
    CHECK_THROWS_AS(IniDocument::parse("x = 1\n", "t"), ConfigError);
    CHECK_THROWS_AS(IniDocument::parse("[a\n", "t"), ConfigError);
    CHECK(parse_number("2pi*750").value() == doctest::Approx(2 * M_PI * 750));
    CHECK_FALSE(parse_number("abc").has_value());
    CHECK_FALSE(parse_number("1.5x").has_value());
}

TEST_CASE("configuration defaults and sections") {
    const ExperimentConfig d = parse_config("", "empty");
    CHECK(d.nodes == 2);
    CHECK(d.omega == 0.1);
    CHECK(d.g == 1.0);
    CHECK(d.lambda == 1.0);
    CHECK(d.noise.is_zero());
    CHECK(d.sender == 1);
    CHECK(d.receiver == 0);
    CHECK_FALSE(d.sweep.has_value());

    const ExperimentConfig c = parse_config(
        "[system]\nnodes = 3\nphoton_cutoff = 2\n"
        "[couplings]\nomega = 0.05\nlambda = 0.5\n"
        "[noise]\nkappa = 0.01\nkappa_f = 0.02\ngamma = 0.03\n"
        "[protocol]\nsender = 2\nqubit.2 = 0.6, 0, 0, 0.8\n"
        "[integrator]\nmethod = rk4\nmax_step = 0.01\ntrace_policy = renormalize\nunitary = ode\n",
        "c");
    CHECK(c.nodes == 3);
    CHECK(c.photon_cutoff == 2);
    CHECK(c.lambda == 0.5);
    CHECK(c.noise.fiber_decay == 0.02);
    CHECK(c.sender == 2);
    CHECK(c.qubits.at(2).b == cplx(0.0, 0.8));
    CHECK(c.integrator.method == StepMethod::rk4);
    CHECK(c.integrator.trace_policy == TracePolicy::renormalize);
    CHECK(c.integrator.unitary == UnitaryMethod::ode);
    CHECK(c.echo.size() == 13);
    CHECK(c.echo.front() == std::pair<std::string, std::string>{"system.nodes", "3"});
}

TEST_CASE("configuration errors name the line") {
    CHECK(error_line("[couplings]\nomega = 0.1\nlamda = 1\n") == 3);
    CHECK(error_line("[couplings]\nomega = fast\n") == 2);
    CHECK(error_line("[couplings]\n\nomega = -1\n") == 3);
    CHECK(error_line("[colors]\nred = 1\n") == 2);
    CHECK(error_line("[system]\nnodes = 1\n") == 2);
    CHECK(error_line("[protocol]\nsender = 7\n") == 2);
    CHECK(error_line("[protocol]\nqubit.1 = 1, 0, 1, 0\n") == 2);
    CHECK(error_line("[protocol]\nqubit.1 = 1, 0\n") == 2);
    CHECK(error_line("[integrator]\nmethod = euler\n") == 2);
    CHECK(error_line("[noise]\nkappa = 0.1\n[physical]\ng = 1\nlambda = 1\n") == 2);
    CHECK(error_line("[sweep]\naxis1 = beta/g\n") == 2);
    CHECK(error_line("[sweep]\naxis1 = kappa/g\naxis1_range = 0.1, 0\naxis2 = Gamma/g\naxis2_range = 0, 1\n") == 3);

    try {
        parse_config("[couplings]\nomega = fast\n", "my.ini");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "couplings.omega");
        CHECK(std::string(e.what()).find("my.ini:2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_preset("fig7"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("presets carry the figure parameters") {
    CHECK(preset_names() == std::vector<std::string>{"fig4", "fig5", "fig6", "cesium", "qst", "qss", "network"});
    for (const auto& n : preset_names()) CHECK_NOTHROW(load_preset(n));

    const auto f4 = load_preset("fig4");
    REQUIRE(f4.sweep);
    CHECK(f4.sweep->axis1.parameter == SweepParameter::lambda_over_g);
    CHECK(f4.sweep->axis1.min == 0.1);
    CHECK(f4.sweep->axis1.max == 2.0);
    CHECK(f4.sweep->axis2.parameter == SweepParameter::omega_over_g);
    CHECK(f4.sweep->axis2.min == 0.01);
    CHECK(f4.sweep->axis2.max == 0.2);
    CHECK(f4.sweep->axis1.points == 21);
    CHECK(f4.noise.is_zero());

    const auto f5 = load_preset("fig5");
    CHECK(f5.omega == 0.1);
    CHECK(f5.noise.fiber_decay == 0.0);
    CHECK(f5.sweep->axis1.parameter == SweepParameter::kappa_over_g);
    CHECK(f5.sweep->axis2.parameter == SweepParameter::gamma_over_g);
    CHECK(f5.sweep->axis2.max == 0.1);

    const auto f6 = load_preset("fig6");
    CHECK(f6.omega == 0.1);
    CHECK(f6.g == f6.lambda);
    CHECK(f6.noise.spontaneous_emission == 0.0);
    CHECK(f6.sweep->axis2.parameter == SweepParameter::kappa_f_over_lambda);

    const auto cs = load_preset("cesium");
    CHECK(cs.g == 1.0);
    CHECK(cs.lambda == doctest::Approx(1.0));
    CHECK(cs.omega == 0.1);
    CHECK(cs.noise.cavity_decay == doctest::Approx(3.5 / 750));
    CHECK(cs.noise.spontaneous_emission == doctest::Approx(2.62 / 750));
    CHECK(cs.noise.fiber_decay == doctest::Approx(0.152 / (2 * M_PI * 750)));
    REQUIRE(cs.fiber);
    CHECK(cs.fiber->single_mode());
}

TEST_CASE("sweep grid points") {
    SweepAxis ax{SweepParameter::omega_over_g, 0.01, 0.2, 20};
    CHECK(ax.value(0) == 0.01);
    CHECK(ax.value(19) == 0.2);
    CHECK(ax.value(1) == doctest::Approx(0.02));
    CHECK(parse_parameter("kappa_f/lambda") == SweepParameter::kappa_f_over_lambda);
    CHECK(parameter_name(SweepParameter::gamma_over_g) == "Gamma/g");

    SweepGrid g;
    g.axis1 = {SweepParameter::lambda_over_g, 0.1, 2.0, 3};
    g.axis2 = {SweepParameter::kappa_f_over_lambda, 0.0, 0.1, 3};
    const QstParameters p = apply_point(QstParameters{}, g, 0.5, 0.1);
    CHECK(p.lambda == 0.5);
    CHECK(p.noise.fiber_decay == doctest::Approx(0.05));
    g.axis2.parameter = SweepParameter::lambda_over_g;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.axis2 = {SweepParameter::omega_over_g, 0.0, 0.1, 1};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("sweeps are deterministic across worker counts") {
    const SweepGrid g = small_grid();
    SweepOptions one, three;
    one.workers = 1;
    three.workers = 3;
    const std::vector<std::pair<std::string, std::string>> echo{{"couplings.omega", "0.1"}};
    std::ostringstream a, b;
    write_sweep_csv(a, run_sweep(g, QstParameters{}, one), echo);
    write_sweep_csv(b, run_sweep(g, QstParameters{}, three), echo);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("# zenoqst sweep v1\n# couplings.omega = 0.1\nkappa/g,kappa_f/lambda,fidelity,error\n0,0,0.99543", 0) == 0);
    std::istringstream lines(a.str());
    std::string line;
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == 10);
}

TEST_CASE("failed sweep points are recorded, not fatal") {
    SweepGrid g;
    g.axis1 = {SweepParameter::omega_over_g, 0.1, 0.5, 2};
    g.axis2 = {SweepParameter::lambda_over_g, 0.0, 1.0, 2};
    SweepOptions o;
    o.workers = 1;
    const SweepResult r = run_sweep(g, QstParameters{}, o);
    CHECK(r.at(0, 0).error == "invalid");
    CHECK_FALSE(r.at(0, 0).fidelity.has_value());
    CHECK(r.at(0, 1).fidelity.has_value());
    o.strict = true;
    const SweepResult s = run_sweep(g, QstParameters{}, o);
    CHECK(s.at(1, 1).error == "zeno_ratio");
    CHECK(s.at(0, 1).fidelity.has_value());
    std::ostringstream os;
    write_sweep_csv(os, r, {});
    CHECK(os.str().find("\n0.1,0,,invalid\n") != std::string::npos);
}

TEST_CASE("validity gates") {
    ExperimentConfig c = parse_config("[couplings]\nomega = 0.3\n", "t");
    CHECK(validity_warnings(c, {}).size() == 1);
    CHECK_THROWS_AS(validity_warnings(c, {true, -1}), ValidityError);
    c = parse_config("[system]\nfiber_length_m = 5\nfiber_bandwidth = 1e9\n", "t");
    CHECK(validity_warnings(c, {}).size() == 1);
    CHECK_THROWS_AS(cmd_qst(c, {true, -1}), ValidityError);
    CHECK(validity_warnings(load_preset("cesium"), {true, -1}).empty());
}

TEST_CASE("command reports") {
    const RunReport q = cmd_qst(parse_config("", "t"));
    REQUIRE(q.fidelity);
    CHECK(*q.fidelity >= 0.99);
    CHECK(q.segment_fidelities.size() == 1);

    std::ostringstream js;
    write_report_json(js, q);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["command"] == "qst");
    CHECK(j["fidelity"].get<double>() == doctest::Approx(*q.fidelity));
    CHECK(j["values"]["relative_phase"].is_null());

    std::ostringstream txt;
    write_report_text(txt, q);
    CHECK(txt.str().find("fidelity: 0.99543") != std::string::npos);

    TimeSeries ts;
    cmd_qst(load_preset("qst"), {}, &ts);
    CHECK(ts.labels.size() == 7);
    CHECK(ts.times.size() == 21);
    CHECK(ts.populations.front()[0] == doctest::Approx(0.5));
    CHECK(ts.populations.back()[6] == doctest::Approx(0.5).epsilon(0.01));

    const RunReport s = cmd_qss(load_preset("qss"));
    const RunReport n = cmd_network(load_preset("network"));
    REQUIRE(s.values.size() == n.values.size());
    for (std::size_t k = 0; k < 3; ++k) CHECK(s.values[k].second == doctest::Approx(n.values[k].second).epsilon(1e-9));
    CHECK(s.values[2].first == "helper_fidelity.0");
    CHECK(s.values[2].second >= 0.999);

    CHECK_THROWS_AS(cmd_sweep(parse_config("", "t")), ConfigError);
}

TEST_CASE("Zeno summary") {
    const ZenoSummary z = cmd_zeno(parse_config("", "t"));
    CHECK(z.decomposition.ranks == std::vector<std::size_t>{1, 1, 3, 1, 1});
    CHECK(z.max_eigenvalue_error <= 1e-10);
    CHECK(z.dark_subspace_angle <= 1e-8);
    CHECK(std::abs(z.coupling_receiver.real()) == doctest::Approx(0.05774).epsilon(1e-4));
    std::ostringstream os;
    write_zeno_text(os, z);
    CHECK(os.str().find("0.05774") != std::string::npos);

    std::stringstream ex;
    write_decomposition(ex, z);
    CHECK(ex.str().find("# projector 2 eta=") != std::string::npos);
    CHECK(ex.str().find("# effective") != std::string::npos);
}
