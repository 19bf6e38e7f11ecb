#include "zenoqst/cli/sweep.hpp"

#include "zenoqst/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace zenoqst::cli {

namespace {

constexpr std::pair<SweepParameter, std::string_view> kNames[] = {
    {SweepParameter::lambda_over_g, "lambda/g"},     {SweepParameter::omega_over_g, "Omega/g"},
    {SweepParameter::kappa_over_g, "kappa/g"},       {SweepParameter::gamma_over_g, "Gamma/g"},
    {SweepParameter::kappa_f_over_lambda, "kappa_f/lambda"},
};

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string_view parameter_name(SweepParameter p) {
    for (const auto& [param, name] : kNames)
        if (param == p) return name;
    return "?";
}

std::optional<SweepParameter> parse_parameter(std::string_view name) {
    for (const auto& [param, n] : kNames)
        if (n == name) return param;
    return std::nullopt;
}

double SweepAxis::value(int i) const {
    if (i == points - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
}

void SweepGrid::validate() const {
    for (const SweepAxis* ax : {&axis1, &axis2}) {
        if (ax->points < 2) throw std::invalid_argument("sweep axis needs at least 2 points");
        if (!(ax->min >= 0.0) || !(ax->max >= ax->min)) throw std::invalid_argument("sweep axis needs 0 <= min <= max");
    }
    if (axis1.parameter == axis2.parameter) throw std::invalid_argument("sweep axes must name different parameters");
}

QstParameters apply_point(const QstParameters& base, const SweepGrid& grid, double x1, double x2) {
    QstParameters p = base;
    std::optional<double> kappa_f_ratio;
    for (const auto& [param, x] : {std::pair{grid.axis1.parameter, x1}, std::pair{grid.axis2.parameter, x2}}) {
        switch (param) {
            case SweepParameter::lambda_over_g: p.lambda = x * p.g; break;
            case SweepParameter::omega_over_g: p.omega = x * p.g; break;
            case SweepParameter::kappa_over_g: p.noise.cavity_decay = x * p.g; break;
            case SweepParameter::gamma_over_g: p.noise.spontaneous_emission = x * p.g; break;
            case SweepParameter::kappa_f_over_lambda: kappa_f_ratio = x; break;
        }
    }
    if (kappa_f_ratio) p.noise.fiber_decay = *kappa_f_ratio * p.lambda;
    return p;
}

SweepResult run_sweep(const SweepGrid& grid, const QstParameters& base, const SweepOptions& options) {
    grid.validate();
    SweepResult result{grid, {}};
    const std::size_t n1 = static_cast<std::size_t>(grid.axis1.points);
    const std::size_t n2 = static_cast<std::size_t>(grid.axis2.points);
    result.points.resize(n1 * n2);
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        result.points[k].x1 = grid.axis1.value(static_cast<int>(k / n2));
        result.points[k].x2 = grid.axis2.value(static_cast<int>(k % n2));
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < result.points.size(); k = next++) {
            SweepPoint& pt = result.points[k];
            const QstParameters p = apply_point(base, grid, pt.x1, pt.x2);
            if (options.strict && p.omega / std::min(p.g, p.lambda) > options.zeno_threshold) {
                pt.error = "zeno_ratio";
                continue;
            }
            try {
                const RunResult r = run_qst(p, Qubit::excited(), options.run);
                pt.fidelity = r.fidelity();
                pt.diagnostics = r.diagnostics;
            } catch (const NumericalError&) {
                pt.error = "numerical";
            } catch (const ValidityError&) {
                pt.error = "validity";
            } catch (const std::exception&) {
                pt.error = "invalid";
            }
        }
    };

    unsigned workers = options.workers > 0 ? static_cast<unsigned>(options.workers)
                                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, result.points.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result,
                     const std::vector<std::pair<std::string, std::string>>& config_echo) {
    os << "# zenoqst sweep v1\n";
    for (const auto& [key, value] : config_echo) os << "# " << key << " = " << value << '\n';
    os << parameter_name(result.grid.axis1.parameter) << ',' << parameter_name(result.grid.axis2.parameter)
       << ",fidelity,error\n";
    for (const auto& pt : result.points) {
        os << fmt12(pt.x1) << ',' << fmt12(pt.x2) << ',';
        if (pt.fidelity) os << fmt12(*pt.fidelity);
        os << ',' << pt.error << '\n';
    }
}

}  // namespace zenoqst::cli
