#include "yule/verify.hpp"

#include "yule/numeric.hpp"

#include "json.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace yule {

namespace {

using ordered_json = nlohmann::ordered_json;

// Derived per-replicate columns used by the estimators.
double col_u(const ReplicateSample& s) { return s.u; }
double col_tau(const ReplicateSample& s) { return s.tau; }
double col_cond_tau(const ReplicateSample& s) { return s.cond_tau; }
double col_shared(const ReplicateSample& s) { return s.u - s.tau; }
double col_cond_shared(const ReplicateSample& s) { return s.u - s.cond_tau; }
double col_resid(const ReplicateSample& s) { return s.tau - s.cond_tau; }

template <class F>
EstimatorResult mean_estimator(std::span<const ReplicateSample> samples, F&& f) {
    const size_t R = samples.size();
    KahanSum total;
    for (const auto& s : samples) total.add(f(s));
    const double mean = total.value() / double(R);
    KahanSum sq;
    for (const auto& s : samples) {
        const double d = f(s) - mean;
        sq.add(d * d);
    }
    const double var = sq.value() / double(R - 1);
    EstimatorResult r;
    r.defined = true;
    r.estimate = mean;
    r.std_error = std::sqrt(var / double(R));
    return r;
}

// Centered-column sufficient statistics shared by the jackknife estimators.
struct PairSums {
    std::vector<double> x, y;
    double sxx = 0, syy = 0, sxy = 0;
};

template <class FX, class FY>
PairSums center_columns(std::span<const ReplicateSample> samples, FX&& fx,
                        FY&& fy) {
    const size_t R = samples.size();
    PairSums p;
    p.x.resize(R);
    p.y.resize(R);
    KahanSum mx, my;
    for (size_t i = 0; i < R; ++i) {
        p.x[i] = fx(samples[i]);
        p.y[i] = fy(samples[i]);
        mx.add(p.x[i]);
        my.add(p.y[i]);
    }
    const double xbar = mx.value() / double(R);
    const double ybar = my.value() / double(R);
    KahanSum sxx, syy, sxy;
    for (size_t i = 0; i < R; ++i) {
        p.x[i] -= xbar;
        p.y[i] -= ybar;
        sxx.add(p.x[i] * p.x[i]);
        syy.add(p.y[i] * p.y[i]);
        sxy.add(p.x[i] * p.y[i]);
    }
    p.sxx = sxx.value();
    p.syy = syy.value();
    p.sxy = sxy.value();
    return p;
}

// Delete-1 jackknife standard error from leave-one-out estimates theta_i
// around the full estimate: sqrt((R-1)/R * sum (delta_i - mean delta)^2).
template <class Theta>
double jackknife_se(size_t R, double full, Theta&& leave_one_out) {
    KahanSum d1, d2;
    for (size_t i = 0; i < R; ++i) {
        const double delta = leave_one_out(i) - full;
        d1.add(delta);
        d2.add(delta * delta);
    }
    const double spread = d2.value() - d1.value() * d1.value() / double(R);
    return std::sqrt(std::max(0.0, (double(R) - 1.0) / double(R) * spread));
}

template <class FX>
EstimatorResult variance_estimator(std::span<const ReplicateSample> samples,
                                   FX&& fx) {
    const size_t R = samples.size();
    auto p = center_columns(samples, fx, fx);
    const double full = p.sxx / double(R - 1);
    // Leaving out i shifts the centered sum of squares by x_i^2 * R/(R-1).
    const double shrink = double(R) / (double(R) - 1.0);
    EstimatorResult r;
    r.defined = true;
    r.estimate = full;
    r.std_error = jackknife_se(R, full, [&](size_t i) {
        return (p.sxx - p.x[i] * p.x[i] * shrink) / (double(R) - 2.0);
    });
    return r;
}

template <class FX, class FY>
EstimatorResult covariance_estimator(std::span<const ReplicateSample> samples,
                                     FX&& fx, FY&& fy) {
    const size_t R = samples.size();
    auto p = center_columns(samples, fx, fy);
    const double full = p.sxy / double(R - 1);
    const double shrink = double(R) / (double(R) - 1.0);
    EstimatorResult r;
    r.defined = true;
    r.estimate = full;
    r.std_error = jackknife_se(R, full, [&](size_t i) {
        return (p.sxy - p.x[i] * p.y[i] * shrink) / (double(R) - 2.0);
    });
    return r;
}

template <class FX, class FY>
EstimatorResult correlation_estimator(std::span<const ReplicateSample> samples,
                                      FX&& fx, FY&& fy) {
    const size_t R = samples.size();
    auto p = center_columns(samples, fx, fy);
    EstimatorResult r;
    if (!(p.sxx > 0.0) || !(p.syy > 0.0)) return r; // degenerate column
    const double full = p.sxy / std::sqrt(p.sxx * p.syy);
    const double shrink = double(R) / (double(R) - 1.0);
    bool ok = true;
    const double se = jackknife_se(R, full, [&](size_t i) {
        const double sxx = p.sxx - p.x[i] * p.x[i] * shrink;
        const double syy = p.syy - p.y[i] * p.y[i] * shrink;
        const double sxy = p.sxy - p.x[i] * p.y[i] * shrink;
        if (!(sxx > 0.0) || !(syy > 0.0)) {
            ok = false;
            return full;
        }
        return sxy / std::sqrt(sxx * syy);
    });
    if (!ok) return r;
    r.defined = true;
    r.estimate = full;
    r.std_error = se;
    return r;
}

std::string csv_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

ordered_json json_field(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

std::string_view status_name(RowStatus s) {
    switch (s) {
        case RowStatus::pass: return "true";
        case RowStatus::fail: return "false";
        default: return "skipped";
    }
}

} // namespace

std::vector<int> default_grid() {
    return {2,   3,   4,    5,    6,    7,    8,    9,    10,   25,  100,
            250, 500, 750,  1000, 1250, 1500, 1750, 2000, 2250, 2500};
}

long replicates_for(const ExperimentConfig& config, int n) {
    if (config.replicates_override > 0) return config.replicates_override;
    return n <= 100 ? config.replicates_small : config.replicates_large;
}

EstimatorResult estimate_statistic(StatisticId id,
                                   std::span<const ReplicateSample> samples) {
    if (samples.size() < 3)
        throw std::domain_error("estimators need at least 3 replicates");
    switch (id) {
        case StatisticId::e_u:
            return mean_estimator(samples, col_u);
        case StatisticId::e_u_sq:
            return mean_estimator(samples,
                                  [](const ReplicateSample& s) { return s.u * s.u; });
        case StatisticId::e_tau:
            return mean_estimator(samples, col_tau);
        case StatisticId::e_tau_sq:
            return mean_estimator(
                samples, [](const ReplicateSample& s) { return s.tau * s.tau; });
        case StatisticId::e_shared:
            return mean_estimator(samples, col_shared);
        case StatisticId::e_u_shared:
            return mean_estimator(samples, [](const ReplicateSample& s) {
                return s.u * col_shared(s);
            });
        case StatisticId::e_u_shared_cond:
            return mean_estimator(samples, [](const ReplicateSample& s) {
                return s.u * col_cond_shared(s);
            });
        case StatisticId::e_shared_sq:
            return mean_estimator(samples, [](const ReplicateSample& s) {
                const double v = col_shared(s);
                return v * v;
            });
        case StatisticId::e_u_tau:
            return mean_estimator(
                samples, [](const ReplicateSample& s) { return s.u * s.tau; });
        case StatisticId::e_cond_shared_sq:
            return mean_estimator(samples, [](const ReplicateSample& s) {
                const double v = col_cond_shared(s);
                return v * v;
            });
        case StatisticId::e_cond_tau_sq:
            return mean_estimator(samples, [](const ReplicateSample& s) {
                return s.cond_tau * s.cond_tau;
            });
        case StatisticId::e_tau_resid_sq:
            return mean_estimator(samples, [](const ReplicateSample& s) {
                const double v = col_resid(s);
                return v * v;
            });
        case StatisticId::var_tau:
            return variance_estimator(samples, col_tau);
        case StatisticId::var_cond_tau:
            return variance_estimator(samples, col_cond_tau);
        case StatisticId::var_shared:
            return variance_estimator(samples, col_shared);
        case StatisticId::var_cond_shared:
            return variance_estimator(samples, col_cond_shared);
        case StatisticId::cov_tau_cond_tau:
            return covariance_estimator(samples, col_tau, col_cond_tau);
        case StatisticId::corr_tau_cond_tau:
            return correlation_estimator(samples, col_tau, col_cond_tau);
        case StatisticId::cov_shared_cond_shared:
            return covariance_estimator(samples, col_shared, col_cond_shared);
        case StatisticId::corr_shared_cond_shared:
            return correlation_estimator(samples, col_shared, col_cond_shared);
        case StatisticId::cov_shared_tau_resid:
            return covariance_estimator(samples, col_shared, col_resid);
        case StatisticId::corr_shared_tau_resid:
            return correlation_estimator(samples, col_shared, col_resid);
    }
    throw std::invalid_argument("unknown statistic");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    ExperimentReport report;
    report.config = config;
    std::vector<ReplicateSample> samples;
    for (const int n : config.grid) {
        const long R = replicates_for(config, n);
        samples.assign(static_cast<size_t>(R), ReplicateSample{});
        if (config.threads == 1)
            simulate_batch_serial(n, config.seed, samples);
        else
            simulate_batch_parallel(n, config.seed, samples, config.threads);
        for (const StatisticId id : all_statistics()) {
            VerificationRow row;
            row.n = n;
            row.id = id;
            row.replicates = R;
            row.seed = config.seed;
            if (auto theory = statistic(id, n, Mode::rational))
                row.theory = theory->as_double();
            const auto est = estimate_statistic(id, samples);
            if (est.defined) {
                row.estimate = est.estimate;
                row.std_error = est.std_error;
            }
            if (!row.theory || !row.estimate) {
                row.status = RowStatus::skipped;
                report.rows.push_back(row);
                continue;
            }
            const double diff = *row.estimate - *row.theory;
            // Rows where theory and estimate agree to machine precision are
            // exact by construction (e.g. identically-zero residuals); a
            // zero standard error must not turn them into 0/0.
            if (std::abs(diff) <=
                1e-12 * std::max(1.0, std::abs(*row.theory))) {
                row.z = 0.0;
                row.status = RowStatus::pass;
            } else if (*row.std_error > 0.0) {
                row.z = diff / *row.std_error;
                row.status = std::abs(*row.z) <= config.z_threshold
                                 ? RowStatus::pass
                                 : RowStatus::fail;
            } else {
                row.z = std::numeric_limits<double>::infinity();
                row.status = RowStatus::fail;
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

double pass_fraction(const ExperimentReport& report) {
    long pass = 0, checked = 0;
    for (const auto& row : report.rows) {
        if (row.status == RowStatus::skipped) continue;
        ++checked;
        if (row.status == RowStatus::pass) ++pass;
    }
    return checked == 0 ? 1.0 : double(pass) / double(checked);
}

std::string render_csv(const ExperimentReport& report) {
    std::string out = "n,statistic,theory,estimate,std_error,z,replicates,seed,pass\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += statistic_name(row.id);
        out += ',';
        out += csv_field(row.theory);
        out += ',';
        out += csv_field(row.estimate);
        out += ',';
        out += csv_field(row.std_error);
        out += ',';
        out += csv_field(row.z);
        out += ',';
        out += std::to_string(row.replicates);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += status_name(row.status);
        out += '\n';
    }
    return out;
}

std::string render_json(const ExperimentReport& report) {
    ordered_json doc;
    doc["schema"] = "yule-verify-report/1";
    ordered_json cfg;
    cfg["grid"] = report.config.grid;
    cfg["seed"] = report.config.seed;
    cfg["z_threshold"] = report.config.z_threshold;
    cfg["replicates_small"] = report.config.replicates_small;
    cfg["replicates_large"] = report.config.replicates_large;
    cfg["replicates_override"] = report.config.replicates_override;
    cfg["generator"] = "splitmix64-counter";
    doc["config"] = cfg;
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["n"] = row.n;
        r["statistic"] = statistic_name(row.id);
        r["theory"] = json_field(row.theory);
        r["estimate"] = json_field(row.estimate);
        r["std_error"] = json_field(row.std_error);
        r["z"] = json_field(row.z);
        r["replicates"] = row.replicates;
        r["seed"] = row.seed;
        r["pass"] = status_name(row.status);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string render_plot_script(const std::string& csv_name) {
    std::string stem = csv_name;
    if (const auto dot = stem.rfind('.'); dot != std::string::npos)
        stem.erase(dot);
    std::string s;
    s += "# Registry estimates against closed forms, from a verification CSV.\n";
    s += "# Column layout: n,statistic,theory,estimate,std_error,z,...\n";
    s += "set datafile separator comma\n";
    s += "csv = \"" + csv_name + "\"\n";
    s += "set terminal pngcairo size 1500,540\n";
    s += "set output \"" + stem + ".png\"\n";
    s += "pick(name, col) = (strcol(2) eq name) ? column(col) : 1/0\n";
    s += "set multiplot layout 1,3\n";
    s += "set logscale x\n";
    s += "set xlabel \"tips n\"\n";
    s += "set key bottom right font \",8\"\n";
    s += "set title \"pair coalescent time and shared path: means\"\n";
    s += "plot \\\n";
    s += "  csv every ::1 using 1:(pick(\"e_tau\",3)) with lines lc 1 title \"E[tau] closed form\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"e_tau\",4)):(pick(\"e_tau\",5)) with yerrorbars lc 1 pt 7 ps 0.4 title \"E[tau] estimate\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"e_shared\",3)) with lines lc 2 title \"E[U-tau] closed form\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"e_shared\",4)):(pick(\"e_shared\",5)) with yerrorbars lc 2 pt 7 ps 0.4 title \"E[U-tau] estimate\"\n";
    s += "set title \"variances: pair time and shared path, raw and conditional\"\n";
    s += "plot \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_tau\",3)) with lines lc 1 title \"Var tau\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_tau\",4)):(pick(\"var_tau\",5)) with yerrorbars lc 1 pt 7 ps 0.4 notitle, \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_cond_tau\",3)) with lines lc 2 title \"Var E[tau|tree]\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_cond_tau\",4)):(pick(\"var_cond_tau\",5)) with yerrorbars lc 2 pt 7 ps 0.4 notitle, \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_shared\",3)) with lines lc 3 title \"Var (U-tau)\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_shared\",4)):(pick(\"var_shared\",5)) with yerrorbars lc 3 pt 7 ps 0.4 notitle, \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_cond_shared\",3)) with lines lc 4 title \"Var E[U-tau|tree]\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"var_cond_shared\",4)):(pick(\"var_cond_shared\",5)) with yerrorbars lc 4 pt 7 ps 0.4 notitle\n";
    s += "set title \"correlations with the conditional components\"\n";
    s += "set yrange [-1:1]\n";
    s += "plot \\\n";
    s += "  csv every ::1 using 1:(pick(\"corr_tau_cond_tau\",3)) with lines lc 1 title \"corr(tau, E[tau|tree])\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"corr_tau_cond_tau\",4)):(pick(\"corr_tau_cond_tau\",5)) with yerrorbars lc 1 pt 7 ps 0.4 notitle, \\\n";
    s += "  csv every ::1 using 1:(pick(\"corr_shared_cond_shared\",3)) with lines lc 2 title \"corr(U-tau, E[U-tau|tree])\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"corr_shared_cond_shared\",4)):(pick(\"corr_shared_cond_shared\",5)) with yerrorbars lc 2 pt 7 ps 0.4 notitle, \\\n";
    s += "  csv every ::1 using 1:(pick(\"corr_shared_tau_resid\",3)) with lines lc 3 title \"corr(U-tau, tau-E[tau|tree])\", \\\n";
    s += "  csv every ::1 using 1:(pick(\"corr_shared_tau_resid\",4)):(pick(\"corr_shared_tau_resid\",5)) with yerrorbars lc 3 pt 7 ps 0.4 notitle\n";
    s += "unset multiplot\n";
    return s;
}

std::string_view report_schema() {
    static constexpr std::string_view schema = R"JSON({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "$id": "yule-verify-report/1",
  "title": "Monte Carlo verification report",
  "type": "object",
  "required": ["schema", "config", "rows"],
  "properties": {
    "schema": {"const": "yule-verify-report/1"},
    "config": {
      "type": "object",
      "required": ["grid", "seed", "z_threshold", "replicates_small",
                   "replicates_large", "generator"],
      "properties": {
        "grid": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "seed": {"type": "integer", "minimum": 0},
        "z_threshold": {"type": "number", "exclusiveMinimum": 0},
        "replicates_small": {"type": "integer", "minimum": 3},
        "replicates_large": {"type": "integer", "minimum": 3},
        "replicates_override": {"type": "integer", "minimum": 0},
        "generator": {"type": "string"}
      }
    },
    "rows": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["n", "statistic", "theory", "estimate", "std_error",
                     "z", "replicates", "seed", "pass"],
        "properties": {
          "n": {"type": "integer", "minimum": 2},
          "statistic": {"type": "string"},
          "theory": {"type": ["number", "null"]},
          "estimate": {"type": ["number", "null"]},
          "std_error": {"type": ["number", "null"]},
          "z": {"type": ["number", "null"]},
          "replicates": {"type": "integer", "minimum": 3},
          "seed": {"type": "integer", "minimum": 0},
          "pass": {"enum": ["true", "false", "skipped"]}
        }
      }
    }
  }
})JSON";
    return schema;
}

} // namespace yule
