// Command line front end: exact statistics, raw moments, partition
// coefficients, tree simulation, Monte Carlo verification, and the
// independent oracle cross-check.

#include "CLI11.hpp"

#include "yule/moments.hpp"
#include "yule/numeric.hpp"
#include "yule/oracle.hpp"
#include "yule/partitions.hpp"
#include "yule/sim.hpp"
#include "yule/statistics.hpp"
#include "yule/verify.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

fs::path resolve_out(const std::string& out) {
    fs::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("YULE_OUT_DIR"))
            p = fs::path(dir) / p;
    }
    return p;
}

void emit(const std::string& content, const std::string& out) {
    if (out.empty()) {
        std::cout << content;
        return;
    }
    const fs::path path = resolve_out(out);
    if (!path.parent_path().empty())
        fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path.string());
    f << content;
}

yule::Mode resolve_mode(const std::string& flag, int n) {
    if (flag == "rational") return yule::Mode::rational;
    if (flag == "float") return yule::Mode::real;
    // auto: exact arithmetic is the default at moderate sizes, double
    // beyond, where exact harmonic numbers get bulky.
    return n <= 500 ? yule::Mode::rational : yule::Mode::real;
}

std::string value_text(const std::optional<yule::Value>& v) {
    if (!v) return "undefined";
    if (v->kind == yule::Value::Kind::rational)
        return yule::format_rational(v->exact);
    return yule::format_double(v->approx);
}

std::string value_kind(const std::optional<yule::Value>& v) {
    if (!v) return "undefined";
    return v->kind == yule::Value::Kind::rational ? "rational" : "real";
}

std::string partition_display(const yule::PartitionVec& k) {
    std::string s;
    for (size_t i = 0; i < k.size(); ++i) {
        for (int c = 0; c < k[i]; ++c) {
            if (!s.empty()) s += '+';
            s += std::to_string(i + 1);
        }
    }
    return s.empty() ? "0" : s;
}

int run_exact(int n, const std::string& stat, const std::string& mode_flag,
              const std::string& format, const std::string& out) {
    const yule::Mode mode = resolve_mode(mode_flag, n);
    std::vector<yule::StatisticId> ids;
    if (stat == "all") {
        auto span = yule::all_statistics();
        ids.assign(span.begin(), span.end());
    } else {
        const auto id = yule::statistic_from_name(stat);
        if (!id) throw std::invalid_argument("unknown statistic: " + stat);
        ids.push_back(*id);
    }
    std::string content;
    if (format == "json") {
        ordered_json doc;
        doc["n"] = n;
        doc["mode"] = mode == yule::Mode::rational ? "rational" : "float";
        ordered_json rows = ordered_json::array();
        for (const auto id : ids) {
            const auto v = yule::statistic(id, n, mode);
            ordered_json r;
            r["statistic"] = yule::statistic_name(id);
            r["value"] = v ? ordered_json(value_text(v)) : ordered_json(nullptr);
            r["approx"] = v ? ordered_json(v->as_double()) : ordered_json(nullptr);
            r["kind"] = value_kind(v);
            rows.push_back(std::move(r));
        }
        doc["values"] = std::move(rows);
        content = doc.dump(2) + "\n";
    } else if (format == "csv") {
        content = "statistic,value,kind\n";
        for (const auto id : ids) {
            const auto v = yule::statistic(id, n, mode);
            content += std::string(yule::statistic_name(id)) + "," +
                       (v ? value_text(v) : "") + "," + value_kind(v) + "\n";
        }
    } else {
        for (const auto id : ids) {
            const auto v = yule::statistic(id, n, mode);
            content += std::string(yule::statistic_name(id)) + " = " +
                       value_text(v) + "\n";
        }
    }
    emit(content, out);
    return 0;
}

int run_moment(int n, int m, const std::string& kind_flag,
               const std::string& mode_flag, const std::string& format,
               const std::string& out) {
    yule::MomentKind kind;
    if (kind_flag == "height")
        kind = yule::MomentKind::height;
    else if (kind_flag == "tau")
        kind = yule::MomentKind::tau;
    else if (kind_flag == "shared")
        kind = yule::MomentKind::shared;
    else
        throw std::invalid_argument("unknown moment kind: " + kind_flag);
    const yule::Mode mode = resolve_mode(mode_flag, n);
    const yule::Value v = yule::moment(kind, n, m, mode);
    std::string content;
    if (format == "json") {
        ordered_json doc;
        doc["kind"] = kind_flag;
        doc["n"] = n;
        doc["m"] = m;
        doc["value"] = value_text(v);
        doc["approx"] = v.as_double();
        content = doc.dump(2) + "\n";
    } else if (format == "csv") {
        content = "kind,n,m,value\n" + kind_flag + "," + std::to_string(n) +
                  "," + std::to_string(m) + "," + value_text(v) + "\n";
    } else {
        content = value_text(v) + "\n";
    }
    emit(content, out);
    return 0;
}

int run_partitions(int m, const std::string& format, const std::string& out) {
    const auto parts = yule::partitions(m);
    std::string content;
    if (format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& k : parts) {
            ordered_json r;
            r["partition"] = partition_display(k);
            r["multiplicities"] = k;
            r["coefficient"] = yule::coefficient(k).get_str();
            rows.push_back(std::move(r));
        }
        ordered_json doc;
        doc["m"] = m;
        doc["partitions"] = std::move(rows);
        content = doc.dump(2) + "\n";
    } else if (format == "csv") {
        content = "partition,coefficient\n";
        for (const auto& k : parts)
            content += partition_display(k) + "," +
                       yule::coefficient(k).get_str() + "\n";
    } else {
        for (const auto& k : parts)
            content += partition_display(k) + " " +
                       yule::coefficient(k).get_str() + "\n";
    }
    emit(content, out);
    return 0;
}

int run_simulate(int n, long replicates, std::uint64_t seed, int threads,
                 bool newick_only, const std::string& format,
                 const std::string& out) {
    if (replicates < 1) throw std::domain_error("need at least one replicate");
    std::string content;
    if (newick_only) {
        yule::YuleTree tree;
        for (long r = 0; r < replicates; ++r) {
            auto g = yule::RngStream::derive(seed, yule::kReplicateStreamTag,
                                             std::uint64_t(n), std::uint64_t(r));
            yule::generate_tree_into(n, g, tree);
            content += yule::newick(tree) + "\n";
        }
        emit(content, out);
        return 0;
    }
    std::vector<yule::ReplicateSample> samples(static_cast<size_t>(replicates));
    if (threads == 1)
        yule::simulate_batch_serial(n, seed, samples);
    else
        yule::simulate_batch_parallel(n, seed, samples, threads);
    if (format == "json") {
        ordered_json doc;
        doc["n"] = n;
        doc["seed"] = seed;
        doc["replicates"] = replicates;
        ordered_json rows = ordered_json::array();
        for (size_t r = 0; r < samples.size(); ++r) {
            ordered_json row;
            row["replicate"] = r;
            row["u"] = samples[r].u;
            row["tau"] = samples[r].tau;
            row["cond_tau"] = samples[r].cond_tau;
            rows.push_back(std::move(row));
        }
        doc["samples"] = std::move(rows);
        content = doc.dump(2) + "\n";
    } else {
        content = "replicate,u,tau,cond_tau\n";
        for (size_t r = 0; r < samples.size(); ++r)
            content += std::to_string(r) + "," +
                       yule::format_double(samples[r].u) + "," +
                       yule::format_double(samples[r].tau) + "," +
                       yule::format_double(samples[r].cond_tau) + "\n";
    }
    emit(content, out);
    return 0;
}

int run_verify(const yule::ExperimentConfig& config, double min_pass,
               const std::string& format, const std::string& out) {
    const auto report = yule::run_experiment(config);
    const std::string content = format == "json" ? yule::render_json(report)
                                                 : yule::render_csv(report);
    long checked = 0, passed = 0, skipped = 0;
    for (const auto& row : report.rows) {
        if (row.status == yule::RowStatus::skipped) {
            ++skipped;
            continue;
        }
        ++checked;
        if (row.status == yule::RowStatus::pass) ++passed;
    }
    const double fraction = yule::pass_fraction(report);
    const std::string summary =
        "rows=" + std::to_string(report.rows.size()) +
        " checked=" + std::to_string(checked) +
        " passed=" + std::to_string(passed) +
        " skipped=" + std::to_string(skipped) +
        " pass_rate=" + yule::format_double(fraction) + "\n";
    if (out.empty()) {
        std::cout << content;
        std::cerr << summary;
    } else {
        emit(content, out);
        if (format != "json") {
            fs::path script = resolve_out(out);
            const std::string csv_name = script.filename().string();
            script.replace_extension("gnuplot");
            std::ofstream f(script, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot open output file: " +
                                         script.string());
            f << yule::render_plot_script(csv_name);
        }
        std::cout << summary;
    }
    return fraction >= min_pass ? 0 : 1;
}

int run_oracle(int n, const std::string& stat, const std::string& format,
               const std::string& out) {
    std::vector<yule::StatisticId> ids;
    if (stat == "all") {
        for (const auto id : yule::all_statistics())
            if (yule::oracle_supports(id)) ids.push_back(id);
    } else {
        const auto id = yule::statistic_from_name(stat);
        if (!id) throw std::invalid_argument("unknown statistic: " + stat);
        if (!yule::oracle_supports(*id))
            throw std::invalid_argument("statistic has no oracle route: " + stat);
        ids.push_back(*id);
    }
    bool all_match = true;
    std::string content;
    ordered_json rows = ordered_json::array();
    if (format == "csv") content = "statistic,registry,oracle,match\n";
    for (const auto id : ids) {
        const auto registry = yule::statistic_exact(id, n);
        const yule::Rat oracle = yule::oracle_statistic(id, n);
        const bool match = registry && *registry == oracle;
        all_match = all_match && match;
        const std::string reg_text =
            registry ? yule::format_rational(*registry) : "undefined";
        const std::string orc_text = yule::format_rational(oracle);
        if (format == "json") {
            ordered_json r;
            r["statistic"] = yule::statistic_name(id);
            r["registry"] = reg_text;
            r["oracle"] = orc_text;
            r["match"] = match;
            rows.push_back(std::move(r));
        } else if (format == "csv") {
            content += std::string(yule::statistic_name(id)) + "," + reg_text +
                       "," + orc_text + "," + (match ? "true" : "false") + "\n";
        } else {
            content += std::string(yule::statistic_name(id)) +
                       (match ? " match " : " MISMATCH ") + reg_text +
                       (match ? "" : " vs " + orc_text) + "\n";
        }
    }
    if (format == "json") {
        ordered_json doc;
        doc["n"] = n;
        doc["all_match"] = all_match;
        doc["rows"] = std::move(rows);
        content = doc.dump(2) + "\n";
    }
    emit(content, out);
    return all_match ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact moments, variances and correlations of pure-birth "
                 "tree heights and random-pair coalescent times, with a "
                 "seeded Monte Carlo verifier and an exhaustive small-n "
                 "oracle"};
    app.require_subcommand(1);

    const auto mode_values = CLI::IsMember({"auto", "rational", "float"});
    const auto format_values = CLI::IsMember({"text", "csv", "json"});

    // exact
    auto* exact_cmd =
        app.add_subcommand("exact", "closed-form statistics at one n");
    int exact_n = 2;
    std::string exact_stat = "all", exact_mode = "auto", exact_format = "text",
                exact_out;
    exact_cmd->add_option("--n", exact_n, "number of tips")->required();
    exact_cmd->add_option("--stat", exact_stat,
                          "statistic name or 'all' (default all)");
    exact_cmd->add_option("--mode", exact_mode, "arithmetic mode")
        ->check(mode_values);
    exact_cmd->add_option("--format", exact_format, "output format")
        ->check(format_values);
    exact_cmd->add_option("--out", exact_out, "write to file instead of stdout");

    // moment
    auto* moment_cmd =
        app.add_subcommand("moment", "raw moment of height, pair time or shared path");
    int moment_n = 2, moment_m = 1;
    std::string moment_kind = "height", moment_mode = "auto",
                moment_format = "text", moment_out;
    moment_cmd->add_option("--n", moment_n, "number of tips")->required();
    moment_cmd->add_option("--m", moment_m, "moment order")->required();
    moment_cmd->add_option("--kind", moment_kind, "height | tau | shared")
        ->check(CLI::IsMember({"height", "tau", "shared"}));
    moment_cmd->add_option("--mode", moment_mode, "arithmetic mode")
        ->check(mode_values);
    moment_cmd->add_option("--format", moment_format, "output format")
        ->check(format_values);
    moment_cmd->add_option("--out", moment_out, "write to file instead of stdout");

    // partitions
    auto* partitions_cmd = app.add_subcommand(
        "partitions", "integer partitions of m with moment-expansion coefficients");
    int partitions_m = 1;
    std::string partitions_format = "text", partitions_out;
    partitions_cmd->add_option("--m", partitions_m, "integer to partition")
        ->required();
    partitions_cmd->add_option("--format", partitions_format, "output format")
        ->check(format_values);
    partitions_cmd->add_option("--out", partitions_out,
                               "write to file instead of stdout");

    // simulate
    auto* simulate_cmd =
        app.add_subcommand("simulate", "replicate draws of (u, tau, cond_tau)");
    int simulate_n = 2, simulate_threads = 0;
    long simulate_replicates = 10;
    std::uint64_t simulate_seed = 1;
    bool simulate_newick = false;
    std::string simulate_format = "csv", simulate_out;
    simulate_cmd->add_option("--n", simulate_n, "number of tips")->required();
    simulate_cmd->add_option("--replicates", simulate_replicates,
                             "number of replicates");
    simulate_cmd->add_option("--seed", simulate_seed, "stream seed");
    simulate_cmd->add_option("--threads", simulate_threads,
                             "worker threads (0 = all, 1 = serial kernel)");
    simulate_cmd->add_flag("--newick", simulate_newick,
                           "emit one Newick tree per replicate instead of samples");
    simulate_cmd->add_option("--format", simulate_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate_cmd->add_option("--out", simulate_out,
                             "write to file instead of stdout");

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "Monte Carlo check of every statistic against closed form");
    yule::ExperimentConfig config;
    std::vector<int> verify_grid;
    long verify_replicates = 0;
    double verify_min_pass = 0.99;
    std::string verify_format = "csv", verify_out;
    verify_cmd
        ->add_option("--grid", verify_grid,
                     "comma separated tip counts (default built-in grid)")
        ->delimiter(',');
    verify_cmd->add_option("--replicates", verify_replicates,
                           "override replicate count for every n");
    verify_cmd->add_option("--seed", config.seed, "stream seed");
    verify_cmd->add_option("--z-threshold", config.z_threshold,
                           "absolute z that still passes");
    verify_cmd->add_option("--min-pass", verify_min_pass,
                           "required fraction of passing rows");
    verify_cmd->add_option("--threads", config.threads,
                           "worker threads (0 = all, 1 = serial kernel)");
    verify_cmd->add_option("--format", verify_format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    verify_cmd->add_option("--out", verify_out,
                           "report file (a .gnuplot script lands next to a CSV)");

    // oracle
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "compare closed forms against the independent moment oracle");
    int oracle_n = 2;
    std::string oracle_stat = "all", oracle_format = "text", oracle_out;
    oracle_cmd->add_option("--n", oracle_n, "number of tips")->required();
    oracle_cmd->add_option("--stat", oracle_stat,
                           "statistic name or 'all' (default all supported)");
    oracle_cmd->add_option("--format", oracle_format, "output format")
        ->check(format_values);
    oracle_cmd->add_option("--out", oracle_out,
                           "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (exact_cmd->parsed())
            return run_exact(exact_n, exact_stat, exact_mode, exact_format,
                             exact_out);
        if (moment_cmd->parsed())
            return run_moment(moment_n, moment_m, moment_kind, moment_mode,
                              moment_format, moment_out);
        if (partitions_cmd->parsed())
            return run_partitions(partitions_m, partitions_format,
                                  partitions_out);
        if (simulate_cmd->parsed())
            return run_simulate(simulate_n, simulate_replicates, simulate_seed,
                                simulate_threads, simulate_newick,
                                simulate_format, simulate_out);
        if (verify_cmd->parsed()) {
            if (!verify_grid.empty()) config.grid = verify_grid;
            if (verify_replicates > 0)
                config.replicates_override = verify_replicates;
            return run_verify(config, verify_min_pass, verify_format,
                              verify_out);
        }
        if (oracle_cmd->parsed())
            return run_oracle(oracle_n, oracle_stat, oracle_format, oracle_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
