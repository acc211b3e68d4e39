// Command-line front end: run / sweep / compare / validate.
// Exit codes: 0 ok, 1 validation or usage error, 2 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ricsim/runner.hpp"

namespace fs = std::filesystem;
using ricsim::harness::Json;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
        throw IoError("cannot write " + path.string());
}

// "a..b" inclusive, or a single seed
std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    std::vector<std::uint64_t> seeds;
    if (dots == std::string::npos) {
        seeds.push_back(std::stoull(text));
        return seeds;
    }
    const std::uint64_t lo = std::stoull(text.substr(0, dots));
    const std::uint64_t hi = std::stoull(text.substr(dots + 2));
    if (hi < lo) throw ricsim::harness::ValidationError("seeds", "range is empty");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
}

std::string report_filename(const ricsim::harness::MetricsReport& r) {
    return r.scenario_name + "-seed" + std::to_string(r.seed) + ".json";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-RT RIC traffic-steering pipeline simulator"};
    app.require_subcommand(1);

    std::string scenario_path, grid_path, out_dir, out_file, seed_range = "0";
    std::int64_t seed_flag = -1;
    bool emit_csv = false;
    std::vector<std::string> report_paths;

    CLI::App* cmd_run = app.add_subcommand("run", "execute one scenario");
    cmd_run->add_option("--scenario", scenario_path)->required();
    cmd_run->add_option("--seed", seed_flag, "override the scenario seed");
    cmd_run->add_option("--out", out_dir, "directory for the report (default: stdout)");
    cmd_run->add_flag("--csv", emit_csv, "also write a single-row CSV");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a parameter grid");
    cmd_sweep->add_option("--scenario", scenario_path)->required();
    cmd_sweep->add_option("--grid", grid_path)->required();
    cmd_sweep->add_option("--seeds", seed_range, "seed or inclusive range a..b");
    cmd_sweep->add_option("--out", out_dir)->required();

    CLI::App* cmd_compare = app.add_subcommand("compare", "delta table of reports");
    cmd_compare->add_option("reports", report_paths, "baseline followed by variants")
        ->expected(-2);
    cmd_compare->add_option("--out", out_file, "output file (default: stdout)");

    CLI::App* cmd_validate = app.add_subcommand("validate", "check a scenario file");
    cmd_validate->add_option("--scenario", scenario_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const auto scenario = ricsim::harness::parse_scenario(read_file(scenario_path));
            std::optional<std::uint64_t> seed;
            if (seed_flag >= 0) seed = static_cast<std::uint64_t>(seed_flag);
            const auto result = ricsim::harness::run(scenario, seed);
            if (out_dir.empty()) {
                std::cout << result.report_bytes;
            } else {
                // name outputs after the scenario *file*: variant files share
                // the in-document scenario name and must not overwrite each other
                const std::string stem = fs::path(scenario_path).stem().string() + "-seed" +
                                         std::to_string(result.report.seed);
                write_file(fs::path(out_dir) / (stem + ".json"), result.report_bytes);
                if (emit_csv) {
                    write_file(fs::path(out_dir) / (stem + ".csv"),
                               ricsim::harness::report_csv_header() + "\n" +
                                   ricsim::harness::report_csv_row(result.report) + "\n");
                }
            }
        } else if (cmd_sweep->parsed()) {
            const auto scenario = ricsim::harness::parse_scenario(read_file(scenario_path));
            const Json grid = Json::parse(read_file(grid_path));
            const auto seeds = parse_seed_range(seed_range);
            const auto results = ricsim::harness::sweep(scenario, grid, seeds);
            std::string csv = ricsim::harness::report_csv_header() + "\n";
            int index = 0;
            for (const auto& result : results) {
                write_file(fs::path(out_dir) / (std::to_string(index++) + "-" +
                                                report_filename(result.report)),
                           result.report_bytes);
                csv += ricsim::harness::report_csv_row(result.report) + "\n";
            }
            write_file(fs::path(out_dir) / "sweep.csv", csv);
        } else if (cmd_compare->parsed()) {
            const Json baseline = Json::parse(read_file(report_paths.front()));
            std::vector<Json> variants;
            for (std::size_t i = 1; i < report_paths.size(); ++i)
                variants.push_back(Json::parse(read_file(report_paths[i])));
            const Json table = ricsim::harness::compare_reports(baseline, variants);
            if (out_file.empty())
                std::cout << table.dump(2) << "\n";
            else
                write_file(out_file, table.dump(2) + "\n");
        } else if (cmd_validate->parsed()) {
            const auto scenario = ricsim::harness::parse_scenario(read_file(scenario_path));
            std::cout << "ok: " << scenario.name << " ("
                      << ricsim::harness::config_hash(scenario) << ")\n";
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const Json::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
