#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "adaswitch/harness.hpp"
#include "adaswitch/validate.hpp"

namespace fs = std::filesystem;
using namespace adaswitch;

namespace {

// "60", "60s", "2m", "500ms".
double parse_budget(const std::string& text) {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    const std::string unit = text.substr(pos);
    if (v < 0) throw std::invalid_argument("negative budget");
    if (unit.empty() || unit == "s") return v;
    if (unit == "ms") return v / 1000.0;
    if (unit == "m") return v * 60.0;
    throw std::invalid_argument("unknown budget unit '" + unit + "'");
}

bool write_file(const fs::path& path, const std::function<void(std::ostream&)>& emit) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return false;
    }
    emit(out);
    out.flush();
    if (!out) {
        std::cerr << "error: failed writing '" << path.string() << "'\n";
        return false;
    }
    return true;
}

int cmd_run(const std::string& spec_path, const std::string& out_dir, int seeds, std::optional<std::uint64_t> seed,
            const std::string& format) {
    harness::ExperimentSpec spec;
    try {
        spec = harness::load_spec(spec_path);
        if (seeds > 0) {
            spec.seeds.clear();
            for (int i = 0; i < seeds; ++i) spec.seeds.push_back(static_cast<std::uint64_t>(i));
        }
        if (seed) spec.root_seed = *seed;
        harness::check_spec(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << spec_path << ": " << e.what() << '\n';
        return 1;
    }

    harness::ExperimentTable table;
    try {
        table = harness::run_experiment(spec);
    } catch (const harness::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create '" << out_dir << "': " << ec.message() << '\n';
        return 2;
    }
    const fs::path dir(out_dir);
    bool ok = true;
    if (format == "csv" || format == "both") {
        ok &= write_file(dir / "rows.csv", [&](std::ostream& o) { harness::write_rows_csv(o, table.rows); });
        ok &= write_file(dir / "aggregates.csv",
                         [&](std::ostream& o) { harness::write_aggregates_csv(o, table.aggregates); });
    }
    if (format == "svg" || format == "both") {
        if (table.aggregates.empty())
            std::cerr << "warning: empty table, no plot written\n";
        else
            ok &= write_file(dir / "plot.svg", [&](std::ostream& o) { harness::write_svg(o, table.aggregates); });
    }
    harness::write_aggregate_table(std::cout, table.aggregates);
    if (!ok) return 2;

    int failed = 0;
    for (const auto& r : table.rows)
        if (r.error) {
            ++failed;
            std::cerr << "row failed: algorithm=" << r.algorithm << " " << r.sweep_axis << "=" << r.sweep_value
                      << " seed=" << r.seed << ": " << *r.error << '\n';
        }
    if (failed > 0) {
        std::cerr << failed << " of " << table.rows.size() << " rows failed\n";
        return 2;
    }
    return 0;
}

int cmd_validate(const std::string& suite, const std::string& budget, std::uint64_t seed) {
    checks::ValidateOptions opt;
    try {
        opt.budget_seconds = parse_budget(budget);
    } catch (const std::exception& e) {
        std::cerr << "error: --budget '" << budget << "': " << e.what() << '\n';
        return 1;
    }
    opt.seed = seed;
    std::vector<checks::PropertyOutcome> outcomes;
    try {
        outcomes = checks::run_validation(suite, opt, &std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    int failed = 0;
    for (const auto& o : outcomes) failed += !o.pass;
    std::cout << (outcomes.size() - static_cast<std::size_t>(failed)) << "/" << outcomes.size()
              << " properties passed\n";
    return failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive switching between predictions and online algorithms"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment spec and write CSV/SVG reports");
    std::string spec_path, out_dir = "out", format = "both";
    int seeds = 0;
    std::optional<std::uint64_t> run_seed;
    run->add_option("--spec", spec_path, "Experiment spec file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seeds", seeds, "Use seeds 0..N-1")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_seed, "Root seed");
    run->add_option("--format", format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

    auto* val = app.add_subcommand("validate", "Run property and brute-force checks");
    std::string suite = "all", budget = "60s";
    std::uint64_t val_seed = 1;
    val->add_option("suite", suite, "framework, oltq, kserver, orra, adaswitch or all")
        ->check(CLI::IsMember({"framework", "oltq", "kserver", "orra", "adaswitch", "all"}));
    val->add_option("--budget", budget, "Time budget, e.g. 60s");
    val->add_option("--seed", val_seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (run->parsed()) return cmd_run(spec_path, out_dir, seeds, run_seed, format);
    return cmd_validate(suite, budget, val_seed);
}
