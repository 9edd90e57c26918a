// Command-line front end: shuffle, schedule, quality and bench workflows over
// text files. Exit codes: 0 success, 2 usage/validation error, 1 internal
// failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "binar/binar.hpp"

namespace {

struct shuffle_options {
    std::string input;
    std::string output;
    unsigned width = 32;
    std::string schedule_path;
    std::optional<std::uint64_t> seed;
    unsigned bits = 0;
};

binar::bit_schedule load_schedule(const shuffle_options& opt) {
    if (!opt.schedule_path.empty())
        return binar::read_schedule_file(opt.schedule_path, opt.width);
    if (!opt.seed.has_value())
        throw std::invalid_argument("provide either --schedule or --seed with --bits");
    return binar::random_schedule(opt.width, opt.bits, *opt.seed);
}

int run_shuffle(const shuffle_options& opt) {
    const binar::bit_schedule schedule = load_schedule(opt);
    std::vector<std::uint64_t> values = binar::read_values_file(opt.input, opt.width);
    const binar::shuffle_stats stats =
        binar::binar_shuffle(std::span<std::uint64_t>(values), schedule);
    binar::write_values_file(opt.output, values);
    std::cerr << "bit_extractions=" << stats.bit_extractions << " swaps=" << stats.swaps
              << " max_recursion_depth=" << stats.max_recursion_depth
              << " pass_throughs=" << stats.pass_throughs << '\n';
    return 0;
}

struct schedule_gen_options {
    unsigned width = 32;
    unsigned bits = 8;
    std::uint64_t seed = 0;
    std::string output;
};

int run_schedule_gen(const schedule_gen_options& opt) {
    binar::write_schedule_file(opt.output,
                               binar::random_schedule(opt.width, opt.bits, opt.seed));
    return 0;
}

struct schedule_validate_options {
    std::string input;
    unsigned width = 32;
};

int run_schedule_validate(const schedule_validate_options& opt) {
    const binar::bit_schedule schedule = binar::read_schedule_file(opt.input, opt.width);
    const binar::schedule_diagnostics d = binar::validate_schedule(schedule);
    const auto flag = [](bool b) { return b ? "true" : "false"; };
    std::cout << "is_encoding_order=" << flag(d.is_encoding_order) << '\n'
              << "is_reverse_encoding_order=" << flag(d.is_reverse_encoding_order) << '\n'
              << "constant_values=" << flag(d.constant_values) << '\n'
              << "sort_risk=" << flag(d.sort_risk) << '\n';
    for (const auto& w : d.warnings) std::cout << "warning: " << w << '\n';
    return 0;
}

struct quality_options {
    std::string input;
    std::string algorithm;
    unsigned n = 4;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
};

int run_quality(const quality_options& opt) {
    if (!opt.input.empty()) {
        const std::vector<std::uint64_t> values = binar::read_values_file(opt.input);
        std::vector<std::uint64_t> reference(values);
        std::sort(reference.begin(), reference.end());
        const auto metrics =
            binar::analyze_permutation(std::span<const std::uint64_t>(reference),
                                       std::span<const std::uint64_t>(values));
        binar::render_metrics_report(std::cout, values.size(), metrics);
        return 0;
    }
    const binar::report_algorithm algorithm =
        opt.algorithm == "fisher_yates" ? binar::report_algorithm::fisher_yates
                                        : binar::report_algorithm::binar_random_schedules;
    const binar::distribution_report report =
        binar::run_distribution_report(algorithm, opt.n, opt.trials, opt.seed);
    binar::render_distribution_report(std::cout, report);
    return 0;
}

struct bench_options {
    std::vector<std::size_t> sizes;
    std::vector<std::string> orders{"ascending", "descending"};
    unsigned trials = 3;
    std::uint64_t seed = 1;
    std::string csv;
    std::string plot;
    std::string algorithm = "binar";
};

int run_bench_cmd(const bench_options& opt) {
    std::vector<std::size_t> sizes = opt.sizes;
    if (sizes.empty())
        for (std::size_t s = 200000; s <= 2000000; s += 200000) sizes.push_back(s);
    std::vector<binar::data_order> orders;
    for (const auto& o : opt.orders) {
        if (o == "ascending")
            orders.push_back(binar::data_order::ascending);
        else if (o == "descending")
            orders.push_back(binar::data_order::descending);
        else
            throw std::invalid_argument("order must be ascending or descending: " + o);
    }
    const binar::bench_algorithm algorithm = opt.algorithm == "fisher_yates"
                                                 ? binar::bench_algorithm::fisher_yates
                                                 : binar::bench_algorithm::binar_shuffle;
    const binar::bit_schedule schedule = binar::random_schedule(32, 8, opt.seed);

    // probe writability before the (long) run
    {
        std::ofstream probe(opt.csv);
        if (!probe) throw std::invalid_argument("cannot open CSV path for writing: " + opt.csv);
    }
    const std::vector<binar::bench_record> records =
        binar::run_bench(std::span<const std::size_t>(sizes),
                         std::span<const binar::data_order>(orders), opt.trials, schedule,
                         algorithm, opt.seed);
    {
        std::ofstream out(opt.csv);
        if (!out) throw std::invalid_argument("cannot open CSV path for writing: " + opt.csv);
        binar::write_csv(out, records);
    }
    if (!opt.plot.empty()) {
        std::ofstream out(opt.plot);
        if (!out) throw std::invalid_argument("cannot open plot path for writing: " + opt.plot);
        binar::write_plot(out, records);
    }
    std::set<std::size_t> distinct(sizes.begin(), sizes.end());
    if (distinct.size() < 3) {
        std::cerr << "fewer than 3 distinct sizes; skipping the linear fit\n";
        return 0;
    }
    const binar::bench_fit fit = binar::fit_linear(records);
    char line[256];
    std::snprintf(line, sizeof line, "slope=%.6e s/element intercept=%.6e s r_squared=%.6f",
                  fit.slope, fit.intercept, fit.r_squared);
    std::cout << line << '\n';
    std::cout << "doubling_ratios=";
    for (std::size_t i = 0; i < fit.ratios.size(); ++i) {
        std::snprintf(line, sizeof line, "%.3f", fit.ratios[i]);
        std::cout << (i ? "," : "") << line;
    }
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"binar shuffle: bit-schedule-driven linear-time array shuffling"};
    app.require_subcommand(1);

    shuffle_options shuffle_opt;
    auto* shuffle_cmd =
        app.add_subcommand("shuffle", "shuffle a file of unsigned decimal integers");
    shuffle_cmd->add_option("-i,--input", shuffle_opt.input, "input file, one value per line")
        ->required();
    shuffle_cmd->add_option("-o,--output", shuffle_opt.output, "output file")->required();
    shuffle_cmd->add_option("-w,--width", shuffle_opt.width, "element width in bits [1,64]")
        ->required();
    shuffle_cmd->add_option("--schedule", shuffle_opt.schedule_path, "schedule file");
    auto* seed_opt =
        shuffle_cmd->add_option("--seed", shuffle_opt.seed, "random schedule seed");
    shuffle_cmd->add_option("--bits", shuffle_opt.bits, "random schedule bit count")
        ->needs(seed_opt);

    auto* schedule_cmd = app.add_subcommand("schedule", "generate or validate schedules");
    schedule_cmd->require_subcommand(1);
    schedule_gen_options gen_opt;
    auto* gen_cmd = schedule_cmd->add_subcommand("gen", "generate a random schedule file");
    gen_cmd->add_option("-w,--width", gen_opt.width, "element width in bits")->required();
    gen_cmd->add_option("-b,--bits", gen_opt.bits, "number of schedule entries")->required();
    gen_cmd->add_option("-s,--seed", gen_opt.seed, "generator seed")->required();
    gen_cmd->add_option("-o,--output", gen_opt.output, "schedule file to write")->required();
    schedule_validate_options val_opt;
    auto* val_cmd = schedule_cmd->add_subcommand("validate", "diagnose a schedule file");
    val_cmd->add_option("-i,--input", val_opt.input, "schedule file")->required();
    val_cmd->add_option("-w,--width", val_opt.width, "element width in bits")->required();

    quality_options quality_opt;
    auto* quality_cmd =
        app.add_subcommand("quality", "shuffledness metrics and distribution reports");
    auto* qin = quality_cmd->add_option("-i,--input", quality_opt.input,
                                        "analyze one arrangement from a file");
    auto* qalg =
        quality_cmd
            ->add_option("-a,--algorithm", quality_opt.algorithm,
                         "distribution report over repeated shuffles")
            ->check(CLI::IsMember({"binar", "fisher_yates"}))
            ->excludes(qin);
    quality_cmd->add_option("-n", quality_opt.n, "array size for the report [2,8]");
    quality_cmd->add_option("-t,--trials", quality_opt.trials, "number of shuffles");
    quality_cmd->add_option("-s,--seed", quality_opt.seed, "base seed");

    bench_options bench_opt;
    auto* bench_cmd = app.add_subcommand("bench", "timing runs with linear-fit summary");
    bench_cmd->add_option("--sizes", bench_opt.sizes,
                          "element counts (default 200000..2000000 step 200000)");
    bench_cmd->add_option("--orders", bench_opt.orders, "ascending and/or descending");
    bench_cmd->add_option("--trials", bench_opt.trials, "trials per size and order");
    bench_cmd->add_option("--seed", bench_opt.seed, "schedule seed");
    bench_cmd->add_option("--csv", bench_opt.csv, "CSV output path")->required();
    bench_cmd->add_option("--plot", bench_opt.plot, "size/median-seconds data file");
    bench_cmd->add_option("--algorithm", bench_opt.algorithm, "binar or fisher_yates")
        ->check(CLI::IsMember({"binar", "fisher_yates"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (shuffle_cmd->parsed()) return run_shuffle(shuffle_opt);
        if (gen_cmd->parsed()) return run_schedule_gen(gen_opt);
        if (val_cmd->parsed()) return run_schedule_validate(val_opt);
        if (quality_cmd->parsed()) {
            if (quality_opt.input.empty() && qalg->count() == 0)
                throw std::invalid_argument("quality needs --input or --algorithm");
            return run_quality(quality_opt);
        }
        if (bench_cmd->parsed()) return run_bench_cmd(bench_opt);
    } catch (const binar::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
