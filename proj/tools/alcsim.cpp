// Command-line front end: run and sweep experiment files, print the degree
// look-up table, validate configs.

#include "alc/degree.hpp"
#include "alc/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

namespace {

unsigned default_threads()
{
  if (const char* env = std::getenv("ALCSIM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) {
        return static_cast<unsigned>(n);
      }
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct RunOptions
{
  std::string config;
  std::string output;
  std::int64_t replicates = 0;
  std::int64_t max_intervals = 0;
  unsigned threads = 0;
};

void add_run_options(CLI::App* cmd, RunOptions& opts)
{
  cmd->add_option("config", opts.config, "experiment file")->required();
  cmd->add_option("-o,--output", opts.output, "CSV output path (overrides the file's 'output')");
  cmd->add_option("--replicates", opts.replicates, "override the replicate count")->check(CLI::PositiveNumber);
  cmd->add_option("--max-intervals", opts.max_intervals, "override the per-run interval cap")
    ->check(CLI::PositiveNumber);
  cmd->add_option("-j,--threads", opts.threads, "worker threads (default: ALCSIM_THREADS or core count)");
}

int execute(const RunOptions& opts, bool as_sweep)
{
  alc::ExperimentFile exp = alc::load_experiment(opts.config);
  if (opts.replicates > 0) {
    exp.replicates = opts.replicates;
  }
  if (opts.max_intervals > 0) {
    exp.base.stop.max_intervals = opts.max_intervals;
  }
  const unsigned threads = opts.threads > 0 ? opts.threads : default_threads();
  const auto results = alc::run_experiment(exp, as_sweep, threads);

  const std::string path = !opts.output.empty() ? opts.output : exp.output;
  if (path.empty() || path == "-") {
    alc::write_csv(std::cout, results);
  } else {
    alc::emit_results(results, path);
    std::cerr << "wrote " << results.size() << " rows to " << path << '\n';
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Application-layer erasure coding simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "run the base configuration (all listed schemes, all replicates)");
  add_run_options(run_cmd, run_opts);

  RunOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep the configured axis over its values");
  add_run_options(sweep_cmd, sweep_opts);

  std::int64_t q_max = 16;
  auto* table_cmd = app.add_subcommand("degree-table", "print the degree look-up table as x,y,d rows");
  table_cmd->add_option("--qmax", q_max, "largest x")->check(CLI::Range(2, 64));

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check an experiment file without running it");
  validate_cmd->add_option("config", validate_path, "experiment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) {
      return execute(run_opts, false);
    }
    if (*sweep_cmd) {
      return execute(sweep_opts, true);
    }
    if (*table_cmd) {
      const auto table = alc::build_table(q_max);
      std::cout << "x,y,d\n";
      for (std::int64_t x = 2; x <= q_max; ++x) {
        for (std::int64_t y = 1; y < x; ++y) {
          std::cout << x << ',' << y << ',' << table.lookup(x, y) << '\n';
        }
      }
      return 0;
    }
    if (*validate_cmd) {
      const auto exp = alc::load_experiment(validate_path);
      std::cout << "ok: " << exp.schemes.size() << " scheme(s), channel " << alc::channel_name(exp.base.channel);
      if (exp.axis) {
        std::cout << ", axis " << *exp.axis << " x " << exp.values.size() << " values";
      }
      std::cout << ", " << exp.replicates << " replicate(s)\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
