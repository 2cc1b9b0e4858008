// =============================================================================
// qfl command-line driver: plan tables, Monte Carlo runs, sweeps, selftest.
//
// Canonical artifacts (CSV/JSON under --out) contain no wall-clock data, so a
// rerun with the same configuration and seed is byte-identical. Timings go to
// stderr only.
// =============================================================================
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "qfl/harness.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

void print_report_summary(const qfl::RunReport& r) {
  std::cout << r.mode << " adversary=" << r.adversary << " trials=" << r.trials
            << " failures=" << r.failures << " max_list=" << r.max_list
            << " mean_stages=" << r.mean_stages << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "List-decoding simulator for q-ary adversarial channels with feedback"};

  std::string config_path, mode_name, out_dir;
  std::uint64_t trials = 0, seed = 0;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON run configuration file");
  app.add_option(
      "--mode", mode_name,
      "plan | run-full-fb | run-partial-fb | component-selftest | sweep");
  app.add_option("--trials", trials, "Override the trial count");
  app.add_option("--seed", seed, "Override the master seed");
  app.add_option("--out", out_dir, "Override the output directory");
  app.add_flag("--print-config", print_config,
               "Print the resolved configuration as JSON and exit");
  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    qfl::RunConfig cfg = config_path.empty()
                             ? qfl::default_run_config()
                             : qfl::load_run_config_file(config_path);
    if (!mode_name.empty()) cfg.mode = qfl::parse_run_mode(mode_name);
    if (app.count("--trials")) cfg.trials = trials;
    if (app.count("--seed")) cfg.master_seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    // Re-validate after command-line overrides (mode switches in particular).
    cfg = qfl::run_config_from_json_text(qfl::run_config_to_json(cfg));

    if (print_config) {
      std::cout << qfl::run_config_to_json(cfg);
      return 0;
    }

    int exit_code = 0;
    if (cfg.mode == qfl::RunMode::selftest) {
      exit_code = qfl::component_selftest(std::cout) ? 0 : 1;
    } else {
      const std::filesystem::path out(cfg.out_dir);
      std::filesystem::create_directories(out);
      switch (cfg.mode) {
        case qfl::RunMode::plan: {
          const qfl::PlanTables t = qfl::make_plan(cfg.plan);
          write_file(out / "plan.json", qfl::plan_to_json(t));
          write_file(out / "plan.csv", qfl::plan_to_csv(t));
          std::cout << "plan q=" << t.in.q << " gamma=" << t.gamma
                    << " lambda=" << t.lambda << " rate=" << t.rate
                    << " clean_stages=" << t.clean.terminated_at
                    << " worst_stages=" << t.worst.terminated_at
                    << " enumerated=" << t.enumerated << "\n";
          break;
        }
        case qfl::RunMode::full_fb:
        case qfl::RunMode::partial_fb: {
          const qfl::RunReport rep = cfg.mode == qfl::RunMode::full_fb
                                         ? qfl::run_full_fb(cfg)
                                         : qfl::run_partial_fb(cfg);
          write_file(out / "report.csv", qfl::report_to_csv(rep));
          write_file(out / "report.json", qfl::report_to_json(rep));
          print_report_summary(rep);
          break;
        }
        case qfl::RunMode::sweep: {
          const std::vector<qfl::RunReport> cells = qfl::run_sweep(cfg);
          for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string stem = "cell_" + std::to_string(i);
            write_file(out / (stem + "_report.csv"),
                       qfl::report_to_csv(cells[i]));
            write_file(out / (stem + "_report.json"),
                       qfl::report_to_json(cells[i]));
            print_report_summary(cells[i]);
          }
          write_file(out / "sweep_summary.csv", qfl::sweep_summary_csv(cells));
          break;
        }
        default: break;
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cerr << "runtime_seconds=" << secs << "\n";
    return exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
