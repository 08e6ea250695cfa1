#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>

#include "wsscatter/pipeline.hpp"
#include "wsscatter/report.hpp"

// exit codes: 0 ok, 1 a stage or check failed, 2 bad input
int main(int argc, char** argv) {
  CLI::App app{"long-range scattering experiments for the wave-Schrodinger system"};
  app.require_subcommand(1);

  std::string scenario_path, stages = "all", out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run pipeline stages of a scenario");
  run->add_option("scenario", scenario_path, "scenario file (YAML)")->required();
  run->add_option("--stages", stages, "comma separated: profiles,remainders,scatter,t0study,checks or all");
  run->add_option("--seed", seed, "random seed, overrides the scenario's");
  run->add_option("--out", out_dir, "output directory, overrides the scenario's");
  run->add_flag("-q,--quiet", quiet, "no progress lines");

  auto* validate = app.add_subcommand("validate", "parse and validate a scenario file");
  validate->add_option("scenario", scenario_path, "scenario file (YAML)")->required();

  std::string csv_path, column;
  std::optional<double> from, to;
  auto* fit = app.add_subcommand("fit", "power-law fit of a CSV column against the first column");
  fit->add_option("csv", csv_path, "CSV file")->required();
  fit->add_option("--column", column, "column to fit")->required();
  fit->add_option("--from", from, "lower end of the fit window");
  fit->add_option("--to", to, "upper end of the fit window");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto s = wss::load_scenario(scenario_path);
      std::cout << "ok: " << s.name << " (" << s.source << ")\n";
      return 0;
    }
    if (*run) {
      const auto s = wss::load_scenario(scenario_path);
      const auto list = wss::parse_stages(stages);
      wss::PipelineOptions opt;
      opt.out_dir = out_dir;
      opt.seed = seed;
      opt.log = quiet ? nullptr : &std::cerr;
      const auto res = wss::run_pipeline(s, list, opt);
      std::cout << wss::verdict_summary(res.verdicts);
      for (const auto& o : res.stages)
        if (o.status != "ok") std::cout << "stage " << o.stage << ": " << o.status << " (" << o.reason << ")\n";
      std::cout << "artifacts in " << res.out_dir << "\n";
      return res.exit_status;
    }
    if (*fit) {
      const auto t = wss::read_csv(csv_path);
      if (t.columns.empty()) throw wss::DomainError("empty CSV");
      wss::DecaySeries d{t.column(t.columns.front()), t.column(column), column};
      const double lo = from.value_or(d.times.empty() ? 1.0 : d.times.front());
      const double hi = to.value_or(d.times.empty() ? 1.0 : d.times.back());
      const auto f = wss::fit_decay(d, lo, hi);
      nlohmann::json j = wss::to_json(f);
      j["format_version"] = wss::kFormatVersion;
      j["column"] = column;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const wss::ScenarioError& e) {
    std::cerr << e.what() << "\n";
    for (const auto& v : e.violations) std::cerr << "  " << v << "\n";
    return 2;
  } catch (const wss::ScenarioNotFound& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
