#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wsscatter/diagnostics.hpp"
#include "wsscatter/scenario.hpp"

namespace wss {

enum class Stage { Profiles, Remainders, Scatter, T0Study, Checks };

const std::vector<Stage>& all_stages();
std::string stage_name(Stage s);
// comma separated names, or "all"; throws DomainError on unknown names
std::vector<Stage> parse_stages(const std::string& list);

struct StageOutcome {
  std::string stage;
  std::string status;  // ok, failed, skipped
  std::string reason;
  double seconds = 0;
};

struct PipelineOptions {
  std::string out_dir;                 // empty: the scenario's
  std::optional<std::uint64_t> seed;   // overrides the scenario's
  std::ostream* log = nullptr;         // progress lines
};

struct PipelineResult {
  int exit_status = 0;  // 0 iff no stage failed or was skipped and every asserted verdict passed
  std::vector<StageOutcome> stages;
  std::vector<Verdict> verdicts;
  std::string out_dir;
};

// Stages run in the order profiles, remainders, scatter, t0study, checks; every stage after
// profiles needs it in the same run. Artifacts and verdicts.{csv,json}, summary.json go to out_dir.
PipelineResult run_pipeline(const Scenario& s, const std::vector<Stage>& stages, const PipelineOptions& opt = {});

}  // namespace wss
