#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsscatter/profiles.hpp"

namespace wss {

struct GridSpec {
  int n_per_axis = 128;
  double box_length = 64.0;
};

// w_+ = amplitude sum c_n (r/width)^{2n} exp(-r^2 / 2 width^2), centred
struct WPlusSpec {
  std::string kind = "hermite_gaussian";
  double amplitude = 0.0;
  double width = 0.6;
  std::vector<double> coefficients{1.0};
  std::array<double, 3> center{0, 0, 0};
};

// A_+ or dA_+: amplitude exp(-|x - center|^2 / 2 width^2), or zero
struct FieldSpec {
  std::string kind = "zero";
  double amplitude = 0.0;
  double width = 1.0;
  std::array<double, 3> center{0, 0, 0};
};

struct SolverSpec {
  std::string geometry = "auto";  // auto, radial, grid
  int radial_points = 8192;
  double radial_radius = 1024.0;
  double kappa = 5e-3;
  double dt_max = 0.05;
};

struct Scenario {
  int version = 1;
  std::string name = "unnamed";
  std::string source;  // file it came from

  GridSpec grid;                  // physical grid of the grid-based evaluations
  GridSpec profile_grid{32, 20.0};

  WPlusSpec w_plus;
  FieldSpec a_plus, a_dot_plus;
  double support_threshold = 1e-2;  // |w_+| <= threshold * max defines its support radius

  double T = 4.0;
  std::vector<double> t0_list{16.0, 32.0, 64.0};
  double t_max = 64.0;
  int per_octave = 16;
  double fit_from = 8.0;
  std::vector<double> r2_times{8.0, 16.0};
  std::vector<double> profile_times{8.0, 16.0, 32.0};

  double nu_max = 64.0;
  int node_count = 256;

  SolverSpec solver;
  int strichartz_packets = 4;
  std::uint64_t seed = 1;

  std::map<std::string, double> tolerances;

  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
};

// thresholds of the verdict table, all positive; decay ones are magnitudes of exponents
std::map<std::string, double> default_tolerances();

struct ScenarioError : std::runtime_error {
  std::vector<std::string> violations;
  ScenarioError(const std::string& what, std::vector<std::string> v)
      : std::runtime_error(what), violations(std::move(v)) {}
};
struct ScenarioNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// throws ScenarioNotFound, or ScenarioError listing every problem (parse errors carry the line)
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
std::vector<std::string> validate_scenario(const Scenario& s);

RadialProfile scenario_profile(const Scenario& s);
RadialFreeWave scenario_free_wave(const Scenario& s);
// bundle on the scenario grids; the A1~ table reaches the radial solver's R / T
ProfileBundle build_scenario_bundle(const Scenario& s);

}  // namespace wss
