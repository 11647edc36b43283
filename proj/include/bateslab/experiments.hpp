#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bateslab/model.hpp"
#include "bateslab/portfolio.hpp"

namespace bates {

// Annualized log growth of wealth.
double gop(double wealth_initial, double wealth_t, double t);

// 1 when the active terminal wealth strictly exceeds the passive one.
int aspi(double wealth_active, double wealth_passive);

struct ExperimentGrid {
  std::vector<double> mu_values = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> lambda_values = {0.0, 1.0, 2.0};
  std::vector<double> mu_j_values;  // optional: downward jump magnitudes (applied as -value)
  int reps = 200;
  int assets = 5;
  ModelParams base;
  JumpParams base_jumps{1.0, -0.05, 0.001};
  std::vector<StrategyConfig> actives;  // first entry drives the ASPI comparison
  TimeGrid grid{1134, 1.0 / 252.0};
  double initial_cash_fraction = 0.5;
  double initial_wealth = 1000.0;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

ExperimentGrid default_grid();

struct AspiCell {
  double mu = 0.0;
  double lambda = 0.0;
  std::optional<double> mu_j;   // set for jump-size panels
  double mean_aspi = 0.0;
  double gop_passive = 0.0;
  std::vector<double> gop_active;  // one mean per active strategy
  int reps = 0;
};

// One (mu, lambda) or (mu, mu_j) cell: paired passive/active backtests over
// freshly simulated asset sets. Seeds derive from (grid seed, panel tag,
// cell indices, rep, asset), so results do not depend on evaluation order.
AspiCell run_cell(const ExperimentGrid& grid, std::uint64_t panel_tag, std::size_t mu_index,
                  std::size_t panel_index, double mu, double lambda,
                  std::optional<double> mu_j);

struct GridResult {
  std::vector<AspiCell> lambda_cells;  // lambda-major, then mu
  std::vector<AspiCell> mu_j_cells;    // mu_j-major, then mu (empty when not requested)
  std::vector<std::string> strategy_names;  // passive + actives, CSV ordering
};

GridResult run_grid(const ExperimentGrid& grid);

// mu,lambda,mean_aspi,gop_active,gop_passive,reps over the lambda cells.
std::string heatmap_csv(const GridResult& result);

// mu,strategy,mean_gop for one panel (a fixed lambda or mu_j slice).
std::string gop_curve_csv(const GridResult& result, const std::vector<AspiCell>& cells,
                          std::size_t panel_index, std::size_t panel_count);

}  // namespace bates
