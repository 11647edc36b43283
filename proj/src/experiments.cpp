#include "bateslab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bateslab/rng.hpp"

namespace bates {

namespace {

enum : std::uint64_t { kTagLambdaPanel = 1, kTagMuJPanel = 2 };

void run_tasks(std::size_t count, int threads, const std::function<void(std::size_t)>& work) {
  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, count == 0 ? 1 : static_cast<unsigned>(count));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        work(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double gop(double wealth_initial, double wealth_t, double t) {
  if (!(wealth_initial > 0.0) || !(wealth_t > 0.0))
    throw std::domain_error("gop: wealth must be positive");
  if (!(t > 0.0)) throw std::domain_error("gop: time must be positive");
  return std::log(wealth_t / wealth_initial) / t;
}

int aspi(double wealth_active, double wealth_passive) {
  if (!std::isfinite(wealth_active) || !std::isfinite(wealth_passive))
    throw std::domain_error("aspi: wealth must be finite");
  return wealth_active - wealth_passive > 0.0 ? 1 : 0;
}

void ExperimentGrid::validate() const {
  if (mu_values.empty() || lambda_values.empty())
    throw std::invalid_argument("experiment grid needs mu and lambda values");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (assets < 1) throw std::invalid_argument("need at least one asset per portfolio");
  if (actives.empty()) throw std::invalid_argument("need at least one active strategy");
  for (const auto& cfg : actives) {
    if (cfg.kind == StrategyConfig::Kind::passive)
      throw std::invalid_argument("active strategy list cannot contain the passive kind");
    cfg.validate();
  }
  grid.validate();
}

ExperimentGrid default_grid() {
  ExperimentGrid g;
  g.base = ModelParams{0.5, 1.17, 0.06, 0.006, -0.41, 1.0, 0.06};
  StrategyConfig macd;
  macd.kind = StrategyConfig::Kind::macd;
  StrategyConfig rsi;
  rsi.kind = StrategyConfig::Kind::rsi;
  g.actives = {macd, rsi};
  return g;
}

AspiCell run_cell(const ExperimentGrid& grid, std::uint64_t panel_tag, std::size_t mu_index,
                  std::size_t panel_index, double mu, double lambda,
                  std::optional<double> mu_j) {
  AspiCell cell;
  cell.mu = mu;
  cell.lambda = lambda;
  cell.mu_j = mu_j;
  cell.reps = grid.reps;
  cell.gop_active.assign(grid.actives.size(), 0.0);

  ModelParams params = grid.base;
  params.mu = mu;
  JumpParams jumps = grid.base_jumps;
  jumps.lambda = lambda;
  if (mu_j) jumps.mu_j = -*mu_j;  // panel values are downward jump magnitudes
  const std::optional<JumpParams> jump_opt =
      lambda > 0.0 ? std::optional<JumpParams>(jumps) : std::nullopt;

  const double horizon = grid.grid.t_end();
  StrategyConfig passive;
  passive.kind = StrategyConfig::Kind::passive;

  std::size_t aspi_hits = 0;
  std::vector<std::vector<double>> prices(static_cast<std::size_t>(grid.assets));
  for (int rep = 0; rep < grid.reps; ++rep) {
    for (std::size_t a = 0; a < prices.size(); ++a) {
      CounterRng seeder({grid.seed, panel_tag, static_cast<std::uint64_t>(mu_index),
                         static_cast<std::uint64_t>(panel_index),
                         static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(a)});
      prices[a] = simulate(params, jump_opt, grid.grid, seeder()).prices;
    }
    std::vector<double> first(prices.size());
    for (std::size_t a = 0; a < prices.size(); ++a) first[a] = prices[a][0];
    const Portfolio initial =
        make_initial_portfolio(grid.initial_wealth, grid.initial_cash_fraction, first);

    const BacktestResult pass = backtest(prices, passive, initial);
    cell.gop_passive += gop(grid.initial_wealth, pass.wealth_history.back(), horizon);

    for (std::size_t s = 0; s < grid.actives.size(); ++s) {
      const BacktestResult act = backtest(prices, grid.actives[s], initial);
      cell.gop_active[s] += gop(grid.initial_wealth, act.wealth_history.back(), horizon);
      if (s == 0) aspi_hits += aspi(act.wealth_history.back(), pass.wealth_history.back());
    }
  }

  cell.gop_passive /= grid.reps;
  for (double& g : cell.gop_active) g /= grid.reps;
  cell.mean_aspi = static_cast<double>(aspi_hits) / static_cast<double>(grid.reps);
  return cell;
}

GridResult run_grid(const ExperimentGrid& grid) {
  grid.validate();
  GridResult result;
  result.strategy_names.push_back("passive");
  for (const auto& cfg : grid.actives) result.strategy_names.push_back(cfg.name());

  struct Task {
    std::uint64_t tag;
    std::size_t mu_index, panel_index;
    double mu, lambda;
    std::optional<double> mu_j;
  };
  std::vector<Task> tasks;
  for (std::size_t li = 0; li < grid.lambda_values.size(); ++li)
    for (std::size_t mi = 0; mi < grid.mu_values.size(); ++mi)
      tasks.push_back({kTagLambdaPanel, mi, li, grid.mu_values[mi], grid.lambda_values[li],
                       std::nullopt});
  const std::size_t lambda_task_count = tasks.size();
  for (std::size_t ji = 0; ji < grid.mu_j_values.size(); ++ji)
    for (std::size_t mi = 0; mi < grid.mu_values.size(); ++mi)
      tasks.push_back({kTagMuJPanel, mi, ji, grid.mu_values[mi], grid.base_jumps.lambda,
                       grid.mu_j_values[ji]});

  std::vector<AspiCell> cells(tasks.size());
  run_tasks(tasks.size(), grid.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    cells[i] = run_cell(grid, t.tag, t.mu_index, t.panel_index, t.mu, t.lambda, t.mu_j);
  });

  result.lambda_cells.assign(cells.begin(), cells.begin() + lambda_task_count);
  result.mu_j_cells.assign(cells.begin() + lambda_task_count, cells.end());
  return result;
}

std::string heatmap_csv(const GridResult& result) {
  std::ostringstream out;
  out << "mu,lambda,mean_aspi,gop_active,gop_passive,reps\n";
  char buf[192];
  for (const AspiCell& c : result.lambda_cells) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.12g,%.12g,%d\n", c.mu, c.lambda,
                  c.mean_aspi, c.gop_active.empty() ? 0.0 : c.gop_active[0], c.gop_passive,
                  c.reps);
    out << buf;
  }
  return out.str();
}

std::string gop_curve_csv(const GridResult& result, const std::vector<AspiCell>& cells,
                          std::size_t panel_index, std::size_t panel_count) {
  if (panel_count == 0) throw std::invalid_argument("gop_curve_csv: no panels");
  const std::size_t per_panel = cells.size() / panel_count;
  std::ostringstream out;
  out << "mu,strategy,mean_gop\n";
  char buf[128];
  for (std::size_t i = 0; i < per_panel; ++i) {
    const AspiCell& c = cells[panel_index * per_panel + i];
    std::snprintf(buf, sizeof(buf), "%.10g,passive,%.12g\n", c.mu, c.gop_passive);
    out << buf;
    for (std::size_t s = 0; s < c.gop_active.size(); ++s) {
      std::snprintf(buf, sizeof(buf), "%.10g,%s,%.12g\n", c.mu,
                    result.strategy_names[s + 1].c_str(), c.gop_active[s]);
      out << buf;
    }
  }
  return out.str();
}

}  // namespace bates
