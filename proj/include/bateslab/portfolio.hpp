#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bates {

struct Portfolio {
  double cash = 0.0;                // units of the numeraire (cash price is 1)
  std::vector<double> quantities;   // one entry per asset, all >= 0

  double wealth(std::span<const double> prices) const;
};

struct StrategyConfig {
  enum class Kind { passive, macd, rsi };

  Kind kind = Kind::passive;
  int macd_short = 12;
  int macd_long = 26;
  int macd_signal = 9;
  int rsi_period = 14;
  double rsi_upper = 70.0;
  double rsi_lower = 30.0;
  double buy_fraction = 0.9;   // share of cash deployed on a buy signal
  double sell_fraction = 0.1;  // share of a holding sold on a sell signal

  void validate() const;
  std::string name() const;
};

StrategyConfig::Kind strategy_kind_from_name(const std::string& name);

// One self-financing update: flagged holdings are partially sold first, then
// buy_fraction of the cash (including sale proceeds) is split equally across
// flagged buys. Wealth at the given prices is unchanged.
Portfolio rebalance(const Portfolio& portfolio, std::span<const double> prices,
                    std::span<const std::uint8_t> buy_flags,
                    std::span<const std::uint8_t> sell_flags, double buy_fraction,
                    double sell_fraction);

struct BacktestResult {
  Portfolio final;
  std::vector<double> wealth_history;              // one entry per grid point
  std::vector<double> cash_history;
  std::vector<std::vector<double>> quantity_history;
  std::size_t buy_signals = 0;
  std::size_t sell_signals = 0;
};

// Runs one strategy over aligned price series (each n+1 points). Passive
// keeps quantities fixed; active strategies rebalance on their indicator
// signals each step.
BacktestResult backtest(const std::vector<std::vector<double>>& prices,
                        const StrategyConfig& config, const Portfolio& initial);

// Initial holdings worth `wealth` at the first prices: cash_fraction in
// cash, the rest split equally across assets.
Portfolio make_initial_portfolio(double wealth, double cash_fraction,
                                 std::span<const double> first_prices);

// CSV t,wealth,cash,q1..qN.
std::string backtest_csv(const BacktestResult& result, double dt);

}  // namespace bates
