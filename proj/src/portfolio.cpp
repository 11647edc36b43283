#include "bateslab/portfolio.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "bateslab/indicators.hpp"

namespace bates {

double Portfolio::wealth(std::span<const double> prices) const {
  if (prices.size() != quantities.size())
    throw std::invalid_argument("wealth: price vector does not match holdings");
  double w = cash;
  for (std::size_t i = 0; i < quantities.size(); ++i) w += quantities[i] * prices[i];
  return w;
}

void StrategyConfig::validate() const {
  if (kind == Kind::macd && macd_short >= macd_long)
    throw std::invalid_argument("macd short lag must be below the long lag");
  if (kind == Kind::rsi && !(rsi_lower >= 0.0 && rsi_lower < rsi_upper && rsi_upper <= 100.0))
    throw std::invalid_argument("rsi levels must satisfy 0 <= lower < upper <= 100");
  if (!(buy_fraction >= 0.0 && buy_fraction <= 1.0))
    throw std::invalid_argument("buy_fraction must lie in [0, 1]");
  if (!(sell_fraction >= 0.0 && sell_fraction <= 1.0))
    throw std::invalid_argument("sell_fraction must lie in [0, 1]");
}

std::string StrategyConfig::name() const {
  switch (kind) {
    case Kind::passive: return "passive";
    case Kind::macd: return "macd";
    case Kind::rsi: return "rsi";
  }
  return "unknown";
}

StrategyConfig::Kind strategy_kind_from_name(const std::string& name) {
  if (name == "passive") return StrategyConfig::Kind::passive;
  if (name == "macd") return StrategyConfig::Kind::macd;
  if (name == "rsi") return StrategyConfig::Kind::rsi;
  throw std::invalid_argument("unknown strategy: " + name);
}

Portfolio rebalance(const Portfolio& portfolio, std::span<const double> prices,
                    std::span<const std::uint8_t> buy_flags,
                    std::span<const std::uint8_t> sell_flags, double buy_fraction,
                    double sell_fraction) {
  const std::size_t n_assets = portfolio.quantities.size();
  if (prices.size() != n_assets || buy_flags.size() != n_assets ||
      sell_flags.size() != n_assets)
    throw std::invalid_argument("rebalance: misaligned inputs");

  Portfolio next = portfolio;

  // Sells execute first and fund the subsequent buys.
  for (std::size_t i = 0; i < n_assets; ++i) {
    if (!sell_flags[i]) continue;
    const double sold = portfolio.quantities[i] * sell_fraction;
    next.quantities[i] = portfolio.quantities[i] - sold;
    next.cash += sold * prices[i];
  }

  std::size_t n_buys = 0;
  for (std::size_t i = 0; i < n_assets; ++i)
    if (buy_flags[i]) ++n_buys;
  if (n_buys > 0) {
    const double spend = buy_fraction * next.cash;
    const double per_asset = spend / static_cast<double>(n_buys);
    for (std::size_t i = 0; i < n_assets; ++i)
      if (buy_flags[i]) next.quantities[i] += per_asset / prices[i];
    next.cash -= spend;
  }
  return next;
}

BacktestResult backtest(const std::vector<std::vector<double>>& prices,
                        const StrategyConfig& config, const Portfolio& initial) {
  config.validate();
  const std::size_t n_assets = prices.size();
  if (n_assets == 0) throw std::invalid_argument("backtest: no price series");
  if (initial.quantities.size() != n_assets)
    throw std::invalid_argument("backtest: holdings do not match the number of assets");
  const std::size_t len = prices[0].size();
  if (len < 2) throw std::invalid_argument("backtest: price series too short");
  for (const auto& series : prices) {
    if (series.size() != len)
      throw std::invalid_argument("backtest: price series are not aligned on one grid");
    for (double p : series)
      if (!(p > 0.0)) throw std::domain_error("backtest: non-positive price");
  }

  std::vector<SignalSeries> signals;
  if (config.kind != StrategyConfig::Kind::passive) {
    signals.reserve(n_assets);
    for (const auto& series : prices) {
      signals.push_back(config.kind == StrategyConfig::Kind::macd
                            ? macd_signal_series(series, config.macd_short, config.macd_long,
                                                 config.macd_signal)
                            : rsi_signal_series(series, config.rsi_period, config.rsi_upper,
                                                config.rsi_lower));
    }
  }

  BacktestResult result;
  result.final = initial;
  result.wealth_history.reserve(len);
  result.cash_history.reserve(len);
  result.quantity_history.reserve(len);

  std::vector<double> prices_t(n_assets);
  std::vector<std::uint8_t> buy_t(n_assets), sell_t(n_assets);
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t i = 0; i < n_assets; ++i) prices_t[i] = prices[i][t];

    if (t > 0 && !signals.empty()) {
      bool any = false;
      for (std::size_t i = 0; i < n_assets; ++i) {
        buy_t[i] = signals[i].buy[t];
        sell_t[i] = signals[i].sell[t];
        if (buy_t[i]) ++result.buy_signals;
        if (sell_t[i]) ++result.sell_signals;
        any = any || buy_t[i] || sell_t[i];
      }
      if (any) {
        const double before = result.final.wealth(prices_t);
        result.final = rebalance(result.final, prices_t, buy_t, sell_t, config.buy_fraction,
                                 config.sell_fraction);
        const double after = result.final.wealth(prices_t);
        if (std::abs(after - before) > 1e-10 * std::max(std::abs(before), 1.0))
          throw std::logic_error("backtest: rebalance violated self-financing");
        for (double q : result.final.quantities)
          if (q < 0.0) throw std::logic_error("backtest: negative holding");
        if (result.final.cash < 0.0) throw std::logic_error("backtest: negative cash");
      }
    }

    result.wealth_history.push_back(result.final.wealth(prices_t));
    result.cash_history.push_back(result.final.cash);
    result.quantity_history.push_back(result.final.quantities);
  }
  return result;
}

Portfolio make_initial_portfolio(double wealth, double cash_fraction,
                                 std::span<const double> first_prices) {
  if (!(wealth > 0.0)) throw std::invalid_argument("initial wealth must be positive");
  if (!(cash_fraction >= 0.0 && cash_fraction <= 1.0))
    throw std::invalid_argument("cash fraction must lie in [0, 1]");
  Portfolio p;
  p.cash = wealth * cash_fraction;
  const double per_asset =
      wealth * (1.0 - cash_fraction) / static_cast<double>(first_prices.size());
  p.quantities.resize(first_prices.size());
  for (std::size_t i = 0; i < first_prices.size(); ++i) {
    if (!(first_prices[i] > 0.0))
      throw std::domain_error("initial prices must be positive");
    p.quantities[i] = per_asset / first_prices[i];
  }
  return p;
}

std::string backtest_csv(const BacktestResult& result, double dt) {
  std::ostringstream out;
  out << "t,wealth,cash";
  const std::size_t n_assets =
      result.quantity_history.empty() ? 0 : result.quantity_history[0].size();
  for (std::size_t i = 1; i <= n_assets; ++i) out << ",q" << i;
  out << '\n';
  char buf[64];
  for (std::size_t t = 0; t < result.wealth_history.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%.10g", static_cast<double>(t) * dt);
    out << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", result.wealth_history[t]);
    out << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", result.cash_history[t]);
    out << buf;
    for (double q : result.quantity_history[t]) {
      std::snprintf(buf, sizeof(buf), ",%.17g", q);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace bates
