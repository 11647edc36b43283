#include "bateslab/indicators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bates {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> ema(std::span<const double> prices, int lag) {
  if (prices.empty()) throw std::invalid_argument("ema: empty series");
  if (lag < 1) throw std::invalid_argument("ema: lag must be at least 1");
  const double alpha = 2.0 / (static_cast<double>(lag) + 1.0);
  std::vector<double> out(prices.size());
  out[0] = prices[0];
  for (std::size_t t = 1; t < prices.size(); ++t)
    out[t] = alpha * prices[t] + (1.0 - alpha) * out[t - 1];
  return out;
}

std::vector<double> macd_trigger_series(std::span<const double> prices, int short_lag,
                                        int long_lag, int signal_lag) {
  if (short_lag >= long_lag)
    throw std::invalid_argument("macd: short lag must be below long lag");
  const std::vector<double> ema_short = ema(prices, short_lag);
  const std::vector<double> ema_long = ema(prices, long_lag);
  std::vector<double> macd(prices.size());
  for (std::size_t t = 0; t < prices.size(); ++t) macd[t] = ema_short[t] - ema_long[t];
  const std::vector<double> signal = ema(macd, signal_lag);
  std::vector<double> trigger(prices.size());
  for (std::size_t t = 0; t < prices.size(); ++t) trigger[t] = signal[t] - macd[t];
  return trigger;
}

std::vector<double> rsi_series(std::span<const double> prices, int period) {
  if (period < 1) throw std::invalid_argument("rsi: period must be at least 1");
  if (prices.size() <= static_cast<std::size_t>(period))
    throw std::invalid_argument("rsi: series shorter than the period");

  std::vector<double> out(prices.size(), kNaN);
  double avg_gain = 0.0;
  double avg_loss = 0.0;
  for (int t = 1; t <= period; ++t) {
    const double change = prices[t] - prices[t - 1];
    avg_gain += change > 0.0 ? change : 0.0;
    avg_loss += change < 0.0 ? -change : 0.0;
  }
  avg_gain /= period;
  avg_loss /= period;

  const auto to_rsi = [](double gain, double loss) {
    if (loss == 0.0 && gain == 0.0) return 50.0;
    if (loss == 0.0) return 100.0;
    return 100.0 - 100.0 / (1.0 + gain / loss);
  };

  out[static_cast<std::size_t>(period)] = to_rsi(avg_gain, avg_loss);
  for (std::size_t t = static_cast<std::size_t>(period) + 1; t < prices.size(); ++t) {
    const double change = prices[t] - prices[t - 1];
    const double gain = change > 0.0 ? change : 0.0;
    const double loss = change < 0.0 ? -change : 0.0;
    avg_gain = (avg_gain * (period - 1) + gain) / period;
    avg_loss = (avg_loss * (period - 1) + loss) / period;
    out[t] = to_rsi(avg_gain, avg_loss);
  }
  return out;
}

SignalSeries macd_signal_series(std::span<const double> prices, int short_lag, int long_lag,
                                int signal_lag) {
  if (prices.size() <= static_cast<std::size_t>(long_lag))
    throw std::invalid_argument("macd signals: series no longer than the long lag");
  const std::vector<double> trigger = macd_trigger_series(prices, short_lag, long_lag, signal_lag);
  SignalSeries s;
  s.buy.assign(prices.size(), 0);
  s.sell.assign(prices.size(), 0);
  for (std::size_t t = static_cast<std::size_t>(long_lag); t < prices.size(); ++t) {
    if (trigger[t - 1] < 0.0 && trigger[t] > 0.0) s.buy[t] = 1;
    if (trigger[t - 1] > 0.0 && trigger[t] < 0.0) s.sell[t] = 1;
  }
  return s;
}

SignalSeries rsi_signal_series(std::span<const double> prices, int period, double upper,
                               double lower) {
  if (!(lower >= 0.0 && lower < upper && upper <= 100.0))
    throw std::invalid_argument("rsi signals: need 0 <= lower < upper <= 100");
  const std::vector<double> rsi = rsi_series(prices, period);
  SignalSeries s;
  s.buy.assign(prices.size(), 0);
  s.sell.assign(prices.size(), 0);
  for (std::size_t t = static_cast<std::size_t>(period) + 1; t < prices.size(); ++t) {
    if (rsi[t - 1] < upper && rsi[t] > upper) s.buy[t] = 1;
    if (rsi[t - 1] > lower && rsi[t] < lower) s.sell[t] = 1;
  }
  return s;
}

}  // namespace bates
