#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bates {

// Recursive exponential moving average with smoothing 2/(lag+1), seeded with
// the first sample.
std::vector<double> ema(std::span<const double> prices, int lag);

// Trigger line of the MACD rule: EMA over the MACD line minus the MACD line
// itself. Signals fire on its zero crossings.
std::vector<double> macd_trigger_series(std::span<const double> prices, int short_lag,
                                        int long_lag, int signal_lag);

// Wilder relative strength index in [0, 100]; entries before `period` are
// NaN (warm-up), flat stretches read 50.
std::vector<double> rsi_series(std::span<const double> prices, int period);

struct SignalSeries {
  std::vector<std::uint8_t> buy;
  std::vector<std::uint8_t> sell;
};

// Buy on an upward zero crossing of the trigger line, sell on a downward
// one; crossings during the first long_lag steps are suppressed.
SignalSeries macd_signal_series(std::span<const double> prices, int short_lag, int long_lag,
                                int signal_lag);

// Buy when the RSI crosses above the upper level, sell when it crosses
// below the lower level.
SignalSeries rsi_signal_series(std::span<const double> prices, int period, double upper,
                               double lower);

}  // namespace bates
