#pragma once

#include <string>
#include <vector>

namespace bates {

// Daily close series on a trading-day grid. Weekends and holidays are simply
// absent rows; dt stays at one trading day.
struct MarketSeries {
  std::string symbol;
  std::vector<std::string> dates;  // ISO-8601, strictly increasing
  std::vector<double> closes;      // all > 0
  double dt = 1.0 / 252.0;
};

// Reads a date,close CSV (header optional, auto-detected). Rejects
// duplicate or non-monotone dates and non-positive closes, reporting the
// offending line.
MarketSeries load_market_csv(const std::string& path, const std::string& symbol);

MarketSeries parse_market_csv(const std::string& text, const std::string& symbol,
                              const std::string& origin);

// Divides every close by the first one, so the series starts at exactly 1.
MarketSeries rescale_to_unit(const MarketSeries& series);

std::string market_csv(const MarketSeries& series);

}  // namespace bates
