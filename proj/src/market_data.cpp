#include "bateslab/market_data.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bates {

namespace {

bool valid_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

MarketSeries parse_market_csv(const std::string& text, const std::string& symbol,
                              const std::string& origin) {
  MarketSeries series;
  series.symbol = symbol;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = strip(line);
    if (row.empty()) continue;
    if (first_content) {
      first_content = false;
      std::string lower = row;
      for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (lower.rfind("date", 0) == 0) continue;  // header row
    }
    const std::size_t comma = row.find(',');
    if (comma == std::string::npos) fail(origin, line_no, "expected date,close");
    const std::string date = strip(row.substr(0, comma));
    const std::string close_text = strip(row.substr(comma + 1));
    if (!valid_iso_date(date)) fail(origin, line_no, "invalid ISO-8601 date '" + date + "'");
    double close = 0.0;
    try {
      std::size_t used = 0;
      close = std::stod(close_text, &used);
      if (used != close_text.size()) throw std::invalid_argument(close_text);
    } catch (const std::exception&) {
      fail(origin, line_no, "invalid close '" + close_text + "'");
    }
    if (!(close > 0.0)) fail(origin, line_no, "close must be positive");
    if (!series.dates.empty()) {
      if (date == series.dates.back()) fail(origin, line_no, "duplicate date " + date);
      if (date < series.dates.back())
        fail(origin, line_no, "dates not increasing at " + date);
    }
    series.dates.push_back(date);
    series.closes.push_back(close);
  }
  if (series.dates.empty()) throw std::runtime_error(origin + ": no data rows");
  return series;
}

MarketSeries load_market_csv(const std::string& path, const std::string& symbol) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open market data file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_market_csv(ss.str(), symbol, path);
}

MarketSeries rescale_to_unit(const MarketSeries& series) {
  if (series.closes.empty()) throw std::invalid_argument("rescale_to_unit: empty series");
  MarketSeries out = series;
  const double first = series.closes.front();
  for (double& c : out.closes) c /= first;
  out.closes.front() = 1.0;
  return out;
}

std::string market_csv(const MarketSeries& series) {
  std::ostringstream out;
  out << "date,close\n";
  char buf[64];
  for (std::size_t i = 0; i < series.dates.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", series.closes[i]);
    out << series.dates[i] << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace bates
