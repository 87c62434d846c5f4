#include "emms/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace emms {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
}

StatSummary summarize(const std::vector<double>& samples, std::size_t bins,
                      std::optional<double> clip) {
  if (samples.empty()) {
    throw Error(Errc::empty_sample, "cannot summarize an empty sample set");
  }
  if (bins < 1) {
    throw Error(Errc::invalid_config, "histogram needs at least one bin");
  }
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());

  StatSummary s;
  s.n = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q3 - s.q1;
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
           static_cast<double>(s.n);

  const double lower_fence = s.q1 - 1.5 * s.iqr;
  const double upper_fence = s.q3 + 1.5 * s.iqr;
  for (const double v : sorted) {
    if (v < lower_fence || v > upper_fence) {
      s.outliers.push_back(v);
    }
  }

  const double lo = s.min;
  const double hi = clip.value_or(s.max);
  const double width = hi - lo;
  if (width <= 0.0) {
    // All mass in a single degenerate bin.
    s.density.push_back({lo, 1.0});
    return s;
  }
  std::vector<std::size_t> counts(bins, 0);
  for (const double v : sorted) {
    const auto bin = static_cast<std::size_t>(std::clamp(
        std::floor((v - lo) / width * static_cast<double>(bins)), 0.0,
        static_cast<double>(bins - 1)));
    ++counts[bin];
  }
  const double bin_width = width / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    s.density.push_back(
        {lo + (static_cast<double>(i) + 0.5) * bin_width,
         static_cast<double>(counts[i]) / static_cast<double>(s.n)});
  }
  return s;
}

std::string to_json(const StatSummary& summary) {
  nlohmann::json doc;
  doc["n"] = summary.n;
  doc["min"] = summary.min;
  doc["q1"] = summary.q1;
  doc["median"] = summary.median;
  doc["q3"] = summary.q3;
  doc["max"] = summary.max;
  doc["mean"] = summary.mean;
  doc["iqr"] = summary.iqr;
  doc["outliers"] = summary.outliers;
  nlohmann::json density = nlohmann::json::array();
  for (const DensityBin& bin : summary.density) {
    density.push_back({{"center", bin.center}, {"frequency", bin.frequency}});
  }
  doc["density"] = std::move(density);
  return doc.dump(2) + "\n";
}

std::string write_density_csv(const StatSummary& summary) {
  std::ostringstream out;
  out << "bin_center,frequency\n";
  char buf[80];
  for (const DensityBin& bin : summary.density) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", bin.center, bin.frequency);
    out << buf;
  }
  return out.str();
}

}  // namespace emms
