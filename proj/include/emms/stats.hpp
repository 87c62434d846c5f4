#ifndef EMMS_STATS_HPP
#define EMMS_STATS_HPP

#include <optional>
#include <string>
#include <vector>

#include "emms/error.hpp"

namespace emms {

struct DensityBin {
  double center = 0.0;
  double frequency = 0.0;  // normalized, all bins sum to 1
};

/// Boxplot-plus-density summary of one sample set: the numbers behind a
/// violin plot.
struct StatSummary {
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double iqr = 0.0;
  std::vector<double> outliers;  // beyond q1 - 1.5 iqr / q3 + 1.5 iqr
  std::vector<DensityBin> density;
};

/// Quartiles by linear interpolation on the sorted data (inclusive method).
/// The density trace is a plain histogram over [min, max], or [min, clip]
/// with larger samples clamped into the last bin. Empty input raises
/// empty-sample.
StatSummary summarize(const std::vector<double>& samples, std::size_t bins = 40,
                      std::optional<double> clip = std::nullopt);

/// Interpolated quantile of a sorted sample, p in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);

std::string to_json(const StatSummary& summary);

/// Density CSV: `bin_center,frequency` rows.
std::string write_density_csv(const StatSummary& summary);

}  // namespace emms

#endif  // EMMS_STATS_HPP
