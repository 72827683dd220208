#include "rhetor/capacity_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rhetor/errors.hpp"

namespace rhetor {

namespace {

void check_width(unsigned width) {
  if (width == 0 || width > kMaxExactWidth) {
    throw Error(ErrorKind::OutOfRange,
                "width " + std::to_string(width) + " outside 1.." + std::to_string(kMaxExactWidth));
  }
}

Exact nonempty_subsets(unsigned width) { return (Exact{1} << width) - 1; }

}  // namespace

std::string to_string(Exact value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Exact binomial(unsigned n, unsigned k) {
  if (n > kMaxExactWidth) {
    throw Error(ErrorKind::OutOfRange, "binomial row " + std::to_string(n) + " exceeds exact range");
  }
  if (k > n) return 0;
  k = std::min(k, n - k);
  // C(n, i) = C(n, i-1) * (n-i+1) / i stays integral at every step; the
  // product peaks near C(120, 59) * 61 < 2^123.
  Exact result = 1;
  for (unsigned i = 1; i <= k; ++i) result = result * (n - i + 1) / i;
  return result;
}

CapacityReport capacity(unsigned width) {
  check_width(width);
  CapacityReport report;
  report.width = width;
  report.peak_subset_size = width / 2;
  report.peak_combinations = binomial(width, report.peak_subset_size);
  report.nonempty_combinations = nonempty_subsets(width);
  // log2(2^K - 1) = K + log2(1 - 2^-K), without forming 2^K in floating point.
  report.capacity_bits = width + std::log1p(-std::ldexp(1.0, -static_cast<int>(width))) / std::log(2.0);
  report.marginal_bits = 1.0;
  return report;
}

std::vector<CapacityReport> capacity_table(unsigned max_width) {
  check_width(max_width);
  std::vector<CapacityReport> rows;
  rows.reserve(max_width);
  for (unsigned width = 1; width <= max_width; ++width) rows.push_back(capacity(width));
  return rows;
}

double capacity_ratio(unsigned width1, unsigned width2) {
  check_width(width1);
  check_width(width2);
  return static_cast<double>(nonempty_subsets(width1)) / static_cast<double>(nonempty_subsets(width2));
}

std::string_view load_class_name(LoadClass load) noexcept {
  switch (load) {
    case LoadClass::subcritical: return "subcritical";
    case LoadClass::critical: return "critical";
    case LoadClass::supercritical: return "supercritical";
  }
  return "subcritical";
}

GrowthParams growth(double introduction_rate, double learner_capacity) {
  if (!(learner_capacity > 0.0) || !std::isfinite(learner_capacity)) {
    throw Error(ErrorKind::BadCapacity, "learner capacity C_0 must be a positive number");
  }
  if (!(introduction_rate >= 0.0) || !std::isfinite(introduction_rate)) {
    throw Error(ErrorKind::OutOfRange, "introduction rate L_n must be non-negative");
  }
  GrowthParams params;
  params.introduction_rate = introduction_rate;
  params.learner_capacity = learner_capacity;
  params.scale_bits = introduction_rate * 1.0;  // MRB is one bit per mode
  params.normalized_load = params.scale_bits / learner_capacity;
  if (std::abs(params.normalized_load - 1.0) <= kCriticalTolerance) {
    params.load = LoadClass::critical;
  } else {
    params.load = params.normalized_load < 1.0 ? LoadClass::subcritical : LoadClass::supercritical;
  }
  return params;
}

std::string_view coverage_band_name(CoverageBand band) noexcept {
  switch (band) {
    case CoverageBand::limited: return "limited";
    case CoverageBand::moderate: return "moderate";
    case CoverageBand::high: return "high";
  }
  return "limited";
}

CoverageReport coverage(unsigned used, unsigned available) {
  if (available == 0) throw Error(ErrorKind::OutOfRange, "available width K must be at least 1");
  if (used > available) {
    throw Error(ErrorKind::BadCount, "used modes " + std::to_string(used) + " exceed available width " +
                                         std::to_string(available));
  }
  CoverageReport report;
  report.used = used;
  report.available = available;
  report.coverage = static_cast<double>(used) / static_cast<double>(available);
  if (report.coverage < 0.3) {
    report.band = CoverageBand::limited;
  } else if (report.coverage < 0.7) {
    report.band = CoverageBand::moderate;
  } else {
    report.band = CoverageBand::high;
  }
  return report;
}

}  // namespace rhetor
