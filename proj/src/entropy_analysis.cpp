#include "rhetor/entropy_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rhetor/capacity_metrics.hpp"
#include "rhetor/errors.hpp"

namespace rhetor {

namespace {

void check_width(unsigned width) {
  if (width == 0 || width > kMaxEntropyWidth) {
    throw Error(ErrorKind::OutOfRange,
                "width " + std::to_string(width) + " outside 1.." + std::to_string(kMaxEntropyWidth));
  }
}

// Sum of -q log2 q over terms sorted by descending q.
double sum_descending(std::vector<double>& terms, std::vector<double>& weights) {
  std::vector<std::size_t> order(terms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&weights](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  double total = 0.0;
  for (std::size_t i : order) total += terms[i];
  return total;
}

}  // namespace

double entropy_flat(std::span<const double> probabilities) {
  if (probabilities.empty()) throw Error(ErrorKind::BadDistribution, "empty distribution");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::BadDistribution, "probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance) {
    throw Error(ErrorKind::BadDistribution, "probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  double bits = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) bits -= p * std::log2(p);
  }
  return bits == 0.0 ? 0.0 : bits;
}

double subset_size_entropy_exact(unsigned width) {
  if (width == 0 || width > kMaxExactWidth) {
    throw Error(ErrorKind::OutOfRange, "exact route covers widths 1.." + std::to_string(kMaxExactWidth));
  }
  const Exact total = (Exact{1} << width) - 1;
  const long double denominator = static_cast<long double>(total);
  std::vector<double> terms, weights;
  for (unsigned k = 1; k <= width; ++k) {
    const long double q = static_cast<long double>(binomial(width, k)) / denominator;
    weights.push_back(static_cast<double>(q));
    terms.push_back(static_cast<double>(-q * std::log2(q)));
  }
  const double bits = sum_descending(terms, weights);
  return bits <= 0.0 ? 0.0 : bits;
}

double subset_size_entropy_logspace(unsigned width) {
  check_width(width);
  const double n = width;
  // ln(2^K - 1) = K ln 2 + ln(1 - 2^-K)
  const double log_total = n * std::numbers::ln2 + std::log1p(-std::ldexp(1.0, -static_cast<int>(width)));
  const double log_n_factorial = std::lgamma(n + 1.0);
  std::vector<double> terms, weights;
  for (unsigned k = 1; k <= width; ++k) {
    const double log_q = log_n_factorial - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - log_total;
    const double q = std::exp(log_q);  // underflows to 0 far in the tails, which is the right limit
    weights.push_back(q);
    terms.push_back(q == 0.0 ? 0.0 : -q * log_q / std::numbers::ln2);
  }
  const double bits = sum_descending(terms, weights);
  return bits <= 0.0 ? 0.0 : bits;
}

double subset_size_entropy_asymptotic(unsigned width) {
  check_width(width);
  return 0.5 * std::log2(std::numbers::pi * std::numbers::e * width / 2.0);
}

EntropyReport entropy_subset_sizes(unsigned width) {
  check_width(width);
  EntropyReport report;
  report.width = width;
  report.flat_bits = std::log2(static_cast<double>(width));
  report.subset_bits =
      width <= kMaxExactWidth ? subset_size_entropy_exact(width) : subset_size_entropy_logspace(width);
  report.asymptotic_bits = subset_size_entropy_asymptotic(width);
  report.gap = report.subset_bits - report.asymptotic_bits;
  return report;
}

LayeredEntropyReport entropy_layered(std::span<const LayerBranching> branchings, unsigned flat_width) {
  if (branchings.empty()) throw Error(ErrorKind::OutOfRange, "layered entropy needs at least one layer");
  LayeredEntropyReport report;
  for (const LayerBranching& layer : branchings) {
    const double bits = entropy_subset_sizes(layer.branching).subset_bits;
    report.stages.push_back({layer.name, layer.branching, bits});
    report.max_stage_bits = std::max(report.max_stage_bits, bits);
    report.sum_stage_bits += bits;
  }
  report.flat_width = flat_width;
  report.flat_bits = entropy_subset_sizes(flat_width).subset_bits;
  return report;
}

}  // namespace rhetor
