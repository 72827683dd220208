#pragma once

#include <span>
#include <string>
#include <vector>

namespace rhetor {

inline constexpr unsigned kMaxEntropyWidth = 1000;
inline constexpr double kDistributionTolerance = 1e-9;

// Shannon entropy in bits of a choice distribution. Zero-probability terms
// contribute nothing. Throws BadDistribution if any p < 0 or the sum is off
// from 1 by more than kDistributionTolerance.
double entropy_flat(std::span<const double> probabilities);

// Entropy of the size of a uniformly drawn non-empty subset of K modes:
// q_k = C(K,k) / (2^K - 1), H = -sum q_k log2 q_k.
struct EntropyReport {
  unsigned width = 0;
  double flat_bits = 0.0;        // log2 K
  double subset_bits = 0.0;      // exact sum
  double asymptotic_bits = 0.0;  // 0.5 * log2(pi e K / 2)
  double gap = 0.0;              // subset_bits - asymptotic_bits
};

EntropyReport entropy_subset_sizes(unsigned width);

// The two summation routes behind entropy_subset_sizes: exact 128-bit
// binomials (K <= 120) and log-gamma binomials (any K <= 1000).
double subset_size_entropy_exact(unsigned width);
double subset_size_entropy_logspace(unsigned width);
double subset_size_entropy_asymptotic(unsigned width);

struct LayerBranching {
  std::string name;
  unsigned branching = 0;
};

struct StageEntropy {
  std::string name;
  unsigned branching = 0;
  double bits = 0.0;
};

struct LayeredEntropyReport {
  std::vector<StageEntropy> stages;
  unsigned flat_width = 0;
  double flat_bits = 0.0;       // subset-size entropy of the flat selection
  double max_stage_bits = 0.0;  // largest single decision in the hierarchy
  double sum_stage_bits = 0.0;  // all decisions together
};

LayeredEntropyReport entropy_layered(std::span<const LayerBranching> branchings, unsigned flat_width);

}  // namespace rhetor
