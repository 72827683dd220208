#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rhetor {

// Exact unsigned integer wide enough for 2^120 - 1 and C(120, 60).
using Exact = unsigned __int128;

inline constexpr unsigned kMaxExactWidth = 120;

std::string to_string(Exact value);

// C(n, k) in exact arithmetic; 0 when k > n. Throws OutOfRange for n > 120.
Exact binomial(unsigned n, unsigned k);

// Capacity bundle for a rhetorical width K (number of available modes).
struct CapacityReport {
  unsigned width = 0;              // K
  unsigned peak_subset_size = 0;   // k_m = floor(K/2)
  Exact peak_combinations = 0;     // K_max = C(K, k_m)
  Exact nonempty_combinations = 0; // K_NRC = 2^K - 1
  double capacity_bits = 0.0;      // K_RC = log2(K_NRC)
  double marginal_bits = 1.0;      // MRB, bits per added mode
};

CapacityReport capacity(unsigned width);

// Rows K = 1..max_width.
std::vector<CapacityReport> capacity_table(unsigned max_width);

// K_NRC(K1) / K_NRC(K2).
double capacity_ratio(unsigned width1, unsigned width2);

enum class LoadClass { subcritical, critical, supercritical };

std::string_view load_class_name(LoadClass load) noexcept;

inline constexpr double kCriticalTolerance = 1e-9;

struct GrowthParams {
  double introduction_rate = 0.0;  // L_n, modes per stage
  double learner_capacity = 1.0;   // C_0, bits per stage
  double scale_bits = 0.0;         // R_scale = L_n * MRB
  double normalized_load = 0.0;    // R_scale / C_0
  LoadClass load = LoadClass::subcritical;
};

GrowthParams growth(double introduction_rate, double learner_capacity);

enum class CoverageBand { limited, moderate, high };

std::string_view coverage_band_name(CoverageBand band) noexcept;

struct CoverageReport {
  unsigned used = 0;       // K_u
  unsigned available = 0;  // K
  double coverage = 0.0;   // C_m = K_u / K
  CoverageBand band = CoverageBand::limited;
};

// Bands: limited below 0.3, moderate in [0.3, 0.7), high from 0.7.
CoverageReport coverage(unsigned used, unsigned available);

}  // namespace rhetor
