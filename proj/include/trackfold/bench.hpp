#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trackfold/track_distance.hpp"

namespace trackfold {

// Matching-cost comparison between the pairwise frame matching and the
// fixed-size representation methods. Representation timings exclude the
// one-time aggregation, which is reported separately.
struct BenchConfig {
  std::size_t frames_per_track = 50;
  std::size_t dim = 256;
  std::size_t pairs = 100;
  std::vector<TrackDistanceMethod> methods;  // empty = all seven
  std::uint64_t seed = 7;
  double min_timing_window_seconds = 0.05;
};

struct BenchRow {
  std::string method;
  double micros_per_pair = 0.0;
  double aggregation_micros_per_track = 0.0;  // representation methods only
  std::size_t frame_distance_evals_per_pair = 0;
  double speedup_vs_baseline = 0.0;  // representation methods, vs pairwise baseline
};

struct BenchReport {
  std::size_t frames_per_track = 0;
  std::size_t dim = 0;
  std::size_t pairs = 0;
  std::string baseline;  // pairwise method the speedups are relative to
  std::vector<BenchRow> rows;
};

BenchReport run_bench(const BenchConfig& config);

std::string format_bench_table(const BenchReport& report);
void write_bench_report(const BenchReport& report, std::ostream& out);  // JSON

}  // namespace trackfold
