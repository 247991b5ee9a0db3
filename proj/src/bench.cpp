#include "trackfold/bench.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "trackfold/synth.hpp"

namespace trackfold {

namespace {

inline void keep(double value) {
  asm volatile("" : : "g"(value) : "memory");
}

using Clock = std::chrono::steady_clock;

// Repeats the whole pair sweep until the window is filled, then returns the
// per-pair cost in microseconds.
template <typename Fn>
double time_per_pair(std::size_t pairs, double window_seconds, Fn&& sweep) {
  std::size_t repetitions = 0;
  const auto start = Clock::now();
  double elapsed = 0.0;
  do {
    sweep();
    ++repetitions;
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  } while (elapsed < window_seconds);
  return elapsed * 1e6 / (static_cast<double>(repetitions) * static_cast<double>(pairs));
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.frames_per_track < 1 || config.dim < 1 || config.pairs < 1) {
    throw TrackError(Errc::InvalidConfig, "bench parameters must be positive");
  }

  std::vector<TrackDistanceMethod> methods = config.methods;
  if (methods.empty()) {
    for (const auto& name : method_names()) methods.push_back(parse_method_name(name));
  }

  // Two tracks per pair, all the same identity count as pairs; the content is
  // irrelevant to timing, only the shape matters.
  SynthConfig synth_config;
  synth_config.seed = config.seed;
  synth_config.dim = config.dim;
  synth_config.identities = config.pairs;
  synth_config.tracks_per_identity = 2;
  synth_config.frames_min = synth_config.frames_max = config.frames_per_track;
  synth_config.noise_sigma = 0.1;
  synth_config.gain_spread = 0.2;
  const SynthDataset synth = generate(synth_config);

  std::vector<std::pair<const Track*, const Track*>> track_pairs;
  for (std::size_t i = 0; i + 1 < synth.dataset.tracks.size(); i += 2) {
    track_pairs.emplace_back(&synth.dataset.tracks[i], &synth.dataset.tracks[i + 1]);
  }

  BenchReport report;
  report.frames_per_track = config.frames_per_track;
  report.dim = config.dim;
  report.pairs = track_pairs.size();

  // Speedups are measured against l2-pairwise when present (the accuracy
  // reference), otherwise raw-pairwise.
  double baseline_micros = 0.0;
  for (const auto& method : methods) {
    if (method.kind != TrackDistanceMethod::Kind::PairwiseAverage) continue;
    if (report.baseline.empty() ||
        method.frame_normalization == FrameNormalization::L2PerFrame) {
      report.baseline = method_name(method);
    }
  }

  for (const auto& method : methods) {
    BenchRow row;
    row.method = method_name(method);

    if (method.kind == TrackDistanceMethod::Kind::PairwiseAverage) {
      std::size_t evals = 0;
      pairwise_average_distance(*track_pairs.front().first, *track_pairs.front().second,
                                method.frame_normalization, &evals);
      row.frame_distance_evals_per_pair = evals;
      row.micros_per_pair =
          time_per_pair(track_pairs.size(), config.min_timing_window_seconds, [&] {
            for (const auto& [a, b] : track_pairs) {
              keep(pairwise_average_distance(*a, *b, method.frame_normalization));
            }
          });
      if (row.method == report.baseline) baseline_micros = row.micros_per_pair;
    } else {
      std::vector<TrackRepresentation> left, right;
      const auto aggregation_start = Clock::now();
      for (const auto& [a, b] : track_pairs) {
        left.push_back(aggregate(*a, *method.aggregation));
        right.push_back(aggregate(*b, *method.aggregation));
      }
      row.aggregation_micros_per_track =
          std::chrono::duration<double>(Clock::now() - aggregation_start).count() * 1e6 /
          (2.0 * static_cast<double>(track_pairs.size()));

      row.frame_distance_evals_per_pair = 1;
      row.micros_per_pair =
          time_per_pair(track_pairs.size(), config.min_timing_window_seconds, [&] {
            for (std::size_t i = 0; i < track_pairs.size(); ++i) {
              keep(representation_distance(left[i], right[i]));
            }
          });
    }
    report.rows.push_back(std::move(row));
  }

  if (baseline_micros > 0.0) {
    for (auto& row : report.rows) {
      if (row.frame_distance_evals_per_pair == 1) {
        row.speedup_vs_baseline = baseline_micros / row.micros_per_pair;
      }
    }
  }
  return report;
}

std::string format_bench_table(const BenchReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "matching cost, %zu pairs, %zu frames/track, dim %zu\n",
                report.pairs, report.frames_per_track, report.dim);
  out << line;
  std::snprintf(line, sizeof(line), "%-14s %14s %18s %16s %12s\n", "method", "us/pair",
                "frame-dists/pair", "agg us/track", "speedup");
  out << line;
  for (const auto& row : report.rows) {
    char speedup[32] = "-";
    if (row.speedup_vs_baseline > 0.0) {
      std::snprintf(speedup, sizeof(speedup), "%.1fx", row.speedup_vs_baseline);
    }
    char agg[32] = "-";
    if (row.aggregation_micros_per_track > 0.0) {
      std::snprintf(agg, sizeof(agg), "%.2f", row.aggregation_micros_per_track);
    }
    std::snprintf(line, sizeof(line), "%-14s %14.3f %18zu %16s %12s\n", row.method.c_str(),
                  row.micros_per_pair, row.frame_distance_evals_per_pair, agg, speedup);
    out << line;
  }
  if (!report.baseline.empty()) {
    out << "speedup relative to " << report.baseline << " per-pair matching\n";
  }
  return out.str();
}

void write_bench_report(const BenchReport& report, std::ostream& out) {
  nlohmann::ordered_json root;
  root["frames_per_track"] = report.frames_per_track;
  root["dim"] = report.dim;
  root["pairs"] = report.pairs;
  root["baseline"] = report.baseline;
  root["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json object;
    object["method"] = row.method;
    object["micros_per_pair"] = row.micros_per_pair;
    object["aggregation_micros_per_track"] = row.aggregation_micros_per_track;
    object["frame_distance_evals_per_pair"] = row.frame_distance_evals_per_pair;
    object["speedup_vs_baseline"] = row.speedup_vs_baseline;
    root["rows"].push_back(std::move(object));
  }
  out << root.dump(2) << '\n';
}

}  // namespace trackfold
