#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trackfold/error.hpp"

namespace trackfold {

// One embedding per frame. All math runs on 64-bit reals regardless of the
// precision a file was written with; verification metrics are sensitive to
// sub-percent AUC differences and need stable accumulation.
using FeatureVector = std::vector<double>;

// Discrete posterior (age categories, gender, ...). Components are
// nonnegative and sum to 1 up to small tolerance.
struct ProbabilityVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const ProbabilityVector& other) const = default;
};

enum class Gender { Male = 0, Female = 1 };

struct Demographics {
  Gender gender = Gender::Male;
  int age_category = 0;  // 0..7
};

// Per-frame posterior pair as carried by the posteriors file.
struct FramePosteriors {
  ProbabilityVector age;     // 8 categories
  ProbabilityVector gender;  // male, female
};

struct Track {
  std::string track_id;
  std::string subject_id;  // ground truth; empty when unknown
  std::vector<FeatureVector> frames;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = -1;  // inclusive

  std::size_t frame_count() const { return frames.size(); }
  std::size_t dim() const { return frames.empty() ? 0 : frames.front().size(); }
};

struct TrackDataset {
  std::vector<Track> tracks;

  std::size_t track_count() const { return tracks.size(); }
  std::size_t total_frames() const;
  const Track* find(const std::string& track_id) const;
};

enum class FindingKind {
  EmptyTrack,
  DimensionMismatch,
  DuplicateTrackId,
  NonFiniteValue,
  FrameSpanMismatch,
};

struct ValidationFinding {
  FindingKind kind;
  std::string track_id;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool ok() const { return findings.empty(); }
};

// Norms below this are treated as degenerate zero vectors rather than
// directions; distinguishes true zeros from denormal noise.
inline constexpr double kZeroNormThreshold = 1e-30;

double l2_norm(const FeatureVector& v);

// Scales v to unit Euclidean length. Throws ZeroNorm for degenerate input.
FeatureVector l2_normalize(const FeatureVector& v);

// Scales a nonnegative vector so its components sum to 1, turning raw scores
// into a posterior. Throws NegativeComponent / ZeroNorm.
ProbabilityVector l1_normalize(const FeatureVector& v);

// Collects every structural defect instead of stopping at the first one;
// a dataset is accepted iff the report is empty.
ValidationReport validate_dataset(const TrackDataset& dataset);

// Sum with the summands sorted by value first (plus Neumaier compensation),
// so the result does not depend on the order the caller stored them in.
double stable_sum(std::vector<double> values);

}  // namespace trackfold
