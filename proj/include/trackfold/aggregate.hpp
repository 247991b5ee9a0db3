#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trackfold/distance.hpp"
#include "trackfold/feature.hpp"

namespace trackfold {

enum class PoolingKind { Medoid, AvePool };

// Where the L2 normalization sits relative to pooling. The order is the
// interesting variable: normalize-then-aggregate and aggregate-then-normalize
// give different vectors whenever frame norms vary.
enum class Normalization { None, NormalizeThenAggregate, AggregateThenNormalize };

struct AggregationMethod {
  PoolingKind kind = PoolingKind::AvePool;
  Normalization normalization = Normalization::None;

  bool operator==(const AggregationMethod& other) const = default;
};

// True when the last step of the method is an L2 normalization, i.e. the
// produced vector is guaranteed unit length.
inline bool ends_with_normalization(const AggregationMethod& m) {
  return m.normalization == Normalization::AggregateThenNormalize;
}

struct TrackRepresentation {
  std::string track_id;
  FeatureVector vector;
  AggregationMethod method;
  std::int64_t frame_count = 0;  // weight for cluster merging
};

// Index of the frame minimizing the sum of distances to all other frames of
// the same track. Ties within 1e-12 resolve to the lexicographically smallest
// frame vector, so the result never depends on frame order.
std::size_t medoid_index(const Track& t, DistanceKind metric = DistanceKind::Euclidean);

FeatureVector medoid(const Track& t, DistanceKind metric = DistanceKind::Euclidean);

// Componentwise mean of the track's frames.
FeatureVector average_pool(const Track& t);

TrackRepresentation aggregate(const Track& t, const AggregationMethod& method);

// Pooled per-frame posteriors: componentwise mean, then L1-renormalized.
ProbabilityVector aggregate_probabilities(const Track& t,
                                          const std::vector<ProbabilityVector>& per_frame);

// Diagnostic for the medoid normalization-order question: the medoid of the
// normalized frames and the normalized medoid of the raw frames only pick
// the same frame when frame norms are (close to) equal.
struct MedoidOrderDiagnostic {
  std::size_t raw_index = 0;         // argmin over raw frames
  std::size_t normalized_index = 0;  // argmin over per-frame normalized frames
  bool identical = false;
};

MedoidOrderDiagnostic compare_medoid_normalization_order(const Track& t);

inline constexpr double kMedoidTieTolerance = 1e-12;

}  // namespace trackfold
