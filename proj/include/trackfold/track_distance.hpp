#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trackfold/aggregate.hpp"
#include "trackfold/distance.hpp"

namespace trackfold {

// A row of the method table: either the full pairwise frame matching or a
// distance between fixed-size track representations.
struct TrackDistanceMethod {
  enum class Kind { PairwiseAverage, Representation };

  Kind kind = Kind::PairwiseAverage;
  std::optional<AggregationMethod> aggregation;  // required iff Representation
  FrameNormalization frame_normalization = FrameNormalization::Raw;  // PairwiseAverage only

  static TrackDistanceMethod pairwise(FrameNormalization norm) {
    TrackDistanceMethod m;
    m.kind = Kind::PairwiseAverage;
    m.frame_normalization = norm;
    return m;
  }

  static TrackDistanceMethod representation(AggregationMethod agg) {
    TrackDistanceMethod m;
    m.kind = Kind::Representation;
    m.aggregation = agg;
    return m;
  }

  bool operator==(const TrackDistanceMethod& other) const = default;
};

// Euclidean distance between two representations of the same method.
double representation_distance(const TrackRepresentation& a, const TrackRepresentation& b);

// Dispatches to pairwise_average_distance or aggregate+representation_distance.
double track_distance(const Track& a, const Track& b, const TrackDistanceMethod& method);

// CLI vocabulary: raw-pairwise, l2-pairwise, medoid, medoid-l2, avepool,
// l2-avepool, avepool-l2.
const std::vector<std::string>& method_names();
std::string method_name(const TrackDistanceMethod& method);
TrackDistanceMethod parse_method_name(std::string_view name);

// Aggregation-only names additionally include l2-medoid (normalize-then-medoid),
// which has no distance-table row of its own.
std::string aggregation_name(const AggregationMethod& method);
AggregationMethod parse_aggregation_name(std::string_view name);
const std::vector<std::string>& aggregation_names();

}  // namespace trackfold
