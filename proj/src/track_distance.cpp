#include "trackfold/track_distance.hpp"

#include <utility>

namespace trackfold {

namespace {

const std::vector<std::pair<std::string, AggregationMethod>>& aggregation_table() {
  static const std::vector<std::pair<std::string, AggregationMethod>> table = {
      {"medoid", {PoolingKind::Medoid, Normalization::None}},
      {"l2-medoid", {PoolingKind::Medoid, Normalization::NormalizeThenAggregate}},
      {"medoid-l2", {PoolingKind::Medoid, Normalization::AggregateThenNormalize}},
      {"avepool", {PoolingKind::AvePool, Normalization::None}},
      {"l2-avepool", {PoolingKind::AvePool, Normalization::NormalizeThenAggregate}},
      {"avepool-l2", {PoolingKind::AvePool, Normalization::AggregateThenNormalize}},
  };
  return table;
}

std::string joined_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

double representation_distance(const TrackRepresentation& a, const TrackRepresentation& b) {
  if (!(a.method == b.method)) {
    throw TrackError(Errc::MethodMismatch,
                     "representations '" + a.track_id + "' (" + aggregation_name(a.method) +
                         ") and '" + b.track_id + "' (" + aggregation_name(b.method) +
                         ") were built with different methods");
  }
  return euclidean(a.vector, b.vector);
}

double track_distance(const Track& a, const Track& b, const TrackDistanceMethod& method) {
  if (method.kind == TrackDistanceMethod::Kind::PairwiseAverage) {
    return pairwise_average_distance(a, b, method.frame_normalization);
  }
  if (!method.aggregation.has_value()) {
    throw TrackError(Errc::InvalidConfig,
                     "representation track distance needs an aggregation method");
  }
  return representation_distance(aggregate(a, *method.aggregation),
                                 aggregate(b, *method.aggregation));
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {
      "raw-pairwise", "l2-pairwise", "medoid", "medoid-l2",
      "avepool",      "l2-avepool",  "avepool-l2",
  };
  return names;
}

std::string method_name(const TrackDistanceMethod& method) {
  if (method.kind == TrackDistanceMethod::Kind::PairwiseAverage) {
    return method.frame_normalization == FrameNormalization::L2PerFrame ? "l2-pairwise"
                                                                        : "raw-pairwise";
  }
  return aggregation_name(method.aggregation.value());
}

TrackDistanceMethod parse_method_name(std::string_view name) {
  if (name == "raw-pairwise") return TrackDistanceMethod::pairwise(FrameNormalization::Raw);
  if (name == "l2-pairwise") {
    return TrackDistanceMethod::pairwise(FrameNormalization::L2PerFrame);
  }
  for (const auto& [tag, agg] : aggregation_table()) {
    if (tag == name && tag != "l2-medoid") return TrackDistanceMethod::representation(agg);
  }
  throw TrackError(Errc::InvalidConfig, "unknown method '" + std::string(name) +
                                            "'; valid methods: " + joined_names(method_names()));
}

std::string aggregation_name(const AggregationMethod& method) {
  for (const auto& [tag, agg] : aggregation_table()) {
    if (agg == method) return tag;
  }
  return "unknown";
}

AggregationMethod parse_aggregation_name(std::string_view name) {
  for (const auto& [tag, agg] : aggregation_table()) {
    if (tag == name) return agg;
  }
  throw TrackError(Errc::InvalidConfig,
                   "unknown aggregation '" + std::string(name) +
                       "'; valid aggregations: " + joined_names(aggregation_names()));
}

const std::vector<std::string>& aggregation_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [tag, agg] : aggregation_table()) out.push_back(tag);
    return out;
  }();
  return names;
}

}  // namespace trackfold
