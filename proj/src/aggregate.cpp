#include "trackfold/aggregate.hpp"

#include <algorithm>
#include <string>

namespace trackfold {

namespace {

void require_nonempty(const Track& t) {
  if (t.frames.empty()) {
    throw TrackError(Errc::EmptyTrack, "track '" + t.track_id + "' has no frames");
  }
}

double frame_distance(const FeatureVector& a, const FeatureVector& b, DistanceKind metric) {
  if (metric == DistanceKind::KLSymmetric) {
    return kl_divergence(ProbabilityVector{a}, ProbabilityVector{b}, true);
  }
  return euclidean(a, b);
}

std::size_t medoid_index_of(const std::vector<FeatureVector>& frames, DistanceKind metric) {
  const std::size_t n = frames.size();
  if (n == 1) return 0;

  // Distance sums accumulate over the sorted per-frame distance multiset, so
  // the sums (and the argmin) are invariant under frame permutations.
  std::vector<double> sums(n, 0.0);
  std::vector<double> row(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(frame_distance(frames[i], frames[j], metric));
    }
    sums[i] = stable_sum(row);
  }

  const double best = *std::min_element(sums.begin(), sums.end());
  std::size_t winner = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (sums[i] <= best + kMedoidTieTolerance) {
      if (winner == n || frames[i] < frames[winner]) winner = i;
    }
  }
  return winner;
}

}  // namespace

std::size_t medoid_index(const Track& t, DistanceKind metric) {
  require_nonempty(t);
  return medoid_index_of(t.frames, metric);
}

FeatureVector medoid(const Track& t, DistanceKind metric) {
  return t.frames[medoid_index(t, metric)];
}

FeatureVector average_pool(const Track& t) {
  require_nonempty(t);
  const std::size_t dim = t.dim();
  FeatureVector mean(dim, 0.0);
  std::vector<double> column(t.frames.size());
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t f = 0; f < t.frames.size(); ++f) column[f] = t.frames[f][k];
    mean[k] = stable_sum(column) / static_cast<double>(t.frames.size());
  }
  return mean;
}

TrackRepresentation aggregate(const Track& t, const AggregationMethod& method) {
  require_nonempty(t);

  Track working = t;
  if (method.normalization == Normalization::NormalizeThenAggregate) {
    for (auto& frame : working.frames) frame = l2_normalize(frame);
  }

  FeatureVector pooled = method.kind == PoolingKind::Medoid
                             ? medoid(working, DistanceKind::Euclidean)
                             : average_pool(working);

  if (method.normalization == Normalization::AggregateThenNormalize) {
    pooled = l2_normalize(pooled);
  }

  return TrackRepresentation{t.track_id, std::move(pooled), method,
                             static_cast<std::int64_t>(t.frame_count())};
}

ProbabilityVector aggregate_probabilities(const Track& t,
                                          const std::vector<ProbabilityVector>& per_frame) {
  require_nonempty(t);
  if (per_frame.size() != t.frame_count()) {
    throw TrackError(Errc::LengthMismatch,
                     "track '" + t.track_id + "' has " + std::to_string(t.frame_count()) +
                         " frames but " + std::to_string(per_frame.size()) +
                         " probability vectors");
  }
  const std::size_t k = per_frame.front().size();
  for (const auto& p : per_frame) {
    if (p.size() != k) {
      throw TrackError(Errc::DimensionMismatch,
                       "probability vectors of track '" + t.track_id + "' differ in length");
    }
  }

  FeatureVector mean(k, 0.0);
  std::vector<double> column(per_frame.size());
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t f = 0; f < per_frame.size(); ++f) column[f] = per_frame[f].values[c];
    mean[c] = stable_sum(column) / static_cast<double>(per_frame.size());
  }
  // Softmax outputs are L1-normed; keep the pooled estimate on the simplex.
  return l1_normalize(mean);
}

MedoidOrderDiagnostic compare_medoid_normalization_order(const Track& t) {
  require_nonempty(t);
  MedoidOrderDiagnostic diag;
  diag.raw_index = medoid_index(t, DistanceKind::Euclidean);

  Track normalized = t;
  for (auto& frame : normalized.frames) frame = l2_normalize(frame);
  diag.normalized_index = medoid_index(normalized, DistanceKind::Euclidean);

  diag.identical = diag.raw_index == diag.normalized_index;
  return diag;
}

}  // namespace trackfold
