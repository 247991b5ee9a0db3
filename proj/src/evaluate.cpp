#include "trackfold/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "trackfold/parallel.hpp"

namespace trackfold {

std::vector<ScoredPair> score_pairs(const TrackDataset& dataset,
                                    const std::vector<VerificationPair>& pairs,
                                    const TrackDistanceMethod& method, unsigned threads) {
  std::unordered_map<std::string, const Track*> index;
  index.reserve(dataset.tracks.size());
  for (const auto& track : dataset.tracks) index.emplace(track.track_id, &track);

  const auto lookup = [&index](const std::string& id) -> const Track& {
    const auto it = index.find(id);
    if (it == index.end()) {
      throw TrackError(Errc::UnknownTrack, "pair references unknown track '" + id + "'");
    }
    return *it->second;
  };

  std::vector<ScoredPair> scored(pairs.size());

  if (method.kind == TrackDistanceMethod::Kind::Representation) {
    // Aggregate each referenced track once; identical values to calling
    // track_distance per pair, aggregation being deterministic.
    std::vector<const Track*> referenced;
    std::unordered_map<std::string, std::size_t> rep_slot;
    for (const auto& pair : pairs) {
      for (const auto* id : {&pair.track_a, &pair.track_b}) {
        if (rep_slot.emplace(*id, referenced.size()).second) {
          referenced.push_back(&lookup(*id));
        }
      }
    }
    std::vector<TrackRepresentation> reps(referenced.size());
    parallel_for(referenced.size(), threads, [&](std::size_t i) {
      reps[i] = aggregate(*referenced[i], *method.aggregation);
    });
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
      scored[i].pair = pairs[i];
      scored[i].distance = representation_distance(reps[rep_slot.at(pairs[i].track_a)],
                                                   reps[rep_slot.at(pairs[i].track_b)]);
    });
    return scored;
  }

  for (const auto& pair : pairs) {
    lookup(pair.track_a);
    lookup(pair.track_b);
  }
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    scored[i].pair = pairs[i];
    scored[i].distance = pairwise_average_distance(
        lookup(pairs[i].track_a), lookup(pairs[i].track_b), method.frame_normalization);
  });
  return scored;
}

std::vector<LabeledDistance> to_labeled(const std::vector<ScoredPair>& scored) {
  std::vector<LabeledDistance> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back({s.pair.same, s.distance});
  return out;
}

RocCurve roc(const std::vector<LabeledDistance>& scored) {
  std::size_t same_count = 0, diff_count = 0;
  for (const auto& s : scored) (s.same ? same_count : diff_count)++;
  if (same_count == 0 || diff_count == 0) {
    throw TrackError(Errc::DegenerateLabels,
                     "ROC needs at least one same and one different pair");
  }

  std::vector<LabeledDistance> sorted = scored;
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledDistance& a, const LabeledDistance& b) {
              return a.distance < b.distance;
            });

  RocCurve curve;
  curve.points.push_back({-std::numeric_limits<double>::infinity(), 0.0, 1.0});

  std::size_t accepted_same = 0, accepted_diff = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double threshold = sorted[i].distance;
    while (i < sorted.size() && sorted[i].distance == threshold) {
      (sorted[i].same ? accepted_same : accepted_diff)++;
      ++i;
    }
    curve.points.push_back(
        {threshold, static_cast<double>(accepted_diff) / static_cast<double>(diff_count),
         static_cast<double>(same_count - accepted_same) / static_cast<double>(same_count)});
  }

  curve.points.push_back({std::numeric_limits<double>::infinity(), 1.0, 0.0});
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& prev = curve.points[i - 1];
    const auto& cur = curve.points[i];
    area += (cur.far - prev.far) * ((1.0 - prev.frr) + (1.0 - cur.frr)) / 2.0;
  }
  return area;
}

double eer(const RocCurve& curve) {
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double gap = curve.points[i].far - curve.points[i].frr;
    if (gap == 0.0) return curve.points[i].far;
    if (gap > 0.0) {
      // Crossing lies between points i-1 and i; interpolate both rates
      // linearly along the segment.
      const auto& lo = curve.points[i - 1];
      const auto& hi = curve.points[i];
      const double denom = (hi.far - lo.far) - (hi.frr - lo.frr);
      if (denom == 0.0) return hi.far;
      const double t = (lo.frr - lo.far) / denom;
      return lo.far + t * (hi.far - lo.far);
    }
  }
  return curve.points.back().far;  // unreachable for a valid curve
}

double frr_at_far(const RocCurve& curve, double far_target) {
  if (!(far_target > 0.0) || !(far_target < 1.0)) {
    throw TrackError(Errc::InvalidConfig, "far_target must lie strictly inside (0, 1)");
  }
  double result = 1.0;
  for (const auto& point : curve.points) {
    if (point.far <= far_target) {
      result = point.frr;  // thresholds ascend, so the last hit is the largest
    }
  }
  return result;
}

double calibrate_threshold(const std::vector<LabeledDistance>& train, double far_target) {
  if (!(far_target > 0.0) || !(far_target < 1.0)) {
    throw TrackError(Errc::InvalidConfig, "far_target must lie strictly inside (0, 1)");
  }
  std::vector<double> diff_distances;
  for (const auto& s : train) {
    if (!s.same) diff_distances.push_back(s.distance);
  }
  if (diff_distances.empty()) {
    throw TrackError(Errc::DegenerateLabels,
                     "threshold calibration needs different-person pairs");
  }
  std::sort(diff_distances.begin(), diff_distances.end());

  const double total = static_cast<double>(diff_distances.size());
  double best = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < diff_distances.size(); ++i) {
    // accepted count at threshold diff_distances[i] is the upper bound of its
    // tie group
    std::size_t j = i;
    while (j + 1 < diff_distances.size() && diff_distances[j + 1] == diff_distances[i]) ++j;
    const double far = static_cast<double>(j + 1) / total;
    if (far <= far_target) best = diff_distances[i];
    i = j;
  }
  if (std::isnan(best)) {
    // Even the smallest observed distance accepts too many: back off to just
    // below it, which accepts nothing from the training set.
    return std::nextafter(diff_distances.front(), -std::numeric_limits<double>::infinity());
  }
  return best;
}

std::vector<FoldMetrics> per_fold_metrics(const std::vector<ScoredPair>& scored,
                                          double far_target) {
  std::map<int, std::vector<LabeledDistance>> by_fold;
  for (const auto& s : scored) by_fold[s.pair.fold].push_back({s.pair.same, s.distance});

  std::vector<FoldMetrics> out;
  for (const auto& [fold, labeled] : by_fold) {
    RocCurve curve;
    try {
      curve = roc(labeled);
    } catch (const TrackError& e) {
      if (e.code() == Errc::DegenerateLabels) {
        throw TrackError(Errc::DegenerateLabels,
                         "fold " + std::to_string(fold) + " lacks a class");
      }
      throw;
    }
    out.push_back({fold, auc(curve), eer(curve), frr_at_far(curve, far_target)});
  }
  return out;
}

namespace {

std::pair<double, double> mean_and_sample_std(const std::vector<double>& values) {
  // identical folds must report exactly zero spread
  const bool all_equal =
      std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
  if (all_equal) return {values.front(), 0.0};

  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);
  return {mean, std::sqrt(squares / (n - 1.0))};
}

}  // namespace

MetricReport kfold_report(const TrackDataset& dataset,
                          const std::vector<VerificationPair>& pairs,
                          const TrackDistanceMethod& method, double far_target,
                          unsigned threads) {
  const auto scored = score_pairs(dataset, pairs, method, threads);
  const auto folds = per_fold_metrics(scored, far_target);
  if (folds.empty()) {
    throw TrackError(Errc::DegenerateLabels, "no folds to evaluate");
  }

  std::vector<double> aucs, eers, frrs;
  for (const auto& f : folds) {
    aucs.push_back(f.auc * 100.0);
    eers.push_back(f.eer * 100.0);
    frrs.push_back(f.frr_at_far * 100.0);
  }

  MetricReport report;
  report.far_operating_point = far_target;
  report.fold_count = static_cast<int>(folds.size());
  std::tie(report.auc_mean, report.auc_std) = mean_and_sample_std(aucs);
  std::tie(report.eer_mean, report.eer_std) = mean_and_sample_std(eers);
  std::tie(report.frr_at_far_mean, report.frr_at_far_std) = mean_and_sample_std(frrs);
  return report;
}

}  // namespace trackfold
