#pragma once

#include <string>
#include <vector>

#include "trackfold/cluster.hpp"
#include "trackfold/track_distance.hpp"

namespace trackfold {

struct VerificationPair {
  std::string track_a;
  std::string track_b;
  bool same = false;
  int fold = 0;

  bool operator==(const VerificationPair& other) const = default;
};

struct ScoredPair {
  VerificationPair pair;
  double distance = 0.0;
};

struct LabeledDistance {
  bool same = false;
  double distance = 0.0;
};

struct RocPoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction of different pairs accepted (distance <= threshold)
  double frr = 0.0;  // fraction of same pairs rejected (distance > threshold)
};

struct RocCurve {
  std::vector<RocPoint> points;  // ordered by increasing threshold
};

// Means and sample standard deviations across folds, in percent.
struct MetricReport {
  double auc_mean = 0.0;
  double auc_std = 0.0;
  double eer_mean = 0.0;
  double eer_std = 0.0;
  double frr_at_far_mean = 0.0;
  double frr_at_far_std = 0.0;
  double far_operating_point = 0.01;
  int fold_count = 0;
};

// One distance per pair via track_distance. Representation methods aggregate
// each referenced track once. threads > 1 scores pairs in parallel; the
// output order always matches the input order.
std::vector<ScoredPair> score_pairs(const TrackDataset& dataset,
                                    const std::vector<VerificationPair>& pairs,
                                    const TrackDistanceMethod& method,
                                    unsigned threads = 1);

std::vector<LabeledDistance> to_labeled(const std::vector<ScoredPair>& scored);

// Curve points at every distinct distance plus the two infinite sentinels.
// Acceptance is distance <= threshold (smaller distance = more likely same).
RocCurve roc(const std::vector<LabeledDistance>& scored);

// Area under TAR(=1-FRR) vs FAR, trapezoidal. Equals the probability that a
// random same pair scores below a random different pair, ties counted half.
double auc(const RocCurve& curve);

// Error rate where FAR = FRR, linearly interpolated between curve points.
double eer(const RocCurve& curve);

// FRR at the largest threshold with FAR <= far_target. Step convention, no
// interpolation: this is an operating-point guarantee.
double frr_at_far(const RocCurve& curve, double far_target);

// Largest observed different-pair distance whose training FAR stays within
// far_target. Falls back to just below the smallest different-pair distance
// when even that accepts too many.
double calibrate_threshold(const std::vector<LabeledDistance>& train, double far_target);

MetricReport kfold_report(const TrackDataset& dataset,
                          const std::vector<VerificationPair>& pairs,
                          const TrackDistanceMethod& method, double far_target,
                          unsigned threads = 1);

// Fold metrics in fraction units, mostly useful for tests and diagnostics.
struct FoldMetrics {
  int fold = 0;
  double auc = 0.0;
  double eer = 0.0;
  double frr_at_far = 0.0;
};

std::vector<FoldMetrics> per_fold_metrics(const std::vector<ScoredPair>& scored,
                                          double far_target);

}  // namespace trackfold
