#pragma once

#include <cstddef>

#include "trackfold/feature.hpp"

namespace trackfold {

enum class DistanceKind {
  Euclidean,    // any pair of equal-dim feature vectors
  KLSymmetric,  // probability vectors only
};

// Whether pairwise track matching normalizes each frame first.
enum class FrameNormalization { Raw, L2PerFrame };

double euclidean(const FeatureVector& a, const FeatureVector& b);

// Kullback-Leibler divergence in nats, with additive smoothing eps=1e-10 and
// renormalization so zero components (underflowed softmax outputs) stay
// finite. symmetric=true returns the Jeffreys mean (KL(p|q)+KL(q|p))/2.
double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q,
                     bool symmetric = true);

inline constexpr double kKlSmoothingEpsilon = 1e-10;

// Mean Euclidean distance over all frame pairs of the two tracks:
//   (1 / (dt1*dt2)) * sum_t sum_t' rho(x(t), x(t'))
// Exactly symmetric in its arguments. When eval_count is non-null it receives
// the number of frame-distance evaluations performed (dt1*dt2).
double pairwise_average_distance(const Track& a, const Track& b,
                                 FrameNormalization frame_norm,
                                 std::size_t* eval_count = nullptr);

// One row of the pairwise double sum: total distance from a single frame to
// every frame of a track. Rows are independent, so callers may fan them out.
double frame_to_track_distance_sum(const FeatureVector& frame, const Track& track,
                                   FrameNormalization frame_norm);

}  // namespace trackfold
