#include "trackfold/distance.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace trackfold {

double euclidean(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) {
    throw TrackError(Errc::DimensionMismatch,
                     "euclidean: dims " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double sum_squares = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum_squares += d * d;
  }
  return std::sqrt(sum_squares);
}

namespace {

std::vector<double> smooth(const ProbabilityVector& p) {
  std::vector<double> out(p.values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = p.values[i] + kKlSmoothingEpsilon;
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

double kl_directed(const std::vector<double>& p, const std::vector<double>& q) {
  double divergence = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    divergence += p[i] * std::log(p[i] / q[i]);
  }
  return divergence;
}

}  // namespace

double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q,
                     bool symmetric) {
  if (p.size() != q.size()) {
    throw TrackError(Errc::DimensionMismatch,
                     "kl_divergence: lengths " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
  }
  const auto ps = smooth(p);
  const auto qs = smooth(q);
  const double forward = kl_directed(ps, qs);
  if (!symmetric) return forward;
  return (forward + kl_directed(qs, ps)) / 2.0;
}

namespace {

void check_pairwise_inputs(const Track& a, const Track& b) {
  if (a.frames.empty() || b.frames.empty()) {
    throw TrackError(Errc::EmptyTrack, "pairwise distance needs nonempty tracks ('" +
                                           a.track_id + "', '" + b.track_id + "')");
  }
  if (a.dim() != b.dim()) {
    throw TrackError(Errc::DimensionMismatch,
                     "tracks '" + a.track_id + "' (dim " + std::to_string(a.dim()) +
                         ") and '" + b.track_id + "' (dim " + std::to_string(b.dim()) + ")");
  }
}

std::vector<FeatureVector> maybe_normalized_frames(const Track& t,
                                                   FrameNormalization frame_norm) {
  std::vector<FeatureVector> frames;
  frames.reserve(t.frames.size());
  for (const auto& frame : t.frames) {
    frames.push_back(frame_norm == FrameNormalization::L2PerFrame ? l2_normalize(frame)
                                                                  : frame);
  }
  return frames;
}

// True when x orders strictly before y, comparing frame count first and then
// the flattened frame values. Gives pairwise_average_distance a canonical
// argument order, which makes d(a,b) and d(b,a) bitwise identical.
bool track_orders_before(const Track& a, const Track& b) {
  if (a.frames.size() != b.frames.size()) return a.frames.size() < b.frames.size();
  return a.frames < b.frames;
}

}  // namespace

double pairwise_average_distance(const Track& a, const Track& b,
                                 FrameNormalization frame_norm,
                                 std::size_t* eval_count) {
  check_pairwise_inputs(a, b);
  const Track& first = track_orders_before(b, a) ? b : a;
  const Track& second = track_orders_before(b, a) ? a : b;

  const auto frames_a = maybe_normalized_frames(first, frame_norm);
  const auto frames_b = maybe_normalized_frames(second, frame_norm);

  std::size_t evals = 0;
  double sum = 0.0;
  double compensation = 0.0;
  for (const auto& fa : frames_a) {
    for (const auto& fb : frames_b) {
      const double d = euclidean(fa, fb);
      ++evals;
      const double t = sum + d;
      if (std::abs(sum) >= std::abs(d)) {
        compensation += (sum - t) + d;
      } else {
        compensation += (d - t) + sum;
      }
      sum = t;
    }
  }
  if (eval_count != nullptr) *eval_count = evals;
  return (sum + compensation) / (static_cast<double>(frames_a.size()) *
                                 static_cast<double>(frames_b.size()));
}

double frame_to_track_distance_sum(const FeatureVector& frame, const Track& track,
                                   FrameNormalization frame_norm) {
  if (track.frames.empty()) {
    throw TrackError(Errc::EmptyTrack, "track '" + track.track_id + "' has no frames");
  }
  const FeatureVector query =
      frame_norm == FrameNormalization::L2PerFrame ? l2_normalize(frame) : frame;
  double sum = 0.0;
  for (const auto& other : track.frames) {
    sum += euclidean(query, frame_norm == FrameNormalization::L2PerFrame
                                ? l2_normalize(other)
                                : other);
  }
  return sum;
}

}  // namespace trackfold
