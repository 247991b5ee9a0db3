#include "trackfold/feature.hpp"

#include <algorithm>
#include <cmath>

namespace trackfold {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ZeroNorm: return "ZeroNorm";
    case Errc::NegativeComponent: return "NegativeComponent";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyTrack: return "EmptyTrack";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::MethodMismatch: return "MethodMismatch";
    case Errc::DuplicateTrack: return "DuplicateTrack";
    case Errc::MissingPosteriors: return "MissingPosteriors";
    case Errc::MissingLabel: return "MissingLabel";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::UnknownTrack: return "UnknownTrack";
    case Errc::InsufficientTracks: return "InsufficientTracks";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::DuplicateFrame: return "DuplicateFrame";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

std::size_t TrackDataset::total_frames() const {
  std::size_t total = 0;
  for (const auto& track : tracks) total += track.frame_count();
  return total;
}

const Track* TrackDataset::find(const std::string& track_id) const {
  for (const auto& track : tracks) {
    if (track.track_id == track_id) return &track;
  }
  return nullptr;
}

double stable_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double compensation = 0.0;
  for (double x : values) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double l2_norm(const FeatureVector& v) {
  double sum_squares = 0.0;
  for (double x : v) sum_squares += x * x;
  return std::sqrt(sum_squares);
}

FeatureVector l2_normalize(const FeatureVector& v) {
  const double norm = l2_norm(v);
  if (!(norm > kZeroNormThreshold)) {
    throw TrackError(Errc::ZeroNorm, "cannot L2-normalize a (near-)zero vector");
  }
  FeatureVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  return out;
}

ProbabilityVector l1_normalize(const FeatureVector& v) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) {
      throw TrackError(Errc::NegativeComponent,
                       "L1 normalization requires nonnegative components");
    }
    sum += x;
  }
  if (!(sum > kZeroNormThreshold)) {
    throw TrackError(Errc::ZeroNorm, "cannot L1-normalize an all-zero vector");
  }
  ProbabilityVector out;
  out.values.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = v[i] / sum;
  return out;
}

ValidationReport validate_dataset(const TrackDataset& dataset) {
  ValidationReport report;

  // Reference dimension comes from the first non-empty track.
  std::size_t reference_dim = 0;
  std::string reference_track;
  for (const auto& track : dataset.tracks) {
    if (!track.frames.empty()) {
      reference_dim = track.dim();
      reference_track = track.track_id;
      break;
    }
  }

  std::vector<std::string> seen_ids;
  for (const auto& track : dataset.tracks) {
    if (std::find(seen_ids.begin(), seen_ids.end(), track.track_id) != seen_ids.end()) {
      report.findings.push_back(
          {FindingKind::DuplicateTrackId, track.track_id, "track id appears more than once"});
    } else {
      seen_ids.push_back(track.track_id);
    }

    if (track.frames.empty()) {
      report.findings.push_back({FindingKind::EmptyTrack, track.track_id, "track has no frames"});
      continue;
    }

    const auto span = track.end_frame - track.start_frame + 1;
    if (span < 1 || static_cast<std::size_t>(span) != track.frame_count()) {
      report.findings.push_back({FindingKind::FrameSpanMismatch, track.track_id,
                                 "frame span [" + std::to_string(track.start_frame) + "," +
                                     std::to_string(track.end_frame) + "] does not cover " +
                                     std::to_string(track.frame_count()) + " frames"});
    }

    if (track.dim() != reference_dim) {
      report.findings.push_back({FindingKind::DimensionMismatch, track.track_id,
                                 "dim " + std::to_string(track.dim()) + " differs from dim " +
                                     std::to_string(reference_dim) + " of track " +
                                     reference_track});
    }

    for (std::size_t f = 0; f < track.frames.size(); ++f) {
      if (track.frames[f].size() != track.dim()) {
        report.findings.push_back({FindingKind::DimensionMismatch, track.track_id,
                                   "frame " + std::to_string(f) + " has dim " +
                                       std::to_string(track.frames[f].size()) +
                                       " but the track starts with dim " +
                                       std::to_string(track.dim())});
      }
      for (double x : track.frames[f]) {
        if (!std::isfinite(x)) {
          report.findings.push_back({FindingKind::NonFiniteValue, track.track_id,
                                     "non-finite value in frame " + std::to_string(f)});
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace trackfold
