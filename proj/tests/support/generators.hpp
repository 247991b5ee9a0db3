#pragma once

// Seeded random inputs for tests. Everything routes through PortableRng so a
// failing case is reproducible from its seed alone.

#include <string>
#include <vector>

#include "trackfold/feature.hpp"
#include "trackfold/rng.hpp"

namespace tftest {

inline trackfold::FeatureVector random_vector(trackfold::PortableRng& rng, std::size_t dim,
                                              double lo = -1.0, double hi = 1.0) {
  trackfold::FeatureVector v(dim);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline trackfold::FeatureVector random_nonnegative_vector(trackfold::PortableRng& rng,
                                                          std::size_t dim) {
  trackfold::FeatureVector v(dim);
  for (auto& x : v) x = rng.uniform(0.0, 1.0);
  return v;
}

inline trackfold::ProbabilityVector random_probability(trackfold::PortableRng& rng,
                                                       std::size_t dim) {
  trackfold::FeatureVector raw(dim);
  for (auto& x : raw) x = rng.uniform(1e-3, 1.0);
  return trackfold::l1_normalize(raw);
}

inline trackfold::Track random_track(trackfold::PortableRng& rng, std::size_t frames,
                                     std::size_t dim, const std::string& id = "t",
                                     double lo = -1.0, double hi = 1.0) {
  trackfold::Track track;
  track.track_id = id;
  track.start_frame = 0;
  track.end_frame = static_cast<std::int64_t>(frames) - 1;
  for (std::size_t f = 0; f < frames; ++f) track.frames.push_back(random_vector(rng, dim, lo, hi));
  return track;
}

inline trackfold::Track track_of(std::vector<trackfold::FeatureVector> frames,
                                 const std::string& id = "t") {
  trackfold::Track track;
  track.track_id = id;
  track.frames = std::move(frames);
  track.start_frame = 0;
  track.end_frame = static_cast<std::int64_t>(track.frames.size()) - 1;
  return track;
}

}  // namespace tftest
