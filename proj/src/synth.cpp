#include "trackfold/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "trackfold/io.hpp"
#include "trackfold/rng.hpp"

namespace trackfold {

namespace {

void check_config(const SynthConfig& c) {
  const auto reject = [](const std::string& message) {
    throw TrackError(Errc::InvalidConfig, message);
  };
  if (c.dim < 1) reject("dim must be positive");
  if (c.identities < 1) reject("identities must be positive");
  if (c.tracks_per_identity < 1) reject("tracks-per-identity must be positive");
  if (c.frames_min < 1 || c.frames_min > c.frames_max) {
    reject("frame range must satisfy 1 <= min <= max");
  }
  if (c.noise_sigma < 0.0) reject("noise sigma must be >= 0");
  if (c.gain_spread < 0.0) reject("gain spread must be >= 0");
  if (c.demographics_noise < 0.0) reject("demographics noise must be >= 0");
}

std::string zero_padded(std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
  return buf;
}

ProbabilityVector noisy_one_hot(std::size_t categories, std::size_t truth, double noise,
                                PortableRng& rng) {
  FeatureVector raw(categories, 0.0);
  raw[truth] = 1.0;
  for (std::size_t k = 0; k < categories; ++k) raw[k] += noise * rng.uniform01();
  return l1_normalize(raw);
}

}  // namespace

SynthDataset generate(const SynthConfig& config) {
  check_config(config);
  PortableRng rng(config.seed);
  SynthDataset out;

  // Draw order is part of the format: prototypes and demographics for all
  // identities first, then tracks identity by identity.
  std::vector<FeatureVector> prototypes(config.identities);
  std::vector<Demographics> demographics(config.identities);
  for (std::size_t c = 0; c < config.identities; ++c) {
    FeatureVector direction(config.dim);
    for (auto& x : direction) x = rng.normal(0.0, 1.0);
    prototypes[c] = l2_normalize(direction);
    demographics[c].gender = rng.uniform_int(2) == 0 ? Gender::Male : Gender::Female;
    demographics[c].age_category = static_cast<int>(rng.uniform_int(8));
  }

  for (std::size_t c = 0; c < config.identities; ++c) {
    const std::string subject = "s" + zero_padded(c, 3);
    out.subject_demographics[subject] = demographics[c];

    // noise_sigma parametrizes Gaussian(0, noise_sigma * I): the per-component
    // standard deviation is its square root.
    const double component_std = std::sqrt(config.noise_sigma);

    for (std::size_t t = 0; t < config.tracks_per_identity; ++t) {
      Track track;
      track.track_id = subject + "_t" + zero_padded(t, 2);
      track.subject_id = subject;

      const std::size_t frames =
          config.frames_min +
          (config.frames_max > config.frames_min
               ? rng.uniform_int(config.frames_max - config.frames_min + 1)
               : 0);
      track.start_frame = 0;
      track.end_frame = static_cast<std::int64_t>(frames) - 1;

      std::vector<FramePosteriors> frame_posteriors;
      frame_posteriors.reserve(frames);
      for (std::size_t f = 0; f < frames; ++f) {
        const double gain = rng.uniform(1.0 - config.gain_spread, 1.0 + config.gain_spread);
        FeatureVector frame(config.dim);
        for (std::size_t k = 0; k < config.dim; ++k) {
          frame[k] = gain * (prototypes[c][k] + rng.normal(0.0, component_std));
        }
        track.frames.push_back(std::move(frame));

        FramePosteriors fp;
        fp.age = noisy_one_hot(8, static_cast<std::size_t>(demographics[c].age_category),
                               config.demographics_noise, rng);
        fp.gender = noisy_one_hot(2, demographics[c].gender == Gender::Male ? 0 : 1,
                                  config.demographics_noise, rng);
        frame_posteriors.push_back(std::move(fp));
      }

      out.labels[track.track_id] = subject;
      out.posteriors[track.track_id] = std::move(frame_posteriors);
      out.dataset.tracks.push_back(std::move(track));
    }
  }
  return out;
}

std::vector<VerificationPair> make_pairs(const std::map<std::string, std::string>& labels,
                                         std::size_t n_same, std::size_t n_diff, int folds,
                                         std::uint64_t seed) {
  if (folds < 1) throw TrackError(Errc::InvalidConfig, "folds must be >= 1");

  std::vector<std::pair<std::string, std::string>> tracks(labels.begin(), labels.end());

  std::vector<std::pair<std::size_t, std::size_t>> same_candidates;
  std::vector<std::pair<std::size_t, std::size_t>> diff_candidates;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = i + 1; j < tracks.size(); ++j) {
      (tracks[i].second == tracks[j].second ? same_candidates : diff_candidates)
          .emplace_back(i, j);
    }
  }
  if (same_candidates.size() < n_same) {
    throw TrackError(Errc::InsufficientTracks,
                     "only " + std::to_string(same_candidates.size()) +
                         " same-person pairs available, need " + std::to_string(n_same));
  }
  if (diff_candidates.size() < n_diff) {
    throw TrackError(Errc::InsufficientTracks,
                     "only " + std::to_string(diff_candidates.size()) +
                         " different-person pairs available, need " + std::to_string(n_diff));
  }

  PortableRng rng(seed);
  rng.shuffle(same_candidates);
  rng.shuffle(diff_candidates);

  std::vector<VerificationPair> pairs;
  pairs.reserve(n_same + n_diff);
  for (std::size_t i = 0; i < n_same; ++i) {
    pairs.push_back({tracks[same_candidates[i].first].first,
                     tracks[same_candidates[i].second].first, true,
                     static_cast<int>(i % static_cast<std::size_t>(folds))});
  }
  for (std::size_t i = 0; i < n_diff; ++i) {
    pairs.push_back({tracks[diff_candidates[i].first].first,
                     tracks[diff_candidates[i].second].first, false,
                     static_cast<int>(i % static_cast<std::size_t>(folds))});
  }
  return pairs;
}

void write_synth_dataset(const SynthDataset& synth, const std::string& directory) {
  write_tracks_file(synth.dataset, directory + "/tracks.csv");
  write_labels_file(synth.labels, directory + "/labels.csv");
  write_posteriors_file(synth.posteriors, directory + "/posteriors.csv");
}

}  // namespace trackfold
