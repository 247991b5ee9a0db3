#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trackfold/evaluate.hpp"
#include "trackfold/feature.hpp"

namespace trackfold {

using PosteriorsMap = std::map<std::string, std::vector<FramePosteriors>>;

// Desk-scale stand-in for CNN features. Identities are unit-sphere prototypes;
// every frame is gain * (prototype + gaussian noise) with the gain drawn per
// frame, which models varying observation conditions and is what makes the
// normalization order observable.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t dim = 64;
  std::size_t identities = 50;
  std::size_t tracks_per_identity = 3;
  std::size_t frames_min = 20;
  std::size_t frames_max = 20;
  double noise_sigma = 0.3;         // per-component gaussian std
  double gain_spread = 0.5;         // gain uniform in [1-spread, 1+spread]
  double demographics_noise = 0.1;  // posterior perturbation weight
};

struct SynthDataset {
  TrackDataset dataset;
  std::map<std::string, std::string> labels;  // track id -> subject id
  PosteriorsMap posteriors;                   // per-frame age/gender posteriors
  std::map<std::string, Demographics> subject_demographics;
};

SynthDataset generate(const SynthConfig& config);

// Balanced verification pairs sampled without replacement from the labeled
// tracks, folds assigned round-robin per class so every fold keeps the
// same/different balance.
std::vector<VerificationPair> make_pairs(const std::map<std::string, std::string>& labels,
                                         std::size_t n_same, std::size_t n_diff, int folds,
                                         std::uint64_t seed);

// Writes tracks.csv, labels.csv and posteriors.csv under the directory.
void write_synth_dataset(const SynthDataset& synth, const std::string& directory);

}  // namespace trackfold
