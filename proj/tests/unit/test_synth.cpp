#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/invariants.hpp"
#include "trackfold/io.hpp"
#include "trackfold/synth.hpp"
#include "trackfold/track_distance.hpp"

using namespace trackfold;

TEST_CASE("generate is deterministic for a fixed config") {
  SynthConfig config;
  config.seed = 77;
  config.identities = 4;
  config.tracks_per_identity = 2;
  config.dim = 16;
  config.frames_min = 3;
  config.frames_max = 7;
  CHECK(tfprops::serialize_synth(generate(config)) ==
        tfprops::serialize_synth(generate(config)));
}

TEST_CASE("zero noise and zero gain spread reproduce the prototype in every frame") {
  SynthConfig config;
  config.seed = 3;
  config.identities = 2;
  config.tracks_per_identity = 2;
  config.dim = 12;
  config.noise_sigma = 0.0;
  config.gain_spread = 0.0;
  const auto synth = generate(config);

  for (const auto& subject : {"s000", "s001"}) {
    const FeatureVector* reference = nullptr;
    for (const auto& track : synth.dataset.tracks) {
      if (track.subject_id != subject) continue;
      for (const auto& frame : track.frames) {
        if (reference == nullptr) {
          reference = &frame;
          CHECK(l2_norm(frame) == doctest::Approx(1.0).epsilon(1e-12));
        } else {
          CHECK(frame == *reference);
        }
      }
    }
  }
}

TEST_CASE("two identities in one dimension are antipodal at zero noise") {
  // in R^1 the unit sphere is {-1, +1}; find a seed where the prototypes differ
  for (std::uint64_t seed = 1; seed <= 64; ++seed) {
    SynthConfig config;
    config.seed = seed;
    config.identities = 2;
    config.tracks_per_identity = 1;
    config.frames_min = config.frames_max = 1;
    config.dim = 1;
    config.noise_sigma = 0.0;
    config.gain_spread = 0.0;
    const auto synth = generate(config);
    const double a = synth.dataset.tracks[0].frames[0][0];
    const double b = synth.dataset.tracks[1].frames[0][0];
    if (a != b) {
      CHECK(euclidean({a}, {b}) == doctest::Approx(2.0).epsilon(1e-12));
      return;
    }
  }
  FAIL("no seed in 1..64 produced distinct one-dimensional prototypes");
}

TEST_CASE("default config separates identities on average under avepool-l2") {
  SynthConfig config;
  config.seed = 12;
  const auto synth = generate(config);
  const auto method = parse_method_name("avepool-l2");

  // exhaustive pair statistics over a track subset (full set is 150 tracks)
  std::vector<const Track*> tracks;
  for (const auto& t : synth.dataset.tracks) tracks.push_back(&t);
  double same_sum = 0.0, diff_sum = 0.0;
  std::size_t same_n = 0, diff_n = 0;
  for (std::size_t i = 0; i < 60; ++i) {
    for (std::size_t j = i + 1; j < 60; ++j) {
      const double d = track_distance(*tracks[i], *tracks[j], method);
      if (tracks[i]->subject_id == tracks[j]->subject_id) {
        same_sum += d;
        ++same_n;
      } else {
        diff_sum += d;
        ++diff_n;
      }
    }
  }
  REQUIRE(same_n > 0);
  REQUIRE(diff_n > 0);
  CHECK(same_sum / same_n < diff_sum / diff_n);
}

TEST_CASE("frame gains vary within the configured spread") {
  SynthConfig config;
  config.seed = 21;
  config.identities = 1;
  config.tracks_per_identity = 1;
  config.frames_min = config.frames_max = 50;
  config.dim = 8;
  config.noise_sigma = 0.0;
  config.gain_spread = 0.5;
  const auto synth = generate(config);
  // at zero noise each frame is gain * prototype, so the norm equals the gain
  double lo = 1e300, hi = 0.0;
  for (const auto& frame : synth.dataset.tracks[0].frames) {
    const double norm = l2_norm(frame);
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  CHECK(lo >= 0.5);
  CHECK(hi <= 1.5);
  CHECK(hi - lo > 0.1);  // the spread is actually exercised
}

TEST_CASE("generate validates its config") {
  SynthConfig config;
  config.identities = 0;
  try {
    generate(config);
    FAIL("expected InvalidConfig");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::InvalidConfig);
  }

  config = SynthConfig{};
  config.frames_min = 5;
  config.frames_max = 2;
  CHECK_THROWS_AS(generate(config), TrackError);
  config = SynthConfig{};
  config.noise_sigma = -0.1;
  CHECK_THROWS_AS(generate(config), TrackError);
}

TEST_CASE("make_pairs edge cases") {
  SynthConfig config;
  config.seed = 31;
  config.identities = 3;
  config.tracks_per_identity = 2;
  config.dim = 4;
  config.frames_min = config.frames_max = 2;
  const auto synth = generate(config);

  const auto all_diff = make_pairs(synth.labels, 0, 5, 2, 1);
  CHECK(all_diff.size() == 5);
  for (const auto& p : all_diff) CHECK_FALSE(p.same);

  // exactly one same pair exists for a two-track identity
  std::map<std::string, std::string> two_tracks = {{"x_t0", "x"}, {"x_t1", "x"}};
  const auto only = make_pairs(two_tracks, 1, 0, 1, 1);
  REQUIRE(only.size() == 1);
  CHECK(only[0].same);
  CHECK(((only[0].track_a == "x_t0" && only[0].track_b == "x_t1") ||
         (only[0].track_a == "x_t1" && only[0].track_b == "x_t0")));

  try {
    make_pairs(two_tracks, 2, 0, 1, 1);
    FAIL("expected InsufficientTracks");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::InsufficientTracks);
  }
}

TEST_CASE("make_pairs fold assignment is round-robin per class") {
  SynthConfig config;
  config.seed = 41;
  config.identities = 6;
  config.tracks_per_identity = 3;
  config.dim = 4;
  config.frames_min = config.frames_max = 2;
  const auto synth = generate(config);
  const auto pairs = make_pairs(synth.labels, 9, 12, 3, 5);

  std::map<int, std::pair<int, int>> fold_counts;  // fold -> (same, diff)
  for (const auto& p : pairs) {
    auto& [same, diff] = fold_counts[p.fold];
    (p.same ? same : diff)++;
  }
  REQUIRE(fold_counts.size() == 3);
  for (const auto& [fold, counts] : fold_counts) {
    CHECK(counts.first == 3);
    CHECK(counts.second == 4);
  }
}

TEST_CASE("the random source is pinned to published reference outputs") {
  // mt19937_64 from the default seed: the standard fixes the 10000th draw
  std::mt19937_64 engine;
  engine.discard(9999);
  CHECK(engine() == 9981545732273789042ull);

  // frozen transform outputs; datasets are only reproducible across builds
  // if these never change
  PortableRng rng(12345);
  CHECK(rng.next_u64() == 6597103971274460346ull);
  CHECK(rng.uniform01() == 0.40044261704406114);
  CHECK(rng.normal(0.0, 1.0) == -1.4227288787842618);
  CHECK(rng.uniform_int(1000) == 996);
}

TEST_CASE("synthdata invariants hold on random inputs") {
  for (const auto& r : tfprops::synthdata_invariants(2029, 100)) {
    INFO(r.name, ": ", r.first_failure);
    CHECK(r.failures == 0);
  }
}
