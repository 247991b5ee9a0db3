#include <cmath>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "trackfold/synth.hpp"
#include "trackfold/track_distance.hpp"

using namespace trackfold;

TEST_CASE("representation_distance basics") {
  const AggregationMethod method{PoolingKind::AvePool, Normalization::AggregateThenNormalize};
  const TrackRepresentation a{"a", {1.0, 0.0}, method, 3};
  const TrackRepresentation b{"b", {0.0, 1.0}, method, 5};
  CHECK(representation_distance(a, a) == 0.0);
  CHECK(representation_distance(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("representation_distance rejects mismatched methods and dims") {
  const TrackRepresentation a{"a", {1.0, 0.0},
                              {PoolingKind::AvePool, Normalization::AggregateThenNormalize}, 1};
  const TrackRepresentation b{"b", {0.0, 1.0}, {PoolingKind::Medoid, Normalization::None}, 1};
  try {
    representation_distance(a, b);
    FAIL("expected MethodMismatch");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::MethodMismatch);
  }

  const TrackRepresentation c{"c", {0.0, 1.0, 0.0},
                              {PoolingKind::AvePool, Normalization::AggregateThenNormalize}, 1};
  CHECK_THROWS_AS(representation_distance(a, c), TrackError);
}

TEST_CASE("same-identity representations sit closer than different identities") {
  SynthConfig config;
  config.seed = 5;
  config.identities = 6;
  config.tracks_per_identity = 2;
  config.dim = 32;
  const auto synth = generate(config);
  const AggregationMethod method{PoolingKind::AvePool, Normalization::AggregateThenNormalize};

  std::vector<TrackRepresentation> reps;
  for (const auto& t : synth.dataset.tracks) reps.push_back(aggregate(t, method));

  double same_sum = 0.0, diff_sum = 0.0;
  std::size_t same_count = 0, diff_count = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      const bool same = synth.labels.at(reps[i].track_id) == synth.labels.at(reps[j].track_id);
      (same ? same_sum : diff_sum) += representation_distance(reps[i], reps[j]);
      (same ? same_count : diff_count)++;
    }
  }
  CHECK(same_sum / same_count < diff_sum / diff_count);
}

TEST_CASE("track_distance trivial rows") {
  const auto a = tftest::track_of({l2_normalize({1.0, 2.0})}, "a");
  const auto b = tftest::track_of({l2_normalize({-3.0, 0.5})}, "b");
  const auto l2_pairwise = parse_method_name("l2-pairwise");
  CHECK(track_distance(a, b, l2_pairwise) ==
        doctest::Approx(euclidean(a.frames[0], b.frames[0])).epsilon(1e-12));

  // constant frames pool to (2,0) and (0,3); normalized -> unit axes
  const auto c = tftest::track_of({{2.0, 0.0}, {2.0, 0.0}}, "c");
  const auto d = tftest::track_of({{0.0, 3.0}}, "d");
  CHECK(track_distance(c, d, parse_method_name("avepool-l2")) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("all seven method rows match hand-composed oracle pipelines") {
  PortableRng rng(441);
  const auto a = tftest::random_track(rng, 6, 12, "a", 0.1, 2.0);
  const auto b = tftest::random_track(rng, 4, 12, "b", 0.1, 2.0);

  const auto normalized_frames = [](const Track& t) {
    std::vector<FeatureVector> out;
    for (const auto& f : t.frames) out.push_back(tforacle::naive_l2_normalize(f));
    return out;
  };
  const auto a_norm = normalized_frames(a);
  const auto b_norm = normalized_frames(b);

  for (const auto& name : method_names()) {
    const double got = track_distance(a, b, parse_method_name(name));
    double want = 0.0;
    if (name == "raw-pairwise") {
      want = tforacle::naive_pairwise_average(a.frames, b.frames, false);
    } else if (name == "l2-pairwise") {
      want = tforacle::naive_pairwise_average(a.frames, b.frames, true);
    } else if (name == "medoid") {
      want = tforacle::naive_euclidean(a.frames[tforacle::naive_medoid_index(a.frames)],
                                       b.frames[tforacle::naive_medoid_index(b.frames)]);
    } else if (name == "medoid-l2") {
      want = tforacle::naive_euclidean(
          tforacle::naive_l2_normalize(a.frames[tforacle::naive_medoid_index(a.frames)]),
          tforacle::naive_l2_normalize(b.frames[tforacle::naive_medoid_index(b.frames)]));
    } else if (name == "avepool") {
      want = tforacle::naive_euclidean(tforacle::naive_average_pool(a.frames),
                                       tforacle::naive_average_pool(b.frames));
    } else if (name == "l2-avepool") {
      want = tforacle::naive_euclidean(tforacle::naive_average_pool(a_norm),
                                       tforacle::naive_average_pool(b_norm));
    } else if (name == "avepool-l2") {
      want = tforacle::naive_euclidean(
          tforacle::naive_l2_normalize(tforacle::naive_average_pool(a.frames)),
          tforacle::naive_l2_normalize(tforacle::naive_average_pool(b.frames)));
    }
    INFO("method ", name);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("method name vocabulary round-trips") {
  for (const auto& name : method_names()) {
    CHECK(method_name(parse_method_name(name)) == name);
  }
  CHECK(method_names().size() == 7);

  try {
    parse_method_name("cosine");
    FAIL("expected InvalidConfig");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::InvalidConfig);
    const std::string what = e.what();
    for (const auto& name : method_names()) {
      CHECK(what.find(name) != std::string::npos);
    }
  }
}

TEST_CASE("aggregation name vocabulary covers all six combinations") {
  CHECK(aggregation_names().size() == 6);
  for (const auto& name : aggregation_names()) {
    CHECK(aggregation_name(parse_aggregation_name(name)) == name);
  }
  const auto l2_medoid = parse_aggregation_name("l2-medoid");
  CHECK(l2_medoid.kind == PoolingKind::Medoid);
  CHECK(l2_medoid.normalization == Normalization::NormalizeThenAggregate);
}
