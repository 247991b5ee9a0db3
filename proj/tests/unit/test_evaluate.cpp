#include <cmath>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/invariants.hpp"
#include "support/oracles.hpp"
#include "trackfold/evaluate.hpp"
#include "trackfold/synth.hpp"

using namespace trackfold;

namespace {

std::vector<LabeledDistance> labeled(std::vector<double> same, std::vector<double> diff) {
  std::vector<LabeledDistance> out;
  for (double d : same) out.push_back({true, d});
  for (double d : diff) out.push_back({false, d});
  return out;
}

}  // namespace

TEST_CASE("score_pairs basics") {
  TrackDataset d;
  d.tracks.push_back(tftest::track_of({{0.0, 0.0}}, "origin"));
  d.tracks.push_back(tftest::track_of({{3.0, 4.0}}, "far"));
  d.tracks.push_back(tftest::track_of({{0.0, 0.0}}, "twin"));

  const auto method = TrackDistanceMethod::pairwise(FrameNormalization::Raw);
  const auto scored = score_pairs(
      d, {{"origin", "twin", true, 0}, {"origin", "far", false, 0}}, method);
  CHECK(scored[0].distance == 0.0);
  CHECK(scored[1].distance == 5.0);

  try {
    score_pairs(d, {{"origin", "ghost", false, 0}}, method);
    FAIL("expected UnknownTrack");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::UnknownTrack);
  }
}

TEST_CASE("score_pairs matches per-pair track_distance for every method") {
  SynthConfig sc;
  sc.seed = 17;
  sc.identities = 5;
  sc.tracks_per_identity = 2;
  sc.dim = 16;
  sc.frames_min = sc.frames_max = 6;
  const auto synth = generate(sc);
  const auto pairs = make_pairs(synth.labels, 5, 15, 2, 99);

  for (const auto& name : method_names()) {
    const auto method = parse_method_name(name);
    const auto scored = score_pairs(synth.dataset, pairs, method, 4);
    REQUIRE(scored.size() == pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      CHECK(scored[i].pair == pairs[i]);
      const double want = track_distance(*synth.dataset.find(pairs[i].track_a),
                                         *synth.dataset.find(pairs[i].track_b), method);
      INFO("method ", name, " pair ", i);
      CHECK(scored[i].distance == want);
    }
  }
}

TEST_CASE("roc on perfectly separated scores contains a zero-error point") {
  const auto curve = roc(labeled({0.1, 0.2}, {0.8, 0.9}));
  bool found = false;
  for (const auto& p : curve.points) found |= (p.far == 0.0 && p.frr == 0.0);
  CHECK(found);
}

TEST_CASE("roc with all distances equal") {
  const auto curve = roc(labeled({0.5, 0.5}, {0.5, 0.5}));
  REQUIRE(curve.points.size() == 3);  // -inf, 0.5, +inf
  CHECK(curve.points[0].far == 0.0);
  CHECK(curve.points[0].frr == 1.0);
  CHECK(curve.points[1].threshold == 0.5);
  CHECK(curve.points[1].far == 1.0);
  CHECK(curve.points[1].frr == 0.0);
}

TEST_CASE("roc rejects single-class input") {
  try {
    roc(labeled({0.1, 0.2}, {}));
    FAIL("expected DegenerateLabels");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::DegenerateLabels);
  }
}

TEST_CASE("roc points match the exhaustive threshold-sweep oracle") {
  PortableRng rng(461);
  for (int trial = 0; trial < 20; ++trial) {
    const auto scored = tfprops::random_scored(rng, 50, true);
    const auto curve = roc(scored);
    for (const auto& point : curve.points) {
      if (!std::isfinite(point.threshold)) continue;
      const auto [far, frr] = tforacle::count_far_frr(scored, point.threshold);
      CHECK(point.far == far);
      CHECK(point.frr == frr);
    }
  }
}

TEST_CASE("auc examples") {
  CHECK(auc(roc(labeled({0.1, 0.2}, {0.8, 0.9}))) == 1.0);
  // 3 of 4 cross-pairs ordered correctly
  CHECK(auc(roc(labeled({0.1, 0.7}, {0.5, 0.9}))) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("trapezoid auc equals the counting estimator on 200 random pairs") {
  PortableRng rng(462);
  for (int trial = 0; trial < 20; ++trial) {
    const auto scored = tfprops::random_scored(rng, 200, true);
    CHECK(auc(roc(scored)) == doctest::Approx(tforacle::counting_auc(scored)).epsilon(1e-12));
  }
}

TEST_CASE("eer examples") {
  CHECK(eer(roc(labeled({0.1, 0.2}, {0.8, 0.9}))) == 0.0);
  CHECK(eer(roc(labeled({0.5, 0.5}, {0.5, 0.5}))) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("eer matches the dense-grid crossing oracle") {
  PortableRng rng(463);
  for (int trial = 0; trial < 25; ++trial) {
    const auto scored = tfprops::random_scored(rng, 100, false);
    CHECK(eer(roc(scored)) == doctest::Approx(tforacle::grid_eer(scored)).epsilon(1e-6));
  }
}

TEST_CASE("frr_at_far examples") {
  CHECK(frr_at_far(roc(labeled({0.1, 0.2}, {0.8, 0.9})), 0.01) == 0.0);
  // all impostor distances below the only genuine one: no usable threshold,
  // the conservative convention reports FRR 1
  CHECK(frr_at_far(roc(labeled({0.5}, {0.1, 0.2, 0.3, 0.4})), 0.01) == 1.0);
}

TEST_CASE("frr_at_far matches the scan oracle exactly") {
  PortableRng rng(464);
  for (int trial = 0; trial < 20; ++trial) {
    const auto scored = tfprops::random_scored(rng, 500, true);
    const double target = rng.uniform(0.005, 0.5);
    CHECK(frr_at_far(roc(scored), target) == tforacle::scan_frr_at_far(scored, target));
  }
}

TEST_CASE("calibrate_threshold quantile examples") {
  std::vector<LabeledDistance> train;
  for (int i = 1; i <= 100; ++i) train.push_back({false, static_cast<double>(i)});
  train.push_back({true, 0.5});
  CHECK(calibrate_threshold(train, 0.01) == 1.0);
  CHECK(calibrate_threshold(train, 0.5) == 50.0);

  try {
    calibrate_threshold({{true, 1.0}}, 0.01);
    FAIL("expected DegenerateLabels");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::DegenerateLabels);
  }
}

TEST_CASE("calibrate_threshold falls back below the smallest impostor distance") {
  // 10 impostor pairs: even one acceptance exceeds FAR 1%
  std::vector<LabeledDistance> train;
  for (int i = 1; i <= 10; ++i) train.push_back({false, static_cast<double>(i)});
  const double threshold = calibrate_threshold(train, 0.01);
  CHECK(threshold < 1.0);
  std::size_t accepted = 0;
  for (const auto& s : train) {
    if (s.distance <= threshold) ++accepted;
  }
  CHECK(accepted == 0);
}

TEST_CASE("calibrate_threshold matches the sort-and-scan oracle") {
  PortableRng rng(465);
  for (int trial = 0; trial < 30; ++trial) {
    const auto scored = tfprops::random_scored(rng, 2 + rng.uniform_int(300), true);
    const double target = rng.uniform(0.01, 0.6);
    CHECK(calibrate_threshold(scored, target) == tforacle::sort_calibrate(scored, target));
  }
}

TEST_CASE("kfold_report on two identical folds has zero stds") {
  TrackDataset d;
  d.tracks.push_back(tftest::track_of({{0.0, 0.0}}, "a"));
  d.tracks.push_back(tftest::track_of({{1.0, 0.0}}, "b"));
  d.tracks.push_back(tftest::track_of({{0.1, 0.0}}, "c"));
  std::vector<VerificationPair> pairs;
  for (int fold = 0; fold < 2; ++fold) {
    pairs.push_back({"a", "c", true, fold});
    pairs.push_back({"a", "b", false, fold});
  }
  const auto report =
      kfold_report(d, pairs, TrackDistanceMethod::pairwise(FrameNormalization::Raw), 0.01);
  CHECK(report.fold_count == 2);
  CHECK(report.auc_std == 0.0);
  CHECK(report.eer_std == 0.0);
  CHECK(report.frr_at_far_std == 0.0);
  CHECK(report.auc_mean == 100.0);
}

TEST_CASE("kfold_report mean and sample std over folds with AUC 1.0 and 0.5") {
  TrackDataset d;
  d.tracks.push_back(tftest::track_of({{0.0, 0.0}}, "a"));
  d.tracks.push_back(tftest::track_of({{1.0, 0.0}}, "b"));
  d.tracks.push_back(tftest::track_of({{0.1, 0.0}}, "c"));
  // fold 0 separable (AUC 1), fold 1 all-tied (AUC 0.5)
  std::vector<VerificationPair> pairs = {
      {"a", "c", true, 0}, {"a", "b", false, 0}, {"a", "b", true, 1}, {"a", "b", false, 1}};
  const auto report =
      kfold_report(d, pairs, TrackDistanceMethod::pairwise(FrameNormalization::Raw), 0.01);
  CHECK(report.auc_mean == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(report.auc_std == doctest::Approx(35.355339059327378).epsilon(1e-9));
}

TEST_CASE("single-fold reports carry zero stds") {
  TrackDataset d;
  d.tracks.push_back(tftest::track_of({{0.0, 0.0}}, "a"));
  d.tracks.push_back(tftest::track_of({{1.0, 0.0}}, "b"));
  d.tracks.push_back(tftest::track_of({{0.1, 0.0}}, "c"));
  const std::vector<VerificationPair> pairs = {{"a", "c", true, 0}, {"a", "b", false, 0}};
  const auto report =
      kfold_report(d, pairs, TrackDistanceMethod::pairwise(FrameNormalization::Raw), 0.01);
  CHECK(report.fold_count == 1);
  CHECK(report.auc_std == 0.0);
}

TEST_CASE("kfold_report flags folds lacking a class") {
  TrackDataset d;
  d.tracks.push_back(tftest::track_of({{0.0, 0.0}}, "a"));
  d.tracks.push_back(tftest::track_of({{1.0, 0.0}}, "b"));
  const std::vector<VerificationPair> pairs = {{"a", "b", true, 0}};
  try {
    kfold_report(d, pairs, TrackDistanceMethod::pairwise(FrameNormalization::Raw), 0.01);
    FAIL("expected DegenerateLabels");
  } catch (const TrackError& e) {
    CHECK(e.code() == Errc::DegenerateLabels);
  }
}

TEST_CASE("per-fold metrics equal the single-fold pipeline run in isolation") {
  SynthConfig sc;
  sc.seed = 23;
  sc.identities = 8;
  sc.tracks_per_identity = 3;
  sc.dim = 16;
  sc.frames_min = sc.frames_max = 5;
  const auto synth = generate(sc);
  const auto pairs = make_pairs(synth.labels, 20, 20, 4, 7);
  const auto method = parse_method_name("avepool-l2");
  const auto scored = score_pairs(synth.dataset, pairs, method);
  const auto folds = per_fold_metrics(scored, 0.01);
  REQUIRE(folds.size() == 4);

  for (const auto& fold : folds) {
    std::vector<LabeledDistance> isolated;
    for (const auto& s : scored) {
      if (s.pair.fold == fold.fold) isolated.push_back({s.pair.same, s.distance});
    }
    const auto curve = roc(isolated);
    CHECK(fold.auc == auc(curve));
    CHECK(fold.eer == eer(curve));
    CHECK(fold.frr_at_far == frr_at_far(curve, 0.01));
  }
}

TEST_CASE("score_pairs is deterministic across thread counts") {
  SynthConfig sc;
  sc.seed = 29;
  sc.identities = 6;
  sc.tracks_per_identity = 2;
  sc.dim = 16;
  sc.frames_min = sc.frames_max = 8;
  const auto synth = generate(sc);
  const auto pairs = make_pairs(synth.labels, 6, 20, 3, 13);

  for (const auto& name : {"l2-pairwise", "avepool-l2"}) {
    const auto method = parse_method_name(name);
    const auto serial = score_pairs(synth.dataset, pairs, method, 1);
    const auto parallel = score_pairs(synth.dataset, pairs, method, 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].pair == parallel[i].pair);
      CHECK(serial[i].distance == parallel[i].distance);
    }
  }
}

TEST_CASE("evaluation invariants hold on random inputs") {
  for (const auto& r : tfprops::evaluation_invariants(2028, 200)) {
    INFO(r.name, ": ", r.first_failure);
    CHECK(r.failures == 0);
  }
}
