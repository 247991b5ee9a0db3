// trackfold command-line front end. Every subcommand is a thin shell over the
// library: synth, aggregate, eval, calibrate, cluster, bench.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trackfold/bench.hpp"
#include "trackfold/cluster.hpp"
#include "trackfold/evaluate.hpp"
#include "trackfold/io.hpp"
#include "trackfold/parallel.hpp"
#include "trackfold/synth.hpp"
#include "trackfold/track_distance.hpp"

namespace {

using namespace trackfold;

std::pair<std::size_t, std::size_t> parse_frame_range(const std::string& text) {
  const auto parse_count = [&text](const std::string& token) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw TrackError(Errc::InvalidConfig,
                       "cannot parse frame range '" + text + "' (use N or MIN:MAX)");
    }
    return value;
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const std::size_t n = parse_count(text);
    return {n, n};
  }
  return {parse_count(text.substr(0, colon)), parse_count(text.substr(colon + 1))};
}

AggregationMethod require_representation_method(const std::string& name,
                                                const char* context) {
  const TrackDistanceMethod method = parse_method_name(name);
  if (method.kind != TrackDistanceMethod::Kind::Representation) {
    std::string valid;
    for (const auto& n : method_names()) {
      if (n == "raw-pairwise" || n == "l2-pairwise") continue;
      if (!valid.empty()) valid += ", ";
      valid += n;
    }
    throw TrackError(Errc::InvalidConfig, std::string(context) +
                                              " needs a representation method; valid: " + valid);
  }
  return *method.aggregation;
}

// Pooled per-track posteriors for every track of the dataset.
std::vector<TrackPosteriors> pool_track_posteriors(const TrackDataset& dataset,
                                                   const PosteriorsMap& per_frame) {
  std::vector<TrackPosteriors> pooled;
  pooled.reserve(dataset.tracks.size());
  for (const auto& track : dataset.tracks) {
    const auto it = per_frame.find(track.track_id);
    if (it == per_frame.end()) {
      throw TrackError(Errc::MissingPosteriors,
                       "no posteriors for track '" + track.track_id + "'");
    }
    std::vector<ProbabilityVector> age, gender;
    for (const auto& fp : it->second) {
      age.push_back(fp.age);
      gender.push_back(fp.gender);
    }
    pooled.push_back(
        {aggregate_probabilities(track, age), aggregate_probabilities(track, gender)});
  }
  return pooled;
}

struct SynthArgs {
  SynthConfig config;
  std::string frames = "20";
  std::string out_dir;
};

void run_synth(SynthArgs& args) {
  std::tie(args.config.frames_min, args.config.frames_max) = parse_frame_range(args.frames);
  const SynthDataset synth = generate(args.config);

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) {
    throw TrackError(Errc::IoError, "cannot create directory '" + args.out_dir + "'");
  }
  write_synth_dataset(synth, args.out_dir);
  std::cerr << "wrote " << synth.dataset.track_count() << " tracks ("
            << synth.dataset.total_frames() << " frames) to " << args.out_dir << "\n";
}

struct AggregateArgs {
  std::string tracks_path;
  std::string method;
  std::string out_path;
};

void run_aggregate(AggregateArgs& args) {
  const AggregationMethod method = require_representation_method(args.method, "aggregation");
  const TrackDataset dataset = read_tracks_file(args.tracks_path);

  std::vector<TrackRepresentation> reps(dataset.tracks.size());
  parallel_for(dataset.tracks.size(), resolve_thread_count(),
               [&](std::size_t i) { reps[i] = aggregate(dataset.tracks[i], method); });
  write_representations_file(reps, args.out_path);
  std::cerr << "wrote " << reps.size() << " representations to " << args.out_path << "\n";
}

struct EvalArgs {
  std::string tracks_path;
  std::string pairs_path;
  std::vector<std::string> methods;
  double far = 0.01;
  std::string report_path;
};

void run_eval(EvalArgs& args) {
  const TrackDataset dataset = read_tracks_file(args.tracks_path);
  const auto pairs = read_pairs_file(args.pairs_path);
  const unsigned threads = resolve_thread_count();

  std::vector<MethodReportRow> rows;
  for (const auto& name : args.methods) {
    const TrackDistanceMethod method = parse_method_name(name);
    rows.push_back({name, kfold_report(dataset, pairs, method, args.far, threads)});
  }

  std::cout << format_report_table(rows);
  if (!args.report_path.empty()) {
    write_report_file(rows, args.report_path);
    std::cerr << "wrote report to " << args.report_path << "\n";
  }
}

struct CalibrateArgs {
  std::string tracks_path;
  std::string pairs_path;
  std::string method;
  double far = 0.01;
};

void run_calibrate(CalibrateArgs& args) {
  const TrackDataset dataset = read_tracks_file(args.tracks_path);
  const auto pairs = read_pairs_file(args.pairs_path);
  const TrackDistanceMethod method = parse_method_name(args.method);
  const auto scored = score_pairs(dataset, pairs, method, resolve_thread_count());
  std::cout << format_double(calibrate_threshold(to_labeled(scored), args.far)) << "\n";
}

struct ClusterArgs {
  std::string tracks_path;
  std::string posteriors_path;
  std::string method;
  double threshold = 0.0;
  bool threshold_set = false;
  double auto_far = 0.01;
  std::string train_pairs_path;
  std::string mode = "online";
  std::string out_path;
};

void run_cluster(ClusterArgs& args) {
  const AggregationMethod aggregation =
      require_representation_method(args.method, "clustering");
  const TrackDataset dataset = read_tracks_file(args.tracks_path);
  const unsigned threads = resolve_thread_count();

  ClusteringConfig config;
  config.method = TrackDistanceMethod::representation(aggregation);
  config.linkage = args.mode == "hac" ? Linkage::AverageLinkage : Linkage::NearestCluster;

  if (args.threshold_set) {
    config.threshold = args.threshold;
  } else {
    const auto train_pairs = read_pairs_file(args.train_pairs_path);
    const auto scored = score_pairs(dataset, train_pairs, config.method, threads);
    config.threshold = calibrate_threshold(to_labeled(scored), args.auto_far);
    std::cerr << "calibrated threshold " << format_double(config.threshold) << " at FAR "
              << args.auto_far << "\n";
  }

  std::vector<TrackRepresentation> reps(dataset.tracks.size());
  parallel_for(dataset.tracks.size(), threads,
               [&](std::size_t i) { reps[i] = aggregate(dataset.tracks[i], aggregation); });

  std::vector<TrackPosteriors> posteriors;
  if (!args.posteriors_path.empty()) {
    posteriors = pool_track_posteriors(dataset, read_posteriors_file(args.posteriors_path));
  }

  const auto clusters = config.linkage == Linkage::AverageLinkage
                            ? hac_cluster(reps, config, posteriors)
                            : online_cluster(reps, config, posteriors);
  write_clusters_file(clusters, args.out_path);
  std::cerr << "wrote " << clusters.size() << " clusters to " << args.out_path << "\n";
}

struct BenchArgs {
  BenchConfig config;
  std::vector<std::string> methods;
  std::string report_path;
};

void run_bench(BenchArgs& args) {
  for (const auto& name : args.methods) {
    args.config.methods.push_back(parse_method_name(name));
  }
  const BenchReport report = trackfold::run_bench(args.config);
  std::cout << format_bench_table(report);
  if (!args.report_path.empty()) {
    auto out = std::ofstream(args.report_path);
    if (!out) {
      throw TrackError(Errc::IoError, "cannot open '" + args.report_path + "' for writing");
    }
    write_bench_report(report, out);
    std::cerr << "wrote bench report to " << args.report_path << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"organize video face tracks: aggregate per-frame embeddings, match and "
               "cluster tracks, evaluate verification quality"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
  synth->add_option("--seed", synth_args.config.seed, "random seed")->capture_default_str();
  synth->add_option("--dim", synth_args.config.dim, "embedding dimension")
      ->capture_default_str();
  synth->add_option("--identities", synth_args.config.identities, "number of identities")
      ->capture_default_str();
  synth->add_option("--tracks-per-id", synth_args.config.tracks_per_identity,
                    "tracks per identity")
      ->capture_default_str();
  synth->add_option("--frames", synth_args.frames, "frames per track, N or MIN:MAX")
      ->capture_default_str();
  synth->add_option("--noise", synth_args.config.noise_sigma, "per-frame gaussian std")
      ->capture_default_str();
  synth->add_option("--gain-spread", synth_args.config.gain_spread,
                    "per-frame multiplicative gain range")
      ->capture_default_str();
  synth->add_option("--demographics-noise", synth_args.config.demographics_noise,
                    "posterior perturbation weight")
      ->capture_default_str();
  synth->add_option("--out-dir", synth_args.out_dir, "output directory")->required();
  synth->callback([&] { run_synth(synth_args); });

  AggregateArgs aggregate_args;
  auto* agg = app.add_subcommand("aggregate", "compute fixed-size track representations");
  agg->add_option("--tracks", aggregate_args.tracks_path, "tracks csv")->required();
  agg->add_option("--method", aggregate_args.method, "aggregation method")->required();
  agg->add_option("--out", aggregate_args.out_path, "output representations csv")->required();
  agg->callback([&] { run_aggregate(aggregate_args); });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "k-fold verification metrics for given methods");
  eval->add_option("--tracks", eval_args.tracks_path, "tracks csv")->required();
  eval->add_option("--pairs", eval_args.pairs_path, "verification pairs csv")->required();
  eval->add_option("--method", eval_args.methods, "track distance method (repeatable)")
      ->required();
  eval->add_option("--far", eval_args.far, "FAR operating point")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  eval->add_option("--report", eval_args.report_path, "write JSON report here");
  eval->callback([&] { run_eval(eval_args); });

  CalibrateArgs calibrate_args;
  auto* cal = app.add_subcommand("calibrate", "distance threshold for a target FAR");
  cal->add_option("--tracks", calibrate_args.tracks_path, "tracks csv")->required();
  cal->add_option("--pairs", calibrate_args.pairs_path, "training pairs csv")->required();
  cal->add_option("--method", calibrate_args.method, "track distance method")->required();
  cal->add_option("--far", calibrate_args.far, "FAR target")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  cal->callback([&] { run_calibrate(calibrate_args); });

  ClusterArgs cluster_args;
  auto* clu = app.add_subcommand("cluster", "group tracks into person clusters");
  clu->add_option("--tracks", cluster_args.tracks_path, "tracks csv")->required();
  clu->add_option("--posteriors", cluster_args.posteriors_path, "per-frame posteriors csv");
  clu->add_option("--method", cluster_args.method, "representation method")->required();
  auto* threshold_opt =
      clu->add_option("--threshold", cluster_args.threshold, "distance threshold")
          ->check(CLI::NonNegativeNumber);
  auto* auto_far_opt = clu->add_option("--auto-far", cluster_args.auto_far,
                                       "calibrate the threshold at this FAR")
                           ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  auto* train_opt =
      clu->add_option("--train-pairs", cluster_args.train_pairs_path, "calibration pairs csv");
  threshold_opt->excludes(auto_far_opt)->excludes(train_opt);
  auto_far_opt->needs(train_opt);
  clu->add_option("--mode", cluster_args.mode, "clustering mode")
      ->check(CLI::IsMember({"online", "hac"}))
      ->capture_default_str();
  clu->add_option("--out", cluster_args.out_path, "output clusters jsonl")->required();
  clu->callback([&] {
    cluster_args.threshold_set = threshold_opt->count() > 0;
    if (!cluster_args.threshold_set && cluster_args.train_pairs_path.empty()) {
      throw trackfold::TrackError(trackfold::Errc::InvalidConfig,
                                  "either --threshold or --train-pairs is required");
    }
    run_cluster(cluster_args);
  });

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "matching cost per method");
  bench->add_option("--frames-per-track", bench_args.config.frames_per_track, "track length")
      ->capture_default_str();
  bench->add_option("--dim", bench_args.config.dim, "embedding dimension")
      ->capture_default_str();
  bench->add_option("--pairs", bench_args.config.pairs, "number of track pairs")
      ->capture_default_str();
  bench->add_option("--methods", bench_args.methods, "methods to time (default: all)");
  bench->add_option("--seed", bench_args.config.seed, "random seed")->capture_default_str();
  bench->add_option("--report", bench_args.report_path, "write JSON report here");
  bench->callback([&] { run_bench(bench_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const trackfold::TrackError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == trackfold::Errc::IoError ? 2 : 1;
  }
  return 0;
}
