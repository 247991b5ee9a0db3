#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trackfold/track_distance.hpp"

namespace trackfold {

// Track-level posteriors, pooled over the track's frames.
struct TrackPosteriors {
  ProbabilityVector age;     // 8 categories
  ProbabilityVector gender;  // (male, female)
};

struct ClusterMember {
  std::string track_id;
  FeatureVector vector;
  std::int64_t frame_count = 0;
  std::optional<TrackPosteriors> posteriors;
};

enum class Linkage { NearestCluster, AverageLinkage };

struct ClusteringConfig {
  double threshold = 0.0;        // distance units of the chosen method
  TrackDistanceMethod method;    // must be Representation kind
  Linkage linkage = Linkage::NearestCluster;
};

// A person hypothesis: member tracks plus a running aggregate. For AvePool
// methods the aggregate is the frame-count-weighted mean of the member
// vectors (re-normalized when the method ends with L2); for Medoid methods it
// is the medoid of the member vectors. Posteriors pool the same way.
struct Cluster {
  int cluster_id = 0;
  std::vector<ClusterMember> members;
  AggregationMethod method;
  FeatureVector representation;
  std::int64_t total_frames = 0;
  std::optional<ProbabilityVector> age_posterior;
  std::optional<ProbabilityVector> gender_posterior;

  std::vector<std::string> track_ids() const;
};

Cluster make_cluster(int cluster_id, const TrackRepresentation& rep,
                     const std::optional<TrackPosteriors>& posteriors = std::nullopt);

// Returns a copy of the cluster with the track added and the aggregate,
// frame total, and posteriors recomputed over all members.
Cluster update_cluster(const Cluster& cluster, const TrackRepresentation& rep,
                       const std::optional<TrackPosteriors>& posteriors = std::nullopt);

// Single-pass stream clustering: each track joins the nearest existing
// cluster when the distance is within the threshold, otherwise founds a new
// one. No re-assignment ever happens. posteriors, when nonempty, must align
// with the stream one-to-one.
std::vector<Cluster> online_cluster(const std::vector<TrackRepresentation>& stream,
                                    const ClusteringConfig& config,
                                    const std::vector<TrackPosteriors>& posteriors = {});

// Hierarchical agglomerative clustering under average linkage: repeatedly
// merges the closest cluster pair until the minimum inter-cluster distance
// exceeds the threshold. Equidistant merges (within 1e-12) resolve to the
// smallest (cluster_id, cluster_id) pair.
std::vector<Cluster> hac_cluster(const std::vector<TrackRepresentation>& reps,
                                 const ClusteringConfig& config,
                                 const std::vector<TrackPosteriors>& posteriors = {});

inline constexpr double kHacTieTolerance = 1e-12;

// Argmax of the pooled posteriors; ties resolve toward the lower index.
Demographics estimate_demographics(const Cluster& cluster);

struct PurityResult {
  double purity = 1.0;
  std::size_t impure_clusters = 0;  // clusters containing >= 2 subjects
};

PurityResult purity(const std::vector<Cluster>& clusters,
                    const std::unordered_map<std::string, std::string>& labels);

}  // namespace trackfold
