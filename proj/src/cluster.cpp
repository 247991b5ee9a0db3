#include "trackfold/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace trackfold {

std::vector<std::string> Cluster::track_ids() const {
  std::vector<std::string> ids;
  ids.reserve(members.size());
  for (const auto& m : members) ids.push_back(m.track_id);
  return ids;
}

namespace {

FeatureVector weighted_member_mean(const std::vector<ClusterMember>& members) {
  const std::size_t dim = members.front().vector.size();
  double total_weight = 0.0;
  for (const auto& m : members) total_weight += static_cast<double>(m.frame_count);

  FeatureVector mean(dim, 0.0);
  std::vector<double> terms(members.size());
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      terms[i] = static_cast<double>(members[i].frame_count) * members[i].vector[k];
    }
    mean[k] = stable_sum(terms) / total_weight;
  }
  return mean;
}

FeatureVector member_medoid(const std::vector<ClusterMember>& members) {
  Track pseudo;
  pseudo.track_id = "cluster";
  for (const auto& m : members) pseudo.frames.push_back(m.vector);
  pseudo.start_frame = 0;
  pseudo.end_frame = static_cast<std::int64_t>(members.size()) - 1;
  return medoid(pseudo, DistanceKind::Euclidean);
}

std::optional<ProbabilityVector> pooled_posterior(
    const std::vector<ClusterMember>& members,
    const ProbabilityVector TrackPosteriors::*field) {
  std::vector<const ClusterMember*> with;
  for (const auto& m : members) {
    if (m.posteriors.has_value()) with.push_back(&m);
  }
  if (with.empty()) return std::nullopt;

  const std::size_t k = ((*with.front()->posteriors).*field).size();
  for (const auto* m : with) {
    if (((*m->posteriors).*field).size() != k) {
      throw TrackError(Errc::DimensionMismatch,
                       "posterior length differs across cluster members");
    }
  }

  FeatureVector weighted(k, 0.0);
  std::vector<double> terms(with.size());
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < with.size(); ++i) {
      terms[i] = static_cast<double>(with[i]->frame_count) *
                 ((*with[i]->posteriors).*field).values[c];
    }
    weighted[c] = stable_sum(terms);
  }
  return l1_normalize(weighted);
}

void recompute_aggregate(Cluster& cluster) {
  if (cluster.members.size() == 1) {
    cluster.representation = cluster.members.front().vector;
  } else if (cluster.method.kind == PoolingKind::Medoid) {
    cluster.representation = member_medoid(cluster.members);
  } else {
    cluster.representation = weighted_member_mean(cluster.members);
    if (ends_with_normalization(cluster.method)) {
      cluster.representation = l2_normalize(cluster.representation);
    }
  }

  cluster.total_frames = 0;
  for (const auto& m : cluster.members) cluster.total_frames += m.frame_count;

  cluster.age_posterior = pooled_posterior(cluster.members, &TrackPosteriors::age);
  cluster.gender_posterior = pooled_posterior(cluster.members, &TrackPosteriors::gender);
}

void check_clustering_config(const ClusteringConfig& config, Linkage expected) {
  if (config.method.kind != TrackDistanceMethod::Kind::Representation ||
      !config.method.aggregation.has_value()) {
    throw TrackError(Errc::InvalidConfig,
                     "clustering requires a representation track-distance method");
  }
  if (!(config.threshold >= 0.0)) {
    throw TrackError(Errc::InvalidConfig, "clustering threshold must be >= 0");
  }
  if (config.linkage != expected) {
    throw TrackError(Errc::InvalidConfig,
                     expected == Linkage::NearestCluster
                         ? "online clustering requires NearestCluster linkage"
                         : "hac clustering requires AverageLinkage linkage");
  }
}

void check_stream(const std::vector<TrackRepresentation>& reps,
                  const ClusteringConfig& config,
                  const std::vector<TrackPosteriors>& posteriors) {
  for (const auto& rep : reps) {
    if (!(rep.method == *config.method.aggregation)) {
      throw TrackError(Errc::MethodMismatch,
                       "representation '" + rep.track_id + "' uses " +
                           aggregation_name(rep.method) + " but the clustering expects " +
                           aggregation_name(*config.method.aggregation));
    }
  }
  if (!posteriors.empty() && posteriors.size() != reps.size()) {
    throw TrackError(Errc::LengthMismatch,
                     "posterior list does not align with the representation stream");
  }
}

std::optional<TrackPosteriors> posterior_at(const std::vector<TrackPosteriors>& posteriors,
                                            std::size_t index) {
  if (posteriors.empty()) return std::nullopt;
  return posteriors[index];
}

}  // namespace

Cluster make_cluster(int cluster_id, const TrackRepresentation& rep,
                     const std::optional<TrackPosteriors>& posteriors) {
  Cluster cluster;
  cluster.cluster_id = cluster_id;
  cluster.method = rep.method;
  cluster.members.push_back({rep.track_id, rep.vector, rep.frame_count, posteriors});
  recompute_aggregate(cluster);
  return cluster;
}

Cluster update_cluster(const Cluster& cluster, const TrackRepresentation& rep,
                       const std::optional<TrackPosteriors>& posteriors) {
  if (!(rep.method == cluster.method)) {
    throw TrackError(Errc::MethodMismatch,
                     "representation '" + rep.track_id + "' uses " +
                         aggregation_name(rep.method) + " but cluster " +
                         std::to_string(cluster.cluster_id) + " holds " +
                         aggregation_name(cluster.method));
  }
  for (const auto& m : cluster.members) {
    if (m.track_id == rep.track_id) {
      throw TrackError(Errc::DuplicateTrack,
                       "track '" + rep.track_id + "' is already in cluster " +
                           std::to_string(cluster.cluster_id));
    }
  }
  Cluster updated = cluster;
  updated.members.push_back({rep.track_id, rep.vector, rep.frame_count, posteriors});
  recompute_aggregate(updated);
  return updated;
}

std::vector<Cluster> online_cluster(const std::vector<TrackRepresentation>& stream,
                                    const ClusteringConfig& config,
                                    const std::vector<TrackPosteriors>& posteriors) {
  check_clustering_config(config, Linkage::NearestCluster);
  check_stream(stream, config, posteriors);

  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& rep = stream[i];

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = clusters.size();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const double d = euclidean(rep.vector, clusters[c].representation);
      if (d < best) {  // strict: ties keep the earliest cluster
        best = d;
        best_index = c;
      }
    }

    if (best_index < clusters.size() && best <= config.threshold) {
      clusters[best_index] = update_cluster(clusters[best_index], rep, posterior_at(posteriors, i));
    } else {
      clusters.push_back(
          make_cluster(static_cast<int>(clusters.size()), rep, posterior_at(posteriors, i)));
    }
  }
  return clusters;
}

std::vector<Cluster> hac_cluster(const std::vector<TrackRepresentation>& reps,
                                 const ClusteringConfig& config,
                                 const std::vector<TrackPosteriors>& posteriors) {
  check_clustering_config(config, Linkage::AverageLinkage);
  check_stream(reps, config, posteriors);

  const std::size_t n = reps.size();
  if (n == 0) return {};

  // Working state: each active cluster keeps the indices of its members in
  // input order; dist holds the average-linkage distances, updated with the
  // Lance-Williams recurrence (exact for average linkage).
  std::vector<std::vector<std::size_t>> groups(n);
  std::vector<bool> active(n, true);
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) groups[i] = {i};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i][j] = dist[j][i] = euclidean(reps[i].vector, reps[j].vector);
    }
  }

  while (true) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (dist[i][j] < best - kHacTieTolerance) {
          best = dist[i][j];
          bi = i;
          bj = j;
        }
        // within tolerance of the current best: the scan order (ascending
        // (i, j)) already keeps the smallest id pair
      }
    }
    if (bi == n || best > config.threshold) break;

    const double size_i = static_cast<double>(groups[bi].size());
    const double size_j = static_cast<double>(groups[bj].size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double merged =
          (size_i * dist[bi][k] + size_j * dist[bj][k]) / (size_i + size_j);
      dist[bi][k] = dist[k][bi] = merged;
    }
    groups[bi].insert(groups[bi].end(), groups[bj].begin(), groups[bj].end());
    active[bj] = false;
  }

  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    std::sort(groups[i].begin(), groups[i].end());
    Cluster cluster = make_cluster(static_cast<int>(clusters.size()), reps[groups[i][0]],
                                   posterior_at(posteriors, groups[i][0]));
    for (std::size_t m = 1; m < groups[i].size(); ++m) {
      cluster = update_cluster(cluster, reps[groups[i][m]], posterior_at(posteriors, groups[i][m]));
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

Demographics estimate_demographics(const Cluster& cluster) {
  if (!cluster.age_posterior.has_value() || !cluster.gender_posterior.has_value()) {
    throw TrackError(Errc::MissingPosteriors,
                     "cluster " + std::to_string(cluster.cluster_id) + " has no posteriors");
  }
  const auto argmax = [](const ProbabilityVector& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (p.values[i] > p.values[best]) best = i;
    }
    return best;
  };
  Demographics out;
  out.gender = argmax(*cluster.gender_posterior) == 0 ? Gender::Male : Gender::Female;
  out.age_category = static_cast<int>(argmax(*cluster.age_posterior));
  return out;
}

PurityResult purity(const std::vector<Cluster>& clusters,
                    const std::unordered_map<std::string, std::string>& labels) {
  std::size_t total_tracks = 0;
  std::size_t majority_total = 0;
  PurityResult result;
  result.impure_clusters = 0;

  for (const auto& cluster : clusters) {
    std::map<std::string, std::size_t> counts;
    for (const auto& member : cluster.members) {
      const auto it = labels.find(member.track_id);
      if (it == labels.end()) {
        throw TrackError(Errc::MissingLabel, "track '" + member.track_id + "' has no label");
      }
      ++counts[it->second];
    }
    std::size_t majority = 0;
    for (const auto& [subject, count] : counts) majority = std::max(majority, count);
    majority_total += majority;
    total_tracks += cluster.members.size();
    if (counts.size() >= 2) ++result.impure_clusters;
  }

  result.purity = total_tracks == 0
                      ? 1.0
                      : static_cast<double>(majority_total) / static_cast<double>(total_tracks);
  return result;
}

}  // namespace trackfold
