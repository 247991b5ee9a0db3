#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trackfold/cluster.hpp"
#include "trackfold/evaluate.hpp"
#include "trackfold/feature.hpp"

namespace trackfold {

using PosteriorsMap = std::map<std::string, std::vector<FramePosteriors>>;
using LabelMap = std::map<std::string, std::string>;

// All CSV formats are UTF-8 with \n line endings and explicit headers.
// Floating-point cells carry 17 significant digits (lossless for doubles).
// Readers reject malformed rows with the 1-based line number and never repair.

// tracks.csv: track_id,frame_index,v0,...,v{D-1}
// rows sorted by (track_id, frame_index), frame indices contiguous per track
TrackDataset read_tracks(std::istream& in);
void write_tracks(const TrackDataset& dataset, std::ostream& out);
TrackDataset read_tracks_file(const std::string& path);
void write_tracks_file(const TrackDataset& dataset, const std::string& path);

// labels.csv: track_id,subject_id (track ids unique)
LabelMap read_labels(std::istream& in);
void write_labels(const LabelMap& labels, std::ostream& out);
LabelMap read_labels_file(const std::string& path);
void write_labels_file(const LabelMap& labels, const std::string& path);

// pairs.csv: track_a,track_b,same(0|1),fold
std::vector<VerificationPair> read_pairs(std::istream& in);
void write_pairs(const std::vector<VerificationPair>& pairs, std::ostream& out);
std::vector<VerificationPair> read_pairs_file(const std::string& path);
void write_pairs_file(const std::vector<VerificationPair>& pairs, const std::string& path);

// posteriors.csv: track_id,frame_index,age0..age7,gender0,gender1
// (gender0 = male); each block sums to 1 within 1e-4
PosteriorsMap read_posteriors(std::istream& in);
void write_posteriors(const PosteriorsMap& posteriors, std::ostream& out);
PosteriorsMap read_posteriors_file(const std::string& path);
void write_posteriors_file(const PosteriorsMap& posteriors, const std::string& path);

// representations.csv: track_id,method,frame_count,v0,...,v{D-1}
std::vector<TrackRepresentation> read_representations(std::istream& in);
void write_representations(const std::vector<TrackRepresentation>& reps, std::ostream& out);
std::vector<TrackRepresentation> read_representations_file(const std::string& path);
void write_representations_file(const std::vector<TrackRepresentation>& reps,
                                const std::string& path);

// clusters.jsonl: one object per line with keys cluster_id, track_ids,
// total_frames, gender (0 = male, 1 = female, null when unknown),
// age_category (0..7 or null), representation.
struct ClusterRecord {
  int cluster_id = 0;
  std::vector<std::string> track_ids;
  std::int64_t total_frames = 0;
  std::optional<int> gender;
  std::optional<int> age_category;
  FeatureVector representation;

  bool operator==(const ClusterRecord& other) const = default;
};

ClusterRecord to_record(const Cluster& cluster);
std::vector<ClusterRecord> read_clusters(std::istream& in);
void write_clusters(const std::vector<Cluster>& clusters, std::ostream& out);
void write_cluster_records(const std::vector<ClusterRecord>& records, std::ostream& out);
std::vector<ClusterRecord> read_clusters_file(const std::string& path);
void write_clusters_file(const std::vector<Cluster>& clusters, const std::string& path);

// report.json: {"far_operating_point": .., "rows": [{"method": .., "folds": ..,
// "auc_mean": .., ...}]}; percentages, mirrored by the plain-text table.
struct MethodReportRow {
  std::string method;
  MetricReport metrics;
};

void write_report(const std::vector<MethodReportRow>& rows, std::ostream& out);
std::vector<MethodReportRow> read_report(std::istream& in);
void write_report_file(const std::vector<MethodReportRow>& rows, const std::string& path);
std::vector<MethodReportRow> read_report_file(const std::string& path);

// Aligned text table: one method per row, AUC / EER / FRR@FAR columns,
// cells formatted "mean±std".
std::string format_report_table(const std::vector<MethodReportRow>& rows);

std::string format_double(double value);  // 17 significant digits

}  // namespace trackfold
