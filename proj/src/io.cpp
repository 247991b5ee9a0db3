#include "trackfold/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace trackfold {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
  throw TrackError(Errc::ParseError, message, line);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TrackError(Errc::IoError, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TrackError(Errc::IoError, "cannot open '" + path + "' for writing");
  return out;
}

void check_write(std::ostream& out, const std::string& what) {
  if (!out) throw TrackError(Errc::IoError, "write failed while emitting " + what);
}

// Line-oriented CSV scanner. Carriage returns and empty lines are malformed:
// the formats pin bare \n endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& fields) {
    std::string line;
    if (!std::getline(in_, line)) return false;
    ++line_number_;
    if (line.find('\r') != std::string::npos) {
      parse_fail(line_number_, "carriage return found; expected \\n line endings");
    }
    if (line.empty()) parse_fail(line_number_, "empty line");

    fields.clear();
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    return true;
  }

  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
};

double parse_double(const std::string& field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    parse_fail(line, "cannot parse '" + field + "' as a real number");
  }
  if (!std::isfinite(value)) parse_fail(line, "non-finite value '" + field + "'");
  return value;
}

std::int64_t parse_int(const std::string& field, std::size_t line) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    parse_fail(line, "cannot parse '" + field + "' as an integer");
  }
  return value;
}

void expect_header(CsvReader& reader, const std::vector<std::string>& expected) {
  std::vector<std::string> fields;
  if (!reader.next(fields)) parse_fail(1, "missing header");
  if (fields != expected) {
    std::string want;
    for (const auto& f : expected) {
      if (!want.empty()) want += ",";
      want += f;
    }
    parse_fail(reader.line_number(), "header mismatch; expected '" + want + "'");
  }
}

void check_id_cell(const std::string& id, const std::string& what) {
  if (id.empty() || id.find(',') != std::string::npos || id.find('\n') != std::string::npos ||
      id.find('\r') != std::string::npos) {
    throw TrackError(Errc::InvalidConfig, what + " '" + id + "' is empty or contains a delimiter");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// tracks.csv

TrackDataset read_tracks(std::istream& in) {
  CsvReader reader(in);

  std::vector<std::string> fields;
  if (!reader.next(fields)) parse_fail(1, "missing header");
  if (fields.size() < 3 || fields[0] != "track_id" || fields[1] != "frame_index") {
    parse_fail(reader.line_number(), "expected header 'track_id,frame_index,v0,...'");
  }
  const std::size_t dim = fields.size() - 2;
  for (std::size_t k = 0; k < dim; ++k) {
    if (fields[k + 2] != "v" + std::to_string(k)) {
      parse_fail(reader.line_number(), "unexpected header column '" + fields[k + 2] + "'");
    }
  }

  TrackDataset dataset;
  Track* current = nullptr;
  while (reader.next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != dim + 2) {
      throw TrackError(Errc::DimensionMismatch,
                       "row has " + std::to_string(fields.size() - 2) + " values, header has " +
                           std::to_string(dim),
                       line);
    }
    const std::string& id = fields[0];
    if (id.empty()) parse_fail(line, "empty track id");
    const std::int64_t frame_index = parse_int(fields[1], line);

    FeatureVector values(dim);
    for (std::size_t k = 0; k < dim; ++k) values[k] = parse_double(fields[k + 2], line);

    if (current == nullptr || current->track_id != id) {
      if (current != nullptr && id <= current->track_id) {
        parse_fail(line, "rows not sorted by (track_id, frame_index): '" + id + "' after '" +
                             current->track_id + "'");
      }
      dataset.tracks.emplace_back();
      current = &dataset.tracks.back();
      current->track_id = id;
      current->start_frame = frame_index;
      current->end_frame = frame_index - 1;
    }

    const std::int64_t expected = current->end_frame + 1;
    if (frame_index == expected - 1 && !current->frames.empty()) {
      throw TrackError(Errc::DuplicateFrame,
                       "frame " + std::to_string(frame_index) + " of track '" + id +
                           "' appears twice",
                       line);
    }
    if (frame_index != expected) {
      parse_fail(line, "frame_index " + std::to_string(frame_index) + " of track '" + id +
                           "' is not contiguous (expected " + std::to_string(expected) + ")");
    }
    current->frames.push_back(std::move(values));
    current->end_frame = frame_index;
  }

  return dataset;
}

void write_tracks(const TrackDataset& dataset, std::ostream& out) {
  std::size_t dim = 0;
  for (const auto& track : dataset.tracks) {
    if (!track.frames.empty()) {
      dim = track.dim();
      break;
    }
  }
  out << "track_id,frame_index";
  for (std::size_t k = 0; k < dim; ++k) out << ",v" << k;
  out << "\n";

  std::vector<const Track*> ordered;
  for (const auto& track : dataset.tracks) ordered.push_back(&track);
  std::sort(ordered.begin(), ordered.end(),
            [](const Track* a, const Track* b) { return a->track_id < b->track_id; });

  for (const Track* track : ordered) {
    check_id_cell(track->track_id, "track id");
    for (std::size_t f = 0; f < track->frames.size(); ++f) {
      out << track->track_id << ',' << track->start_frame + static_cast<std::int64_t>(f);
      for (double v : track->frames[f]) out << ',' << format_double(v);
      out << '\n';
    }
  }
  check_write(out, "tracks");
}

// ---------------------------------------------------------------------------
// labels.csv

LabelMap read_labels(std::istream& in) {
  CsvReader reader(in);
  expect_header(reader, {"track_id", "subject_id"});

  LabelMap labels;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != 2) parse_fail(line, "expected 2 fields");
    if (fields[0].empty() || fields[1].empty()) parse_fail(line, "empty field");
    if (!labels.emplace(fields[0], fields[1]).second) {
      throw TrackError(Errc::DuplicateTrack, "track '" + fields[0] + "' labeled twice", line);
    }
  }
  return labels;
}

void write_labels(const LabelMap& labels, std::ostream& out) {
  out << "track_id,subject_id\n";
  for (const auto& [track, subject] : labels) {
    check_id_cell(track, "track id");
    check_id_cell(subject, "subject id");
    out << track << ',' << subject << '\n';
  }
  check_write(out, "labels");
}

// ---------------------------------------------------------------------------
// pairs.csv

std::vector<VerificationPair> read_pairs(std::istream& in) {
  CsvReader reader(in);
  expect_header(reader, {"track_a", "track_b", "same", "fold"});

  std::vector<VerificationPair> pairs;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != 4) parse_fail(line, "expected 4 fields");
    if (fields[0].empty() || fields[1].empty()) parse_fail(line, "empty track id");
    if (fields[0] == fields[1]) parse_fail(line, "pair references the same track twice");
    if (fields[2] != "0" && fields[2] != "1") {
      parse_fail(line, "same flag must be 0 or 1, got '" + fields[2] + "'");
    }
    const std::int64_t fold = parse_int(fields[3], line);
    if (fold < 0) parse_fail(line, "fold must be >= 0");
    pairs.push_back({fields[0], fields[1], fields[2] == "1", static_cast<int>(fold)});
  }
  return pairs;
}

void write_pairs(const std::vector<VerificationPair>& pairs, std::ostream& out) {
  out << "track_a,track_b,same,fold\n";
  for (const auto& pair : pairs) {
    check_id_cell(pair.track_a, "track id");
    check_id_cell(pair.track_b, "track id");
    out << pair.track_a << ',' << pair.track_b << ',' << (pair.same ? '1' : '0') << ','
        << pair.fold << '\n';
  }
  check_write(out, "pairs");
}

// ---------------------------------------------------------------------------
// posteriors.csv

namespace {

const std::vector<std::string>& posteriors_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h = {"track_id", "frame_index"};
    for (int k = 0; k < 8; ++k) h.push_back("age" + std::to_string(k));
    h.push_back("gender0");
    h.push_back("gender1");
    return h;
  }();
  return header;
}

void check_block_sum(const std::vector<double>& values, std::size_t begin, std::size_t end,
                     const char* what, std::size_t line) {
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    if (values[i] < 0.0) parse_fail(line, std::string(what) + " posterior has a negative entry");
    sum += values[i];
  }
  if (std::abs(sum - 1.0) > 1e-4) {
    parse_fail(line, std::string(what) + " posterior sums to " + format_double(sum) +
                         ", expected 1 within 1e-4");
  }
}

}  // namespace

PosteriorsMap read_posteriors(std::istream& in) {
  CsvReader reader(in);
  expect_header(reader, posteriors_header());

  PosteriorsMap posteriors;
  std::vector<std::string> fields;
  std::string current_id;
  std::int64_t next_index = 0;
  while (reader.next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != 12) parse_fail(line, "expected 12 fields");
    const std::string& id = fields[0];
    if (id.empty()) parse_fail(line, "empty track id");
    const std::int64_t frame_index = parse_int(fields[1], line);

    std::vector<double> values(10);
    for (std::size_t k = 0; k < 10; ++k) values[k] = parse_double(fields[k + 2], line);
    check_block_sum(values, 0, 8, "age", line);
    check_block_sum(values, 8, 10, "gender", line);

    if (id != current_id) {
      if (posteriors.count(id) != 0) {
        parse_fail(line, "rows of track '" + id + "' are not contiguous");
      }
      if (!current_id.empty() && id < current_id) {
        parse_fail(line, "rows not sorted by (track_id, frame_index)");
      }
      current_id = id;
      next_index = frame_index;
    }
    if (frame_index != next_index) {
      parse_fail(line, "frame_index " + std::to_string(frame_index) +
                           " is not contiguous (expected " + std::to_string(next_index) + ")");
    }
    ++next_index;

    FramePosteriors fp;
    fp.age.values.assign(values.begin(), values.begin() + 8);
    fp.gender.values.assign(values.begin() + 8, values.end());
    posteriors[id].push_back(std::move(fp));
  }
  return posteriors;
}

void write_posteriors(const PosteriorsMap& posteriors, std::ostream& out) {
  const auto& header = posteriors_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i == 0 ? "" : ",") << header[i];
  out << '\n';

  for (const auto& [track, frames] : posteriors) {
    check_id_cell(track, "track id");
    for (std::size_t f = 0; f < frames.size(); ++f) {
      if (frames[f].age.size() != 8 || frames[f].gender.size() != 2) {
        throw TrackError(Errc::LengthMismatch,
                         "track '" + track + "' posterior blocks must be 8 + 2 wide");
      }
      out << track << ',' << f;
      for (double v : frames[f].age.values) out << ',' << format_double(v);
      for (double v : frames[f].gender.values) out << ',' << format_double(v);
      out << '\n';
    }
  }
  check_write(out, "posteriors");
}

// ---------------------------------------------------------------------------
// representations.csv

std::vector<TrackRepresentation> read_representations(std::istream& in) {
  CsvReader reader(in);

  std::vector<std::string> fields;
  if (!reader.next(fields)) parse_fail(1, "missing header");
  if (fields.size() < 4 || fields[0] != "track_id" || fields[1] != "method" ||
      fields[2] != "frame_count") {
    parse_fail(reader.line_number(), "expected header 'track_id,method,frame_count,v0,...'");
  }
  const std::size_t dim = fields.size() - 3;
  for (std::size_t k = 0; k < dim; ++k) {
    if (fields[k + 3] != "v" + std::to_string(k)) {
      parse_fail(reader.line_number(), "unexpected header column '" + fields[k + 3] + "'");
    }
  }

  std::vector<TrackRepresentation> reps;
  std::set<std::string> seen;
  while (reader.next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != dim + 3) {
      throw TrackError(Errc::DimensionMismatch,
                       "row has " + std::to_string(fields.size() - 3) + " values, header has " +
                           std::to_string(dim),
                       line);
    }
    if (fields[0].empty()) parse_fail(line, "empty track id");
    if (!seen.insert(fields[0]).second) {
      throw TrackError(Errc::DuplicateTrack, "track '" + fields[0] + "' appears twice", line);
    }

    TrackRepresentation rep;
    rep.track_id = fields[0];
    try {
      rep.method = parse_aggregation_name(fields[1]);
    } catch (const TrackError& e) {
      parse_fail(line, e.what());
    }
    rep.frame_count = parse_int(fields[2], line);
    if (rep.frame_count < 1) parse_fail(line, "frame_count must be >= 1");
    rep.vector.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) rep.vector[k] = parse_double(fields[k + 3], line);
    reps.push_back(std::move(rep));
  }
  return reps;
}

void write_representations(const std::vector<TrackRepresentation>& reps, std::ostream& out) {
  const std::size_t dim = reps.empty() ? 0 : reps.front().vector.size();
  out << "track_id,method,frame_count";
  for (std::size_t k = 0; k < dim; ++k) out << ",v" << k;
  out << '\n';
  for (const auto& rep : reps) {
    check_id_cell(rep.track_id, "track id");
    out << rep.track_id << ',' << aggregation_name(rep.method) << ',' << rep.frame_count;
    for (double v : rep.vector) out << ',' << format_double(v);
    out << '\n';
  }
  check_write(out, "representations");
}

// ---------------------------------------------------------------------------
// clusters.jsonl

ClusterRecord to_record(const Cluster& cluster) {
  ClusterRecord record;
  record.cluster_id = cluster.cluster_id;
  record.track_ids = cluster.track_ids();
  record.total_frames = cluster.total_frames;
  record.representation = cluster.representation;
  if (cluster.age_posterior.has_value() && cluster.gender_posterior.has_value()) {
    const Demographics demo = estimate_demographics(cluster);
    record.gender = demo.gender == Gender::Male ? 0 : 1;
    record.age_category = demo.age_category;
  }
  return record;
}

std::vector<ClusterRecord> read_clusters(std::istream& in) {
  std::vector<ClusterRecord> records;
  std::set<std::string> seen_tracks;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      parse_fail(line_number, std::string("invalid JSON: ") + e.what());
    }
    try {
      ClusterRecord record;
      record.cluster_id = parsed.at("cluster_id").get<int>();
      record.track_ids = parsed.at("track_ids").get<std::vector<std::string>>();
      record.total_frames = parsed.at("total_frames").get<std::int64_t>();
      if (!parsed.at("gender").is_null()) record.gender = parsed.at("gender").get<int>();
      if (!parsed.at("age_category").is_null()) {
        record.age_category = parsed.at("age_category").get<int>();
      }
      record.representation = parsed.at("representation").get<FeatureVector>();
      records.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      parse_fail(line_number, std::string("bad cluster object: ") + e.what());
    }
    for (const auto& id : records.back().track_ids) {
      if (!seen_tracks.insert(id).second) {
        throw TrackError(Errc::DuplicateTrack,
                         "track '" + id + "' appears in more than one cluster", line_number);
      }
    }
  }
  return records;
}

void write_cluster_records(const std::vector<ClusterRecord>& records, std::ostream& out) {
  for (const auto& record : records) {
    nlohmann::ordered_json object;
    object["cluster_id"] = record.cluster_id;
    object["track_ids"] = record.track_ids;
    object["total_frames"] = record.total_frames;
    if (record.gender.has_value()) {
      object["gender"] = *record.gender;
    } else {
      object["gender"] = nullptr;
    }
    if (record.age_category.has_value()) {
      object["age_category"] = *record.age_category;
    } else {
      object["age_category"] = nullptr;
    }
    object["representation"] = record.representation;
    out << object.dump() << '\n';
  }
  check_write(out, "clusters");
}

void write_clusters(const std::vector<Cluster>& clusters, std::ostream& out) {
  std::vector<ClusterRecord> records;
  records.reserve(clusters.size());
  for (const auto& cluster : clusters) records.push_back(to_record(cluster));
  write_cluster_records(records, out);
}

// ---------------------------------------------------------------------------
// report.json + text table

void write_report(const std::vector<MethodReportRow>& rows, std::ostream& out) {
  if (rows.empty()) throw TrackError(Errc::InvalidConfig, "report needs at least one row");
  nlohmann::ordered_json root;
  root["far_operating_point"] = rows.front().metrics.far_operating_point;
  root["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json object;
    object["method"] = row.method;
    object["folds"] = row.metrics.fold_count;
    object["auc_mean"] = row.metrics.auc_mean;
    object["auc_std"] = row.metrics.auc_std;
    object["eer_mean"] = row.metrics.eer_mean;
    object["eer_std"] = row.metrics.eer_std;
    object["frr_at_far_mean"] = row.metrics.frr_at_far_mean;
    object["frr_at_far_std"] = row.metrics.frr_at_far_std;
    root["rows"].push_back(std::move(object));
  }
  out << root.dump(2) << '\n';
  check_write(out, "report");
}

std::vector<MethodReportRow> read_report(std::istream& in) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
    std::vector<MethodReportRow> rows;
    const double far = root.at("far_operating_point").get<double>();
    for (const auto& object : root.at("rows")) {
      MethodReportRow row;
      row.method = object.at("method").get<std::string>();
      row.metrics.far_operating_point = far;
      row.metrics.fold_count = object.at("folds").get<int>();
      row.metrics.auc_mean = object.at("auc_mean").get<double>();
      row.metrics.auc_std = object.at("auc_std").get<double>();
      row.metrics.eer_mean = object.at("eer_mean").get<double>();
      row.metrics.eer_std = object.at("eer_std").get<double>();
      row.metrics.frr_at_far_mean = object.at("frr_at_far_mean").get<double>();
      row.metrics.frr_at_far_std = object.at("frr_at_far_std").get<double>();
      rows.push_back(std::move(row));
    }
    return rows;
  } catch (const nlohmann::json::exception& e) {
    throw TrackError(Errc::ParseError, std::string("bad report: ") + e.what());
  }
}

std::string format_report_table(const std::vector<MethodReportRow>& rows) {
  const auto cell = [](double mean, double std_dev) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f±%.1f", mean, std_dev);
    return std::string(buf);
  };

  std::vector<std::vector<std::string>> table;
  {
    char far_header[64];
    const double far_percent =
        rows.empty() ? 1.0 : rows.front().metrics.far_operating_point * 100.0;
    std::snprintf(far_header, sizeof(far_header), "FRR@FAR=%g%%", far_percent);
    table.push_back({"method", "AUC(%)", "EER(%)", far_header});
  }
  for (const auto& row : rows) {
    table.push_back({row.method, cell(row.metrics.auc_mean, row.metrics.auc_std),
                     cell(row.metrics.eer_mean, row.metrics.eer_std),
                     cell(row.metrics.frr_at_far_mean, row.metrics.frr_at_far_std)});
  }

  // display width, not byte count: the ± sign is two UTF-8 bytes
  const auto width_of = [](const std::string& cell) {
    std::size_t width = 0;
    for (unsigned char ch : cell) {
      if ((ch & 0xc0) != 0x80) ++width;  // count non-continuation bytes
    }
    return width;
  };

  std::vector<std::size_t> widths(table.front().size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], width_of(row[c]));
    }
  }

  std::ostringstream out;
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(widths[c] - width_of(row[c]) + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// path wrappers

TrackDataset read_tracks_file(const std::string& path) {
  auto in = open_input(path);
  return read_tracks(in);
}
void write_tracks_file(const TrackDataset& dataset, const std::string& path) {
  auto out = open_output(path);
  write_tracks(dataset, out);
}
LabelMap read_labels_file(const std::string& path) {
  auto in = open_input(path);
  return read_labels(in);
}
void write_labels_file(const LabelMap& labels, const std::string& path) {
  auto out = open_output(path);
  write_labels(labels, out);
}
std::vector<VerificationPair> read_pairs_file(const std::string& path) {
  auto in = open_input(path);
  return read_pairs(in);
}
void write_pairs_file(const std::vector<VerificationPair>& pairs, const std::string& path) {
  auto out = open_output(path);
  write_pairs(pairs, out);
}
PosteriorsMap read_posteriors_file(const std::string& path) {
  auto in = open_input(path);
  return read_posteriors(in);
}
void write_posteriors_file(const PosteriorsMap& posteriors, const std::string& path) {
  auto out = open_output(path);
  write_posteriors(posteriors, out);
}
std::vector<TrackRepresentation> read_representations_file(const std::string& path) {
  auto in = open_input(path);
  return read_representations(in);
}
void write_representations_file(const std::vector<TrackRepresentation>& reps,
                                const std::string& path) {
  auto out = open_output(path);
  write_representations(reps, out);
}
std::vector<ClusterRecord> read_clusters_file(const std::string& path) {
  auto in = open_input(path);
  return read_clusters(in);
}
void write_clusters_file(const std::vector<Cluster>& clusters, const std::string& path) {
  auto out = open_output(path);
  write_clusters(clusters, out);
}
void write_report_file(const std::vector<MethodReportRow>& rows, const std::string& path) {
  auto out = open_output(path);
  write_report(rows, out);
}
std::vector<MethodReportRow> read_report_file(const std::string& path) {
  auto in = open_input(path);
  return read_report(in);
}

}  // namespace trackfold
