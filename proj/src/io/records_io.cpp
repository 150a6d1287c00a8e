#include "vqc/io/records_io.hpp"

#include "json.hpp"
#include <sstream>

#include "vqc/errors.hpp"
#include "vqc/io/csv.hpp"

namespace vqc::io {

namespace {

const char* flag(bool b) { return b ? "1" : "0"; }

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

template <class E>
std::string opt_enum(const std::optional<E>& v) {
  return v ? std::string(core::to_string(*v)) : "";
}

}  // namespace

std::string catalog_csv(std::span<const core::VideoAsset> assets) {
  std::ostringstream out;
  out << "video_id,width,height,orientation,size_bits,pool,latent_quality,golden_mos\n";
  for (const auto& a : assets) {
    out << a.id << ',' << a.width << ',' << a.height << ',' << core::to_string(a.orientation)
        << ',' << format_double(a.size_bits) << ',' << core::to_string(a.pool) << ','
        << format_double(a.latent_quality) << ',' << opt(a.golden_ground_truth_mos) << '\n';
  }
  return out.str();
}

std::vector<core::VideoAsset> read_catalog(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  t.require_columns({"video_id", "width", "height", "orientation", "size_bits", "pool",
                     "latent_quality", "golden_mos"});
  std::vector<core::VideoAsset> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    core::VideoAsset a;
    a.id = t.cell(r, "video_id");
    a.width = static_cast<int>(t.integer(r, "width"));
    a.height = static_cast<int>(t.integer(r, "height"));
    try {
      a.orientation = core::parse_orientation(t.cell(r, "orientation"));
      a.pool = core::parse_pool(t.cell(r, "pool"));
    } catch (const DataError& e) {
      throw DataError(row_context(path, r) + e.what());
    }
    a.size_bits = t.number(r, "size_bits");
    a.latent_quality = t.number(r, "latent_quality");
    if (!t.cell(r, "golden_mos").empty()) a.golden_ground_truth_mos = t.number(r, "golden_mos");
    try {
      core::validate_asset(a);
    } catch (const DataError& e) {
      throw DataError(row_context(path, r) + e.what());
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string ratings_csv(std::span<const core::RatingRecord> records) {
  std::ostringstream out;
  out << "session_id,subject_id,video_id,position,raw_score,stall_total_ms,play_duration_ms,"
         "is_golden,is_repeat,is_common,cursor_start\n";
  for (const auto& r : records) {
    out << r.session_id << ',' << r.subject_id << ',' << r.video_id << ',' << r.position << ','
        << r.raw_score << ',' << r.stall_total_ms << ',' << r.play_duration_ms << ','
        << flag(r.is_golden) << ',' << flag(r.is_repeat) << ',' << flag(r.is_common) << ','
        << r.cursor_start << '\n';
  }
  return out.str();
}

std::vector<core::RatingRecord> read_ratings(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  t.require_columns({"session_id", "subject_id", "video_id", "position", "raw_score",
                     "stall_total_ms", "play_duration_ms", "is_golden", "is_repeat", "is_common",
                     "cursor_start"});
  std::vector<core::RatingRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    core::RatingRecord x;
    x.session_id = static_cast<std::uint64_t>(t.integer(r, "session_id"));
    x.subject_id = t.cell(r, "subject_id");
    x.video_id = t.cell(r, "video_id");
    x.position = static_cast<int>(t.integer(r, "position"));
    x.raw_score = static_cast<int>(t.integer(r, "raw_score"));
    x.stall_total_ms = t.integer(r, "stall_total_ms");
    x.play_duration_ms = t.integer(r, "play_duration_ms");
    x.is_golden = t.flag(r, "is_golden");
    x.is_repeat = t.flag(r, "is_repeat");
    x.is_common = t.flag(r, "is_common");
    x.cursor_start = static_cast<int>(t.integer(r, "cursor_start"));
    if (x.raw_score < 0 || x.raw_score > 100) {
      throw DataError(row_context(path, r) + "raw_score outside [0,100]");
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::string sessions_csv(std::span<const session::SessionSummary> sessions) {
  std::ostringstream out;
  out << "session_id,subject_id,termination,elapsed_min,warnings,display_w,display_h,"
         "device_class,vision,age_group,gender,viewing_distance\n";
  for (const auto& s : sessions) {
    std::string warnings;
    if (s.warned_checkpoint1) warnings = "checkpoint1";
    if (s.warned_checkpoint2) warnings += warnings.empty() ? "checkpoint2" : ";checkpoint2";
    out << s.session_id << ',' << s.subject_id << ',' << session::to_string(s.termination) << ','
        << format_double(s.elapsed_min) << ',' << warnings << ',' << s.display_w << ','
        << s.display_h << ',' << core::to_string(s.device_class) << ',' << opt_enum(s.vision)
        << ',' << opt_enum(s.age_group) << ',' << opt_enum(s.gender) << ','
        << opt_enum(s.viewing_distance) << '\n';
  }
  return out.str();
}

std::vector<session::SessionSummary> read_sessions(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  t.require_columns({"session_id", "subject_id", "termination", "elapsed_min", "warnings",
                     "display_w", "display_h", "device_class"});
  const bool survey = t.has_column("vision");
  if (survey) t.require_columns({"vision", "age_group", "gender", "viewing_distance"});
  std::vector<session::SessionSummary> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    session::SessionSummary s;
    s.session_id = static_cast<std::uint64_t>(t.integer(r, "session_id"));
    s.subject_id = t.cell(r, "subject_id");
    s.elapsed_min = t.number(r, "elapsed_min");
    const auto& w = t.cell(r, "warnings");
    s.warned_checkpoint1 = w.find("checkpoint1") != std::string::npos;
    s.warned_checkpoint2 = w.find("checkpoint2") != std::string::npos;
    s.display_w = static_cast<int>(t.integer(r, "display_w"));
    s.display_h = static_cast<int>(t.integer(r, "display_h"));
    try {
      s.termination = session::parse_termination(t.cell(r, "termination"));
      s.device_class = core::parse_device_class(t.cell(r, "device_class"));
      if (survey) {
        if (const auto& v = t.cell(r, "vision"); !v.empty()) s.vision = core::parse_vision(v);
        if (const auto& v = t.cell(r, "age_group"); !v.empty()) s.age_group = core::parse_age_group(v);
        if (const auto& v = t.cell(r, "gender"); !v.empty()) s.gender = core::parse_gender(v);
        if (const auto& v = t.cell(r, "viewing_distance"); !v.empty()) {
          s.viewing_distance = core::parse_viewing_distance(v);
        }
      }
    } catch (const DataError& e) {
      throw DataError(row_context(path, r) + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string mos_csv(std::span<const aggregate::VideoMos> rows) {
  std::ostringstream out;
  out << "video_id,mos,std,n,mos_stalled,n_stalled,dmos\n";
  for (const auto& m : rows) {
    out << m.video_id << ',' << format_double(m.mos) << ',' << format_double(m.std) << ','
        << m.n_ratings << ',' << opt(m.mos_with_stalls) << ',' << m.n_stalled << ','
        << opt(m.dmos) << '\n';
  }
  return out.str();
}

std::vector<aggregate::VideoMos> read_mos(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  t.require_columns({"video_id", "mos", "std", "n", "mos_stalled", "n_stalled", "dmos"});
  std::vector<aggregate::VideoMos> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    aggregate::VideoMos m;
    m.video_id = t.cell(r, "video_id");
    m.mos = t.number(r, "mos");
    m.std = t.number(r, "std");
    m.n_ratings = static_cast<int>(t.integer(r, "n"));
    if (!t.cell(r, "mos_stalled").empty()) m.mos_with_stalls = t.number(r, "mos_stalled");
    m.n_stalled = static_cast<int>(t.integer(r, "n_stalled"));
    if (!t.cell(r, "dmos").empty()) m.dmos = t.number(r, "dmos");
    out.push_back(std::move(m));
  }
  return out;
}

std::string ledger_csv(std::span<const screening::LedgerRow> rows) {
  std::ostringstream out;
  out << "subject_id,stage_removed,detail\n";
  for (const auto& r : rows) {
    out << r.subject_id << ',' << screening::to_string(r.stage) << ',' << r.detail << '\n';
  }
  return out.str();
}

std::string eval_csv(std::span<const EvalRow> rows) {
  std::ostringstream out;
  out << "name,protocol,plcc,srocc,rmse,n_videos_used\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out << r.name << ',' << eval::to_string(r.protocol) << ',';
    if (row.error.empty()) {
      out << format_double(r.metrics.plcc) << ',' << format_double(r.metrics.srocc) << ','
          << format_double(r.metrics.rmse) << ',' << r.n_videos_used << '\n';
    } else {
      out << ",,,0\n";
    }
  }
  return out.str();
}

std::string eval_json(std::span<const EvalRow> rows) {
  auto arr = nlohmann::json::array();
  for (const auto& row : rows) {
    const auto& r = row.result;
    nlohmann::json j;
    j["name"] = r.name;
    j["protocol"] = eval::to_string(r.protocol);
    if (row.error.empty()) {
      j["plcc"] = r.metrics.plcc;
      j["srocc"] = r.metrics.srocc;
      j["rmse"] = r.metrics.rmse;
      j["degenerate"] = r.degenerate;
    } else {
      j["error"] = row.error;
    }
    j["n_videos_used"] = r.n_videos_used;
    j["warnings"] = r.warnings;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace vqc::io
