#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "geohalu/geokg/entities.hpp"

namespace geohalu::geokg {

struct BoundingBox {
  double min_lat = -90.0;
  double min_lon = -180.0;
  double max_lat = 90.0;
  double max_lon = 180.0;

  bool contains(const GeoPoint& p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
  }
};

enum class RejectReason {
  EmptyName,
  OutOfBbox,
  MalformedGeometry,
  DuplicateId,
  MalformedRecord,   // not JSON, missing kind/id, wrong field types
  InvalidAttribute,  // unknown land_use, non-positive area/length
  AttributeMismatch  // area/length disagrees with the geometry
};

std::string_view to_string(RejectReason r);

struct Rejection {
  std::size_t line = 0;  // 1-based
  std::string id;        // empty when the record had no readable id
  RejectReason reason = RejectReason::MalformedRecord;
  std::string detail;

  bool operator==(const Rejection&) const = default;
};

struct IngestResult {
  std::string city;
  EntitySet entities;
  std::vector<Rejection> rejections;
};

// Reads line-delimited entity records. Blank lines are skipped. Bad records
// are reported, never fatal; an unreadable stream throws IoError. Duplicate
// ids are checked against already-accepted records, so the first valid
// record with an id wins.
IngestResult ingest_entities(std::istream& in, const std::string& city,
                             const BoundingBox& bbox = {});
IngestResult ingest_entities(const std::filesystem::path& path, const std::string& city,
                             const BoundingBox& bbox = {});

// One JSON object per line: {"line":..,"id":..,"reason":..,"detail":..}.
std::string rejection_report_jsonl(const std::vector<Rejection>& rejections);

}  // namespace geohalu::geokg
