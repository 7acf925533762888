#include "geohalu/geokg/ingest.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "geohalu/error.hpp"
#include "geohalu/text.hpp"

namespace geohalu::geokg {
namespace {

using nlohmann::json;

struct Reject {
  RejectReason reason;
  std::string detail;
};

std::vector<GeoPoint> read_coords(const json& arr) {
  if (!arr.is_array()) throw Reject{RejectReason::MalformedGeometry, "coordinates must be an array"};
  std::vector<GeoPoint> out;
  for (const auto& c : arr) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      throw Reject{RejectReason::MalformedGeometry, "coordinate must be [lon, lat]"};
    GeoPoint p{c[1].get<double>(), c[0].get<double>()};
    if (!is_valid(p)) throw Reject{RejectReason::MalformedGeometry, "coordinate out of range"};
    out.push_back(p);
  }
  return out;
}

std::string read_string(const json& rec, const char* key, bool required) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) {
    if (required) throw Reject{RejectReason::MalformedRecord, std::string("missing '") + key + "'"};
    return {};
  }
  if (!it->is_string())
    throw Reject{RejectReason::MalformedRecord, std::string("'") + key + "' must be a string"};
  return it->get<std::string>();
}

std::optional<double> read_number(const json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (!it->is_number())
    throw Reject{RejectReason::MalformedRecord, std::string("'") + key + "' must be a number"};
  return it->get<double>();
}

double checked_attribute(std::optional<double> given, double recomputed, double rel_tol,
                         const char* what) {
  if (!given) return recomputed;
  if (!(std::isfinite(*given) && *given > 0.0))
    throw Reject{RejectReason::InvalidAttribute, std::string(what) + " must be positive"};
  if (std::abs(*given - recomputed) > rel_tol * recomputed)
    throw Reject{RejectReason::AttributeMismatch,
                 std::string(what) + " disagrees with geometry (" + std::to_string(recomputed) + ")"};
  return *given;
}

}  // namespace

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::EmptyName: return "empty_name";
    case RejectReason::OutOfBbox: return "out_of_bbox";
    case RejectReason::MalformedGeometry: return "malformed_geometry";
    case RejectReason::DuplicateId: return "duplicate_id";
    case RejectReason::MalformedRecord: return "malformed_record";
    case RejectReason::InvalidAttribute: return "invalid_attribute";
    case RejectReason::AttributeMismatch: return "attribute_mismatch";
  }
  return "?";
}

IngestResult ingest_entities(std::istream& in, const std::string& city, const BoundingBox& bbox) {
  if (!in) throw IoError("entity stream is not readable");
  IngestResult result;
  result.city = city;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (collapse_whitespace(line).empty()) continue;
    std::string id;
    try {
      json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (rec.is_discarded() || !rec.is_object())
        throw Reject{RejectReason::MalformedRecord, "line is not a JSON object"};
      id = read_string(rec, "id", true);
      if (id.empty()) throw Reject{RejectReason::MalformedRecord, "empty id"};
      const std::string kind = read_string(rec, "kind", true);
      const std::string name = collapse_whitespace(read_string(rec, "name", false));
      if (name.empty()) throw Reject{RejectReason::EmptyName, "name is empty"};
      auto cls = parse_entity_class(kind);
      if (!cls) throw Reject{RejectReason::MalformedRecord, "unknown kind '" + kind + "'"};

      switch (*cls) {
        case EntityClass::Poi: {
          auto lat = read_number(rec, "lat");
          auto lon = read_number(rec, "lon");
          if (!lat || !lon) throw Reject{RejectReason::MalformedGeometry, "poi needs lat and lon"};
          GeoPoint p{*lat, *lon};
          if (!is_valid(p)) throw Reject{RejectReason::MalformedGeometry, "coordinate out of range"};
          if (!bbox.contains(p)) throw Reject{RejectReason::OutOfBbox, "location outside bbox"};
          if (seen.contains(id)) throw Reject{RejectReason::DuplicateId, "id already accepted"};
          result.entities.pois.push_back(PoiEntity{id, name, p,
                                                   collapse_whitespace(read_string(rec, "address", false)),
                                                   collapse_whitespace(read_string(rec, "category", false))});
          break;
        }
        case EntityClass::Aoi: {
          auto it = rec.find("ring");
          if (it == rec.end()) throw Reject{RejectReason::MalformedGeometry, "aoi needs a ring"};
          auto ring = read_coords(*it);
          if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
          AoiEntity e;
          e.id = id;
          e.name = name;
          e.boundary = std::move(ring);
          try {
            if (e.boundary.size() < 3) throw ValidationError("too few vertices");
            if (!is_simple_polygon(e.boundary)) throw ValidationError("self-intersecting ring");
            if (polygon_area(e.boundary) <= 0.0) throw ValidationError("zero area");
          } catch (const ValidationError& err) {
            throw Reject{RejectReason::MalformedGeometry, err.what()};
          }
          for (const auto& p : e.boundary)
            if (!bbox.contains(p)) throw Reject{RejectReason::OutOfBbox, "ring leaves bbox"};
          const std::string lu = read_string(rec, "land_use", false);
          auto land_use = lu.empty() ? std::optional<LandUse>(LandUse::Other) : parse_land_use(lu);
          if (!land_use) throw Reject{RejectReason::InvalidAttribute, "unknown land_use '" + lu + "'"};
          e.land_use = *land_use;
          e.area_m2 = checked_attribute(read_number(rec, "area_m2"), polygon_area(e.boundary), 0.05,
                                        "area_m2");
          if (seen.contains(id)) throw Reject{RejectReason::DuplicateId, "id already accepted"};
          result.entities.aois.push_back(std::move(e));
          break;
        }
        case EntityClass::Road: {
          auto it = rec.find("path");
          if (it == rec.end()) throw Reject{RejectReason::MalformedGeometry, "road needs a path"};
          RoadEntity e;
          e.id = id;
          e.name = name;
          e.path = read_coords(*it);
          if (e.path.size() < 2) throw Reject{RejectReason::MalformedGeometry, "too few points"};
          const double length = polyline_length(e.path);
          if (length <= 0.0) throw Reject{RejectReason::MalformedGeometry, "zero-length path"};
          for (const auto& p : e.path)
            if (!bbox.contains(p)) throw Reject{RejectReason::OutOfBbox, "path leaves bbox"};
          e.length_m = checked_attribute(read_number(rec, "length_m"), length, 0.01, "length_m");
          if (seen.contains(id)) throw Reject{RejectReason::DuplicateId, "id already accepted"};
          result.entities.roads.push_back(std::move(e));
          break;
        }
      }
      seen.insert(id);
    } catch (const Reject& r) {
      result.rejections.push_back(Rejection{line_no, id, r.reason, r.detail});
    } catch (const json::exception& e) {
      result.rejections.push_back(Rejection{line_no, id, RejectReason::MalformedRecord, e.what()});
    }
  }
  if (in.bad()) throw IoError("read error on entity stream");
  return result;
}

IngestResult ingest_entities(const std::filesystem::path& path, const std::string& city,
                             const BoundingBox& bbox) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open entity file " + path.string());
  return ingest_entities(in, city, bbox);
}

std::string rejection_report_jsonl(const std::vector<Rejection>& rejections) {
  std::string out;
  for (const auto& r : rejections) {
    nlohmann::ordered_json j;
    j["line"] = r.line;
    j["id"] = r.id;
    j["reason"] = to_string(r.reason);
    j["detail"] = r.detail;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace geohalu::geokg
