#include "geohalu/geokg/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "geohalu/error.hpp"

namespace geohalu::geokg {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json coords(const std::vector<GeoPoint>& pts) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pts) arr.push_back({p.lon, p.lat});
  return arr;
}

std::vector<GeoPoint> read_coords(const json& arr) {
  std::vector<GeoPoint> pts;
  for (const auto& c : arr) pts.push_back(GeoPoint{c.at(1).get<double>(), c.at(0).get<double>()});
  return pts;
}

json parse_line(const std::string& line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ParseError("graph file line " + std::to_string(line_no) + ": not a JSON object");
  return j;
}

}  // namespace

std::string to_record_line(const PoiEntity& e) {
  ordered_json j;
  j["kind"] = "poi";
  j["id"] = e.id;
  j["name"] = e.name;
  j["lat"] = e.location.lat;
  j["lon"] = e.location.lon;
  j["address"] = e.address;
  j["category"] = e.category;
  return j.dump();
}

std::string to_record_line(const AoiEntity& e) {
  ordered_json j;
  j["kind"] = "aoi";
  j["id"] = e.id;
  j["name"] = e.name;
  j["ring"] = coords(e.boundary);
  j["land_use"] = to_string(e.land_use);
  j["area_m2"] = e.area_m2;
  return j.dump();
}

std::string to_record_line(const RoadEntity& e) {
  ordered_json j;
  j["kind"] = "road";
  j["id"] = e.id;
  j["name"] = e.name;
  j["path"] = coords(e.path);
  j["length_m"] = e.length_m;
  return j.dump();
}

void write_graph(const GeoKnowledgeGraph& g, std::ostream& out) {
  ordered_json header;
  header["format"] = "geokg";
  header["version"] = kGraphFormatVersion;
  header["city"] = g.city();
  header["thresholds"] = {{"near_poi_m", g.thresholds().near_poi_m},
                          {"near_aoi_m", g.thresholds().near_aoi_m},
                          {"connect_m", g.thresholds().connect_m}};
  header["counts"] = {{"pois", g.pois().size()},
                      {"aois", g.aois().size()},
                      {"roads", g.roads().size()},
                      {"edges", g.edges().size()}};
  out << header.dump() << '\n';
  for (const auto& e : g.pois()) out << to_record_line(e) << '\n';
  for (const auto& e : g.aois()) out << to_record_line(e) << '\n';
  for (const auto& e : g.roads()) out << to_record_line(e) << '\n';
  for (const auto& e : g.edges()) {
    ordered_json j;
    j["head"] = e.head_id;
    j["kind"] = to_string(e.kind);
    j["tail"] = e.tail_id;
    out << j.dump() << '\n';
  }
}

GeoKnowledgeGraph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("graph file is empty");
  const json header = parse_line(line, 1);
  if (header.value("format", "") != "geokg") throw ParseError("not a geokg file");
  const int version = header.value("version", -1);
  if (version != kGraphFormatVersion)
    throw ParseError("unsupported geokg version " + std::to_string(version) + " (expected " +
                     std::to_string(kGraphFormatVersion) + ")");

  try {
    const auto& counts = header.at("counts");
    const auto want_pois = counts.at("pois").get<std::size_t>();
    const auto want_aois = counts.at("aois").get<std::size_t>();
    const auto want_roads = counts.at("roads").get<std::size_t>();
    const auto want_edges = counts.at("edges").get<std::size_t>();
    RegionThresholds t;
    t.near_poi_m = header.at("thresholds").at("near_poi_m").get<double>();
    t.near_aoi_m = header.at("thresholds").at("near_aoi_m").get<double>();
    t.connect_m = header.at("thresholds").at("connect_m").get<double>();

    EntitySet es;
    std::vector<RelationEdge> edges;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = parse_line(line, line_no);
      if (j.contains("head")) {
        auto kind = parse_relation_kind(j.at("kind").get<std::string>());
        if (!kind) throw ParseError("line " + std::to_string(line_no) + ": unknown relation kind");
        edges.push_back({j.at("head").get<std::string>(), *kind, j.at("tail").get<std::string>()});
        continue;
      }
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "poi") {
        es.pois.push_back(PoiEntity{j.at("id").get<std::string>(), j.at("name").get<std::string>(),
                                    GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()},
                                    j.at("address").get<std::string>(),
                                    j.at("category").get<std::string>()});
      } else if (kind == "aoi") {
        auto lu = parse_land_use(j.at("land_use").get<std::string>());
        if (!lu) throw ParseError("line " + std::to_string(line_no) + ": unknown land_use");
        es.aois.push_back(AoiEntity{j.at("id").get<std::string>(), j.at("name").get<std::string>(),
                                    read_coords(j.at("ring")), *lu, j.at("area_m2").get<double>()});
      } else if (kind == "road") {
        es.roads.push_back(RoadEntity{j.at("id").get<std::string>(), j.at("name").get<std::string>(),
                                      read_coords(j.at("path")), j.at("length_m").get<double>()});
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": unknown entity kind '" + kind + "'");
      }
    }
    if (in.bad()) throw IoError("read error on graph stream");
    if (es.pois.size() != want_pois || es.aois.size() != want_aois ||
        es.roads.size() != want_roads || edges.size() != want_edges)
      throw ParseError("graph file is truncated or has wrong counts");
    return build_graph(header.at("city").get<std::string>(), std::move(es), std::move(edges), t);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph file: ") + e.what());
  }
}

void save_graph(const GeoKnowledgeGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write graph file " + path.string());
  write_graph(g, out);
  out.flush();
  if (!out) throw IoError("write failed for graph file " + path.string());
}

GeoKnowledgeGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file " + path.string());
  return read_graph(in);
}

}  // namespace geohalu::geokg
