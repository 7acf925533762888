#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "geohalu/geokg/graph.hpp"

namespace geohalu::geokg {

inline constexpr int kGraphFormatVersion = 1;

// Entity records in the line-delimited ingest format (one JSON object, no
// trailing newline).
std::string to_record_line(const PoiEntity& e);
std::string to_record_line(const AoiEntity& e);
std::string to_record_line(const RoadEntity& e);

// Header line, then pois, aois, roads, then edges.
void write_graph(const GeoKnowledgeGraph& g, std::ostream& out);
// Throws ParseError on malformed or truncated input and on a header whose
// format/version does not match.
GeoKnowledgeGraph read_graph(std::istream& in);

void save_graph(const GeoKnowledgeGraph& g, const std::filesystem::path& path);
GeoKnowledgeGraph load_graph(const std::filesystem::path& path);

}  // namespace geohalu::geokg
