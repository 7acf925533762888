#include "geohalu/benchgen/fabricate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "geohalu/random.hpp"
#include "geohalu/text.hpp"

namespace geohalu::benchgen {

using geokg::AttributeKind;
using geokg::EntityClass;

namespace {

constexpr std::string_view kDescriptors[] = {
    "Silver", "Golden", "Jade",   "Maple",   "Harbor", "Lotus",   "Crimson", "Azure",
    "Willow", "Cedar",  "Amber",  "Ivory",   "Pearl",  "Orchid",  "Summit",  "Meadow",
    "Bamboo", "Copper", "Misty",  "Sunrise", "Velvet", "Granite", "Coral",   "Autumn",
    "Plum",   "Cobalt", "Emerald", "Falcon", "Hazel",  "Lantern"};

constexpr std::string_view kCores[] = {
    "Spoon", "Crane",  "Bridge",  "Garden", "River", "Peak",  "Stone",  "Cloud",
    "Phoenix", "Tiger", "Pine",   "Moon",   "Star",  "Spring", "Harvest", "Breeze",
    "Valley", "Lake",  "Heron",   "Fountain"};

constexpr std::string_view kPoiTypes[] = {
    "Cafe",     "Bookstore", "Bakery",      "Clinic",    "Library",  "Teahouse", "Restaurant",
    "Pharmacy", "Gallery",   "Noodle House", "Bistro",   "Hotel",    "Gym",      "Florist",
    "Museum",   "Cinema",    "Supermarket", "Dental Clinic", "Kindergarten", "Post Office"};

constexpr std::string_view kAoiTypes[] = {
    "Garden",        "Residential Community", "Industrial Park", "Business Plaza",
    "Science Park",  "Villa Estate",          "Apartments",      "Cultural Park",
    "Sports Center", "Campus",                "Trade Center",    "Courtyard"};

constexpr std::string_view kRoadTypes[] = {"Road",   "Street",    "Avenue", "Lane",
                                           "Hutong", "Boulevard", "Alley",  "Ring Road"};

std::vector<std::string> type_pool(EntityClass kind, const std::vector<std::string>& examples) {
  std::set<std::string> pool;
  auto add_all = [&](auto& words) {
    for (auto w : words) pool.emplace(w);
  };
  switch (kind) {
    case EntityClass::Poi: add_all(kPoiTypes); break;
    case EntityClass::Aoi: add_all(kAoiTypes); break;
    case EntityClass::Road: add_all(kRoadTypes); break;
  }
  for (const auto& ex : examples) {
    auto words = split_whitespace(ex);
    if (words.size() >= 2) pool.insert(words.back());
  }
  return {pool.begin(), pool.end()};
}

std::vector<std::string> template_names(EntityClass kind, const std::vector<std::string>& examples,
                                        std::size_t n, std::uint64_t seed) {
  const auto types = type_pool(kind, examples);
  const std::size_t space = std::size(kDescriptors) * std::size(kCores) * types.size();
  if (n > space)
    throw ValidationError("template fabricator can produce at most " + std::to_string(space) +
                          " names");
  Rng rng(seed);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  while (out.size() < n) {
    std::string name = std::string(kDescriptors[rng.index(std::size(kDescriptors))]) + " " +
                       std::string(kCores[rng.index(std::size(kCores))]) + " " +
                       types[rng.index(types.size())];
    if (seen.insert(normalize_name(name)).second) out.push_back(std::move(name));
  }
  return out;
}

std::string_view kind_label(EntityClass kind) {
  switch (kind) {
    case EntityClass::Poi: return "POI";
    case EntityClass::Aoi: return "AOI";
    case EntityClass::Road: return "road";
  }
  return "";
}

std::string_view list_label(EntityClass kind) {
  switch (kind) {
    case EntityClass::Poi: return "POI";
    case EntityClass::Aoi: return "AOI";
    case EntityClass::Road: return "Road";
  }
  return "";
}

}  // namespace

std::string fabrication_prompt(EntityClass kind, const std::vector<std::string>& real_examples) {
  const std::string k(kind_label(kind));
  const std::string l(list_label(kind));
  std::string p;
  p += "In a purpose of research, we would like to use imaginary/fictional/mocked information to "
       "hallucinate the name of this " + k + ".\n";
  p += "Make sure the hallucinated names are natural and realistic as much as possible. They "
       "should not be real names.\n";
  p += "Please provide five hallucinated names of this " + k + " given the example existing names.\n";
  p += "Example existing names: " + join(real_examples, ", ") + "\n";
  p += "Please follow the following format, use [Hallucination] to wrap the hallucinated "
       "(generated) names:\n";
  for (int i = 1; i <= 5; ++i)
    p += "[Hallucination] " + l + " Name " + std::to_string(i) + " [Hallucination]\n";
  return p;
}

std::vector<std::string> parse_hallucination_markers(const std::string& response) {
  static constexpr std::string_view kMarker = "[Hallucination]";
  std::vector<std::string> names;
  std::size_t pos = response.find(kMarker);
  while (pos != std::string::npos) {
    const std::size_t start = pos + kMarker.size();
    const std::size_t close = response.find(kMarker, start);
    if (close == std::string::npos) break;
    std::string name = collapse_whitespace(std::string_view(response).substr(start, close - start));
    if (!name.empty()) names.push_back(std::move(name));
    pos = response.find(kMarker, close + kMarker.size());
  }
  if (names.empty()) throw FabricationParseError(response);
  return names;
}

std::vector<std::string> fabricate_entity_names(EntityClass kind,
                                                const std::vector<std::string>& real_examples,
                                                std::size_t n, FabricatorMode mode,
                                                std::uint64_t rng_seed, eval::ChatClient* client) {
  if (real_examples.empty()) throw ValidationError("fabrication needs at least one real example");
  if (mode == FabricatorMode::Template) return template_names(kind, real_examples, n, rng_seed);

  if (client == nullptr) throw ValidationError("LLM-assisted fabrication needs a chat client");
  const std::string prompt = fabrication_prompt(kind, real_examples);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  const std::size_t max_rounds = 4 + 2 * ((n + 4) / 5);
  for (std::size_t round = 0; out.size() < n && round < max_rounds; ++round) {
    const std::string raw = client->complete({{"user", prompt}});
    for (auto& name : parse_hallucination_markers(raw)) {
      if (out.size() == n) break;
      if (seen.insert(normalize_name(name)).second) out.push_back(std::move(name));
    }
  }
  if (out.size() < n)
    throw PopulationError("LLM fabricator returned only " + std::to_string(out.size()) +
                          " distinct names, wanted " + std::to_string(n));
  return out;
}

std::vector<std::string> filter_against_kg(const std::vector<std::string>& candidates,
                                           const geokg::GeoKnowledgeGraph& graph) {
  std::vector<std::string> out;
  for (const auto& c : candidates)
    if (!graph.has_name(c)) out.push_back(c);
  return out;
}

std::string fabricate_relation(const geokg::GeoKnowledgeGraph& graph, const std::string& head,
                               geokg::RelationKind kind, const std::string& true_tail,
                               std::uint64_t rng_seed) {
  const std::string true_name = normalize_name(graph.name_of(true_tail));
  std::vector<std::string> eligible;
  for (auto& id : graph.ids_of(geokg::tail_class(kind))) {
    if (id == head || graph.has_edge(head, kind, id)) continue;
    if (normalize_name(graph.name_of(id)) == true_name) continue;
    eligible.push_back(std::move(id));
  }
  if (eligible.empty())
    throw PopulationError("no unrelated " + std::string(geokg::to_string(geokg::tail_class(kind))) +
                          " available as a " + std::string(geokg::to_string(kind)) +
                          " distractor for '" + head + "'");
  Rng rng(rng_seed);
  return eligible[rng.index(eligible.size())];
}

std::string format_numeric_attribute(AttributeKind a, double value) {
  const auto whole = static_cast<long long>(std::llround(value));
  return std::to_string(whole) + (a == AttributeKind::AoiArea ? " square meters" : " meters");
}

double parse_numeric_attribute(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used == 0) throw ParseError("no number in attribute option '" + text + "'");
  return v;
}

double displayed_number(double value) { return std::max(1.0, std::round(value)); }

double confuse_numeric(double true_value, double theta, std::uint64_t rng_seed,
                       const std::vector<double>& exclude) {
  if (!(theta > 0.0)) throw ValidationError("theta_attr must be positive");
  if (!(true_value > 0.0)) throw ValidationError("numeric attribute must be positive");
  Rng rng(rng_seed);
  auto ok = [&](double v) {
    return v >= 1.0 && std::abs(v - true_value) / true_value >= theta &&
           std::find(exclude.begin(), exclude.end(), v) == exclude.end();
  };
  for (int attempt = 0; attempt < 256; ++attempt) {
    // Lower side only exists when theta < 1; rounding always moves away
    // from the true value so the threshold survives it.
    if (theta < 1.0 && rng.coin()) {
      const double d = rng.uniform(theta, theta + 0.9 * (1.0 - theta));
      const double v = std::floor(true_value * (1.0 - d));
      if (ok(v)) return v;
    } else {
      const double d = rng.uniform(theta, theta + 1.5);
      const double v = std::ceil(true_value * (1.0 + d));
      if (ok(v)) return v;
    }
  }
  throw PopulationError("could not draw a confused numeric value");
}

std::string confuse_attribute(const geokg::GeoKnowledgeGraph& graph, AttributeKind attr,
                              const std::string& true_text, double theta, std::uint64_t rng_seed,
                              const std::vector<std::string>& exclude) {
  if (geokg::is_numeric(attr)) {
    std::vector<double> ex;
    for (const auto& e : exclude) ex.push_back(parse_numeric_attribute(e));
    const double t = parse_numeric_attribute(true_text);
    return format_numeric_attribute(attr, confuse_numeric(t, theta, rng_seed, ex));
  }

  std::set<std::string> excluded;
  for (const auto& e : exclude) excluded.insert(normalize_name(e));
  excluded.insert(normalize_name(true_text));

  // Vocabulary keyed by normalized value so the draw is order-independent.
  std::map<std::string, std::string> vocab;
  switch (attr) {
    case AttributeKind::PoiCategory:
      for (const auto& p : graph.pois())
        if (!p.category.empty()) vocab.emplace(normalize_name(p.category), p.category);
      break;
    case AttributeKind::PoiAddress:
      for (const auto& p : graph.pois())
        if (!p.address.empty()) vocab.emplace(normalize_name(p.address), p.address);
      break;
    case AttributeKind::AoiLandUse:
      for (const auto& a : graph.aois()) {
        const std::string v(geokg::to_string(a.land_use));
        vocab.emplace(v, v);
      }
      break;
    default: break;
  }
  if (vocab.size() <= 1)
    throw ValidationError("attribute " + std::string(geokg::to_string(attr)) +
                          " has a vocabulary of size " + std::to_string(vocab.size()));

  const std::string true_top = normalize_name(geokg::top_level_category(true_text));
  std::vector<std::string> candidates;
  for (const auto& [key, value] : vocab) {
    if (excluded.contains(key)) continue;
    if (attr == AttributeKind::PoiCategory &&
        normalize_name(geokg::top_level_category(value)) == true_top)
      continue;
    candidates.push_back(value);
  }
  if (candidates.empty())
    throw PopulationError("no confusable value left for attribute " +
                          std::string(geokg::to_string(attr)));
  Rng rng(rng_seed);
  return candidates[rng.index(candidates.size())];
}

}  // namespace geohalu::benchgen
