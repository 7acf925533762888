#include "geohalu/benchgen/taxonomy.hpp"

#include <algorithm>

#include "geohalu/text.hpp"

namespace geohalu::benchgen {

using geokg::AttributeKind;
using geokg::EntityClass;
using geokg::RelationKind;

namespace {

struct TaskInfo {
  TaskKind task;
  std::string_view name;
  std::string_view abbrev;
  std::string_view tag;
};

constexpr TaskInfo kTasks[] = {
    {TaskKind::PoiExistence, "PoiExistence", "PE", "[POI_Existence]"},
    {TaskKind::AoiExistence, "AoiExistence", "AE", "[AOI_Existence]"},
    {TaskKind::RoadExistence, "RoadExistence", "RE", "[Road_Existence]"},
    {TaskKind::PoiLocateAtAoi, "PoiLocateAtAoi", "PLoA", "[POI_LocateAt_AOI]"},
    {TaskKind::PoiNearPoi, "PoiNearPoi", "PNeP", "[POI_Near_POI]"},
    {TaskKind::AoiNearAoi, "AoiNearAoi", "ANeA", "[AOI_Near_AOI]"},
    {TaskKind::AoiConnectToRoad, "AoiConnectToRoad", "ACoR", "[AOI_ConnectTo_Road]"},
    {TaskKind::RoadIntersectRoad, "RoadIntersectRoad", "RCoR", "[Road_Intersect_Road]"},
    {TaskKind::PoiAddress, "PoiAddress", "PAddr", "[POI_Address]"},
    {TaskKind::PoiCategory, "PoiCategory", "PCate", "[POI_Category]"},
    {TaskKind::AoiLandUse, "AoiLandUse", "ALand", "[AOI_LandUse]"},
    {TaskKind::AoiArea, "AoiArea", "AArea", "[AOI_Area]"},
    {TaskKind::RoadLength, "RoadLength", "RLeng", "[Road_Length]"},
};

const TaskInfo& info(TaskKind t) { return kTasks[static_cast<std::size_t>(t)]; }

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Entity: return "Entity";
    case Category::Relation: return "Relation";
    case Category::Attribute: return "Attribute";
  }
  return "?";
}

std::string_view to_string(TaskKind t) { return info(t).name; }

std::string_view to_string(OptionType t) {
  switch (t) {
    case OptionType::Factual: return "Factual";
    case OptionType::EntityFabrication: return "EntityFabrication";
    case OptionType::EntityOmission: return "EntityOmission";
    case OptionType::RelationFabrication: return "RelationFabrication";
    case OptionType::RelationOmission: return "RelationOmission";
    case OptionType::AttributeConfusion: return "AttributeConfusion";
    case OptionType::Abstain: return "Abstain";
    case OptionType::InstructionViolation: return "InstructionViolation";
  }
  return "?";
}

std::string_view to_string(HallucinationType t) { return to_string(as_option_type(t)); }

std::optional<Category> parse_category(std::string_view s) {
  for (auto c : kAllCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<TaskKind> parse_task(std::string_view s) {
  for (const auto& t : kTasks)
    if (t.name == s || t.abbrev == s) return t.task;
  return std::nullopt;
}

std::optional<OptionType> parse_option_type(std::string_view s) {
  for (auto t : kAllOptionTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

OptionType as_option_type(HallucinationType t) {
  switch (t) {
    case HallucinationType::EntityFabrication: return OptionType::EntityFabrication;
    case HallucinationType::EntityOmission: return OptionType::EntityOmission;
    case HallucinationType::RelationFabrication: return OptionType::RelationFabrication;
    case HallucinationType::RelationOmission: return OptionType::RelationOmission;
    case HallucinationType::AttributeConfusion: return OptionType::AttributeConfusion;
  }
  return OptionType::Factual;
}

std::optional<HallucinationType> as_hallucination(OptionType t) {
  switch (t) {
    case OptionType::EntityFabrication: return HallucinationType::EntityFabrication;
    case OptionType::EntityOmission: return HallucinationType::EntityOmission;
    case OptionType::RelationFabrication: return HallucinationType::RelationFabrication;
    case OptionType::RelationOmission: return HallucinationType::RelationOmission;
    case OptionType::AttributeConfusion: return HallucinationType::AttributeConfusion;
    default: return std::nullopt;
  }
}

Category category_of(TaskKind t) {
  const auto i = static_cast<int>(t);
  if (i <= static_cast<int>(TaskKind::RoadExistence)) return Category::Entity;
  if (i <= static_cast<int>(TaskKind::RoadIntersectRoad)) return Category::Relation;
  return Category::Attribute;
}

std::string_view abbreviation(TaskKind t) { return info(t).abbrev; }
std::string_view task_tag(TaskKind t) { return info(t).tag; }

std::optional<TaskKind> parse_task_tag(std::string_view s) {
  for (const auto& t : kTasks)
    if (t.tag == s) return t.task;
  return std::nullopt;
}

geokg::Pattern pattern_of(TaskKind t) {
  switch (t) {
    case TaskKind::PoiExistence: return EntityClass::Poi;
    case TaskKind::AoiExistence: return EntityClass::Aoi;
    case TaskKind::RoadExistence: return EntityClass::Road;
    case TaskKind::PoiLocateAtAoi: return RelationKind::PoiLocateAtAoi;
    case TaskKind::PoiNearPoi: return RelationKind::PoiNearPoi;
    case TaskKind::AoiNearAoi: return RelationKind::AoiNearAoi;
    case TaskKind::AoiConnectToRoad: return RelationKind::AoiConnectToRoad;
    case TaskKind::RoadIntersectRoad: return RelationKind::RoadIntersectRoad;
    case TaskKind::PoiAddress: return AttributeKind::PoiAddress;
    case TaskKind::PoiCategory: return AttributeKind::PoiCategory;
    case TaskKind::AoiLandUse: return AttributeKind::AoiLandUse;
    case TaskKind::AoiArea: return AttributeKind::AoiArea;
    case TaskKind::RoadLength: return AttributeKind::RoadLength;
  }
  return EntityClass::Poi;
}

geokg::EntityClass subject_class(TaskKind t) {
  const auto p = pattern_of(t);
  if (auto* c = std::get_if<EntityClass>(&p)) return *c;
  if (auto* k = std::get_if<RelationKind>(&p)) return geokg::head_class(*k);
  return geokg::owner_class(std::get<AttributeKind>(p));
}

std::optional<geokg::RelationKind> relation_of(TaskKind t) {
  const auto p = pattern_of(t);
  if (auto* k = std::get_if<RelationKind>(&p)) return *k;
  return std::nullopt;
}

std::optional<geokg::AttributeKind> attribute_of(TaskKind t) {
  const auto p = pattern_of(t);
  if (auto* a = std::get_if<AttributeKind>(&p)) return *a;
  return std::nullopt;
}

bool type_allowed_in(OptionType t, Category c) {
  switch (c) {
    case Category::Entity:
      return t == OptionType::EntityFabrication || t == OptionType::EntityOmission;
    case Category::Relation:
      return t == OptionType::RelationFabrication || t == OptionType::RelationOmission;
    case Category::Attribute: return t == OptionType::AttributeConfusion;
  }
  return false;
}

std::string fact_key(TaskKind task, std::vector<std::string> entity_ids) {
  std::sort(entity_ids.begin(), entity_ids.end());
  const auto attr = attribute_of(task);
  return std::string(to_string(task)) + "|" + join(entity_ids, ",") + "|" +
         (attr ? std::string(geokg::to_string(*attr)) : std::string("-"));
}

}  // namespace geohalu::benchgen
