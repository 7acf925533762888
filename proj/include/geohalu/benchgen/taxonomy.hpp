#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geohalu/geokg/sampling.hpp"

namespace geohalu::benchgen {

// First-level knowledge category.
enum class Category { Entity, Relation, Attribute };

inline constexpr std::array<Category, 3> kAllCategories = {Category::Entity, Category::Relation,
                                                           Category::Attribute};

enum class TaskKind {
  PoiExistence,
  AoiExistence,
  RoadExistence,
  PoiLocateAtAoi,
  PoiNearPoi,
  AoiNearAoi,
  AoiConnectToRoad,
  RoadIntersectRoad,
  PoiAddress,
  PoiCategory,
  AoiLandUse,
  AoiArea,
  RoadLength,
};

inline constexpr std::size_t kTaskCount = 13;

inline constexpr std::array<TaskKind, kTaskCount> kAllTasks = {
    TaskKind::PoiExistence,     TaskKind::AoiExistence,      TaskKind::RoadExistence,
    TaskKind::PoiLocateAtAoi,   TaskKind::PoiNearPoi,        TaskKind::AoiNearAoi,
    TaskKind::AoiConnectToRoad, TaskKind::RoadIntersectRoad, TaskKind::PoiAddress,
    TaskKind::PoiCategory,      TaskKind::AoiLandUse,        TaskKind::AoiArea,
    TaskKind::RoadLength};

enum class HallucinationType {
  EntityFabrication,
  EntityOmission,
  RelationFabrication,
  RelationOmission,
  AttributeConfusion,
};

// Type of a benchmark option, and also the outcome of a graded response:
// InstructionViolation is only ever an outcome, never attached to an option.
enum class OptionType {
  Factual,
  EntityFabrication,
  EntityOmission,
  RelationFabrication,
  RelationOmission,
  AttributeConfusion,
  Abstain,
  InstructionViolation,
};

inline constexpr std::array<OptionType, 8> kAllOptionTypes = {
    OptionType::Factual,          OptionType::EntityFabrication, OptionType::EntityOmission,
    OptionType::RelationFabrication, OptionType::RelationOmission, OptionType::AttributeConfusion,
    OptionType::Abstain,          OptionType::InstructionViolation};

std::string_view to_string(Category c);
std::string_view to_string(TaskKind t);
std::string_view to_string(OptionType t);
std::string_view to_string(HallucinationType t);
std::optional<Category> parse_category(std::string_view s);
std::optional<TaskKind> parse_task(std::string_view s);
std::optional<OptionType> parse_option_type(std::string_view s);

OptionType as_option_type(HallucinationType t);
std::optional<HallucinationType> as_hallucination(OptionType t);

Category category_of(TaskKind t);
// Short code: PE, AE, RE, PLoA, PNeP, ANeA, ACoR, RCoR, PAddr, PCate, ALand, AArea, RLeng.
std::string_view abbreviation(TaskKind t);
// Training-data tag such as "[POI_Category]".
std::string_view task_tag(TaskKind t);
std::optional<TaskKind> parse_task_tag(std::string_view s);

geokg::Pattern pattern_of(TaskKind t);
geokg::EntityClass subject_class(TaskKind t);  // class named in the question / the entity drawn
std::optional<geokg::RelationKind> relation_of(TaskKind t);
std::optional<geokg::AttributeKind> attribute_of(TaskKind t);

// Hallucination types an option may carry for items of this category.
bool type_allowed_in(OptionType t, Category c);

// Canonical fact identity: "Task|sorted,ids|attribute" ("-" when no attribute).
std::string fact_key(TaskKind task, std::vector<std::string> entity_ids);

}  // namespace geohalu::benchgen
