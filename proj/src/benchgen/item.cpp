#include "geohalu/benchgen/item.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geohalu/error.hpp"

namespace geohalu::benchgen {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Variant v) { return v == Variant::Standard ? "Standard" : "Abstain"; }

const Option* BenchmarkItem::find_option(std::string_view label) const {
  for (const auto& o : options)
    if (o.label == label) return &o;
  return nullptr;
}

std::optional<OptionType> BenchmarkItem::option_type(std::string_view label) const {
  if (const auto* o = find_option(label)) return o->type;
  return std::nullopt;
}

std::vector<std::string> BenchmarkItem::labels() const {
  std::vector<std::string> out;
  out.reserve(options.size());
  for (const auto& o : options) out.push_back(o.label);
  return out;
}

std::string instruction_for(const std::vector<std::string>& labels) {
  std::string s = "Please select from ";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) s += ", ";
    s += labels[i];
  }
  s += ". Output your answer directly";
  return s;
}

void validate(const BenchmarkItem& item) {
  auto fail = [&](const std::string& why) {
    throw ValidationError("item '" + item.item_id + "': " + why);
  };
  const std::size_t expected = item.variant == Variant::Standard ? 3 : 4;
  if (item.options.size() != expected)
    fail("expected " + std::to_string(expected) + " options, got " +
         std::to_string(item.options.size()));
  std::set<std::string> labels;
  std::size_t factual = 0, abstain = 0;
  const Category cat = category_of(item.task);
  for (std::size_t i = 0; i < item.options.size(); ++i) {
    const auto& o = item.options[i];
    if (o.label != std::string(1, static_cast<char>('A' + i))) fail("labels must run A, B, C...");
    if (!labels.insert(o.label).second) fail("duplicate label " + o.label);
    if (o.text.empty()) fail("option " + o.label + " has empty text");
    switch (o.type) {
      case OptionType::Factual:
        ++factual;
        if (o.label != item.answer_label) fail("answer label is not the factual option");
        break;
      case OptionType::Abstain:
        ++abstain;
        if (item.variant != Variant::Abstain || i + 1 != item.options.size() ||
            o.text != kCannotDetermine)
          fail("abstain option must be the final \"Cannot Determine\" option of an abstain item");
        break;
      case OptionType::InstructionViolation: fail("InstructionViolation is not an option type");
        break;
      default:
        if (!type_allowed_in(o.type, cat))
          fail("option type " + std::string(to_string(o.type)) + " is inconsistent with " +
               std::string(to_string(cat)) + " tasks");
    }
  }
  if (factual != 1) fail("expected exactly one Factual option");
  if (abstain != (item.variant == Variant::Abstain ? 1u : 0u)) fail("wrong number of abstain options");
  if (item.instruction != instruction_for(item.labels())) fail("instruction line does not list the labels");
}

std::string to_json_line(const BenchmarkItem& item) {
  ordered_json j;
  j["item_id"] = item.item_id;
  j["city"] = item.city;
  j["task"] = to_string(item.task);
  j["category"] = to_string(category_of(item.task));
  j["question"] = item.question;
  j["options"] = ordered_json::array();
  ordered_json types = ordered_json::object();
  ordered_json entities = ordered_json::object();
  for (const auto& o : item.options) {
    j["options"].push_back({{"label", o.label}, {"text", o.text}});
    types[o.label] = to_string(o.type);
    if (!o.entity_id.empty()) entities[o.label] = o.entity_id;
  }
  j["instruction"] = item.instruction;
  j["answer_label"] = item.answer_label;
  j["option_types"] = std::move(types);
  j["option_entities"] = std::move(entities);
  j["variant"] = to_string(item.variant);
  j["head_id"] = item.head_id;
  j["fact_key"] = item.fact_key;
  return j.dump();
}

BenchmarkItem item_from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("benchmark item is not a JSON object");
  try {
    BenchmarkItem item;
    item.item_id = j.at("item_id").get<std::string>();
    item.city = j.at("city").get<std::string>();
    auto task = parse_task(j.at("task").get<std::string>());
    if (!task) throw ParseError("unknown task in item " + item.item_id);
    item.task = *task;
    item.question = j.at("question").get<std::string>();
    item.instruction = j.at("instruction").get<std::string>();
    item.answer_label = j.at("answer_label").get<std::string>();
    const std::string variant = j.at("variant").get<std::string>();
    if (variant != "Standard" && variant != "Abstain") throw ParseError("unknown variant " + variant);
    item.variant = variant == "Standard" ? Variant::Standard : Variant::Abstain;
    item.head_id = j.value("head_id", "");
    item.fact_key = j.value("fact_key", "");
    const auto& types = j.at("option_types");
    const json entities = j.value("option_entities", json::object());
    for (const auto& o : j.at("options")) {
      Option opt;
      opt.label = o.at("label").get<std::string>();
      opt.text = o.at("text").get<std::string>();
      auto t = parse_option_type(types.at(opt.label).get<std::string>());
      if (!t) throw ParseError("unknown option type in item " + item.item_id);
      opt.type = *t;
      if (entities.contains(opt.label)) opt.entity_id = entities.at(opt.label).get<std::string>();
      item.options.push_back(std::move(opt));
    }
    if (types.size() != item.options.size())
      throw ParseError("option_types keys do not match options in item " + item.item_id);
    return item;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed benchmark item: ") + e.what());
  }
}

void write_benchmark(const std::vector<BenchmarkItem>& items, const BenchmarkHeader& header,
                     std::ostream& out) {
  ordered_json h;
  h["format"] = "geohalubench";
  h["version"] = kBenchFormatVersion;
  h["city"] = header.city;
  h["variant"] = to_string(header.variant);
  h["seed"] = header.seed;
  h["count"] = items.size();
  out << h.dump() << '\n';
  for (const auto& item : items) out << to_json_line(item) << '\n';
}

std::string benchmark_to_string(const std::vector<BenchmarkItem>& items,
                                const BenchmarkHeader& header) {
  std::ostringstream out;
  write_benchmark(items, header, out);
  return out.str();
}

BenchmarkFile read_benchmark(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("benchmark file is empty");
  json h = json::parse(line, nullptr, false);
  if (h.is_discarded() || !h.is_object() || h.value("format", "") != "geohalubench")
    throw ParseError("not a geohalubench file");
  if (h.value("version", -1) != kBenchFormatVersion)
    throw ParseError("unsupported geohalubench version");
  BenchmarkFile file;
  try {
    file.header.city = h.at("city").get<std::string>();
    file.header.variant = h.at("variant").get<std::string>() == "Abstain" ? Variant::Abstain
                                                                          : Variant::Standard;
    file.header.seed = h.at("seed").get<std::uint64_t>();
    file.header.count = h.at("count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed benchmark header: ") + e.what());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    file.items.push_back(item_from_json_line(line));
  }
  if (in.bad()) throw IoError("read error on benchmark stream");
  if (file.items.size() != file.header.count)
    throw ParseError("benchmark file is truncated: header says " +
                     std::to_string(file.header.count) + " items, found " +
                     std::to_string(file.items.size()));
  return file;
}

void save_benchmark(const std::vector<BenchmarkItem>& items, const BenchmarkHeader& header,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write benchmark file " + path.string());
  write_benchmark(items, header, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

BenchmarkFile load_benchmark(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open benchmark file " + path.string());
  return read_benchmark(in);
}

}  // namespace geohalu::benchgen
