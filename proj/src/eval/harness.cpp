#include "geohalu/eval/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "geohalu/random.hpp"
#include "geohalu/text.hpp"

namespace geohalu::eval {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string prompt_text(const BenchmarkItem& item) {
  std::string s(benchgen::kQuestionPreamble);
  s += "\n" + item.question + "\n";
  for (const auto& o : item.options) s += o.label + ". " + o.text + "\n";
  s += item.instruction;
  return s;
}

std::vector<ChatMessage> render_prompt(const BenchmarkItem& item,
                                       const std::optional<std::string>& system_prompt) {
  std::vector<ChatMessage> m;
  if (system_prompt) m.push_back({"system", *system_prompt});
  m.push_back({"user", prompt_text(item)});
  return m;
}

std::optional<std::string> extract_choice(std::string_view raw,
                                          const std::vector<std::string>& allowed_labels) {
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t pos = 0; pos < raw.size(); ++pos) {
    if (pos > 0 && alnum(raw[pos - 1])) continue;
    for (const auto& label : allowed_labels) {
      if (label.empty() || raw.compare(pos, label.size(), label) != 0) continue;
      const std::size_t end = pos + label.size();
      if (end < raw.size() && alnum(raw[end])) continue;
      return label;
    }
  }
  return std::nullopt;
}

OptionType classify_outcome(const BenchmarkItem& item, const std::optional<std::string>& extracted) {
  if (!extracted) return OptionType::InstructionViolation;
  if (auto t = item.option_type(*extracted)) return *t;
  throw std::logic_error("label '" + *extracted + "' is not an option of item " + item.item_id);
}

EvalRecord grade(const BenchmarkItem& item, std::string raw_response, double latency_ms) {
  EvalRecord r;
  r.item_id = item.item_id;
  r.extracted = extract_choice(raw_response, item.labels());
  r.outcome = classify_outcome(item, r.extracted);
  r.raw_response = std::move(raw_response);
  r.latency_ms = latency_ms;
  return r;
}

std::string to_json_line(const EvalRecord& r) {
  ordered_json j;
  j["item_id"] = r.item_id;
  j["raw_response"] = r.raw_response;
  j["extracted"] = r.extracted ? *r.extracted : std::string("InstructionViolation");
  j["outcome"] = benchgen::to_string(r.outcome);
  j["latency_ms"] = r.latency_ms;
  return j.dump();
}

EvalRecord record_from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("run record is not a JSON object");
  try {
    EvalRecord r;
    r.item_id = j.at("item_id").get<std::string>();
    r.raw_response = j.at("raw_response").get<std::string>();
    const auto extracted = j.at("extracted").get<std::string>();
    if (extracted != "InstructionViolation") r.extracted = extracted;
    auto outcome = benchgen::parse_option_type(j.at("outcome").get<std::string>());
    if (!outcome) throw ParseError("unknown outcome in record " + r.item_id);
    r.outcome = *outcome;
    r.latency_ms = j.at("latency_ms").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed run record: ") + e.what());
  }
}

std::string benchmark_hash(const std::vector<BenchmarkItem>& items) {
  std::string all;
  for (const auto& item : items) all += benchgen::to_json_line(item) + "\n";
  return sha256_hex(all);
}

namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_line(const RunManifest& m) {
  ordered_json j;
  j["format"] = "geohalurun";
  j["version"] = kRunFormatVersion;
  j["endpoint"] = m.endpoint;
  j["model"] = m.model;
  j["benchmark_sha256"] = m.benchmark_sha256;
  j["items"] = m.items;
  j["started_at"] = m.started_at ? ordered_json(*m.started_at) : ordered_json(nullptr);
  j["finished_at"] = m.finished_at ? ordered_json(*m.finished_at) : ordered_json(nullptr);
  return j.dump();
}

RunManifest parse_manifest(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "geohalurun")
    throw ParseError("not a geohalurun file");
  if (j.value("version", -1) != kRunFormatVersion) throw ParseError("unsupported geohalurun version");
  try {
    RunManifest m;
    m.endpoint = j.at("endpoint").get<std::string>();
    m.model = j.at("model").get<std::string>();
    m.benchmark_sha256 = j.at("benchmark_sha256").get<std::string>();
    m.items = j.at("items").get<std::size_t>();
    if (!j.at("started_at").is_null()) m.started_at = j["started_at"].get<std::string>();
    if (!j.at("finished_at").is_null()) m.finished_at = j["finished_at"].get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed run manifest: ") + e.what());
  }
}

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write run file " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

std::string run_document(const RunManifest& m, const std::vector<EvalRecord>& records) {
  std::string s = manifest_line(m) + "\n";
  for (const auto& r : records) s += to_json_line(r) + "\n";
  return s;
}

}  // namespace

RunFile load_run(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open run file " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(std::move(line));
  if (lines.empty()) throw ParseError("run file " + path.string() + " is empty");
  RunFile file;
  file.manifest = parse_manifest(lines[0]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    try {
      file.records.push_back(record_from_json_line(lines[i]));
    } catch (const ParseError&) {
      if (i + 1 == lines.size()) break;  // interrupted final write
      throw;
    }
  }
  return file;
}

RunResult run_eval(ChatClient& client, const std::vector<BenchmarkItem>& items,
                   const fs::path& run_path, const RunOptions& options) {
  if (options.max_concurrency < 1) throw ValidationError("max_concurrency must be >= 1");

  RunManifest manifest;
  manifest.endpoint = client.describe();
  manifest.model = options.model;
  manifest.benchmark_sha256 = benchmark_hash(items);
  manifest.items = items.size();
  if (!options.reproducible) manifest.started_at = utc_now();

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i].item_id, i);

  std::vector<std::optional<EvalRecord>> slots(items.size());
  RunResult result;
  if (options.resume && fs::exists(run_path)) {
    RunFile prior = load_run(run_path);
    if (prior.manifest.benchmark_sha256 != manifest.benchmark_sha256)
      throw ValidationError("run file " + run_path.string() + " was made against a different benchmark");
    if (prior.manifest.started_at && !options.reproducible) manifest.started_at = prior.manifest.started_at;
    for (auto& r : prior.records) {
      auto it = index.find(r.item_id);
      if (it == index.end() || slots[it->second]) continue;
      slots[it->second] = std::move(r);
      ++result.resumed;
    }
  }

  // Start from a clean file holding the manifest and what was kept.
  {
    std::vector<EvalRecord> kept;
    for (const auto& s : slots)
      if (s) kept.push_back(*s);
    write_atomically(run_path, run_document(manifest, kept));
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!slots[i]) pending.push_back(i);

  std::ofstream append(run_path, std::ios::binary | std::ios::app);
  if (!append) throw IoError("cannot append to run file " + run_path.string());

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const BenchmarkItem& item = items[pending[k]];
      std::optional<EvalRecord> rec;
      std::string error;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        std::string raw = client.complete(render_prompt(item, options.system_prompt));
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rec = grade(item, std::move(raw), options.reproducible ? 0.0 : ms);
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard lock(mu);
      if (!rec) {
        result.failures.push_back({item.item_id, error});
        continue;
      }
      append << to_json_line(*rec) << '\n';
      append.flush();
      if (!append && !fatal) fatal = std::make_exception_ptr(IoError("write failed for " + run_path.string()));
      slots[pending[k]] = std::move(rec);
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(options.max_concurrency), pending.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  append.close();
  if (fatal) std::rethrow_exception(fatal);

  for (auto& s : slots)
    if (s) result.records.push_back(std::move(*s));
  std::sort(result.failures.begin(), result.failures.end(),
            [&](const ItemFailure& a, const ItemFailure& b) { return index[a.item_id] < index[b.item_id]; });
  if (!options.reproducible) manifest.finished_at = utc_now();
  write_atomically(run_path, run_document(manifest, result.records));
  return result;
}

MockEndpoint::MockEndpoint(MockKind kind, const std::vector<BenchmarkItem>& items, std::uint64_t seed,
                           std::map<std::string, std::string> fixed)
    : kind_(kind), seed_(seed), fixed_(std::move(fixed)), items_(items) {
  for (std::size_t i = 0; i < items_.size(); ++i) by_prompt_.emplace(prompt_text(items_[i]), i);
}

std::string MockEndpoint::complete(const std::vector<ChatMessage>& messages) {
  const ChatMessage* user = nullptr;
  for (const auto& m : messages)
    if (m.role == "user") user = &m;
  if (!user) throw ValidationError("mock endpoint: no user message");
  auto it = by_prompt_.find(user->content);
  if (it == by_prompt_.end()) throw ValidationError("mock endpoint: prompt matches no known item");
  const BenchmarkItem& item = items_[it->second];
  switch (kind_) {
    case MockKind::Oracle: return item.answer_label;
    case MockKind::UniformRandom: {
      // Keyed by item id so the choice does not depend on request order.
      Rng rng(derive_seed(seed_, item.item_id));
      return item.options[rng.index(item.options.size())].label;
    }
    case MockKind::AlwaysAbstain:
      for (const auto& o : item.options)
        if (o.type == OptionType::Abstain) return o.label;
      return "A";
    case MockKind::Violator: return std::string(kViolatorText);
    case MockKind::FixedMap: {
      auto f = fixed_.find(item.item_id);
      return f == fixed_.end() ? std::string(kViolatorText) : f->second;
    }
  }
  return {};
}

std::string MockEndpoint::describe() const {
  switch (kind_) {
    case MockKind::Oracle: return "mock:oracle";
    case MockKind::UniformRandom: return "mock:random:" + std::to_string(seed_);
    case MockKind::AlwaysAbstain: return "mock:abstain";
    case MockKind::Violator: return "mock:violator";
    case MockKind::FixedMap: return "mock:fixed";
  }
  return "mock";
}

}  // namespace geohalu::eval
