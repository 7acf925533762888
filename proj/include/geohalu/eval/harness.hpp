#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geohalu/benchgen/item.hpp"
#include "geohalu/eval/chat.hpp"

namespace geohalu::eval {

using benchgen::BenchmarkItem;
using benchgen::OptionType;

// The item as one block of text: preamble, question, "A. ..." lines and the
// instruction line.
std::string prompt_text(const BenchmarkItem& item);

// A single user message carrying prompt_text, optionally preceded by a
// system message.
std::vector<ChatMessage> render_prompt(const BenchmarkItem& item,
                                       const std::optional<std::string>& system_prompt = std::nullopt);

// First allowed label that appears as a standalone token (not adjacent to
// a letter or digit). Case-sensitive. nullopt means an instruction
// violation.
std::optional<std::string> extract_choice(std::string_view raw,
                                          const std::vector<std::string>& allowed_labels);

// option_types[label], or InstructionViolation for nullopt. A label the
// item does not have is a harness bug and throws std::logic_error.
OptionType classify_outcome(const BenchmarkItem& item, const std::optional<std::string>& extracted);

struct EvalRecord {
  std::string item_id;
  std::string raw_response;
  std::optional<std::string> extracted;
  OptionType outcome = OptionType::InstructionViolation;
  double latency_ms = 0.0;

  bool operator==(const EvalRecord&) const = default;
};

EvalRecord grade(const BenchmarkItem& item, std::string raw_response, double latency_ms);

std::string to_json_line(const EvalRecord& r);
EvalRecord record_from_json_line(const std::string& line);

// SHA-256 over the items' serialized lines; identifies a benchmark in run
// manifests independently of its file header.
std::string benchmark_hash(const std::vector<BenchmarkItem>& items);

struct RunManifest {
  std::string endpoint;
  std::string model;
  std::string benchmark_sha256;
  std::size_t items = 0;
  std::optional<std::string> started_at;   // UTC ISO-8601
  std::optional<std::string> finished_at;

  bool operator==(const RunManifest&) const = default;
};

inline constexpr int kRunFormatVersion = 1;

struct RunOptions {
  int max_concurrency = 4;
  // Keep records already present in run_path and evaluate only the rest.
  // Without it an existing run file is replaced.
  bool resume = false;
  // Null timestamps and zero latencies so that two runs of a deterministic
  // client produce byte-identical files.
  bool reproducible = false;
  std::optional<std::string> system_prompt;
  std::string model;  // written to the manifest
};

struct ItemFailure {
  std::string item_id;
  std::string error;
};

struct RunResult {
  std::vector<EvalRecord> records;  // benchmark order; failed items absent
  std::vector<ItemFailure> failures;
  std::size_t resumed = 0;  // records taken over from an earlier run
};

// Evaluates every item not yet recorded with up to max_concurrency requests
// in flight. Records are appended to run_path as they complete; when all
// are done the file is rewritten in benchmark order. Client errors on an
// item are reported in failures and leave the item for a later resume.
// Throws IoError if run_path cannot be written, ValidationError when
// resuming a run made against a different benchmark.
RunResult run_eval(ChatClient& client, const std::vector<BenchmarkItem>& items,
                   const std::filesystem::path& run_path, const RunOptions& options = {});

struct RunFile {
  RunManifest manifest;
  std::vector<EvalRecord> records;
};

// Reads a run file. A final line that does not parse (an interrupted
// write) is ignored; anything else malformed throws ParseError.
RunFile load_run(const std::filesystem::path& path);

enum class MockKind { Oracle, UniformRandom, AlwaysAbstain, Violator, FixedMap };

// In-process endpoint that recognises the prompts of a fixed item list.
class MockEndpoint : public ChatClient {
 public:
  MockEndpoint(MockKind kind, const std::vector<BenchmarkItem>& items, std::uint64_t seed = 0,
               std::map<std::string, std::string> fixed = {});

  std::string complete(const std::vector<ChatMessage>& messages) override;
  std::string describe() const override;

  // Response text given to every Violator request.
  static constexpr std::string_view kViolatorText =
      "I'm not sure; several of these look plausible to me.";

 private:
  MockKind kind_;
  std::uint64_t seed_;
  std::map<std::string, std::string> fixed_;
  std::map<std::string, std::size_t> by_prompt_;
  std::vector<BenchmarkItem> items_;
};

}  // namespace geohalu::eval
