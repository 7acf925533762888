#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace geohalu::align {

enum class LogProbMode { SumTokens, MeanTokens };

std::string_view to_string(LogProbMode m);

// Token ids are in [0, vocab). The completion is scored conditioned on the
// prompt.
struct Sequence {
  std::vector<int> prompt;
  std::vector<int> completion;

  bool operator==(const Sequence&) const = default;
};

// Read-only view of an n-gram logit table: row c holds the logits of the
// next token after context c.
struct LogitTable {
  std::size_t vocab = 0;
  std::size_t order = 2;
  const double* data = nullptr;

  std::size_t bos() const { return vocab; }
  std::size_t n_contexts() const;
  // Context of position `pos` in `tokens`: the previous order-1 tokens,
  // padded with BOS before the start.
  std::size_t context_at(std::span<const int> tokens, std::size_t pos) const;
};

// n-gram softmax policy with a frozen reference copy. Parameters are the
// logits theta[context * vocab + token]; contexts run over the previous
// order-1 tokens (each in [0, vocab], where vocab is BOS).
class ToyPolicy {
 public:
  ToyPolicy(std::size_t vocab, std::size_t order = 2);

  // theta ~ N(0, scale^2), reference = theta.
  static ToyPolicy random(std::size_t vocab, std::size_t order, std::uint64_t seed, double scale = 1.0);

  std::size_t vocab_size() const { return vocab_; }
  std::size_t order() const { return order_; }
  std::size_t n_contexts() const { return n_contexts_; }
  std::size_t n_params() const { return theta_.size(); }

  std::vector<double>& theta() { return theta_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& ref() const { return ref_; }
  void set_reference(std::vector<double> ref);
  void freeze_reference() { ref_ = theta_; }

  LogitTable theta_table() const { return {vocab_, order_, theta_.data()}; }
  LogitTable ref_table() const { return {vocab_, order_, ref_.data()}; }

  // Throws ValidationError when a token is out of range or the completion
  // is empty.
  void check(const Sequence& s) const;

  bool operator==(const ToyPolicy&) const = default;

 private:
  std::size_t vocab_;
  std::size_t order_;
  std::size_t n_contexts_;
  std::vector<double> theta_;
  std::vector<double> ref_;
};

double seq_logprob(const LogitTable& t, const Sequence& s, LogProbMode mode);
double seq_logprob(const ToyPolicy& p, const Sequence& s, LogProbMode mode);

// Batch kernels. The OpenMP versions and the *_serial references return
// bit-identical results: per-sequence work runs in parallel into private
// slots and every cross-sequence reduction happens serially in input order.
std::vector<double> batch_logprob(const LogitTable& t, std::span<const Sequence> seqs, LogProbMode mode);
std::vector<double> batch_logprob_serial(const LogitTable& t, std::span<const Sequence> seqs,
                                         LogProbMode mode);

// grad += sum_i weights[i] * d logprob_i / d table.
void accumulate_logprob_grad(const LogitTable& t, std::span<const Sequence> seqs, LogProbMode mode,
                             std::span<const double> weights, std::span<double> grad);
void accumulate_logprob_grad_serial(const LogitTable& t, std::span<const Sequence> seqs, LogProbMode mode,
                                    std::span<const double> weights, std::span<double> grad);

// Policy file: JSON with vocab size, order, theta and reference, plus the
// token list of the tokenizer that produced the ids (may be empty).
void save_policy(const ToyPolicy& p, const std::vector<std::string>& tokens,
                 const std::filesystem::path& path);
struct PolicyFile {
  ToyPolicy policy;
  std::vector<std::string> tokens;
};
PolicyFile load_policy(const std::filesystem::path& path);

}  // namespace geohalu::align
