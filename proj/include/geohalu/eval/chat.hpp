#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geohalu/error.hpp"

namespace geohalu::eval {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// Anything that turns a message list into assistant text: the HTTP client
// below, the in-process mocks, or a test double.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
  // Short identifier written to run manifests.
  virtual std::string describe() const = 0;
};

struct ModelEndpoint {
  std::string base_url;  // e.g. "http://127.0.0.1:8000" or "https://api.example.com/openai"
  std::string model_name;
  std::optional<std::string> auth_token;
  int max_concurrency = 4;
  double timeout_s = 60.0;
  int max_retries = 3;  // total attempts per request
  std::chrono::milliseconds backoff_base{500};
};

void validate(const ModelEndpoint& e);

// Connection failure, timeout, or retries exhausted on transient errors.
class TransportError : public Error {
 public:
  using Error::Error;
};

// The endpoint answered with a non-2xx status.
class ApiError : public Error {
 public:
  ApiError(int status, std::string body);
  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

// JSON body for POST {base_url}/v1/chat/completions with temperature 0.
std::string chat_request_body(const std::string& model, const std::vector<ChatMessage>& messages);

// Assistant text from the first choice of a chat-completions response.
std::string parse_chat_response(const std::string& body);

// OpenAI-compatible chat-completions client. Requests are greedy
// (temperature 0); 429/5xx and transport failures are retried with
// exponential backoff, other non-2xx statuses fail immediately.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(ModelEndpoint endpoint);
  std::string complete(const std::vector<ChatMessage>& messages) override;
  std::string describe() const override;

  // Test hook: replaces std::this_thread::sleep_for between retries.
  void set_sleep(std::function<void(std::chrono::milliseconds)> sleep) { sleep_ = std::move(sleep); }

 private:
  ModelEndpoint endpoint_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::function<void(std::chrono::milliseconds)> sleep_;
};

}  // namespace geohalu::eval
