#include "geohalu/eval/chat.hpp"

#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace geohalu::eval {

using nlohmann::json;
using nlohmann::ordered_json;

void validate(const ModelEndpoint& e) {
  if (e.base_url.empty()) throw ValidationError("endpoint base_url is empty");
  if (e.max_concurrency < 1) throw ValidationError("max_concurrency must be >= 1");
  if (e.max_retries < 1) throw ValidationError("max_retries must be >= 1");
  if (!(e.timeout_s > 0.0)) throw ValidationError("timeout_s must be positive");
}

ApiError::ApiError(int status, std::string body)
    : Error("endpoint returned HTTP " + std::to_string(status) + ": " + body),
      status_(status),
      body_(std::move(body)) {}

std::string chat_request_body(const std::string& model, const std::vector<ChatMessage>& messages) {
  ordered_json body;
  body["model"] = model;
  body["messages"] = ordered_json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  body["temperature"] = 0;
  return body.dump();
}

std::string parse_chat_response(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ParseError("chat response is not JSON");
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("unexpected chat response shape: ") + e.what());
  }
}

HttpChatClient::HttpChatClient(ModelEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  validate(endpoint_);
  // Split "scheme://host[:port]/prefix" so httplib gets the origin and the
  // request path keeps any prefix.
  const auto scheme_end = endpoint_.base_url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = endpoint_.base_url.find('/', host_start);
  scheme_host_port_ = endpoint_.base_url.substr(0, path_start);
  if (path_start != std::string::npos) path_prefix_ = endpoint_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string HttpChatClient::describe() const {
  return endpoint_.base_url + "#" + endpoint_.model_name;
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages) {
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(endpoint_.timeout_s);
  const auto secs = static_cast<time_t>(timeout.count());
  const auto usecs = static_cast<time_t>((timeout.count() - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (endpoint_.auth_token && !endpoint_.auth_token->empty())
    headers.emplace("Authorization", "Bearer " + *endpoint_.auth_token);
  const std::string body = chat_request_body(endpoint_.model_name, messages);
  const std::string path = path_prefix_ + "/v1/chat/completions";

  std::string last_error;
  std::optional<ApiError> last_api_error;
  for (int attempt = 0; attempt < endpoint_.max_retries; ++attempt) {
    if (attempt > 0) sleep_(endpoint_.backoff_base * (1 << (attempt - 1)));
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      last_api_error.reset();
      continue;
    }
    if (res->status >= 200 && res->status < 300) return parse_chat_response(res->body);
    if (res->status == 429 || res->status >= 500) {
      last_api_error.emplace(res->status, res->body);
      continue;
    }
    throw ApiError(res->status, res->body);
  }
  if (last_api_error) throw *last_api_error;
  throw TransportError("request to " + endpoint_.base_url + " failed after " +
                       std::to_string(endpoint_.max_retries) + " attempts: " + last_error);
}

}  // namespace geohalu::eval
