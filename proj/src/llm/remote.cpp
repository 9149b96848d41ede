#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "exeos/llm/gateway.hpp"

namespace exeos::llm {

namespace {

using nlohmann::json;

struct Adapter {
  std::string path;
  json body;
  httplib::Headers headers;
  // Extracts the completion text, or nullopt if the shape is unexpected.
  std::optional<std::string> (*extract)(const json&);
};

std::optional<std::string> extract_openai(const json& j) {
  if (!j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty())
    return std::nullopt;
  const json& msg = j["choices"][0];
  if (msg.contains("message") && msg["message"].contains("content"))
    return msg["message"]["content"].get<std::string>();
  return std::nullopt;
}

std::optional<std::string> extract_gemini(const json& j) {
  if (!j.contains("candidates") || !j["candidates"].is_array() ||
      j["candidates"].empty())
    return std::nullopt;
  const json& cand = j["candidates"][0];
  if (cand.contains("content") && cand["content"].contains("parts") &&
      !cand["content"]["parts"].empty() &&
      cand["content"]["parts"][0].contains("text"))
    return cand["content"]["parts"][0]["text"].get<std::string>();
  return std::nullopt;
}

Adapter make_adapter(const RemoteBackend& rb, const std::string& prompt,
                     const std::string& token, int max_tokens) {
  Adapter a;
  if (rb.flavor == "gemini") {
    a.path = "/v1beta/models/" + rb.model + ":generateContent";
    a.body = json{
        {"contents", json::array({json{
                         {"parts", json::array({json{{"text", prompt}}})}}})},
        {"generationConfig", json{{"maxOutputTokens", max_tokens}}}};
    a.headers = {{"x-goog-api-key", token}};
    a.extract = extract_gemini;
  } else {
    a.path = "/v1/chat/completions";
    a.body = json{{"model", rb.model},
                  {"messages", json::array({json{{"role", "user"},
                                                 {"content", prompt}}})},
                  {"max_tokens", max_tokens}};
    a.headers = {{"Authorization", "Bearer " + token}};
    a.extract = extract_openai;
  }
  return a;
}

}  // namespace

Result<std::string, LlmError> Gateway::complete_remote(
    const RemoteBackend& rb, const std::string& prompt) {
  // Token-bucket spacing: one request per 60/rate_limit seconds.
  {
    std::unique_lock lock(rate_mutex_);
    auto now = std::chrono::steady_clock::now();
    if (next_allowed_ > now) {
      auto wait = next_allowed_ - now;
      lock.unlock();
      std::this_thread::sleep_for(wait);
      lock.lock();
    }
    double per_minute = std::max(config_.rate_limit_per_minute, 1e-3);
    next_allowed_ = std::max(next_allowed_,
                             std::chrono::steady_clock::now()) +
                    std::chrono::milliseconds(
                        static_cast<long>(60000.0 / per_minute));
  }

  std::string token;
  if (!rb.auth_token_env.empty()) {
    const char* value = std::getenv(rb.auth_token_env.c_str());
    if (value) token = value;
  }
  Adapter adapter =
      make_adapter(rb, prompt, token, config_.max_output_tokens);

  httplib::Client client(rb.endpoint);
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::seconds>(
          config_.request_timeout));
  client.set_read_timeout(config_.request_timeout);
  client.set_write_timeout(config_.request_timeout);

  LlmError last{LlmErrorKind::Http, "request not attempted"};
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(100 * attempt));
    httplib::Result res = client.Post(
        adapter.path, adapter.headers,
        adapter.body.dump(-1, ' ', false, json::error_handler_t::replace),
        "application/json");
    if (!res) {
      bool timeout = res.error() == httplib::Error::ConnectionTimeout ||
                     res.error() == httplib::Error::Read ||
                     res.error() == httplib::Error::Write;
      last = {timeout ? LlmErrorKind::Timeout : LlmErrorKind::Http,
              std::string("transport failure: ") +
                  httplib::to_string(res.error())};
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last = {LlmErrorKind::ExhaustedRetries,
              "endpoint returned HTTP " + std::to_string(res->status)};
      // Client errors other than rate limiting will not improve on retry.
      if (res->status >= 400 && res->status < 500 && res->status != 429) {
        last.kind = LlmErrorKind::Http;
        return last;
      }
      continue;
    }
    json parsed = json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
      last = {LlmErrorKind::Http, "endpoint returned malformed JSON"};
      continue;
    }
    auto text = adapter.extract(parsed);
    if (!text) {
      last = {LlmErrorKind::Http,
              "endpoint response lacks a completion text field"};
      continue;
    }
    return *text;
  }
  if (last.kind != LlmErrorKind::Timeout &&
      last.kind != LlmErrorKind::ExhaustedRetries)
    last.kind = LlmErrorKind::Http;
  last.message += " (after " + std::to_string(config_.retries + 1) +
                  " attempt(s))";
  return last;
}

}  // namespace exeos::llm
