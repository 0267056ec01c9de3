#include "taskgrid/chat.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

namespace taskgrid {

namespace {

// Splits "http://host:port/path" into (scheme://host:port, /path).
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos)
    throw AdapterError("endpoint must include a scheme: " + endpoint);
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

}  // namespace

std::optional<std::string> extract_json_object(const std::string& text) {
  auto start = text.find('{');
  if (start == std::string::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (size_t i = start; i < text.size(); ++i) {
    char ch = text[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (ch == '\\')
        escaped = true;
      else if (ch == '"')
        in_string = false;
      continue;
    }
    if (ch == '"')
      in_string = true;
    else if (ch == '{')
      ++depth;
    else if (ch == '}') {
      --depth;
      if (depth == 0) return text.substr(start, i - start + 1);
    }
  }
  return std::nullopt;
}

std::optional<Direction> parse_action_reply(const std::string& reply) {
  auto object = extract_json_object(reply);
  if (!object) return std::nullopt;
  nlohmann::json doc = nlohmann::json::parse(*object, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("action") ||
      !doc["action"].is_string())
    return std::nullopt;
  return parse_direction(doc["action"].get<std::string>());
}

namespace {

void append_wire_log(const std::string& path, const char* direction, const std::string& body,
                     int status) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  nlohmann::json line;
  line["direction"] = direction;
  if (status >= 0) line["status"] = status;
  nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded())
    line["body_text"] = body;
  else
    line["body"] = parsed;
  out << line.dump() << "\n";
}

}  // namespace

Direction query_chat_model(const ChatAdapterConfig& config, const std::string& system,
                           const std::vector<ChatMessage>& turns) {
  if (config.temperature < 0.0) throw AdapterError("temperature must be >= 0");
  if (config.max_retries < 0) throw AdapterError("max_retries must be >= 0");
  auto [host, path] = split_endpoint(config.endpoint);

  nlohmann::json body;
  body["model"] = config.model;
  body["temperature"] = config.temperature;
  auto& messages = body["messages"] = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", system}});
  size_t first = 0;
  if (config.context_window_turns > 0) {
    size_t keep = static_cast<size_t>(config.context_window_turns) * 2;
    if (turns.size() > keep) first = turns.size() - keep;
  }
  for (size_t i = first; i < turns.size(); ++i)
    messages.push_back({{"role", turns[i].role}, {"content", turns[i].content}});

  httplib::Headers headers;
  if (const char* key = std::getenv(config.credential_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string last_error = "no attempts made";
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    httplib::Client client(host);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_write_timeout(config.timeout_seconds, 0);

    append_wire_log(config.wire_log_path, "request", body.dump(), -1);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      append_wire_log(config.wire_log_path, "response", "\"" + last_error + "\"", -1);
      continue;
    }
    append_wire_log(config.wire_log_path, "response", res->body, res->status);
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) {
      last_error = "response is not JSON";
      continue;
    }
    std::string content;
    try {
      content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception&) {
      last_error = "response missing choices[0].message.content";
      continue;
    }
    if (auto dir = parse_action_reply(content)) return *dir;
    last_error = "reply did not contain a valid action";
  }
  throw AdapterError("chat adapter exhausted retries: " + last_error);
}

Direction ChatModelAgent::decide(const std::string& observation_text, const AgentKnowledge&) {
  turns_.push_back({"user", observation_text});
  Direction dir = query_chat_model(config_, system_prompt_, turns_);
  turns_.push_back({"assistant", std::string("{\"action\":\"") + direction_name(dir) + "\"}"});
  return dir;
}

}  // namespace taskgrid
