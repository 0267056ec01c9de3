#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "taskgrid/agents.hpp"

namespace taskgrid {

struct ChatAdapterConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080/v1/chat/completions"
  std::string model;
  double temperature = 0.0;
  int max_retries = 3;
  int timeout_seconds = 60;
  std::string credential_env = "TASKGRID_API_KEY";
  // 0 keeps the full conversation; otherwise only the last N user/assistant
  // pairs are sent (the system prompt is always included).
  int context_window_turns = 0;
  // When set, request/response bodies are appended here as JSON lines. The
  // credential travels only in the Authorization header, never in a body, so
  // the log carries no secrets.
  std::string wire_log_path;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct AdapterError : AgentUnavailable {
  using AgentUnavailable::AgentUnavailable;
};

// First balanced top-level JSON object embedded in `text`, if any.
std::optional<std::string> extract_json_object(const std::string& text);

// Parses a model reply into a direction; accepts surrounding prose and
// case-insensitive action strings.
std::optional<Direction> parse_action_reply(const std::string& reply);

// One chat-completion round trip. Retries transport failures and unparseable
// replies up to config.max_retries, then throws AdapterError.
Direction query_chat_model(const ChatAdapterConfig& config, const std::string& system,
                           const std::vector<ChatMessage>& turns);

// ReAct-style chat agent: keeps the full turn history, one action per turn.
class ChatModelAgent : public Agent {
 public:
  ChatModelAgent(ChatAdapterConfig config, PromptVariant variant)
      : config_(std::move(config)), system_prompt_(build_system_prompt(variant)) {}

  Direction decide(const std::string& observation_text, const AgentKnowledge&) override;
  std::string name() const override { return "chat:" + config_.model; }

 private:
  ChatAdapterConfig config_;
  std::string system_prompt_;
  std::vector<ChatMessage> turns_;
};

}  // namespace taskgrid
