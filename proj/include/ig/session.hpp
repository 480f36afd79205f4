#pragma once

// Interactive parsing sessions: pick a lexical selection, then merge node
// pairs one at a time with undo.  Every call returns the JSON document sent
// over the wire and throws ig::Error with a machine-readable code.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ig/parser.hpp"

namespace ig {

enum class SessionStatus : std::uint8_t { Selecting, Merging, Saturated, DeadEnd };

std::string_view session_status_name(SessionStatus s);

class SessionManager {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  SessionManager(const Grammar& grammar, const Lexicon& lexicon, std::string grammar_id = "default",
                 Clock clock = [] { return std::chrono::steady_clock::now(); },
                 std::chrono::seconds idle_timeout = std::chrono::minutes(30));

  nlohmann::json create(const std::string& sentence, const std::string& grammar_id);
  nlohmann::json list_selections(const std::string& id, std::size_t offset, std::size_t limit);
  nlohmann::json choose(const std::string& id, std::size_t index);
  nlohmann::json candidates(const std::string& id);
  // A listed pair whose predicted outcome is a clash is refused with that
  // clash code and leaves the session unchanged.
  nlohmann::json merge(const std::string& id, NodeId a, NodeId b);
  nlohmann::json undo(const std::string& id);
  nlohmann::json state(const std::string& id);
  void remove(const std::string& id);

  // Drops sessions idle for longer than the timeout; returns how many.
  std::size_t expire();
  std::size_t size() const;

 private:
  struct Session {
    std::mutex mutex;
    std::string id;
    std::string sentence;
    SelectionGraph graph;
    std::vector<std::vector<std::size_t>> paths;
    std::optional<std::size_t> chosen;
    std::vector<Iptd> selection;
    std::vector<std::string> words;
    std::vector<Ptd> history;
    SessionStatus status = SessionStatus::Selecting;
    std::chrono::steady_clock::time_point last_access;
  };

  std::shared_ptr<Session> get(const std::string& id);
  nlohmann::json state_of(Session& s) const;
  nlohmann::json candidates_of(const Session& s) const;
  SessionStatus status_of(const Ptd& top) const;

  const Grammar& grammar_;
  const Lexicon& lexicon_;
  std::string grammar_id_;
  Clock clock_;
  std::chrono::seconds idle_timeout_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t counter_ = 0;
};

}  // namespace ig
