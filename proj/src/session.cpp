#include "ig/session.hpp"

#include "ig/error.hpp"
#include "ig/export.hpp"

namespace ig {

using json = nlohmann::json;

std::string_view session_status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::Selecting: return "SELECTING";
    case SessionStatus::Merging: return "MERGING";
    case SessionStatus::Saturated: return "SATURATED";
    case SessionStatus::DeadEnd: return "DEAD_END";
  }
  return "SELECTING";
}

SessionManager::SessionManager(const Grammar& grammar, const Lexicon& lexicon, std::string grammar_id, Clock clock,
                               std::chrono::seconds idle_timeout)
    : grammar_(grammar),
      lexicon_(lexicon),
      grammar_id_(std::move(grammar_id)),
      clock_(std::move(clock)),
      idle_timeout_(idle_timeout) {}

std::size_t SessionManager::expire() {
  std::lock_guard lock(mutex_);
  auto now = clock_();
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock session_lock(it->second->mutex, std::try_to_lock);
    if (session_lock.owns_lock() && now - it->second->last_access > idle_timeout_) {
      session_lock.unlock();
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionManager::Session> SessionManager::get(const std::string& id) {
  expire();
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error("UNKNOWN_SESSION", "no session '" + id + "'");
  return it->second;
}

json SessionManager::create(const std::string& sentence, const std::string& grammar_id) {
  if (grammar_id != grammar_id_) throw Error("UNKNOWN_GRAMMAR", "no grammar '" + grammar_id + "'");
  expire();
  TokenGraph tg = tokenize(sentence, grammar_.contractions);
  SelectionGraph sg = build_selection_graph(tg, lexicon_, grammar_);
  auto session = std::make_shared<Session>();
  session->sentence = sentence;
  session->graph = filter_selections(sg, default_keys(grammar_)).graph;
  session->paths = enumerate_paths(session->graph, static_cast<std::size_t>(-1));
  session->last_access = clock_();
  std::lock_guard lock(mutex_);
  session->id = "s" + std::to_string(++counter_);
  sessions_[session->id] = session;
  json tokens = json::array();
  for (const auto& e : tg.edges) tokens.push_back(e.form);
  return {{"id", session->id},
          {"status", session_status_name(session->status)},
          {"tokens", tokens},
          {"unknown_words", sg.unknown_words},
          {"selection_count", session->paths.size()}};
}

json SessionManager::list_selections(const std::string& id, std::size_t offset, std::size_t limit) {
  auto s = get(id);
  std::lock_guard lock(s->mutex);
  s->last_access = clock_();
  if (s->status != SessionStatus::Selecting) throw Error("WRONG_STATE", "a selection was already chosen");
  json items = json::array();
  for (std::size_t i = offset; i < s->paths.size() && i < offset + limit; ++i) {
    json words = json::array();
    for (std::size_t e : s->paths[i]) {
      const auto& edge = s->graph.edges[e];
      words.push_back({{"word", edge.iptd.phon()}, {"template", edge.iptd.template_id}});
    }
    items.push_back({{"index", i}, {"iptds", words}});
  }
  json next = nullptr;
  if (offset + limit < s->paths.size()) next = offset + limit;
  return {{"items", items}, {"total", s->paths.size()}, {"next", next}};
}

SessionStatus SessionManager::status_of(const Ptd& top) const {
  if (is_saturated(top)) return SessionStatus::Saturated;
  for (const auto& c : candidate_merges(top, grammar_.signature)) {
    if (merge_nodes(top, c.a, c.b).ok()) return SessionStatus::Merging;
  }
  return SessionStatus::DeadEnd;
}

json SessionManager::choose(const std::string& id, std::size_t index) {
  auto s = get(id);
  std::lock_guard lock(s->mutex);
  s->last_access = clock_();
  if (s->status != SessionStatus::Selecting) throw Error("WRONG_STATE", "a selection was already chosen");
  if (index >= s->paths.size()) throw Error("BAD_INDEX", "no selection " + std::to_string(index));
  s->chosen = index;
  s->selection = selection_of(s->graph, s->paths[index]);
  s->words = words_of(s->graph, s->paths[index]);
  s->history = {juxtapose_selection(s->selection)};
  s->status = status_of(s->history.back());
  return state_of(*s);
}

json SessionManager::candidates_of(const Session& s) const {
  json out = json::array();
  const Ptd& top = s.history.back();
  for (const auto& c : candidate_merges(top, grammar_.signature)) {
    MergeResult r = merge_nodes(top, c.a, c.b);
    out.push_back({{"a", c.a},
                   {"b", c.b},
                   {"a_name", top.at(c.a).name},
                   {"b_name", top.at(c.b).name},
                   {"feature", grammar_.signature.name(c.feature)},
                   {"virtual", c.virtual_attachment},
                   {"outcome", std::string(r.code())}});
  }
  return out;
}

json SessionManager::candidates(const std::string& id) {
  auto s = get(id);
  std::lock_guard lock(s->mutex);
  s->last_access = clock_();
  if (s->status == SessionStatus::Selecting) throw Error("WRONG_STATE", "no selection chosen yet");
  return {{"candidates", candidates_of(*s)}};
}

json SessionManager::merge(const std::string& id, NodeId a, NodeId b) {
  auto s = get(id);
  std::lock_guard lock(s->mutex);
  s->last_access = clock_();
  if (s->status != SessionStatus::Merging) throw Error("WRONG_STATE", "session is not merging");
  const Ptd& top = s->history.back();
  std::optional<std::string> predicted;
  for (const auto& c : candidates_of(*s)) {
    NodeId ca = c["a"], cb = c["b"];
    if ((ca == a && cb == b) || (ca == b && cb == a)) predicted = c["outcome"].get<std::string>();
  }
  if (!predicted) throw Error("BAD_PAIR", "pair is not a listed candidate");
  MergeResult r = merge_nodes(top, a, b);
  if (std::string(r.code()) != *predicted) {
    throw Error("MERGE_FAILED", "merge outcome " + std::string(r.code()) + " differs from prediction " + *predicted);
  }
  if (!r.ok()) throw Error(std::string(r.code()), r.message());
  s->history.push_back(std::move(r).ptd());
  s->status = status_of(s->history.back());
  return state_of(*s);
}

json SessionManager::undo(const std::string& id) {
  auto s = get(id);
  std::lock_guard lock(s->mutex);
  s->last_access = clock_();
  if (s->status == SessionStatus::Selecting || s->history.size() <= 1) {
    throw Error("WRONG_STATE", "nothing to undo");
  }
  s->history.pop_back();
  s->status = status_of(s->history.back());
  return state_of(*s);
}

json SessionManager::state(const std::string& id) {
  auto s = get(id);
  std::lock_guard lock(s->mutex);
  s->last_access = clock_();
  return state_of(*s);
}

void SessionManager::remove(const std::string& id) {
  auto s = get(id);
  std::lock_guard lock(mutex_);
  sessions_.erase(id);
}

json SessionManager::state_of(Session& s) const {
  json out = {{"id", s.id}, {"sentence", s.sentence}, {"status", session_status_name(s.status)}};
  if (s.status == SessionStatus::Selecting) {
    out["selection_count"] = s.paths.size();
    return out;
  }
  json sel = json::array();
  for (const auto& d : s.selection) sel.push_back({{"instance", d.instance}, {"template", d.template_id}, {"word", d.phon()}});
  out["selection"] = sel;
  out["chosen"] = *s.chosen;
  out["history_depth"] = s.history.size();
  out["ptd"] = ptd_to_json(s.history.back(), grammar_.signature);
  json models = json::array();
  if (s.status == SessionStatus::Saturated) {
    for (const auto& m : extract_models(s.history.back(), s.selection, s.words, grammar_.signature)) {
      json rows = json::array();
      for (const auto& r : interpretation_table(m.tree, m.interpretation, s.selection)) {
        rows.push_back({{"nodes", r.nodes}, {"tree", r.tree_node}});
      }
      models.push_back({{"bracketed", bracketed(m.tree, grammar_.signature)},
                        {"tree", tree_to_json(m.tree, grammar_.signature)},
                        {"interpretation", rows}});
    }
  }
  out["models"] = models;
  return out;
}

}  // namespace ig
