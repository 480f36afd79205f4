#include "ig/service.hpp"

#include <httplib.h>

#include "ig/error.hpp"

namespace ig {

using json = nlohmann::json;

int http_status(const std::string& code) {
  if (code == "UNKNOWN_SESSION") return 404;
  if (code == "WRONG_STATE" || code == "MERGE_FAILED") return 409;
  if (code == "INTERNAL") return 500;
  return 400;
}

namespace {

void send_error(httplib::Response& res, const std::string& code, const std::string& message) {
  res.status = http_status(code);
  res.set_content(json{{"error", {{"code", code}, {"message", message}}}}.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error("BAD_REQUEST", "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error("BAD_REQUEST", std::string("malformed JSON body: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error("BAD_REQUEST", std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw Error("BAD_REQUEST", std::string("bad field '") + name + "'");
  }
}

std::size_t query_number(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw Error("BAD_REQUEST", std::string("bad query parameter '") + name + "'");
  }
}

template <class F>
httplib::Server::Handler wrap(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      json out = f(req);
      res.set_content(out.dump(), "application/json");
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, "INTERNAL", e.what());
    }
  };
}

}  // namespace

void install_routes(httplib::Server& server, SessionManager& sessions) {
  server.Post("/sessions", wrap([&](const httplib::Request& req) {
                json b = body_of(req);
                std::string grammar = b.contains("grammar") ? field<std::string>(b, "grammar") : "default";
                return sessions.create(field<std::string>(b, "sentence"), grammar);
              }));
  server.Get(R"(/sessions/([^/]+)/selections)", wrap([&](const httplib::Request& req) {
               return sessions.list_selections(req.matches[1], query_number(req, "offset", 0),
                                               query_number(req, "limit", 50));
             }));
  server.Post(R"(/sessions/([^/]+)/choose)", wrap([&](const httplib::Request& req) {
                return sessions.choose(req.matches[1], field<std::size_t>(body_of(req), "index"));
              }));
  server.Get(R"(/sessions/([^/]+)/candidates)",
             wrap([&](const httplib::Request& req) { return sessions.candidates(req.matches[1]); }));
  server.Post(R"(/sessions/([^/]+)/merge)", wrap([&](const httplib::Request& req) {
                json b = body_of(req);
                return sessions.merge(req.matches[1], field<NodeId>(b, "a"), field<NodeId>(b, "b"));
              }));
  server.Post(R"(/sessions/([^/]+)/undo)",
              wrap([&](const httplib::Request& req) { return sessions.undo(req.matches[1]); }));
  server.Get(R"(/sessions/([^/]+)/state)",
             wrap([&](const httplib::Request& req) { return sessions.state(req.matches[1]); }));
  server.Delete(R"(/sessions/([^/]+))", wrap([&](const httplib::Request& req) {
                  sessions.remove(req.matches[1]);
                  return json{{"deleted", std::string(req.matches[1])}};
                }));
}

bool serve(SessionManager& sessions, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, sessions);
  return server.listen(host, port);
}

}  // namespace ig
