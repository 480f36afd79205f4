#pragma once

// Local HTTP front end for SessionManager.  Bodies are JSON; failures are
// {"error":{"code","message"}} with a 4xx status.

#include <string>

#include "ig/session.hpp"

namespace httplib {
class Server;
}

namespace ig {

// Registers every session route on `server`.
void install_routes(httplib::Server& server, SessionManager& sessions);

// Blocks serving on host:port until the server is stopped.
bool serve(SessionManager& sessions, const std::string& host, int port);

// HTTP status used for an error code.
int http_status(const std::string& code);

}  // namespace ig
