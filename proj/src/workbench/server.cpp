#include "bothunt/workbench.hpp"

// after Eigen: resolv.h (via httplib) defines a _res macro that clashes with it
#include <httplib.h>

namespace bothunt::workbench {

struct Server::Impl {
  explicit Impl(Session& s) : api(s) {}
  Api api;
  httplib::Server http;
};

namespace {
void forward(Api& api, const httplib::Request& req, httplib::Response& res) {
  ApiRequest r;
  r.method = req.method;
  r.path = req.path;
  for (const auto& [k, v] : req.params) r.query.emplace(k, v);
  r.body = req.body;
  const auto out = api.handle(r);
  res.status = out.status;
  res.set_content(out.body, "application/json");
}
}  // namespace

Server::Server(Session& session) : impl_(std::make_unique<Impl>(session)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { forward(impl_->api, req, res); };
  impl_->http.Get(R"(/api/.*)", handler);
  impl_->http.Post(R"(/api/.*)", handler);
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0)
    bound = impl_->http.bind_to_any_port(host);
  else if (!impl_->http.bind_to_port(host, port))
    bound = -1;
  if (bound < 0) throw WorkbenchError("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Server::run() {
  if (!impl_->http.listen_after_bind()) throw WorkbenchError("server stopped with an error");
}

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace bothunt::workbench
