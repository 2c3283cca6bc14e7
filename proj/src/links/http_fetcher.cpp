#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "omerdf/links/link_registry.hpp"

namespace omerdf::links {

namespace {

class HttpFetcher final : public Fetcher {
 public:
  FetchOutcome fetch(const rdf::Iri& iri, std::chrono::milliseconds timeout) override {
    const auto& v = iri.value();
    const auto scheme_end = v.find("://");
    if (scheme_end == std::string::npos) return {};
    const auto path_start = v.find('/', scheme_end + 3);
    const auto origin = v.substr(0, path_start);
    const auto path = path_start == std::string::npos ? "/" : v.substr(path_start);

    httplib::Client client(origin);
    if (!client.is_valid()) return {};
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    client.set_follow_location(false);

    const auto res = client.Get(path);
    if (!res) {
      const bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                             res.error() == httplib::Error::Read;
      return {std::nullopt, timed_out};
    }
    return {res->status, false};
  }
};

}  // namespace

std::unique_ptr<Fetcher> make_http_fetcher() { return std::make_unique<HttpFetcher>(); }

}  // namespace omerdf::links
