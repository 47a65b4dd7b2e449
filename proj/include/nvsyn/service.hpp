#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nvsyn/framework.hpp"
#include "nvsyn/inference.hpp"
#include "nvsyn/powerlaw.hpp"

namespace nvsyn {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

using QueryParams = std::multimap<std::string, std::string>;

struct ServiceOptions {
    std::string session_dir;  // empty: sessions live in memory only
    std::size_t default_replicates = 1000;
    std::uint64_t default_seed = 1;
    unsigned bootstrap_threads = 0;
};

// JSON API over one immutable framework. handle() is pure request/response and
// safe to call from many threads; serve() puts it behind an HTTP listener.
class Service {
public:
    explicit Service(Framework fw, ServiceOptions opt = {});

    HttpResponse handle(const std::string& method, const std::string& path, const QueryParams& query,
                        const std::string& body) const;
    // path may carry a query string
    HttpResponse handle(const std::string& method, const std::string& target, const std::string& body = "") const;

    const Framework& framework() const { return fw_; }
    const std::string& framework_hash() const { return hash_; }
    std::size_t session_count() const;

    // blocks until stop(); port 0 binds any free port. on_ready gets the
    // bound port once the listener accepts. false if bind failed.
    bool serve(const std::string& host, int port, std::function<void(int)> on_ready = {});
    void stop();

private:
    struct Slot {
        std::mutex mu;
        DiagnosticSession session;
    };

    HttpResponse route(const std::string& method, const std::string& path, const QueryParams& q,
                       const std::string& body) const;
    HttpResponse create_session(const std::string& body) const;
    HttpResponse update_session(const std::string& id, const std::string& body) const;
    HttpResponse get_session(const std::string& id) const;
    HttpResponse delete_session(const std::string& id) const;
    HttpResponse powerlaw(const QueryParams& q) const;
    std::shared_ptr<Slot> find_slot(const std::string& id) const;
    void persist(const DiagnosticSession& s) const;
    void load_sessions();
    std::string new_session_id() const;

    Framework fw_;
    ServiceOptions opt_;
    std::string hash_;
    mutable std::mutex sessions_mu_;
    mutable std::map<std::string, std::shared_ptr<Slot>> sessions_;
    mutable std::mutex cache_mu_;
    mutable std::map<std::string, std::string> powerlaw_cache_;
    mutable std::uint64_t id_counter_ = 0;
    std::uint64_t id_salt_ = 0;
    std::atomic<void*> server_{nullptr};  // httplib::Server while serving
};

// url-decoded key/value pairs of "a=1&b=x%20y"
QueryParams parse_query(const std::string& query);

}  // namespace nvsyn
