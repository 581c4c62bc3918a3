#include "serve.hpp"

#include <chrono>
#include <deque>
#include <filesystem>
#include <iostream>
#include <memory>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "fingerhud/commands.hpp"
#include "fingerhud/driver_params.hpp"

namespace fingerhud {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
namespace fs = std::filesystem;

namespace {

// Session logs land in the output directory with a manifest so `report`
// can read them like simulated runs.
class LogStore {
public:
    explicit LogStore(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_ / "runs"); }

    void save(RunLog log) {
        ++count_;
        log.header.subject = count_;
        char name[64];
        std::snprintf(name, sizeof name, "session-%03d.log", count_);
        write_runlog_file((dir_ / "runs" / name).string(), log);
        entries_.push_back({{"file", std::string("runs/") + name},
                            {"subject", count_},
                            {"condition", "gesture"},
                            {"road", log.header.road_id}});
        nlohmann::json m{{"schema", "fingerhud-session-manifest"},
                         {"version", 1},
                         {"tool_version", tool_version()},
                         {"params", params_to_json(default_params())},
                         {"param_hash", hex_hash(param_hash(default_params()))},
                         {"sessions", entries_}};
        write_text_file((dir_ / "manifest.json").string(), m.dump(2) + "\n");
        std::cerr << "session log written: " << (dir_ / "runs" / name).string() << "\n";
    }

private:
    fs::path dir_;
    int count_ = 0;
    nlohmann::json entries_ = nlohmann::json::array();
};

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, const ServeOptions& opts, LogStore& store)
        : ws_(std::move(socket)), timer_(ws_.get_executor()), opts_(opts), store_(store), session_(opts.session) {}

    void start() {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->started_ = std::chrono::steady_clock::now();
            self->ws_.text(true);
            self->send(self->session_.open());
            self->read();
            self->schedule_tick();
        });
    }

private:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_).count();
    }

    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->finish(false);
                return;
            }
            const auto text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->send(self->session_.handle(text));
            if (self->session_.closed()) {
                self->finish(true);
                return;
            }
            self->read();
        });
    }

    void schedule_tick() {
        timer_.expires_after(std::chrono::microseconds(static_cast<long>(opts_.tick_ms * 1000)));
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (ec || self->done_) return;
            self->send(self->session_.tick(self->elapsed_ms()));
            self->schedule_tick();
        });
    }

    void send(const std::vector<nlohmann::json>& messages) {
        for (const auto& m : messages) outbox_.push_back(m.dump());
        if (!writing_) write_next();
    }

    void write_next() {
        if (outbox_.empty()) {
            writing_ = false;
            if (closing_) close_socket();
            return;
        }
        writing_ = true;
        ws_.async_write(net::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->outbox_.pop_front();
            if (ec) {
                self->outbox_.clear();
                self->writing_ = false;
                self->finish(false);
                return;
            }
            self->write_next();
        });
    }

    void finish(bool graceful) {
        if (done_) return;
        done_ = true;
        timer_.cancel();
        if (!session_.refused()) {
            session_.close();
            try {
                store_.save(session_.log());
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
            }
        }
        if (graceful) {
            closing_ = true;
            if (!writing_) close_socket();
        }
    }

    void close_socket() {
        ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
    }

    websocket::stream<beast::tcp_stream> ws_;
    net::steady_timer timer_;
    beast::flat_buffer buffer_;
    const ServeOptions& opts_;
    LogStore& store_;
    Session session_;
    std::deque<std::string> outbox_;
    std::chrono::steady_clock::time_point started_;
    bool writing_ = false;
    bool closing_ = false;
    bool done_ = false;
};

void accept_loop(tcp::acceptor& acceptor, const ServeOptions& opts, LogStore& store) {
    acceptor.async_accept([&](beast::error_code ec, tcp::socket socket) {
        if (!ec) std::make_shared<Connection>(std::move(socket), opts, store)->start();
        accept_loop(acceptor, opts, store);
    });
}

}  // namespace

int serve(const ServeOptions& opts) {
    net::io_context ioc{1};
    LogStore store(opts.out_dir.empty() ? fs::path(default_out_dir()) / "sessions" : fs::path(opts.out_dir));
    tcp::acceptor acceptor(ioc, {net::ip::make_address(opts.host), opts.port});
    std::cerr << "fingerhud serve: ws://" << opts.host << ":" << acceptor.local_endpoint().port() << "\n";
    accept_loop(acceptor, opts, store);
    net::signal_set signals(ioc, SIGINT, SIGTERM);
    signals.async_wait([&](beast::error_code, int) { ioc.stop(); });
    ioc.run();
    return 0;
}

}  // namespace fingerhud
