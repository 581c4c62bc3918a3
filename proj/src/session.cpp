#include "fingerhud/session.hpp"

#include <algorithm>
#include <charconv>

#include "fingerhud/error.hpp"

namespace fingerhud {

using nlohmann::json;

std::string compact_state(const SystemState& s) {
    const auto& d = s.devices;
    auto climate = [](const ClimateState& c) {
        return std::string(c.power ? "1/" : "0/") + std::to_string(c.fan) + "/" + std::string(to_string(c.outlet));
    };
    std::string out(to_string(s.menu.focus));
    out += ";radio=" + std::string(d.radio.power ? "1/" : "0/") + std::to_string(d.radio.station) + "/" +
           std::to_string(d.radio.volume);
    out += ";mp3=" + std::string(d.mp3.power ? "1/" : "0/") + std::to_string(d.mp3.volume) + "/" +
           (d.mp3.random ? "R" : "-") + (d.mp3.mute ? "M" : "-") + (d.mp3.intro ? "I" : "-");
    out += ";ac=" + climate(d.ac);
    out += ";heater=" + climate(d.heater);
    return out;
}

json devices_json(const DeviceState& d) {
    auto climate = [](const ClimateState& c) {
        return json{{"power", c.power}, {"fan", c.fan}, {"outlet", std::string(to_string(c.outlet))}};
    };
    return json{{"radio",
                 {{"power", d.radio.power},
                  {"station", d.radio.station},
                  {"presets", d.radio.presets},
                  {"volume", d.radio.volume}}},
                {"mp3",
                 {{"power", d.mp3.power},
                  {"volume", d.mp3.volume},
                  {"random", d.mp3.random},
                  {"mute", d.mp3.mute},
                  {"intro", d.mp3.intro}}},
                {"ac", climate(d.ac)},
                {"heater", climate(d.heater)},
                {"limits",
                 {{"stations", d.limits.stations}, {"max_volume", d.limits.max_volume}, {"max_fan", d.limits.max_fan}}}};
}

Session::Session(SessionConfig config) : cfg_(std::move(config)) {
    cfg_.glove.validate();
    cfg_.recognizer.validate();
    cfg_.keys.validate();
    log_.header.condition = "gesture";
    log_.header.road_id = cfg_.scenario.road.id;
    log_.header.subject = 1;
    log_.header.ref_speed_kmh = cfg_.scenario.road.ref_speed_kmh;
    log_.header.lane_width_m = cfg_.scenario.road.lane_width_m;
    log_.header.dt_s = 1.0 / cfg_.glove.sample_rate_hz;
}

json Session::envelope(const char* type) const { return json{{"v", kProtocolVersion}, {"type", type}}; }

json Session::state_message(const std::vector<FeedbackEvent>& feedback, bool heartbeat) const {
    auto m = envelope("state");
    m["menu_focus"] = std::string(to_string(state_.menu.focus));
    m["devices"] = devices_json(state_.devices);
    m["last_event"] = last_event_ ? json(describe(*last_event_)) : json(nullptr);
    m["feedback"] = json::array();
    for (const auto& f : feedback) m["feedback"].push_back({{"kind", std::string(to_string(f.kind))}, {"text", f.text}});
    m["t_ms"] = clock_ms_;
    if (heartbeat) m["heartbeat"] = true;
    return m;
}

json Session::error_message(const std::string& message, const char* code) const {
    auto m = envelope("error");
    m["code"] = code;
    m["message"] = message;
    return m;
}

std::vector<json> Session::open() {
    std::vector<json> out;
    auto layout = envelope("layout");
    layout["layout"] = export_layout(cfg_.layout);
    layout["keys"] = {{"left", cfg_.keys.left}, {"right", cfg_.keys.right}};
    layout["dwell_frames"] = cfg_.recognizer.dwell_frames;
    out.push_back(std::move(layout));
    out.push_back(state_message({}, false));
    return out;
}

void Session::note_time(double t_ms) { clock_ms_ = std::max(clock_ms_, t_ms); }

std::vector<json> Session::handle(const std::string& text) {
    std::vector<json> out;
    if (closed_) return out;
    std::string line = text;
    std::replace(line.begin(), line.end(), '\n', ' ');
    std::replace(line.begin(), line.end(), '\r', ' ');
    log_.session_events.emplace_back('I', line);

    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::parse_error& e) {
        out.push_back(error_message(std::string("malformed message: ") + e.what()));
        return out;
    }
    if (!msg.is_object()) {
        out.push_back(error_message("malformed message: expected an object"));
        return out;
    }
    if (!msg.contains("v") || !msg["v"].is_number_integer() || msg["v"].get<int>() != kProtocolVersion) {
        auto m = error_message("protocol version mismatch: server speaks v" + std::to_string(kProtocolVersion),
                               "version_mismatch");
        out.push_back(std::move(m));
        refused_ = true;
        closed_ = true;
        return out;
    }
    try {
        process(msg, out);
    } catch (const json::exception& e) {
        out.push_back(error_message(std::string("malformed message: ") + e.what()));
    } catch (const Error& e) {
        out.push_back(error_message(e.what()));
    }
    return out;
}

void Session::process(const json& msg, std::vector<json>& out) {
    const auto type = msg.at("type").get<std::string>();
    if (type == "end") {
        auto c = close();
        out.insert(out.end(), c.begin(), c.end());
        return;
    }
    if (type != "fingers" && type != "keys") throw ValidationError("unknown message type '" + type + "'");
    const double t_ms = msg.at("t_ms").get<double>();
    if (t_ms <= last_frame_ms_) {
        throw ValidationError("t_ms must increase: got " + format_number(t_ms) + " after " + format_number(last_frame_ms_));
    }
    SamplePair pair;
    if (type == "fingers") {
        const auto left = msg.at("left").get<std::vector<int>>();
        const auto right = msg.at("right").get<std::vector<int>>();
        if (left.size() != kFingers || right.size() != kFingers) {
            throw ValidationError("fingers message needs five bends per hand");
        }
        pair.left.hand = Hand::Left;
        pair.right.hand = Hand::Right;
        std::copy(left.begin(), left.end(), pair.left.bends.begin());
        std::copy(right.begin(), right.end(), pair.right.bends.begin());
        pair.left.t_ms = pair.right.t_ms = t_ms;
        // validates the bend range before anything changes
        (void)hand_pose(pair.left, cfg_.glove);
        (void)hand_pose(pair.right, cfg_.glove);
    } else {
        const auto pressed = msg.at("pressed").get<std::vector<std::string>>();
        pair = bends_from_keys(pressed, cfg_.keys, t_ms);
    }
    if (msg.contains("drive")) {
        const auto& d = msg["drive"];
        DriveRow row;
        row.t_s = t_ms / 1000.0;
        row.speed_kmh = d.at("speed_kmh").get<double>();
        row.lateral_offset_m = d.at("lateral_offset_m").get<double>();
        row.position_m = d.value("position_m", 0.0);
        row.active_task = queue_.empty() ? -1 : cfg_.scenario.tasks[queue_.front().task].index;
        row.menu_focus = state_.menu.focus;
        log_.drive.push_back(row);
    }
    last_frame_ms_ = t_ms;
    note_time(t_ms);
    frame(pair, out);
}

void Session::frame(const SamplePair& pair, std::vector<json>& out) {
    const auto res = feed(recognizer_, hand_pose(pair.left, cfg_.glove), hand_pose(pair.right, cfg_.glove),
                          cfg_.recognizer, pair.right.t_ms);
    recognizer_ = res.state;
    if (!res.event) return;
    last_event_ = res.event;
    const auto tr = apply_gesture(state_, *res.event, cfg_.layout);
    state_ = tr.state;
    log_.menu_trace.push_back({clock_ms_ / 1000.0, compact_state(state_)});
    out.push_back(state_message(tr.feedback, false));
    last_state_ms_ = clock_ms_;
    advance_tasks(out);
}

void Session::advance_tasks(std::vector<json>& out) {
    while (!queue_.empty()) {
        auto& a = queue_.front();
        const auto& task = cfg_.scenario.tasks[a.task];
        if (!a.goal) {
            try {
                a.goal = goal_for_task(task, state_);
            } catch (const Error& e) {
                out.push_back(error_message("task " + std::to_string(task.index) + ": " + e.what(), "task"));
                queue_.pop_front();
                continue;
            }
        }
        if (!a.goal->satisfied(state_)) break;
        const double now = clock_ms_ / 1000.0;
        TaskRecord rec{task.index, a.trigger_t, a.command_end_t, std::max(now, a.command_end_t), 0, true};
        log_.tasks.push_back(rec);
        auto m = envelope("task");
        m["task_id"] = task.index;
        m["prompt"] = task.describe();
        m["status"] = "done";
        m["time_s"] = rec.done_t - rec.command_end_t;
        out.push_back(std::move(m));
        queue_.pop_front();
    }
}

std::vector<json> Session::tick(double now_ms) {
    std::vector<json> out;
    if (closed_) return out;
    log_.session_events.emplace_back('K', format_number(now_ms));
    note_time(now_ms);
    if (cfg_.prompts) {
        const double mps = cfg_.scenario.road.ref_speed_kmh / 3.6;
        while (next_prompt_ < cfg_.scenario.tasks.size() &&
               cfg_.scenario.tasks[next_prompt_].location_m / mps * 1000.0 <= clock_ms_) {
            const auto& task = cfg_.scenario.tasks[next_prompt_];
            const double t = clock_ms_ / 1000.0;
            queue_.push_back({next_prompt_, t, t + cfg_.utterance_s, std::nullopt});
            auto m = envelope("task");
            m["task_id"] = task.index;
            m["prompt"] = task.describe();
            m["status"] = "prompt";
            out.push_back(std::move(m));
            ++next_prompt_;
        }
        advance_tasks(out);
    }
    if (clock_ms_ - last_state_ms_ >= cfg_.heartbeat_ms) {
        out.push_back(state_message({}, true));
        last_state_ms_ = clock_ms_;
    }
    return out;
}

std::vector<json> Session::close() {
    std::vector<json> out;
    if (closed_) return out;
    closed_ = true;
    auto m = envelope("summary");
    m["metrics"] = json::array();
    for (const auto& t : log_.tasks) {
        m["metrics"].push_back(
            {{"metric", "task_time"}, {"task_id", t.task_id}, {"value", t.done_t - t.command_end_t}, {"unit", "s"}});
    }
    if (!log_.drive.empty()) {
        const auto w = whole_run(log_.drive);
        m["metrics"].push_back({{"metric", "speed_rmse"},
                                {"value", speed_rmse(log_.drive, cfg_.scenario.road.ref_speed_kmh, w)},
                                {"unit", "km/h"}});
        m["metrics"].push_back({{"metric", "lateral_rmse"}, {"value", lateral_rmse(log_.drive, w)}, {"unit", "m"}});
    }
    m["tasks_pending"] = queue_.size() + (cfg_.prompts ? cfg_.scenario.tasks.size() - next_prompt_ : 0);
    out.push_back(std::move(m));
    return out;
}

RunLog replay_session(const RunLog& recorded, SessionConfig config) {
    Session s(std::move(config));
    s.open();
    for (const auto& [kind, payload] : recorded.session_events) {
        if (kind == 'I') {
            s.handle(payload);
        } else if (kind == 'K') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(payload.data(), payload.data() + payload.size(), v);
            if (ec != std::errc{}) throw DataError("bad tick '" + payload + "'");
            s.tick(v);
        }
    }
    return s.log();
}

}  // namespace fingerhud
