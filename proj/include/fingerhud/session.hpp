#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fingerhud/glove.hpp"
#include "fingerhud/layout.hpp"
#include "fingerhud/menu.hpp"
#include "fingerhud/metrics.hpp"
#include "fingerhud/planner.hpp"
#include "fingerhud/recognizer.hpp"
#include "fingerhud/runlog.hpp"
#include "fingerhud/scenario.hpp"

namespace fingerhud {

inline constexpr int kProtocolVersion = 1;

struct SessionConfig {
    Scenario scenario = builtin_scenario(1);
    MenuLayout layout = default_layout();
    KeyMap keys;
    GloveConfig glove;
    RecognizerConfig recognizer;
    double heartbeat_ms = 1000.0;
    double utterance_s = 2.0;
    bool prompts = true;  // issue task prompts on the scenario schedule
};

// Compact one-line rendering of menu focus and devices, used for the menu trace.
std::string compact_state(const SystemState& state);
nlohmann::json devices_json(const DeviceState& devices);

// Transport-free live session. Inbound text goes to handle(), the owner's
// clock to tick(); both return the outbound messages in order. Every inbound
// message and tick is logged so that replay_session reproduces the run.
class Session {
public:
    explicit Session(SessionConfig config);

    std::vector<nlohmann::json> open();
    std::vector<nlohmann::json> handle(const std::string& text);
    std::vector<nlohmann::json> tick(double now_ms);
    std::vector<nlohmann::json> close();

    bool closed() const { return closed_; }
    bool refused() const { return refused_; }
    const SystemState& state() const { return state_; }
    const RunLog& log() const { return log_; }
    const std::optional<GestureEvent>& last_event() const { return last_event_; }

private:
    nlohmann::json envelope(const char* type) const;
    nlohmann::json state_message(const std::vector<FeedbackEvent>& feedback, bool heartbeat) const;
    nlohmann::json error_message(const std::string& message, const char* code = "bad_message") const;
    void process(const nlohmann::json& msg, std::vector<nlohmann::json>& out);
    void frame(const SamplePair& pair, std::vector<nlohmann::json>& out);
    void advance_tasks(std::vector<nlohmann::json>& out);
    void note_time(double t_ms);

    SessionConfig cfg_;
    SystemState state_;
    RecognizerState recognizer_;
    std::optional<GestureEvent> last_event_;
    RunLog log_;
    double clock_ms_ = 0.0;
    double last_frame_ms_ = -1.0;
    double last_state_ms_ = 0.0;
    bool closed_ = false;
    bool refused_ = false;
    std::size_t next_prompt_ = 0;

    struct Active {
        std::size_t task = 0;
        double trigger_t = 0.0;
        double command_end_t = 0.0;
        std::optional<TaskGoal> goal;
    };
    std::deque<Active> queue_;
};

// Feeds the logged inbound messages and ticks into a fresh session and
// returns its log. The menu trace of the result equals the original's.
RunLog replay_session(const RunLog& recorded, SessionConfig config);

}  // namespace fingerhud
