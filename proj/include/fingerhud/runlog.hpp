#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fingerhud/driver_params.hpp"
#include "fingerhud/layout.hpp"

namespace fingerhud {

enum class Aoi { Forward, Console, Other };
std::string_view to_string(Aoi aoi);
Aoi aoi_from_string(std::string_view text);

struct DriveRow {
    double t_s = 0.0;
    double position_m = 0.0;
    double speed_kmh = 0.0;
    double lateral_offset_m = 0.0;
    bool brake = false;
    int active_task = -1;                 // task index, -1 when idle
    std::optional<MenuFocus> menu_focus;  // gesture condition only

    bool operator==(const DriveRow&) const = default;
};

struct GazeRow {
    double t_s = 0.0;
    double x_px = 0.0;
    double y_px = 0.0;
    Aoi aoi = Aoi::Forward;

    bool operator==(const GazeRow&) const = default;
};

struct HeadRow {
    double t_s = 0.0;
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    double roll_deg = 0.0;

    bool operator==(const HeadRow&) const = default;
};

struct TaskRecord {
    int task_id = 0;
    double trigger_t = 0.0;
    double command_end_t = 0.0;
    double done_t = 0.0;
    int actions = 0;
    bool goal_met = true;

    bool operator==(const TaskRecord&) const = default;
};

struct HazardRecord {
    int hazard_id = 0;  // index of the task it sits on
    double onset_t = 0.0;
    std::optional<double> brake_onset_t;
    std::optional<double> recovered_t;

    bool operator==(const HazardRecord&) const = default;
};

// Menu state after a change, as pushed to a live client.
struct MenuTraceRow {
    double t_s = 0.0;
    std::string state;  // compact single-line rendering

    bool operator==(const MenuTraceRow&) const = default;
};

struct RunHeader {
    int schema_version = 1;
    std::uint64_t seed = 0;
    std::string condition = "baseline";
    int road_id = 0;
    int subject = 0;
    double ref_speed_kmh = 0.0;
    double lane_width_m = 3.5;
    double dt_s = 1.0 / 60.0;
    bool truncated = false;

    bool operator==(const RunHeader&) const = default;
};

struct RunLog {
    RunHeader header;
    std::vector<DriveRow> drive;
    std::vector<GazeRow> gaze;
    std::vector<HeadRow> head;
    std::vector<TaskRecord> tasks;
    std::vector<HazardRecord> hazards;
    std::vector<MenuTraceRow> menu_trace;
    // Raw inbound session messages ("I" lines) and clock ticks ("K" lines),
    // kept in arrival order for replay.
    std::vector<std::pair<char, std::string>> session_events;

    bool operator==(const RunLog&) const = default;
};

// One record per line:
//   #fingerhud-runlog v=1 seed=.. condition=.. road=.. subject=.. ref_speed_kmh=.. lane_width_m=.. dt_s=.. truncated=0|1
//   D,t_s,position_m,speed_kmh,lateral_offset_m,brake,active_task,menu_focus
//   G,t_s,x_px,y_px,aoi
//   H,t_s,yaw_deg,pitch_deg,roll_deg
//   T,task_id,trigger_t,command_end_t,done_t,actions,goal_met
//   Z,hazard_id,onset_t,brake_onset_t|NA,recovered_t|NA
//   M,t_s,state
//   I,<json message>      K,t_ms
// Numbers use the shortest round-trip decimal form, so parse(write(x)) == x.
std::string header_line(const RunHeader& header);
void write_runlog(std::ostream& out, const RunLog& log);
std::string runlog_to_string(const RunLog& log);

// Throws ParseError naming the source and 1-based line number.
RunLog parse_runlog(std::istream& in, const std::string& source = "<log>");
RunLog read_runlog_file(const std::string& path);
void write_runlog_file(const std::string& path, const RunLog& log);

// Shortest round-trip decimal representation.
std::string format_number(double value);

// Individual record lines; shared with the live session log writer.
std::string drive_line(const DriveRow& row);
std::string task_line(const TaskRecord& rec);
std::string menu_line(const MenuTraceRow& row);

}  // namespace fingerhud
