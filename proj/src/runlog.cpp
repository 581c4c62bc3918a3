#include "fingerhud/runlog.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fingerhud/error.hpp"

namespace fingerhud {

std::string_view to_string(Aoi aoi) {
    switch (aoi) {
        case Aoi::Forward: return "Forward";
        case Aoi::Console: return "Console";
        case Aoi::Other: return "Other";
    }
    return "?";
}

Aoi aoi_from_string(std::string_view text) {
    if (text == "Forward") return Aoi::Forward;
    if (text == "Console") return Aoi::Console;
    if (text == "Other") return Aoi::Other;
    throw DataError("unknown AOI '" + std::string(text) + "'");
}

std::string format_number(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

namespace {

void append(std::string& s, double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, end);
}

void append(std::string& s, long v) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, end);
}

void append_opt(std::string& s, const std::optional<double>& v) {
    if (v) {
        append(s, *v);
    } else {
        s += "NA";
    }
}

std::vector<std::string_view> split(std::string_view line, char sep, std::size_t max_fields = 64) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (out.size() + 1 < max_fields) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) break;
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    out.push_back(line.substr(start));
    return out;
}

struct LineParser {
    const std::string& source;
    std::size_t line_no;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line_no, what); }

    double num(std::string_view f) const {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || ptr != f.data() + f.size()) fail("bad number '" + std::string(f) + "'");
        return v;
    }
    long integer(std::string_view f) const {
        long v = 0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || ptr != f.data() + f.size()) fail("bad integer '" + std::string(f) + "'");
        return v;
    }
    bool flag(std::string_view f) const {
        if (f == "0") return false;
        if (f == "1") return true;
        fail("bad flag '" + std::string(f) + "'");
    }
    std::optional<double> opt(std::string_view f) const {
        if (f == "NA") return std::nullopt;
        return num(f);
    }
    void expect(const std::vector<std::string_view>& fields, std::size_t n) const {
        if (fields.size() != n) {
            fail("expected " + std::to_string(n) + " fields for record '" + std::string(fields[0]) + "', got " +
                 std::to_string(fields.size()));
        }
    }
};

void parse_header(std::string_view line, RunHeader& h, const LineParser& p) {
    constexpr std::string_view magic = "#fingerhud-runlog";
    if (line.substr(0, magic.size()) != magic) p.fail("missing '#fingerhud-runlog' header");
    for (auto field : split(line.substr(magic.size()), ' ')) {
        if (field.empty()) continue;
        const auto eq = field.find('=');
        if (eq == std::string_view::npos) p.fail("bad header field '" + std::string(field) + "'");
        const auto key = field.substr(0, eq);
        const auto val = field.substr(eq + 1);
        if (key == "v") {
            h.schema_version = static_cast<int>(p.integer(val));
            if (h.schema_version != 1) p.fail("unsupported log schema version " + std::string(val));
        } else if (key == "seed") {
            std::uint64_t s = 0;
            auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), s);
            if (ec != std::errc{} || ptr != val.data() + val.size()) p.fail("bad seed");
            h.seed = s;
        } else if (key == "condition") {
            h.condition = std::string(val);
        } else if (key == "road") {
            h.road_id = static_cast<int>(p.integer(val));
        } else if (key == "subject") {
            h.subject = static_cast<int>(p.integer(val));
        } else if (key == "ref_speed_kmh") {
            h.ref_speed_kmh = p.num(val);
        } else if (key == "lane_width_m") {
            h.lane_width_m = p.num(val);
        } else if (key == "dt_s") {
            h.dt_s = p.num(val);
        } else if (key == "truncated") {
            h.truncated = p.flag(val);
        }
    }
}

}  // namespace

std::string header_line(const RunHeader& h) {
    std::string s = "#fingerhud-runlog v=" + std::to_string(h.schema_version) + " seed=" + std::to_string(h.seed) +
                    " condition=" + h.condition + " road=" + std::to_string(h.road_id) +
                    " subject=" + std::to_string(h.subject) + " ref_speed_kmh=" + format_number(h.ref_speed_kmh) +
                    " lane_width_m=" + format_number(h.lane_width_m) + " dt_s=" + format_number(h.dt_s) +
                    " truncated=" + (h.truncated ? "1" : "0");
    return s;
}

std::string drive_line(const DriveRow& r) {
    std::string s = "D,";
    append(s, r.t_s);
    s += ',';
    append(s, r.position_m);
    s += ',';
    append(s, r.speed_kmh);
    s += ',';
    append(s, r.lateral_offset_m);
    s += r.brake ? ",1," : ",0,";
    append(s, static_cast<long>(r.active_task));
    s += ',';
    s += r.menu_focus ? to_string(*r.menu_focus) : "-";
    return s;
}

std::string task_line(const TaskRecord& t) {
    std::string s = "T,";
    append(s, static_cast<long>(t.task_id));
    s += ',';
    append(s, t.trigger_t);
    s += ',';
    append(s, t.command_end_t);
    s += ',';
    append(s, t.done_t);
    s += ',';
    append(s, static_cast<long>(t.actions));
    s += t.goal_met ? ",1" : ",0";
    return s;
}

std::string menu_line(const MenuTraceRow& m) { return "M," + format_number(m.t_s) + "," + m.state; }

void write_runlog(std::ostream& out, const RunLog& log) {
    std::string buf;
    buf.reserve(1 << 16);
    auto flush_if_big = [&] {
        if (buf.size() > (1u << 15)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    };
    buf += header_line(log.header);
    buf += '\n';
    for (const auto& r : log.drive) {
        buf += drive_line(r);
        buf += '\n';
        flush_if_big();
    }
    for (const auto& g : log.gaze) {
        buf += "G,";
        append(buf, g.t_s);
        buf += ',';
        append(buf, g.x_px);
        buf += ',';
        append(buf, g.y_px);
        buf += ',';
        buf += to_string(g.aoi);
        buf += '\n';
        flush_if_big();
    }
    for (const auto& h : log.head) {
        buf += "H,";
        append(buf, h.t_s);
        buf += ',';
        append(buf, h.yaw_deg);
        buf += ',';
        append(buf, h.pitch_deg);
        buf += ',';
        append(buf, h.roll_deg);
        buf += '\n';
        flush_if_big();
    }
    for (const auto& t : log.tasks) {
        buf += task_line(t);
        buf += '\n';
    }
    for (const auto& z : log.hazards) {
        buf += "Z,";
        append(buf, static_cast<long>(z.hazard_id));
        buf += ',';
        append(buf, z.onset_t);
        buf += ',';
        append_opt(buf, z.brake_onset_t);
        buf += ',';
        append_opt(buf, z.recovered_t);
        buf += '\n';
    }
    for (const auto& m : log.menu_trace) {
        buf += menu_line(m);
        buf += '\n';
    }
    for (const auto& [kind, payload] : log.session_events) {
        buf += kind;
        buf += ',';
        buf += payload;
        buf += '\n';
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string runlog_to_string(const RunLog& log) {
    std::ostringstream out;
    write_runlog(out, log);
    return out.str();
}

RunLog parse_runlog(std::istream& in, const std::string& source) {
    RunLog log;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        LineParser p{source, line_no};
        if (!have_header) {
            parse_header(line, log.header, p);
            have_header = true;
            continue;
        }
        const char kind = line[0];
        if (line.size() < 2 || line[1] != ',') p.fail("malformed record");
        if (kind == 'I' || kind == 'K') {
            log.session_events.emplace_back(kind, line.substr(2));
            continue;
        }
        if (kind == 'M') {
            const auto f = split(line, ',', 3);
            p.expect(f, 3);
            log.menu_trace.push_back({p.num(f[1]), std::string(f[2])});
            continue;
        }
        const auto f = split(line, ',');
        switch (kind) {
            case 'D': {
                p.expect(f, 8);
                DriveRow r{p.num(f[1]), p.num(f[2]), p.num(f[3]), p.num(f[4]), p.flag(f[5]),
                           static_cast<int>(p.integer(f[6])), std::nullopt};
                if (f[7] != "-") {
                    try {
                        r.menu_focus = focus_from_string(f[7]);
                    } catch (const Error& ex) {
                        p.fail(ex.what());
                    }
                }
                log.drive.push_back(r);
                break;
            }
            case 'G': {
                p.expect(f, 5);
                GazeRow g{p.num(f[1]), p.num(f[2]), p.num(f[3]), Aoi::Forward};
                try {
                    g.aoi = aoi_from_string(f[4]);
                } catch (const Error& ex) {
                    p.fail(ex.what());
                }
                log.gaze.push_back(g);
                break;
            }
            case 'H':
                p.expect(f, 5);
                log.head.push_back({p.num(f[1]), p.num(f[2]), p.num(f[3]), p.num(f[4])});
                break;
            case 'T': {
                p.expect(f, 7);
                TaskRecord t{static_cast<int>(p.integer(f[1])), p.num(f[2]), p.num(f[3]), p.num(f[4]),
                             static_cast<int>(p.integer(f[5])), p.flag(f[6])};
                if (t.done_t < t.command_end_t) p.fail("task done before its command ended");
                log.tasks.push_back(t);
                break;
            }
            case 'Z': {
                p.expect(f, 5);
                HazardRecord z{static_cast<int>(p.integer(f[1])), p.num(f[2]), p.opt(f[3]), p.opt(f[4])};
                if (z.brake_onset_t && *z.brake_onset_t < z.onset_t) p.fail("brake before hazard onset");
                log.hazards.push_back(z);
                break;
            }
            default: p.fail(std::string("unknown record type '") + kind + "'");
        }
    }
    if (!have_header) throw ParseError(source, line_no == 0 ? 1 : line_no, "empty log");
    return log;
}

RunLog read_runlog_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open log '" + path + "'");
    return parse_runlog(in, path);
}

void write_runlog_file(const std::string& path, const RunLog& log) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write log '" + path + "'");
    write_runlog(out, log);
    if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace fingerhud
