#include "orchsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace orchsim {

std::vector<Pod> homogeneous_batch(const BatchSpec& spec) {
    std::vector<Pod> pods;
    pods.reserve(spec.count);
    for (std::uint32_t i = 0; i < spec.count; ++i) {
        Pod p;
        p.id = spec.id_prefix + std::to_string(i);
        p.submit_time = static_cast<SimTime>(i) * spec.interarrival;
        p.request = spec.request;
        p.nominal_duration = spec.duration;
        p.app_class = AppClass::BatchAnalytics;
        p.movability = Movability::MovableStateless;
        p.fault_tolerant = true;
        pods.push_back(std::move(p));
    }
    return pods;
}

namespace {

const char* k_trace_header = "id,submit_s,cpu_m,mem_mib,duration_s,app_class,movability,fault_tolerant,deadline_s";

[[noreturn]] void trace_error(const std::string& origin, std::size_t line, const std::string& what) {
    throw ValidationError(origin + ":" + std::to_string(line) + ": " + what);
}

std::int64_t parse_int(const std::string& s, const std::string& origin, std::size_t line, const char* field) {
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        trace_error(origin, line, std::string(field) + ": not an integer: '" + s + "'");
    }
}

std::int64_t parse_non_negative(const std::string& s, const std::string& origin, std::size_t line,
                                const char* field) {
    std::int64_t v = parse_int(s, origin, line, field);
    if (v < 0) trace_error(origin, line, std::string(field) + ": must be >= 0, got " + s);
    return v;
}

Pod pod_from_fields(const std::string& origin, std::size_t line, const std::string& id, const std::string& submit,
                    const std::string& cpu, const std::string& mem, const std::string& duration,
                    const std::string& app_class, const std::string& movability, const std::string& fault_tolerant,
                    const std::string& deadline) {
    Pod p;
    if (id.empty()) trace_error(origin, line, "id: must not be empty");
    p.id = id;
    p.submit_time = static_cast<SimTime>(parse_non_negative(submit, origin, line, "submit_s"));
    p.request.cpu_m = parse_non_negative(cpu, origin, line, "cpu_m");
    p.request.mem_mib = parse_non_negative(mem, origin, line, "mem_mib");
    p.nominal_duration = static_cast<SimTime>(parse_non_negative(duration, origin, line, "duration_s"));
    auto ac = app_class_from_name(app_class);
    if (!ac) trace_error(origin, line, "app_class: unknown value '" + app_class + "'");
    p.app_class = *ac;
    auto mv = movability_from_name(movability);
    if (!mv) trace_error(origin, line, "movability: unknown value '" + movability + "'");
    p.movability = *mv;
    if (fault_tolerant == "true") {
        p.fault_tolerant = true;
    } else if (fault_tolerant == "false") {
        p.fault_tolerant = false;
    } else {
        trace_error(origin, line, "fault_tolerant: expected true or false, got '" + fault_tolerant + "'");
    }
    if (!deadline.empty()) {
        p.deadline = static_cast<SimTime>(parse_non_negative(deadline, origin, line, "deadline_s"));
    }
    return p;
}

}  // namespace

std::vector<Pod> parse_trace_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw ValidationError(origin + ": empty trace");
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != k_trace_header) {
        trace_error(origin, lineno, std::string("bad header, expected '") + k_trace_header + "'");
    }
    std::vector<Pod> pods;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream fin(line);
        while (std::getline(fin, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.push_back("");  // trailing empty deadline
        if (fields.size() != 9) {
            trace_error(origin, lineno, "expected 9 fields, got " + std::to_string(fields.size()));
        }
        pods.push_back(pod_from_fields(origin, lineno, fields[0], fields[1], fields[2], fields[3], fields[4],
                                       fields[5], fields[6], fields[7], fields[8]));
    }
    return pods;
}

std::vector<Pod> parse_trace_jsonl(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<Pod> pods;
    auto str_of = [&](const nlohmann::json& j, const char* key, bool required) -> std::string {
        if (!j.contains(key)) {
            if (required) trace_error(origin, lineno, std::string(key) + ": missing");
            return "";
        }
        const nlohmann::json& v = j.at(key);
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
        if (v.is_null()) return "";
        trace_error(origin, lineno, std::string(key) + ": unsupported JSON type");
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            trace_error(origin, lineno, std::string("invalid JSON: ") + e.what());
        }
        pods.push_back(pod_from_fields(origin, lineno, str_of(j, "id", true), str_of(j, "submit_s", true),
                                       str_of(j, "cpu_m", true), str_of(j, "mem_mib", true),
                                       str_of(j, "duration_s", true), str_of(j, "app_class", true),
                                       str_of(j, "movability", true), str_of(j, "fault_tolerant", true),
                                       str_of(j, "deadline_s", false)));
    }
    return pods;
}

std::vector<Pod> load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(path + ": cannot open trace file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0) {
        return parse_trace_jsonl(text, path);
    }
    return parse_trace_csv(text, path);
}

std::string serialize_trace_csv(const std::vector<Pod>& pods) {
    std::ostringstream out;
    out << k_trace_header << "\n";
    for (const Pod& p : pods) {
        out << p.id << ',' << p.submit_time << ',' << p.request.cpu_m << ',' << p.request.mem_mib << ','
            << p.nominal_duration.value_or(0) << ',' << app_class_name(p.app_class) << ','
            << movability_name(p.movability) << ',' << (p.fault_tolerant ? "true" : "false") << ',';
        if (p.deadline) out << *p.deadline;
        out << "\n";
    }
    return out.str();
}

std::vector<RevocationEvent> preemption_events(const Rng& rng, double rate_per_node_hour, SimTime horizon,
                                               const std::vector<NodeIndex>& preemptible_nodes,
                                               const std::vector<SimTime>& active_from) {
    std::vector<RevocationEvent> out;
    if (rate_per_node_hour <= 0.0) return out;
    const double rate_per_sec = rate_per_node_hour / 3600.0;
    for (std::size_t k = 0; k < preemptible_nodes.size(); ++k) {
        Rng stream = rng.derive(preemptible_nodes[k]);
        double t = static_cast<double>(k < active_from.size() ? active_from[k] : 0);
        for (;;) {
            t += stream.exponential(rate_per_sec);
            if (t > static_cast<double>(horizon)) break;
            out.push_back({preemptible_nodes[k], static_cast<SimTime>(std::llround(t))});
        }
    }
    std::sort(out.begin(), out.end(), [](const RevocationEvent& a, const RevocationEvent& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.node < b.node;
    });
    return out;
}

}  // namespace orchsim
