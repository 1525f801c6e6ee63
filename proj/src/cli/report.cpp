#include "lsz/cli/report.hpp"

#include <cmath>

namespace lsz::cli {

inline constexpr const char* kToolVersion = "1.0.0";

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Report::Report(std::string command, const Instance* instance) : command_(std::move(command))
{
    if (instance != nullptr) {
        kind_ = to_string(instance->kind);
        dimension_ = instance->dimension;
        digest_ = instance->digest;
    }
}

const Check& Report::check(const std::string& name, double residual, double tolerance, std::string note)
{
    return check_bool(name, residual <= tolerance, residual, tolerance, std::move(note));
}

const Check& Report::check_bool(const std::string& name, bool passed, double residual, double tolerance,
                                std::string note)
{
    checks_.push_back({name, passed, residual, tolerance, std::move(note)});
    return checks_.back();
}

void Report::warn(std::string message) { warnings_.push_back(std::move(message)); }

void Report::start_timer(const std::string& label) { running_[label] = std::chrono::steady_clock::now(); }

void Report::stop_timer(const std::string& label)
{
    const auto it = running_.find(label);
    if (it == running_.end()) return;
    timings_[label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - it->second).count();
    running_.erase(it);
}

bool Report::all_passed() const
{
    for (const auto& c : checks_) {
        if (!c.passed) return false;
    }
    return true;
}

Json Report::to_json(bool withTimings) const
{
    Json out;
    out["tool"] = "lsz";
    out["version"] = kToolVersion;
    out["command"] = command_;
    if (!kind_.empty()) {
        out["kind"] = kind_;
        out["dimension"] = dimension_;
        out["instanceDigest"] = "fnv1a64:" + digest_;
    }
    Json checks = Json::array();
    for (const auto& c : checks_) {
        Json entry = {{"name", c.name},
                      {"passed", c.passed},
                      {"residual", finite_or_null(c.residual)},
                      {"tolerance", c.tolerance}};
        if (!c.note.empty()) entry["note"] = c.note;
        checks.push_back(std::move(entry));
    }
    out["checks"] = std::move(checks);
    out["passed"] = all_passed();
    out["warnings"] = warnings_;
    for (const auto& [key, value] : sections_) out[key] = value;
    if (withTimings) {
        Json t = Json::object();
        for (const auto& [label, seconds] : timings_) t[label] = seconds;
        out["timings"] = std::move(t);
    }
    return out;
}

}  // namespace lsz::cli
