// JSON analysis reports.  Every boolean check carries the residual it was
// decided on and the tolerance it was compared against.

#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "lsz/cli/instance_io.hpp"

namespace lsz::cli {

struct Check {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

class Report {
public:
    Report(std::string command, const Instance* instance);

    /// passed = residual <= tolerance (NaN fails).
    const Check& check(const std::string& name, double residual, double tolerance, std::string note = {});
    /// A check decided by a predicate; residual/tolerance are still recorded.
    const Check& check_bool(const std::string& name, bool passed, double residual, double tolerance,
                            std::string note = {});
    void warn(std::string message);

    /// Arbitrary result sections ("gaps", "spectra", ...).
    Json& section(const std::string& key) { return sections_[key]; }

    void start_timer(const std::string& label);
    void stop_timer(const std::string& label);

    bool all_passed() const;
    const std::vector<Check>& checks() const { return checks_; }
    Json to_json(bool withTimings) const;

private:
    std::string command_;
    std::string kind_;
    Index dimension_ = 0;
    std::string digest_;
    std::vector<Check> checks_;
    std::vector<std::string> warnings_;
    std::map<std::string, Json> sections_;
    std::map<std::string, std::chrono::steady_clock::time_point> running_;
    std::map<std::string, double> timings_;
};

/// Non-finite doubles are emitted as null.
Json finite_or_null(double v);

}  // namespace lsz::cli
