// The `lsz` subcommands.  Each returns a Report; run() maps reports and
// errors to exit codes.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lsz/cli/report.hpp"
#include "lsz/walk.hpp"

namespace lsz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitPropertyFailed = 3;

struct AnalysisOptions {
    /// Threshold for detailed balance, f-independence and walk phase matching.
    double tolerance = 1e-8;
    std::vector<WeightFunction> fFunctions = pinned_weight_functions();
    CombineMode combineMode = CombineMode::StatePrep;
    /// Walks whose T would exceed this many entries are skipped with a warning.
    Index maxWalkEntries = 20'000'000;
};

/// "one", "sqrt" or "pow<s>" with s in [0, 1], comma separated.
std::vector<WeightFunction> parse_f_functions(const std::string& list);
CombineMode parse_combine_mode(const std::string& name);

Report cmd_analyze(const Instance& inst, const AnalysisOptions& opt);

struct RandomOptions {
    std::string kind = "davies";
    Index dimension = 3;
    std::size_t couplings = 1;
    double beta = -1.0;  // < 0: drawn from [0, 4]
    unsigned long long seed = 1;
};
/// Instance JSON; identical options give byte-identical output.
Json cmd_random(const RandomOptions& opt, Index maxDim);

struct RoundOptions {
    int r = 2;
    double alpha = 0.5;
    double delta = 0.01;
    double beta = -1.0;  // < 0: the instance's beta
};
Report cmd_round(const Instance& inst, const RoundOptions& opt);

Report cmd_reduce(const Instance& inst, const AnalysisOptions& opt);

/// Rows quantity,subspace,index,re,im,phase for the spectra of an analysis report.
std::string spectra_csv(const Json& report);

/// Full command line; writes reports to `out` (or --output) and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lsz::cli
