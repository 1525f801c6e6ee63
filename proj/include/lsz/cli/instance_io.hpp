// Instance files: JSON on disk, validated models in memory.  The on-disk
// layout is documented in FORMATS.md.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lsz/davies.hpp"

namespace lsz::cli {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr Index kDefaultMaxDim = 8;

/// Malformed or out-of-contract input; maps to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class InstanceKind { Davies, Canonical, Channel };

std::string to_string(InstanceKind kind);

/// Matrices are arrays of rows; an entry is a number or a [re, im] pair.
Matrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& where);
Json matrix_to_json(const Matrix& m);
Json complex_to_json(Complex z);

struct InstanceOptions {
    double groupingTolerance = kDefaultGroupingTolerance;
};

struct Instance {
    InstanceKind kind = InstanceKind::Davies;
    Index dimension = 0;
    InstanceOptions options;
    std::optional<DaviesInstance> davies;
    /// Canonical terms as given; the reference state is built from `sigma`.
    std::optional<CanonicalLindbladian> canonical;
    std::optional<QuantumChannel> channel;
    std::optional<Matrix> channelSigma;
    std::string digest;  // FNV-1a 64 of the normalized JSON, hex
};

/// Structural validation only (types, sizes, hermiticity of H, finiteness).
/// Physics invariants are checked later and reported as properties.
Instance parse_instance(const Json& j, Index maxDim);
Instance load_instance(const std::string& path, Index maxDim);

/// LSZ_MAX_DIM if set and valid, otherwise kDefaultMaxDim.
Index max_dim_from_env();

std::string fnv1a64_hex(const std::string& bytes);

Json davies_to_json(const DaviesInstance& inst);
Json canonical_to_json(const CanonicalLindbladian& cl);
Json channel_to_json(const QuantumChannel& ch, const Matrix* sigma);

}  // namespace lsz::cli
