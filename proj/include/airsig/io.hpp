#pragma once

#include "airsig/signature.hpp"
#include "airsig/trajectory.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace airsig::io {

inline constexpr int kSignatureDigits = 9;
inline constexpr int kParameterDigits = 17;  // max_digits10: doubles round-trip exactly

/// Decimal text with `digits` significant digits (locale independent).
std::string format_number(double value, int digits);
/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);
/// Throws FormatError unless the whole of `text` is a number.
double parse_number(std::string_view text);
std::uint64_t parse_unsigned(std::string_view text);

/// Ordered key/value pairs; keys are unique.
class KeyValues {
public:
    void set(std::string key, std::string value);
    std::optional<std::string> get(std::string_view key) const;
    /// Throws FormatError when the key is missing.
    const std::string& at(std::string_view key) const;
    bool contains(std::string_view key) const { return get(key).has_value(); }
    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

    /// `key = value` lines; blank lines and lines starting with '#' are skipped.
    static KeyValues parse(std::string_view text);
    std::string format() const;

    friend bool operator==(const KeyValues&, const KeyValues&) = default;

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

/// A trajectory with the free-form header of its file (sampling rate and
/// column layout are carried by the trajectory itself).
struct SignatureFile {
    Trajectory3D trajectory;
    KeyValues header;
};

/// `#airsig v1`, `#fm <rate>` when known, `#columns t x y z` (or `x y z` for a
/// bare path), one `#key value` line per header entry, then the rows.
std::string format_signature(const Trajectory3D& traj, const KeyValues& header = {});
SignatureFile parse_signature(std::string_view text);

/// Targets, midpoints, timestamps and per-stroke parameters; arcs are refitted on load.
std::string format_parameters(const SigmaLogSignature& sig);
SigmaLogSignature parse_parameters(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`, creating
/// parent directories. Throws Error on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

SignatureFile read_signature(const std::filesystem::path& path);
void write_signature(const std::filesystem::path& path, const Trajectory3D& traj, const KeyValues& header = {});
SigmaLogSignature read_parameters(const std::filesystem::path& path);
void write_parameters(const std::filesystem::path& path, const SigmaLogSignature& sig);

}  // namespace airsig::io
