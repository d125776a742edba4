#include "airsig/io.hpp"

#include "airsig/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace airsig::io {

namespace {

constexpr std::string_view kSignatureMagic = "#airsig v1";
constexpr std::string_view kParameterMagic = "#airsig-params v1";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

// Line cursor for the parameter format.
class Reader {
public:
    explicit Reader(std::string_view text) : lines_(split_lines(text)) {}

    std::vector<std::string_view> next() {
        while (pos_ < lines_.size()) {
            const auto line = trim(lines_[pos_++]);
            if (!line.empty()) return split_fields(line);
        }
        throw FormatError("parameters: unexpected end of file");
    }

    std::size_t section(std::string_view name) {
        const auto f = next();
        if (f.size() != 2 || f[0] != name) throw FormatError("parameters: expected '" + std::string(name) + " <count>'");
        return static_cast<std::size_t>(parse_unsigned(f[1]));
    }

    std::vector<double> numbers(std::size_t count) {
        const auto f = next();
        if (f.size() != count) throw FormatError("parameters: expected " + std::to_string(count) + " values per row");
        std::vector<double> out;
        for (auto s : f) out.push_back(parse_number(s));
        return out;
    }

    std::size_t line() const { return pos_; }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
};

void append_row(std::string& out, std::initializer_list<double> values, int digits) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ' ';
        out += format_number(v, digits);
        first = false;
    }
    out += '\n';
}

}  // namespace

std::string format_number(double value, int digits) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
    return std::string(buf, r.ptr);
}

std::string format_exact(double value) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
        throw FormatError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
        throw FormatError("not an unsigned integer: '" + std::string(text) + "'");
    }
    return v;
}

void KeyValues::set(std::string key, std::string value) {
    for (auto& [k, v] : items_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    items_.emplace_back(std::move(key), std::move(value));
}

std::optional<std::string> KeyValues::get(std::string_view key) const {
    for (const auto& [k, v] : items_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

const std::string& KeyValues::at(std::string_view key) const {
    for (const auto& [k, v] : items_) {
        if (k == key) return v;
    }
    throw FormatError("missing key '" + std::string(key) + "'");
}

KeyValues KeyValues::parse(std::string_view text) {
    KeyValues kv;
    std::size_t number = 0;
    for (auto raw : split_lines(text)) {
        ++number;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("line " + std::to_string(number) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw FormatError("line " + std::to_string(number) + ": empty key");
        if (kv.contains(key)) throw FormatError("line " + std::to_string(number) + ": duplicate key '" + std::string(key) + "'");
        kv.set(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return kv;
}

std::string KeyValues::format() const {
    std::string out;
    for (const auto& [k, v] : items_) out += k + " = " + v + "\n";
    return out;
}

std::string format_signature(const Trajectory3D& traj, const KeyValues& header) {
    std::string out(kSignatureMagic);
    out += '\n';
    if (traj.sampling_rate()) out += "#fm " + format_exact(*traj.sampling_rate()) + "\n";
    out += traj.timed() ? "#columns t x y z\n" : "#columns x y z\n";
    for (const auto& [k, v] : header.items()) {
        if (k == "fm" || k == "columns") continue;
        out += "#" + k + " " + v + "\n";
    }
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& p = traj.point(i);
        if (traj.timed()) {
            append_row(out, {traj.time(i), p.x(), p.y(), p.z()}, kSignatureDigits);
        } else {
            append_row(out, {p.x(), p.y(), p.z()}, kSignatureDigits);
        }
    }
    return out;
}

SignatureFile parse_signature(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kSignatureMagic) throw FormatError("signature: missing '#airsig v1' header");
    SignatureFile file;
    std::optional<double> fm;
    std::size_t columns = 0;
    std::vector<double> times;
    std::vector<Vec3> points;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto line = trim(lines[n]);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto body = line.substr(1);
            const auto space = body.find(' ');
            const auto key = trim(body.substr(0, space));
            const auto value = space == std::string_view::npos ? std::string_view{} : trim(body.substr(space + 1));
            if (key == "fm") {
                fm = parse_number(value);
            } else if (key == "columns") {
                if (value == "t x y z") {
                    columns = 4;
                } else if (value == "x y z") {
                    columns = 3;
                } else {
                    throw FormatError("signature: unknown column layout '" + std::string(value) + "'");
                }
            } else {
                file.header.set(std::string(key), std::string(value));
            }
            continue;
        }
        const auto f = split_fields(line);
        if (columns == 0) columns = f.size();
        if (f.size() != columns || (columns != 3 && columns != 4)) {
            throw FormatError("signature: line " + std::to_string(n + 1) + " has " + std::to_string(f.size()) + " fields");
        }
        std::size_t c = 0;
        if (columns == 4) times.push_back(parse_number(f[c++]));
        const double x = parse_number(f[c++]);
        const double y = parse_number(f[c++]);
        const double z = parse_number(f[c]);
        points.emplace_back(x, y, z);
    }
    if (points.size() < 2) throw FormatError("signature: fewer than 2 samples");
    try {
        file.trajectory = columns == 4 ? Trajectory3D(std::move(times), std::move(points), fm) : Trajectory3D(std::move(points));
    } catch (const InputError& e) {
        throw FormatError(std::string("signature: ") + e.what());
    }
    return file;
}

std::string format_parameters(const SigmaLogSignature& sig) {
    const auto& plan = sig.plan;
    std::string out(kParameterMagic);
    out += '\n';
    out += "targets " + std::to_string(plan.targets.size()) + "\n";
    for (const auto& p : plan.targets) append_row(out, {p.x(), p.y(), p.z()}, kParameterDigits);
    out += "midpoints " + std::to_string(plan.midpoints.size()) + "\n";
    for (const auto& p : plan.midpoints) append_row(out, {p.x(), p.y(), p.z()}, kParameterDigits);
    out += "timestamps " + std::to_string(plan.timestamps.size()) + "\n";
    for (double t : plan.timestamps) append_row(out, {t}, kParameterDigits);
    out += "strokes " + std::to_string(sig.strokes.size()) + "\n";
    out += "# D t0 mu sigma2 theta_s theta_e phi_s phi_e\n";
    for (const auto& s : sig.strokes) {
        append_row(out, {s.D, s.t0, s.mu, s.sigma2, s.theta_s, s.theta_e, s.phi_s, s.phi_e}, kParameterDigits);
    }
    return out;
}

SigmaLogSignature parse_parameters(std::string_view text) {
    std::string filtered;
    bool first = true;
    for (auto line : split_lines(text)) {
        if (first) {
            if (trim(line) != kParameterMagic) throw FormatError("parameters: missing '#airsig-params v1' header");
            first = false;
            continue;
        }
        if (!trim(line).empty() && trim(line).front() == '#') continue;
        filtered.append(line);
        filtered += '\n';
    }
    if (first) throw FormatError("parameters: empty file");
    Reader in(filtered);
    const auto read_points = [&](std::string_view name) {
        std::vector<Vec3> pts(in.section(name));
        for (auto& p : pts) {
            const auto v = in.numbers(3);
            p = Vec3(v[0], v[1], v[2]);
        }
        return pts;
    };
    auto targets = read_points("targets");
    auto midpoints = read_points("midpoints");
    std::vector<double> timestamps(in.section("timestamps"));
    for (auto& t : timestamps) t = in.numbers(1)[0];
    SigmaLogSignature sig;
    sig.strokes.resize(in.section("strokes"));
    for (auto& s : sig.strokes) {
        const auto v = in.numbers(8);
        s = {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    }
    try {
        if (!targets.empty()) {
            if (midpoints.size() + 1 != targets.size()) throw FormatError("parameters: need one midpoint per link");
            sig.plan = plan::build_plan(std::move(targets), std::move(midpoints), std::move(timestamps));
        }
        sig.validate();
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(std::string("parameters: ") + e.what());
    }
    return sig;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
    }
}

SignatureFile read_signature(const std::filesystem::path& path) {
    try {
        return parse_signature(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_signature(const std::filesystem::path& path, const Trajectory3D& traj, const KeyValues& header) {
    write_file_atomic(path, format_signature(traj, header));
}

SigmaLogSignature read_parameters(const std::filesystem::path& path) {
    try {
        return parse_parameters(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_parameters(const std::filesystem::path& path, const SigmaLogSignature& sig) {
    write_file_atomic(path, format_parameters(sig));
}

}  // namespace airsig::io
