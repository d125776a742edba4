#include "airsig/dataset.hpp"

#include "airsig/error.hpp"
#include "airsig/estimate.hpp"
#include "airsig/full_synthesis.hpp"
#include "airsig/kinematic.hpp"
#include "airsig/parallel.hpp"
#include "airsig/random.hpp"
#include "airsig/timing.hpp"

#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace airsig::dataset {

namespace {

std::string format_distribution(const plan::DiscreteDistribution& d) {
    std::string out;
    for (const auto& [value, p] : d.entries) {
        if (!out.empty()) out += ',';
        out += std::to_string(value) + ":" + io::format_exact(p);
    }
    return out;
}

plan::DiscreteDistribution parse_distribution(std::string_view text) {
    plan::DiscreteDistribution d;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) throw FormatError("distribution entries are 'value:probability'");
        d.entries.emplace_back(static_cast<int>(io::parse_number(item.substr(0, colon))), io::parse_number(item.substr(colon + 1)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    try {
        d.validate();
    } catch (const InputError& e) {
        throw FormatError(e.what());
    }
    return d;
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "on") return true;
    if (text == "false" || text == "0" || text == "off") return false;
    throw FormatError("not a boolean: '" + std::string(text) + "'");
}

std::size_t parse_count(std::string_view text) { return static_cast<std::size_t>(io::parse_unsigned(text)); }

// Binds every config key to its field, for reading and writing alike.
struct Field {
    std::string key;
    std::function<std::string(const GenerationConfig&)> get;
    std::function<void(GenerationConfig&, std::string_view)> set;
};

template <class T>
Field number_field(std::string key, T GenerationConfig::*member) {
    return {std::move(key), [member](const GenerationConfig& c) { return io::format_exact(c.*member); },
            [member](GenerationConfig& c, std::string_view v) { c.*member = io::parse_number(v); }};
}

Field count_field(std::string key, std::size_t GenerationConfig::*member) {
    return {std::move(key), [member](const GenerationConfig& c) { return std::to_string(c.*member); },
            [member](GenerationConfig& c, std::string_view v) { c.*member = parse_count(v); }};
}

Field text_field(std::string key, std::string GenerationConfig::*member) {
    return {std::move(key), [member](const GenerationConfig& c) { return c.*member; },
            [member](GenerationConfig& c, std::string_view v) { c.*member = std::string(v); }};
}

// Field of a nested struct reached through `path`.
template <class Path>
Field real_field(std::string key, Path path) {
    return {std::move(key), [path](const GenerationConfig& c) { return io::format_exact(path(c)); },
            [path](GenerationConfig& c, std::string_view v) { path(c) = io::parse_number(v); }};
}

template <class Path>
Field int_field(std::string key, Path path) {
    return {std::move(key), [path](const GenerationConfig& c) { return std::to_string(path(c)); },
            [path](GenerationConfig& c, std::string_view v) { path(c) = static_cast<int>(io::parse_unsigned(v)); }};
}

template <class Path>
Field distribution_field(std::string key, Path path) {
    return {std::move(key), [path](const GenerationConfig& c) { return format_distribution(path(c)); },
            [path](GenerationConfig& c, std::string_view v) { path(c) = parse_distribution(v); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> all = [] {
        std::vector<Field> f;
        f.push_back(text_field("name", &GenerationConfig::name));
        f.push_back(text_field("preset", &GenerationConfig::preset));
        f.push_back(count_field("users", &GenerationConfig::users));
        f.push_back(count_field("genuine", &GenerationConfig::genuine));
        f.push_back(count_field("forgeries", &GenerationConfig::forgeries));
        f.push_back(number_field("fm", &GenerationConfig::f_m));
        f.push_back(distribution_field("words", [](auto& c) -> auto& { return c.morphology.word_count; }));
        f.push_back(distribution_field("letters", [](auto& c) -> auto& { return c.morphology.letters_per_word; }));
        f.push_back(distribution_field("points_per_letter",
                                       [](auto& c) -> auto& { return c.morphology.points_per_letter; }));
        f.push_back(real_field("flourish_probability", [](auto& c) -> auto& { return c.morphology.flourish_probability; }));
        f.push_back(real_field("canvas", [](auto& c) -> auto& { return c.morphology.canvas_size; }));
        f.push_back(real_field("surface_ax", [](auto& c) -> auto& { return c.surface.Ax; }));
        f.push_back(real_field("surface_ay", [](auto& c) -> auto& { return c.surface.Ay; }));
        f.push_back(real_field("surface_wx", [](auto& c) -> auto& { return c.surface.wx; }));
        f.push_back(real_field("surface_wy", [](auto& c) -> auto& { return c.surface.wy; }));
        f.push_back(real_field("surface_phx", [](auto& c) -> auto& { return c.surface.phx; }));
        f.push_back(real_field("surface_phy", [](auto& c) -> auto& { return c.surface.phy; }));
        f.push_back(number_field("gap_mean", &GenerationConfig::gap_mean));
        f.push_back(number_field("gap_sd", &GenerationConfig::gap_sd));
        f.push_back(number_field("m_genuine", &GenerationConfig::m_genuine));
        f.push_back(number_field("m_forgery", &GenerationConfig::m_forgery));
        f.push_back(number_field("rotation_scale", &GenerationConfig::rotation_scale));
        f.push_back(number_field("displacement_range", &GenerationConfig::displacement_range));
        f.push_back(number_field("insert_remove_max_fraction", &GenerationConfig::insert_remove_max_fraction));
        f.push_back({"affine", [](const GenerationConfig& c) { return std::string(c.affine ? "true" : "false"); },
                     [](GenerationConfig& c, std::string_view v) { c.affine = parse_bool(v); }});
        f.push_back(text_field("gesture_mode", &GenerationConfig::gesture_mode));
        f.push_back(count_field("classes", &GenerationConfig::classes));
        f.push_back(count_field("samples", &GenerationConfig::samples));
        f.push_back(real_field("gesture_cube", [](auto& c) -> auto& { return c.morphology.gesture.cube_size; }));
        f.push_back(int_field("gesture_points_min", [](auto& c) -> auto& { return c.morphology.gesture.min_points; }));
        f.push_back(int_field("gesture_points_max", [](auto& c) -> auto& { return c.morphology.gesture.max_points; }));
        f.push_back(real_field("sagitta_min", [](auto& c) -> auto& { return c.morphology.gesture.sagitta_min; }));
        f.push_back(real_field("sagitta_max", [](auto& c) -> auto& { return c.morphology.gesture.sagitta_max; }));
        f.push_back(int_field("gesture_letters_min", [](auto& c) -> auto& { return c.morphology.gesture.min_letters; }));
        f.push_back(int_field("gesture_letters_max", [](auto& c) -> auto& { return c.morphology.gesture.max_letters; }));
        return f;
    }();
    return all;
}

std::string two_digits(double percent) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", percent);
    return buf;
}

io::KeyValues specimen_header(std::size_t user, std::string_view kind, std::uint64_t seed, double m) {
    io::KeyValues h;
    h.set("user", std::to_string(user));
    h.set("kind", std::string(kind));
    h.set("seed", std::to_string(seed));
    h.set("m", io::format_exact(m));
    return h;
}

void write_manifest(const std::filesystem::path& out, Mode mode, std::uint64_t seed, const GenerationConfig& cfg) {
    DatabaseManifest m{mode, seed, cfg};
    io::write_file_atomic(out / kManifestName, m.format());
}

SigmaLogSignature timed_signature(plan::ActionPlan p, const GenerationConfig& cfg, std::uint64_t seed) {
    return fs::plan_to_signature(plan::assign_timestamps(std::move(p), seed, cfg.gap_mean, cfg.gap_sd));
}

void write_duplicates(const SigmaLogSignature& master, const GenerationConfig& cfg, std::uint64_t seed,
                      const std::filesystem::path& out, std::size_t user, bool genuine, std::size_t count) {
    const auto kind = genuine ? ds::DuplicateKind::genuine : ds::DuplicateKind::forgery;
    for (std::size_t n = 0; n < count; ++n) {
        const auto s = derive_seed(seed, {user, genuine ? 2u : 3u, n});
        const auto dcfg = cfg.duplication(kind, s);
        const auto dup = ds::duplicate_signature(master, dcfg, cfg.f_m);
        io::write_signature(specimen_path(out, user, genuine, n), dup.rendered.trajectory,
                            specimen_header(user, genuine ? "genuine" : "forgery", s, dcfg.m));
    }
}

}  // namespace

void GenerationConfig::validate() const {
    if (users == 0 || genuine == 0) throw InputError("config: users and genuine must be positive");
    if (!(f_m > 0.0)) throw InputError("config: fm must be positive");
    if (preset != "default" && preset != "mimic") throw InputError("config: preset must be 'default' or 'mimic'");
    if (gesture_mode != "points" && gesture_mode != "letters") throw InputError("config: gesture_mode must be 'points' or 'letters'");
    if (classes == 0 || samples == 0) throw InputError("config: classes and samples must be positive");
    if (!(gap_mean > 0.0) || !(gap_sd >= 0.0)) throw InputError("config: gap_mean must be positive and gap_sd nonnegative");
    morphology.validate();
    surface.validate();
    duplication(ds::DuplicateKind::genuine, 0).validate();
    duplication(ds::DuplicateKind::forgery, 0).validate();
}

io::KeyValues GenerationConfig::to_key_values() const {
    io::KeyValues kv;
    for (const auto& f : fields()) kv.set(f.key, f.get(*this));
    return kv;
}

GenerationConfig GenerationConfig::from_key_values(const io::KeyValues& kv) {
    GenerationConfig cfg;
    if (auto preset = kv.get("preset")) {
        cfg.preset = *preset;
        if (cfg.preset == "mimic") {
            cfg.rotation_scale = kMimicRotationScale;
            cfg.m_forgery = kMimicForgeryLevel;
        }
    }
    bool surface_given = false;
    for (const auto& [key, value] : kv.items()) {
        const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) { return f.key == key; });
        if (it == fields().end()) throw FormatError("config: unknown key '" + key + "'");
        try {
            it->set(cfg, value);
        } catch (const FormatError& e) {
            throw FormatError("config: " + key + ": " + e.what());
        }
        surface_given = surface_given || key.starts_with("surface_");
    }
    if (!surface_given) cfg.surface = plan::SurfaceConfig::for_canvas(cfg.morphology.canvas_size);
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw FormatError(e.what());
    }
    return cfg;
}

GenerationConfig GenerationConfig::load(const std::filesystem::path& path) {
    try {
        return from_key_values(io::KeyValues::parse(io::read_file(path)));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

ds::DuplicationConfig GenerationConfig::duplication(ds::DuplicateKind kind, std::uint64_t seed) const {
    auto d = ds::DuplicationConfig::for_kind(kind, seed);
    d.m = kind == ds::DuplicateKind::genuine ? m_genuine : m_forgery;
    d.rotation_scale = rotation_scale;
    d.displacement_range = displacement_range;
    d.insert_remove_max_fraction = insert_remove_max_fraction;
    d.affine_enabled = affine;
    return d;
}

std::string DatabaseManifest::format() const {
    io::KeyValues kv;
    kv.set("format", "airsig-manifest v1");
    kv.set("mode", mode == Mode::fs_ds ? "fs+ds" : "gesture");
    kv.set("seed", std::to_string(seed));
    const auto snapshot = config.to_key_values();
    for (const auto& [k, v] : snapshot.items()) kv.set(k, v);
    return "# airsig database manifest\n" + kv.format();
}

DatabaseManifest DatabaseManifest::parse(std::string_view text) {
    const auto kv = io::KeyValues::parse(text);
    if (kv.at("format") != "airsig-manifest v1") throw FormatError("manifest: unsupported format '" + kv.at("format") + "'");
    DatabaseManifest m;
    const auto& mode = kv.at("mode");
    if (mode == "fs+ds") {
        m.mode = Mode::fs_ds;
    } else if (mode == "gesture") {
        m.mode = Mode::gesture;
    } else {
        throw FormatError("manifest: unknown mode '" + mode + "'");
    }
    m.seed = io::parse_unsigned(kv.at("seed"));
    io::KeyValues rest;
    for (const auto& [k, v] : kv.items()) {
        if (k != "format" && k != "mode" && k != "seed") rest.set(k, v);
    }
    m.config = GenerationConfig::from_key_values(rest);
    return m;
}

std::filesystem::path specimen_path(const std::filesystem::path& db, std::size_t user, bool genuine, std::size_t n) {
    char user_dir[32];
    char file[32];
    std::snprintf(user_dir, sizeof user_dir, "%03zu", user);
    std::snprintf(file, sizeof file, "%03zu.sig", n);
    return db / user_dir / (genuine ? "genuine" : "forgery") / file;
}

std::filesystem::path master_path(const std::filesystem::path& db, std::size_t user) {
    char user_dir[32];
    std::snprintf(user_dir, sizeof user_dir, "%03zu", user);
    return db / user_dir / "master.params";
}

void synth_full(const GenerationConfig& cfg, std::uint64_t seed, const std::filesystem::path& out, unsigned jobs) {
    cfg.validate();
    parallel_for(cfg.users, jobs, [&](std::size_t u) {
        const auto layout = plan::generate_morphology_2d(cfg.morphology, derive_seed(seed, {u, 0}));
        const auto master = timed_signature(plan::lift_to_plan(layout, cfg.surface), cfg, derive_seed(seed, {u, 1}));
        io::write_parameters(master_path(out, u), master);
        write_duplicates(master, cfg, seed, out, u, true, cfg.genuine);
        write_duplicates(master, cfg, seed, out, u, false, cfg.forgeries);
    });
    write_manifest(out, Mode::fs_ds, seed, cfg);
}

void gesture_db(const GenerationConfig& cfg, std::uint64_t seed, const std::filesystem::path& out, unsigned jobs) {
    cfg.validate();
    parallel_for(cfg.classes, jobs, [&](std::size_t c) {
        plan::ActionPlan p;
        if (cfg.gesture_mode == "letters") {
            Rng rng = make_rng(seed, {c, 0});
            const auto word = plan::random_word(cfg.morphology, rng);
            p = plan::lift_to_plan(plan::text_morphology_2d(word, cfg.morphology, derive_seed(seed, {c, 1})), cfg.surface);
        } else {
            p = plan::generate_gesture_plan(cfg.morphology, derive_seed(seed, {c, 0}));
        }
        const auto master = timed_signature(std::move(p), cfg, derive_seed(seed, {c, 4}));
        io::write_parameters(master_path(out, c), master);
        write_duplicates(master, cfg, seed, out, c, true, cfg.samples);
    });
    write_manifest(out, Mode::gesture, seed, cfg);
}

DatabaseManifest read_manifest(const std::filesystem::path& db) {
    const auto path = db / kManifestName;
    try {
        return DatabaseManifest::parse(io::read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void regenerate(const std::filesystem::path& db, const std::filesystem::path& out, unsigned jobs) {
    const auto m = read_manifest(db);
    if (m.mode == Mode::fs_ds) {
        synth_full(m.config, m.seed, out, jobs);
    } else {
        gesture_db(m.config, m.seed, out, jobs);
    }
}

std::vector<KinematicsRow> synth_kinematics(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out, double f_m,
                                            std::uint64_t seed, unsigned jobs) {
    if (!(f_m > 0.0)) throw InputError("synth-kinematics: fm must be positive");
    std::vector<KinematicsRow> rows(inputs.size());
    parallel_for(inputs.size(), jobs, [&](std::size_t i) {
        auto& row = rows[i];
        row.file = inputs[i].string();
        try {
            const auto input = io::read_signature(inputs[i]);
            const auto s = derive_seed(seed, {i});
            const auto ks = ks::synthesize_kinematics(input.trajectory.bare(), f_m, s);
            io::KeyValues h;
            h.set("source", inputs[i].filename().string());
            h.set("seed", std::to_string(s));
            h.set("salient", std::to_string(ks.salient.size()));
            h.set("omega", io::format_exact(ks.profile.omega));
            io::write_signature(out / (inputs[i].stem().string() + ".sig"), ks.trajectory, h);
            row.ok = true;
            row.salient = ks.salient.size();
            row.strokes = ks.profile.strokes.size();
            row.omega = ks.profile.omega;
            row.path_length = ks.path_length;
            row.duration = ks.profile.duration;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    std::string report = "# file salient strokes omega path_length duration status\n";
    for (const auto& r : rows) {
        report += r.file + " " + std::to_string(r.salient) + " " + std::to_string(r.strokes) + " " +
                  io::format_number(r.omega, 9) + " " + io::format_number(r.path_length, 9) + " " +
                  io::format_number(r.duration, 9) + " " + (r.ok ? "ok" : "failed") + "\n";
    }
    io::write_file_atomic(out / "kinematics.report", report);
    return rows;
}

std::vector<std::filesystem::path> duplicate(const DuplicateRequest& request) {
    SigmaLogSignature sig;
    double f_m = request.f_m;
    try {
        if (request.input.extension() == ".params") {
            sig = io::read_parameters(request.input);
        } else {
            const auto file = io::read_signature(request.input);
            if (!file.trajectory.timed()) throw InputError("trajectory has no timestamps");
            if (file.trajectory.sampling_rate()) f_m = *file.trajectory.sampling_rate();
            sig = ks::estimate_parameters(file.trajectory).signature;
        }
    } catch (const std::exception& e) {
        throw InputError("cannot parametrize '" + request.input.string() + "': " + e.what());
    }
    std::vector<std::filesystem::path> written;
    for (std::size_t i = 0; i < request.count; ++i) {
        auto cfg = request.config;
        cfg.seed = request.config.seed + i;
        const auto dup = ds::duplicate_signature(sig, cfg, f_m);
        io::KeyValues h;
        h.set("source", request.input.filename().string());
        h.set("kind", cfg.kind == ds::DuplicateKind::genuine ? "genuine" : "forgery");
        h.set("m", io::format_exact(cfg.m));
        h.set("seed", std::to_string(cfg.seed));
        const auto path = request.out / (request.input.stem().string() + "_dup" + std::to_string(i) + ".sig");
        io::write_signature(path, dup.rendered.trajectory, h);
        written.push_back(path);
    }
    return written;
}

verify::Database load_database(const std::filesystem::path& db) {
    const auto m = read_manifest(db);
    verify::Database out;
    out.f_m = m.config.f_m;
    const bool gesture = m.mode == Mode::gesture;
    const std::size_t users = gesture ? m.config.classes : m.config.users;
    for (std::size_t u = 0; u < users; ++u) {
        verify::UserSpecimens us;
        for (std::size_t n = 0; n < (gesture ? m.config.samples : m.config.genuine); ++n) {
            us.genuine.push_back(io::read_signature(specimen_path(db, u, true, n)).trajectory);
        }
        for (std::size_t n = 0; !gesture && n < m.config.forgeries; ++n) {
            us.forgery.push_back(io::read_signature(specimen_path(db, u, false, n)).trajectory);
        }
        out.users.push_back(std::move(us));
    }
    return out;
}

std::vector<std::vector<Trajectory3D>> load_classes(const std::filesystem::path& db) {
    std::vector<std::vector<Trajectory3D>> classes;
    for (auto& user : load_database(db).users) classes.push_back(std::move(user.genuine));
    return classes;
}

std::string run_evaluation(const std::filesystem::path& db, const verify::ExperimentProtocol& protocol, const std::filesystem::path& out) {
    const auto data = load_database(db);
    struct Run {
        std::string label;
        verify::VerificationReport report;
    };
    std::vector<Run> runs;
    auto baseline = protocol;
    baseline.duplicates_per_training = 0;
    runs.push_back({"baseline", verify::evaluate(data, baseline)});
    if (protocol.duplicates_per_training > 0) {
        runs.push_back({"duplicates=" + std::to_string(protocol.duplicates_per_training), verify::evaluate(data, protocol)});
    }

    std::ostringstream s;
    s << "# verifier " << (protocol.verifier == verify::Verifier::dtw ? "dtw" : "man") << ", train " << protocol.train_genuine_count
      << ", repetitions " << protocol.repetitions << ", seed " << protocol.seed << "\n";
    s << "run random_eer_% skilled_eer_% random_auc skilled_auc\n";
    for (const auto& r : runs) {
        s << r.label << " " << two_digits(100.0 * r.report.random_eer) << " " << two_digits(100.0 * r.report.skilled_eer) << " "
          << io::format_number(r.report.random_auc, 6) << " " << io::format_number(r.report.skilled_auc, 6) << "\n";
    }
    s << "# per repetition: run rep random_eer_% skilled_eer_%\n";
    for (const auto& r : runs) {
        for (std::size_t k = 0; k < r.report.repetitions.size(); ++k) {
            s << "# " << r.label << " " << k << " " << two_digits(100.0 * r.report.repetitions[k].random.eer) << " "
              << two_digits(100.0 * r.report.repetitions[k].skilled.eer) << "\n";
        }
    }
    const std::string summary = s.str();
    io::write_file_atomic(out / "summary.txt", summary);
    for (const auto& r : runs) {
        const std::string suffix = r.label == "baseline" ? "" : "_dup" + std::to_string(protocol.duplicates_per_training);
        const auto curve = [&](const std::vector<double>& frr) {
            std::string text = "# far frr\n";
            for (std::size_t k = 0; k < r.report.far_grid.size(); ++k) {
                text += io::format_number(r.report.far_grid[k], 6) + " " + io::format_number(frr[k], 6) + "\n";
            }
            return text;
        };
        io::write_file_atomic(out / ("det_random" + suffix + ".txt"), curve(r.report.random_frr));
        io::write_file_atomic(out / ("det_skilled" + suffix + ".txt"), curve(r.report.skilled_frr));
    }
    return summary;
}

std::string run_classification(const std::filesystem::path& db, const verify::ExperimentProtocol& protocol, const std::filesystem::path& out) {
    const auto report = verify::classify_cmc(load_classes(db), protocol);
    std::ostringstream s;
    s << "# nearest-template DTW identification, templates " << protocol.train_genuine_count << ", repetitions "
      << protocol.repetitions << ", seed " << protocol.seed << "\n";
    s << "rank1_% " << two_digits(100.0 * report.rank_accuracy.front()) << "\n";
    std::string cmc = "# rank accuracy\n";
    for (std::size_t k = 0; k < report.rank_accuracy.size(); ++k) {
        cmc += std::to_string(k + 1) + " " + io::format_number(report.rank_accuracy[k], 6) + "\n";
    }
    io::write_file_atomic(out / "summary.txt", s.str());
    io::write_file_atomic(out / "cmc.txt", cmc);
    return s.str();
}

}  // namespace airsig::dataset
