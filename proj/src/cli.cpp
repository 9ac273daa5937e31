#include "metriclab/cli.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/free_group.hpp"
#include "metriclab/qs.hpp"
#include "metriclab/space_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

namespace metriclab {

namespace {

constexpr const char* kModule = "cli";
namespace fs = std::filesystem;
using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

[[noreturn]] void usage(const std::string& msg) { fail(ErrorKind::malformed_input, kModule, msg); }

double plain_real(std::string_view text, std::string_view whole) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        usage("cannot parse number \"" + std::string(whole) + "\"");
    }
    return v;
}

long parse_integer(std::string_view text, std::string_view whole) {
    text = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        usage("expected an integer in \"" + std::string(whole) + "\"");
    }
    return v;
}

// ---------------------------------------------------------------------------
// space specs

class Params {
public:
    Params(const SpaceSpec& spec) : spec_(spec) {}

    std::optional<std::string> get(const std::string& key) {
        used_.insert(key);
        auto it = spec_.params.find(key);
        if (it == spec_.params.end()) return std::nullopt;
        return it->second;
    }
    std::string get_or(const std::string& key, const std::string& fallback) { return get(key).value_or(fallback); }
    double real_or(const std::string& key, double fallback) {
        auto v = get(key);
        return v ? parse_real(*v) : fallback;
    }
    long int_or(const std::string& key, long fallback) {
        auto v = get(key);
        return v ? parse_integer(*v, *v) : fallback;
    }
    void finish() const {
        for (const auto& [k, v] : spec_.params) {
            if (!used_.count(k)) usage("unknown key '" + k + "' for space kind " + spec_.kind);
        }
    }

private:
    const SpaceSpec& spec_;
    std::set<std::string> used_;
};

SlitSchedule schedule_from(Params& p) {
    const std::string r = p.get_or("r", "harmonic");
    auto levels = p.get("levels");
    if (r == "harmonic") {
        const long n = levels ? parse_integer(*levels, *levels) : 2;
        if (n < 1 || n > 12) usage("levels must lie in [1, 12]");
        return harmonic_schedule(static_cast<std::size_t>(n));
    }
    SlitSchedule s{parse_real_list(r)};
    if (levels) {
        const long n = parse_integer(*levels, *levels);
        if (n < 1 || n > 12) usage("levels must lie in [1, 12]");
        if (s.r.size() == 1) {
            s.r.assign(static_cast<std::size_t>(n), s.r.front());
        } else if (s.r.size() != static_cast<std::size_t>(n)) {
            usage("schedule lists " + std::to_string(s.r.size()) + " values but levels = " + std::to_string(n));
        }
    }
    validate_schedule(s);
    return s;
}

std::vector<double> flatness_from(Params& p) {
    const std::string l = p.get_or("l", "standard");
    if (l == "standard") return {};
    if (l == "flat") return flat_flatness(11);
    return parse_real_list(l);
}

CurveMetric curve_metric_from(Params& p) {
    const std::string m = p.get_or("metric", "arc");
    if (m == "arc") return CurveMetric::arc_length;
    if (m == "chordal") return CurveMetric::chordal;
    usage("curve metric must be arc or chordal, got \"" + m + "\"");
}

RugOptions rug_from(Params& p, bool wu) {
    RugOptions o;
    o.line = wu ? RugLine::wu : RugLine::snowflake;
    if (!wu) o.epsilon = p.real_or("epsilon", 0.5);
    o.dim = static_cast<int>(p.int_or("dim", 2));
    o.x0 = p.real_or("x0", 0.0);
    o.x1 = p.real_or("x1", 1.0);
    o.extent = p.real_or("extent", 1.0);
    if (wu) {
        const long n = p.int_or("truncation", 8);
        if (n < 1 || n > 30) usage("truncation must lie in [1, 30]");
        o.truncation = static_cast<std::size_t>(n);
        o.wu = default_wu_schedule(o.truncation);
    }
    return o;
}

/// Whole sample of a spec at mesh h (gen).
FiniteMetricSpace sample_space(const SpaceSpec& spec, double h) {
    Params p(spec);
    const std::string& k = spec.kind;
    if (k == "model") {
        const ModelKind kind = parse_model_kind(p.get_or("kind", "plane"));
        const double radius = p.real_or("radius", 1.0);
        p.finish();
        return model_tangent_space(kind, radius, h).space;
    }
    if (k == "snowflake") {
        auto stage = p.get("stage");
        if (stage) {
            auto flat = flatness_from(p);
            const double a = p.real_or("a", 0.0), b = p.real_or("b", 1.0);
            const CurveMetric metric = curve_metric_from(p);
            p.finish();
            return snowflake_polyline(static_cast<int>(parse_integer(*stage, *stage)), flat, a, b, metric);
        }
    }
    return make_generator(spec)->sample(h);
}

// ---------------------------------------------------------------------------
// shared output helpers

std::string csv_number(double v) { return format_number(v); }

json gh_to_json(const GhResult& r) {
    json j;
    j["lower"] = round12(r.lower);
    j["upper"] = round12(r.upper);
    j["exact"] = r.exact ? json(round12(*r.exact)) : json(nullptr);
    j["nodes"] = r.nodes;
    json pairs = json::array();
    if (r.witness) {
        for (auto [a, b] : r.witness->pairs) pairs.push_back({a, b});
    }
    j["witness"] = pairs;
    j["warnings"] = r.warnings;
    return j;
}

std::vector<std::size_t> read_assignment(const fs::path& path, std::size_t n) {
    const std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        usage(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
    const json& arr = doc.is_object() && doc.contains("assignment") ? doc["assignment"] : doc;
    if (!arr.is_array()) usage(path.string() + ": map must be an array or {\"assignment\": [...]}");
    std::vector<std::size_t> a;
    for (const auto& v : arr) {
        if (!v.is_number_unsigned()) usage(path.string() + ": map entries must be nonnegative integers");
        a.push_back(v.get<std::size_t>());
    }
    if (a.size() != n) {
        fail(ErrorKind::domain, "qs_analysis",
             "map has " + std::to_string(a.size()) + " entries for " + std::to_string(n) + " points");
    }
    return a;
}

std::vector<Breakpoint> read_eta_table(const fs::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::vector<Breakpoint> table;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t == "t,s") continue;
        const auto parts = split(t, ',');
        if (parts.size() != 2) usage(path.string() + ":" + std::to_string(lineno) + ": expected \"t,s\"");
        table.push_back({parse_real(parts[0]), parse_real(parts[1])});
    }
    return table;
}

std::string envelope_csv(const DistortionEnvelope& env) {
    std::string s = "t,s\n";
    for (const auto& b : env.points) s += csv_number(b.t) + "," + csv_number(b.s) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// subcommands

struct GenArgs {
    std::string kind, r, l, metric, line, h = "1/32", out, model, radius, a, b, stage, epsilon, dim, extent, truncation;
    std::string levels;
    std::string space;
};

int cmd_gen(const GenArgs& g, std::ostream& out) {
    SpaceSpec spec;
    if (!g.space.empty()) {
        if (!g.kind.empty()) usage("give either --space or --kind");
        spec = parse_space_spec(g.space);
    } else {
        if (g.kind.empty()) usage("gen needs --kind or --space");
        spec.kind = g.kind;
        auto put = [&](const char* key, const std::string& v) {
            if (!v.empty()) spec.params[key] = v;
        };
        put("r", g.r);
        put("levels", g.levels);
        put("l", g.l);
        put("metric", g.metric);
        put("kind", g.model);
        put("radius", g.radius);
        put("a", g.a);
        put("b", g.b);
        put("stage", g.stage);
        put("epsilon", g.epsilon);
        put("dim", g.dim);
        put("extent", g.extent);
        put("truncation", g.truncation);
    }
    const double h = parse_real(g.h);
    FiniteMetricSpace m = sample_space(spec, h);
    write_file_atomic(g.out, space_to_json(m));
    out << "gen: " << spec.kind << " with " << m.size() << " points, diameter " << format_number(m.diameter())
        << " -> " << g.out << "\n";
    return 0;
}

struct GhArgs {
    std::string x, y, out, mode = "auto";
    std::optional<std::size_t> base_x, base_y;
    std::uint64_t budget = GhOptions{}.node_budget;
    int restarts = GhOptions{}.restarts;
    std::uint64_t seed = 0;
};

int cmd_gh(const GhArgs& a, std::ostream& out) {
    const FiniteMetricSpace x = read_space_json(a.x);
    const FiniteMetricSpace y = read_space_json(a.y);
    if (a.base_x.has_value() != a.base_y.has_value()) usage("--base-x and --base-y go together");
    if (a.mode != "auto" && a.mode != "exact" && a.mode != "bounds") usage("--mode must be auto, exact or bounds");
    GhOptions o;
    o.node_budget = a.budget;
    o.restarts = a.restarts;
    o.seed = a.seed;
    const bool small = x.size() <= o.exact_max_points && y.size() <= o.exact_max_points;
    const bool exact = a.mode == "exact" || (a.mode == "auto" && small);
    GhResult r;
    if (a.base_x) {
        if (*a.base_x >= x.size() || *a.base_y >= y.size()) fail(ErrorKind::domain, "gh_solver", "base index out of range");
        const PointedWindow wx{x, *a.base_x, 1.0, x.eccentricity(*a.base_x)};
        const PointedWindow wy{y, *a.base_y, 1.0, y.eccentricity(*a.base_y)};
        if (exact) {
            r = pointed_gh_exact(wx, wy, o.node_budget);
        } else {
            o.exact_max_points = 0;
            r = pointed_gh_bounds(wx, wy, o);
        }
    } else {
        r = exact ? gh_exact_small(x, y, o.node_budget) : gh_bounds(x, y, o);
    }
    const std::string text = gh_to_json(r).dump() + "\n";
    if (a.out.empty()) {
        out << text;
    } else {
        write_file_atomic(a.out, text);
        out << "gh: lower " << format_number(r.lower) << ", upper " << format_number(r.upper) << ", exact "
            << (r.exact ? format_number(*r.exact) : std::string("null")) << "\n";
    }
    return 0;
}

struct ScanArgs {
    std::string space, center, scales = "2^-3..2^-6", models = "plane,half,quarter,t", out;
    std::string radius = "1", kappa = "64";
    std::uint64_t seed = 0;
    int restarts = 20;
    std::uint64_t budget = GhOptions{}.node_budget;
    bool no_timing = false;
};

int cmd_scan(const ScanArgs& a, std::ostream& out) {
    const SpaceSpec spec = parse_space_spec(a.space);
    auto gen = make_generator(spec);
    ScanConfig cfg;
    cfg.generator = gen.get();
    if (a.center.empty()) {
        cfg.center = spec.kind == "snowflake" ? std::vector<double>{0.5}
                     : spec.kind == "model"   ? std::vector<double>{0.0, 0.0}
                                              : std::vector<double>{0.5, 0.5};
    } else {
        cfg.center = parse_real_list(a.center);
    }
    cfg.scales = parse_scales(a.scales);
    cfg.radius = parse_real(a.radius);
    cfg.kappa = parse_real(a.kappa);
    for (auto m : split(a.models, ',')) cfg.models.push_back(parse_model_kind(trim(m)));
    cfg.gh.seed = a.seed;
    cfg.gh.restarts = a.restarts;
    cfg.gh.node_budget = a.budget;
    const ScanReport report = tangent_scan(cfg);

    std::string csv = "lambda,model,lower,upper,points,seconds\n";
    for (const auto& r : report.rows) {
        csv += csv_number(r.lambda) + "," + to_string(r.model) + "," + csv_number(r.lower) + "," + csv_number(r.upper) +
               "," + std::to_string(r.points) + "," + (a.no_timing ? std::string("NA") : csv_number(r.seconds)) + "\n";
    }
    if (a.out.empty()) {
        out << csv;
        return 0;
    }
    write_file_atomic(a.out, csv);
    out << "scan: " << report.rows.size() << " rows";
    if (cfg.scales.size() >= 3) {
        const Verdict& v = report.verdict;
        out << ", best " << to_string(v.model) << ", final upper " << format_number(v.final_upper) << ", trend "
            << to_string(v.trend);
    }
    out << " -> " << a.out << "\n";
    return 0;
}

struct QsArgs {
    std::string domain, codomain, map, budget = "1000000", eta, out;
    std::uint64_t seed = 0;
    bool invert = false;
};

int cmd_qs(const QsArgs& a, std::ostream& out) {
    FiniteMetricSpace d = read_space_json(a.domain);
    FiniteMetricSpace c = a.codomain.empty() ? d : read_space_json(a.codomain);
    SampledMap f{std::move(d), std::move(c), {}};
    if (a.map.empty()) {
        if (f.domain.size() != f.codomain.size()) {
            fail(ErrorKind::domain, "qs_analysis", "identity map needs spaces of equal size");
        }
        f = identity_map(std::move(f.domain), std::move(f.codomain));
    } else {
        f.assignment = read_assignment(a.map, f.domain.size());
    }
    std::optional<std::uint64_t> budget;
    if (a.budget != "all") {
        const long b = parse_integer(a.budget, a.budget);
        if (b <= 0) usage("--budget must be positive or \"all\"");
        budget = static_cast<std::uint64_t>(b);
    }
    DistortionEnvelope env = distortion_envelope(f, budget, a.seed);
    std::optional<EtaCheck> check;
    if (!a.eta.empty()) check = check_eta(env, read_eta_table(a.eta));
    if (a.invert) env = invert_envelope(env).envelope;
    const std::string csv = envelope_csv(env);
    if (a.out.empty()) {
        out << csv;
    } else {
        write_file_atomic(a.out, csv);
        out << "qs: " << env.points.size() << " breakpoints -> " << a.out << "\n";
    }
    if (check) {
        if (check->ok) {
            out << "eta: holds\n";
        } else {
            out << "eta: violated at t " << format_number(check->worst->t) << ", envelope "
                << format_number(check->worst->envelope) << ", eta " << format_number(check->worst->eta) << "\n";
        }
    }
    return 0;
}

struct BoundaryArgs {
    int rank = 2, depth = 5;
    std::string base = "2", cylinder, out;
    bool probe = false;
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
};

int cmd_boundary(const BoundaryArgs& a, std::ostream& out) {
    const double base = parse_real(a.base);
    json doc;
    doc["rank"] = a.rank;
    doc["depth"] = a.depth;
    if (a.cylinder.empty()) {
        if (a.probe) usage("--probe-expansion needs --cylinder");
        const auto words = enumerate_boundary(a.rank, a.depth);
        const BoundaryPoint p = make_boundary_point(words.front(), a.rank);
        CylinderBall ball = cylinder_ball(p, 0, a.rank, base, a.samples, a.seed);
        doc["points"] = ball.points.size();
        if (!a.out.empty()) write_file_atomic(a.out, space_to_json(ball.space));
        out << "boundary: " << ball.points.size() << " points at depth " << a.depth << "\n";
        return 0;
    }
    const auto colon = a.cylinder.find(':');
    if (colon == std::string::npos) usage("--cylinder expects word:m");
    Word word = a.cylinder.substr(0, colon);
    const long m = parse_integer(std::string_view(a.cylinder).substr(colon + 1), a.cylinder);
    if (word.empty()) usage("--cylinder word is empty");
    if (static_cast<int>(word.size()) > a.depth) {
        fail(ErrorKind::domain, "boundary_free_group", "cylinder word is longer than the depth");
    }
    while (static_cast<int>(word.size()) < a.depth) word.push_back(word.back());
    const BoundaryPoint p = make_boundary_point(word, a.rank);
    CylinderBall ball = cylinder_ball(p, static_cast<int>(m), a.rank, base, a.samples, a.seed);
    if (!a.out.empty()) write_file_atomic(a.out, space_to_json(ball.space));
    out << "boundary: cylinder " << p.prefix.substr(0, static_cast<std::size_t>(m)) << " at depth " << a.depth << " has "
        << ball.points.size() << " points";
    if (!a.samples) out << " (expected " << cylinder_size(a.rank, a.depth, static_cast<int>(m)) << ")";
    out << "\n";
    if (a.probe) {
        const ExpansionStats s = expansion_factor_probe(p, static_cast<int>(m), a.rank, base, a.samples, a.seed);
        out << "expansion: " << s.pairs << " pairs, ratio min " << format_number(s.min) << ", max "
            << format_number(s.max) << ", mean " << format_number(s.mean) << ", exponent [" << s.exponent_min << ", "
            << s.exponent_max << "]\n";
    }
    return 0;
}

struct ValidateArgs {
    std::string in, scales;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    const FiniteMetricSpace m = read_space_json(a.in);
    const ValidationReport rep = validate_metric(m);
    if (!rep.ok()) {
        for (const auto& v : rep.violations) {
            err << "metric_core: " << to_string(v.axiom) << " violation at (" << v.i << ", " << v.k << ", " << v.j
                << "), magnitude " << format_number(v.magnitude) << "\n";
        }
        return 1;
    }
    out << "validate: ok, " << m.size() << " points, diameter " << format_number(m.diameter());
    if (!a.scales.empty()) {
        const auto scales = parse_scales(a.scales);
        const GeometryStats s = geometry_stats(m, scales);
        out << ", doubling " << s.doubling_estimate << ", perfectness "
            << (s.perfectness_constant ? format_number(*s.perfectness_constant) : std::string("none"));
    }
    out << "\n";
    return 0;
}

std::vector<std::string> output_paths(const std::vector<std::string>& args) {
    std::vector<std::string> paths;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--out") paths.push_back(args[i + 1]);
    }
    for (const auto& a : args) {
        if (a.rfind("--out=", 0) == 0) paths.push_back(a.substr(6));
    }
    return paths;
}

int cmd_reproduce(const std::string& manifest_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    const std::string text = read_text_file(manifest_path);
    json manifest;
    try {
        manifest = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        usage(manifest_path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
    if (!manifest.is_object() || !manifest.contains("experiments") || !manifest["experiments"].is_array()) {
        usage(manifest_path + ": expected {\"experiments\": [...]}");
    }
    const fs::path root = fs::path(manifest_path).parent_path();
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    json index;
    index["experiments"] = json::array();
    bool failed = false;
    std::size_t count = 0;
    for (const auto& e : manifest["experiments"]) {
        ++count;
        if (!e.is_object() || !e.contains("name") || !e.contains("spec") || !e["name"].is_string() ||
            !e["spec"].is_string()) {
            usage(manifest_path + ": each experiment needs string fields name and spec");
        }
        const std::string name = e["name"].get<std::string>();
        const std::string spec_name = e["spec"].get<std::string>();
        json entry{{"name", name}, {"spec", spec_name}};
        const fs::path spec_path = root / spec_name;
        if (!fs::exists(spec_path)) {
            entry["status"] = "missing";
            entry["exit"] = nullptr;
            entry["outputs"] = json::array();
            err << "cli: experiment " << name << ": spec file " << spec_name << " not found\n";
            failed = true;
            index["experiments"].push_back(entry);
            continue;
        }
        std::vector<std::string> args;
        int code = 2;
        try {
            const json spec = json::parse(read_text_file(spec_path));
            if (!spec.contains("args") || !spec["args"].is_array()) usage(spec_name + ": expected {\"args\": [...]}");
            for (const auto& a : spec["args"]) {
                std::string s = a.get<std::string>();
                for (std::size_t pos; (pos = s.find("{out}")) != std::string::npos;) s.replace(pos, 5, dir.string());
                args.push_back(s);
            }
            if (!args.empty() && args.front() == "reproduce") usage(spec_name + ": nested reproduce is not allowed");
            std::ostringstream sink;
            code = run_command(args, sink, err);
        } catch (const json::exception& ex) {
            err << "cli: experiment " << name << ": " << ex.what() << "\n";
        } catch (const LabError& ex) {
            err << ex.module() << ": " << ex.what() << "\n";
        }
        entry["exit"] = code;
        entry["status"] = code == 0 ? "ok" : "failed";
        failed = failed || code != 0;
        json outputs = json::array();
        for (const auto& p : output_paths(args)) {
            const fs::path path(p);
            json o{{"path", path.lexically_relative(dir).generic_string()}};
            if (code == 0 && fs::exists(path)) {
                o["fnv1a64"] = fnv1a64_hex(read_text_file(path));
            } else {
                o["fnv1a64"] = nullptr;
            }
            outputs.push_back(o);
        }
        entry["outputs"] = outputs;
        index["experiments"].push_back(entry);
    }
    index["status"] = failed ? "failed" : "ok";
    const fs::path index_path = dir / "index.json";
    write_file_atomic(index_path, index.dump(2) + "\n");
    out << "reproduce: " << count << " experiments, " << (failed ? "failed" : "ok") << " -> " << index_path.string()
        << "\n";
    return failed ? 1 : 0;
}

}  // namespace

double parse_real(std::string_view text) {
    const std::string_view t = trim(text);
    if (const auto slash = t.find('/'); slash != std::string_view::npos) {
        const double num = plain_real(t.substr(0, slash), text);
        const double den = plain_real(t.substr(slash + 1), text);
        if (den == 0.0) usage("zero denominator in \"" + std::string(text) + "\"");
        return num / den;
    }
    if (const auto caret = t.find('^'); caret != std::string_view::npos) {
        const double base = plain_real(t.substr(0, caret), text);
        const double exponent = plain_real(t.substr(caret + 1), text);
        const double v = std::pow(base, exponent);
        if (!std::isfinite(v)) usage("number out of range: \"" + std::string(text) + "\"");
        return v;
    }
    return plain_real(t, text);
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> v;
    for (auto part : split(text, ',')) v.push_back(parse_real(part));
    return v;
}

std::vector<double> parse_scales(std::string_view text) {
    const std::string_view t = trim(text);
    const auto dots = t.find("..");
    if (dots == std::string_view::npos) return parse_real_list(t);
    auto power = [&](std::string_view s) {
        s = trim(s);
        const auto caret = s.find('^');
        if (caret == std::string_view::npos) usage("range ends must look like 2^-k: \"" + std::string(text) + "\"");
        return std::pair{plain_real(s.substr(0, caret), text), parse_integer(s.substr(caret + 1), text)};
    };
    const auto [b0, e0] = power(t.substr(0, dots));
    const auto [b1, e1] = power(t.substr(dots + 2));
    if (b0 != b1 || !(b0 > 1.0)) usage("range ends need one common base above 1: \"" + std::string(text) + "\"");
    if (e1 > e0) usage("scale range must decrease: \"" + std::string(text) + "\"");
    std::vector<double> v;
    for (long e = e0; e >= e1; --e) v.push_back(std::pow(b0, static_cast<double>(e)));
    return v;
}

SpaceSpec parse_space_spec(std::string_view text) {
    const std::string_view t = trim(text);
    SpaceSpec spec;
    const auto colon = t.find(':');
    spec.kind = std::string(trim(t.substr(0, colon)));
    if (spec.kind.empty()) usage("space spec has no kind: \"" + std::string(text) + "\"");
    if (colon == std::string_view::npos) return spec;
    for (auto item : split(t.substr(colon + 1), ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) usage("space spec entry \"" + std::string(item) + "\" lacks '='");
        const std::string key(trim(item.substr(0, eq)));
        if (key.empty()) usage("space spec entry \"" + std::string(item) + "\" has no key");
        if (!spec.params.emplace(key, std::string(trim(item.substr(eq + 1)))).second) {
            usage("space spec repeats key '" + key + "'");
        }
    }
    return spec;
}

std::unique_ptr<SpaceGenerator> make_generator(const SpaceSpec& spec) {
    Params p(spec);
    std::unique_ptr<SpaceGenerator> gen;
    const std::string& k = spec.kind;
    if (k == "square") {
        gen = make_square_generator();
    } else if (k == "plane") {
        gen = make_plane_generator();
    } else if (k == "slit-carpet" || k == "pillow-carpet") {
        gen = make_carpet_generator(schedule_from(p), k == "pillow-carpet");
    } else if (k == "snowflake") {
        auto flat = flatness_from(p);
        const double a = p.real_or("a", 0.0), b = p.real_or("b", 1.0);
        gen = make_snowflake_generator(std::move(flat), a, b, curve_metric_from(p));
    } else if (k == "wu-rug" || k == "rickman-rug") {
        gen = make_rug_generator(rug_from(p, k == "wu-rug"));
    } else if (k == "model") {
        gen = make_model_generator(parse_model_kind(p.get_or("kind", "plane")));
    } else {
        usage("unknown space kind \"" + k + "\"");
    }
    p.finish();
    return gen;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite metric geometry laboratory", "metric_lab"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help and exit");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a finite space and write it as JSON");
    g->add_option("--kind", gen.kind, "square, slit-carpet, pillow-carpet, snowflake, wu-rug, rickman-rug, model");
    g->add_option("--space", gen.space, "Space spec kind:key=value;...");
    g->add_option("--r", gen.r, "Slit schedule: comma list or harmonic");
    g->add_option("--levels", gen.levels, "Number of slit generations");
    g->add_option("--h", gen.h, "Mesh, e.g. 1/64");
    g->add_option("--l", gen.l, "Snowflake flatness: standard, flat or a comma list");
    g->add_option("--stage", gen.stage, "Snowflake stage (default: from --h)");
    g->add_option("--metric", gen.metric, "Snowflake metric: arc or chordal");
    g->add_option("--a", gen.a, "Snowflake window start");
    g->add_option("--b", gen.b, "Snowflake window end");
    g->add_option("--model", gen.model, "Model tangent kind for --kind model");
    g->add_option("--radius", gen.radius, "Model window radius");
    g->add_option("--epsilon", gen.epsilon, "Rug snowflake exponent");
    g->add_option("--dim", gen.dim, "Rug dimension");
    g->add_option("--extent", gen.extent, "Rug extent of the Euclidean factor");
    g->add_option("--truncation", gen.truncation, "Number of Wu intervals");
    g->add_option("--out", gen.out, "Output JSON path")->required();

    GhArgs gh;
    auto* h = app.add_subcommand("gh", "Gromov-Hausdorff distance between two spaces");
    h->add_option("--x", gh.x, "First space JSON")->required();
    h->add_option("--y", gh.y, "Second space JSON")->required();
    h->add_option("--mode", gh.mode, "auto, exact or bounds");
    h->add_option("--base-x", gh.base_x, "Base point of X (pointed distance)");
    h->add_option("--base-y", gh.base_y, "Base point of Y (pointed distance)");
    h->add_option("--budget", gh.budget, "Branch-and-bound node budget");
    h->add_option("--restarts", gh.restarts, "Local-search restarts");
    h->add_option("--seed", gh.seed, "Random seed");
    h->add_option("--out", gh.out, "Output JSON path");

    ScanArgs scan;
    auto* s = app.add_subcommand("scan", "Blow-up scan against model tangents");
    s->add_option("--space", scan.space, "Space spec kind:key=value;...")->required();
    s->add_option("--center", scan.center, "Center point, comma separated");
    s->add_option("--scales", scan.scales, "Scales: 2^-a..2^-b or a comma list");
    s->add_option("--radius", scan.radius, "Window radius after rescaling");
    s->add_option("--models", scan.models, "Comma list of plane, half, quarter, t, l, d, line");
    s->add_option("--kappa", scan.kappa, "Resolution divisor: h = lambda / kappa");
    s->add_option("--seed", scan.seed, "Random seed");
    s->add_option("--restarts", scan.restarts, "Local-search restarts per comparison");
    s->add_option("--budget", scan.budget, "Branch-and-bound node budget");
    s->add_flag("--no-timing", scan.no_timing, "Write NA in the seconds column");
    s->add_option("--out", scan.out, "Output CSV path");

    QsArgs qs;
    auto* q = app.add_subcommand("qs", "Quasisymmetric distortion envelope of a sampled map");
    q->add_option("--domain", qs.domain, "Domain space JSON")->required();
    q->add_option("--codomain", qs.codomain, "Codomain space JSON (default: the domain)");
    q->add_option("--map", qs.map, "Assignment JSON (default: identity)");
    q->add_option("--budget", qs.budget, "Triple budget or all");
    q->add_option("--seed", qs.seed, "Sampling seed");
    q->add_option("--eta", qs.eta, "Candidate eta as a t,s CSV table");
    q->add_flag("--invert", qs.invert, "Write the inverted envelope");
    q->add_option("--out", qs.out, "Output CSV path");

    BoundaryArgs bd;
    auto* b = app.add_subcommand("boundary", "Free-group boundary cylinders and expansion");
    b->add_option("--rank", bd.rank, "Rank of the free group");
    b->add_option("--depth", bd.depth, "Truncation depth");
    b->add_option("--base", bd.base, "Visual metric base");
    b->add_option("--cylinder", bd.cylinder, "word:m");
    b->add_flag("--probe-expansion", bd.probe, "Measure expansion of the cylinder map");
    b->add_option("--samples", bd.samples, "Sample this many cylinder points");
    b->add_option("--seed", bd.seed, "Sampling seed");
    b->add_option("--out", bd.out, "Write the cylinder as a space JSON");

    ValidateArgs va;
    auto* v = app.add_subcommand("validate", "Check the metric axioms of a space JSON");
    v->add_option("input,--in", va.in, "Space JSON")->required();
    v->add_option("--scales", va.scales, "Also report geometry statistics at these scales");

    std::string manifest, out_dir = "reproduce-out";
    auto* r = app.add_subcommand("reproduce", "Run a manifest of experiments");
    r->add_option("manifest,--manifest", manifest, "Manifest JSON")->required();
    r->add_option("--out-dir", out_dir, "Directory for outputs and index.json");

    std::vector<std::string> storage{"metric_lab"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (g->parsed()) return cmd_gen(gen, out);
        if (h->parsed()) return cmd_gh(gh, out);
        if (s->parsed()) return cmd_scan(scan, out);
        if (q->parsed()) return cmd_qs(qs, out);
        if (b->parsed()) return cmd_boundary(bd, out);
        if (v->parsed()) return cmd_validate(va, out, err);
        if (r->parsed()) return cmd_reproduce(manifest, out_dir, out, err);
    } catch (const LabError& e) {
        err << e.module() << ": " << e.what() << "\n";
        return e.kind() == ErrorKind::malformed_input ? 2 : 1;
    } catch (const std::bad_alloc&) {
        err << "cli: out of memory\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "cli: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace metriclab
