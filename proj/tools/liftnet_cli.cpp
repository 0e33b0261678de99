/**
 * Command-line front end for the lift-model pipeline.
 *
 * Subcommands: augment, train, eval, liftmap, trace. Every run writes a JSON
 * manifest recording the resolved configuration, CRC-32 fingerprints of all
 * inputs and outputs, the seed, and wall-clock time. Identical inputs and
 * seed produce byte-identical data outputs.
 *
 * Exit codes: 0 success; 2 usage, configuration or data-format problems;
 * 3 numeric failure (training divergence).
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <liftnet/csv.hpp>
#include <liftnet/dataset.hpp>
#include <liftnet/errors.hpp>
#include <liftnet/evalmetrics.hpp>
#include <liftnet/field3d.hpp>
#include <liftnet/flowfield.hpp>
#include <liftnet/hash.hpp>
#include <liftnet/lift_source.hpp>
#include <liftnet/neuralnet.hpp>
#include <liftnet/synthetic.hpp>
#include <liftnet/tracer.hpp>
#include <liftnet/version.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
using namespace liftnet;

namespace {

// ------------------------------------------------------------------ manifest

class Manifest {
public:
    Manifest(std::string subcommand, std::uint64_t seed)
        : start_(std::chrono::steady_clock::now()) {
        j_["subcommand"] = std::move(subcommand);
        j_["version"] = version_string;
        j_["seed"] = seed;
        j_["inputs"] = json::object();
        j_["outputs"] = json::object();
    }

    void config(json resolved) { j_["config"] = std::move(resolved); }

    void input(const std::string& role, const std::string& path) {
        j_["inputs"][role] = {{"path", path}, {"crc32", crc32_hex(crc32_file(path))}};
    }

    void output(const std::string& role, const std::string& path) {
        j_["outputs"][role] = {{"path", path}, {"crc32", crc32_hex(crc32_file(path))}};
    }

    json& extra() { return j_; }

    void write(const std::string& path) {
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
        j_["wall_clock_s"] = elapsed;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw format_error("cannot write manifest " + path);
        out << j_.dump(2) << '\n';
    }

private:
    json j_;
    std::chrono::steady_clock::time_point start_;
};

// ------------------------------------------------------------------- helpers

std::string default_manifest_path(const std::string& primary_output) {
    return primary_output + ".manifest.json";
}

/// "0.7,0.15,0.15" -> SplitSpec fractions.
SplitSpec parse_split(const std::string& s, std::uint64_t seed) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(csv::to_double(item));
    if (parts.size() != 3)
        throw config_error("--split expects three comma-separated fractions");
    SplitSpec spec;
    spec.train = parts[0];
    spec.val = parts[1];
    spec.test = parts[2];
    spec.seed = seed;
    return spec;
}

std::vector<int> parse_layers(const std::string& s) {
    std::vector<int> sizes;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double v = csv::to_double(item);
        if (v != std::floor(v) || v < 1)
            throw config_error("--layers entries must be positive integers");
        sizes.push_back(static_cast<int>(v));
    }
    if (sizes.size() < 2) throw config_error("--layers needs at least two sizes");
    return sizes;
}

/// Geometry spec: rect:W:H | circle:D | triangle:S | gridded:PATH[:ORDER],
/// lengths in meters.
std::unique_ptr<ChannelField> make_field(const std::string& spec, double U_m) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw config_error("--geometry must not be empty");
    try {
        if (parts[0] == "rect" && parts.size() == 3)
            return rect_duct_field(csv::to_double(parts[1]), csv::to_double(parts[2]),
                                   U_m);
        if (parts[0] == "circle" && parts.size() == 2)
            return circular_field(csv::to_double(parts[1]), U_m);
        if (parts[0] == "triangle" && parts.size() == 2)
            return equilateral_triangle_field(csv::to_double(parts[1]), U_m);
        if (parts[0] == "gridded" && (parts.size() == 2 || parts.size() == 3)) {
            const int order = parts.size() == 3
                                  ? static_cast<int>(csv::to_double(parts[2]))
                                  : 3;
            return load_gridded_field(parts[1], order);
        }
    } catch (const domain_error& e) {
        throw config_error("--geometry '" + spec + "': " + e.what());
    }
    throw config_error("--geometry '" + spec +
                       "' not understood (rect:W:H, circle:D, triangle:S, "
                       "gridded:PATH[:ORDER])");
}

Batch to_batch(const std::vector<LiftSample>& samples) {
    Batch b;
    b.in = FeatureVector::width;
    b.out = 2;
    b.reserve_rows(samples.size());
    for (const auto& s : samples) {
        const auto x = sample_features(s).as_array();
        const double y[2] = {s.target.C_Lx, s.target.C_Ly};
        b.push_row(x.data(), y);
    }
    return b;
}

json load_options_json(const LoadOptions& opts) {
    return {{"strict", opts.strict}, {"su_format", opts.su_format}};
}

// ------------------------------------------------------------------- augment

struct AugmentOpts {
    std::string input, output, manifest;
    double delta_theta_deg = 20.0;
    bool flip = true;
    bool paper_exact = false;
    std::string split; // empty = no split
    std::uint64_t seed = 0;
    bool su_format = false;
    bool lenient = false;
};

int run_augment(const AugmentOpts& o) {
    Manifest man("augment", o.seed);
    man.input("samples", o.input);

    LoadOptions lo;
    lo.strict = !o.lenient;
    lo.su_format = o.su_format;
    std::vector<std::string> skipped;
    const auto base = load_liftmaps(o.input, lo, &skipped);
    for (const auto& msg : skipped) std::cerr << "skipped: " << msg << '\n';

    if (!(o.delta_theta_deg > 0.0) ||
        std::abs(360.0 / o.delta_theta_deg -
                 std::round(360.0 / o.delta_theta_deg)) > 1e-9)
        throw config_error("--delta-theta=" + csv::format_double(o.delta_theta_deg) +
                           " does not evenly divide 360 degrees");
    const double delta = o.delta_theta_deg * std::numbers::pi / 180.0;

    const auto augmented = augment(base, delta, o.flip);
    save_liftmaps(o.output, augmented);
    man.output("augmented", o.output);

    json cfg{{"input", o.input},
             {"output", o.output},
             {"delta_theta_deg", o.delta_theta_deg},
             {"flip", o.flip},
             {"paper_exact", o.paper_exact},
             {"split", o.split},
             {"load", load_options_json(lo)}};
    man.extra()["rows_in"] = base.size();
    man.extra()["rows_out"] = augmented.size();
    man.extra()["rows_skipped"] = skipped.size();

    if (!o.split.empty()) {
        const SplitSpec spec = parse_split(o.split, o.seed);
        const SplitResult parts = split(augmented, spec, !o.paper_exact);
        const std::string stem = o.output.size() > 4 &&
                                         o.output.substr(o.output.size() - 4) == ".csv"
                                     ? o.output.substr(0, o.output.size() - 4)
                                     : o.output;
        const std::string train_path = stem + ".train.csv";
        const std::string val_path = stem + ".val.csv";
        const std::string test_path = stem + ".test.csv";
        save_liftmaps(train_path, parts.train);
        save_liftmaps(val_path, parts.val);
        save_liftmaps(test_path, parts.test);
        man.output("train", train_path);
        man.output("val", val_path);
        man.output("test", test_path);
        man.extra()["split_sizes"] = {{"train", parts.train.size()},
                                      {"val", parts.val.size()},
                                      {"test", parts.test.size()}};
    }

    man.config(std::move(cfg));
    man.write(o.manifest.empty() ? default_manifest_path(o.output) : o.manifest);
    std::cout << "augment: " << base.size() << " -> " << augmented.size()
              << " samples\n";
    return 0;
}

// --------------------------------------------------------------------- train

struct TrainOpts {
    std::string train_path, val_path, model_out, history_out, manifest;
    std::string layers = "6,256,128,64,2";
    int epochs = 300;
    int patience = 30;
    int batch_size = 256;
    double lr = 1e-3;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    bool su_format = false;
    bool standardize_targets = false;
};

int run_train(const TrainOpts& o) {
    Manifest man("train", o.seed);
    man.input("train", o.train_path);
    man.input("val", o.val_path);

    LoadOptions lo;
    lo.su_format = o.su_format;
    const Batch train_b = to_batch(load_liftmaps(o.train_path, lo));
    const Batch val_b = to_batch(load_liftmaps(o.val_path, lo));

    const std::vector<int> sizes = parse_layers(o.layers);
    NetworkParams net = init_network(sizes, o.seed);

    TrainConfig cfg;
    cfg.max_epochs = o.epochs;
    cfg.patience = o.patience;
    cfg.batch_size = o.batch_size;
    cfg.learning_rate = o.lr;
    cfg.momentum = o.momentum;
    cfg.seed = o.seed;
    cfg.standardize_targets = o.standardize_targets;

    auto [best, hist] = train(net, train_b, val_b, cfg);

    best.provenance = "liftnet " + std::string(version_string) + " train seed=" +
                      std::to_string(o.seed) + " layers=" + o.layers +
                      " epochs=" + std::to_string(o.epochs) +
                      " train_crc=" + crc32_hex(crc32_file(o.train_path)) +
                      " val_crc=" + crc32_hex(crc32_file(o.val_path));
    save_model(best, o.model_out);
    man.output("model", o.model_out);

    const std::string hist_path =
        o.history_out.empty() ? o.model_out + ".history.csv" : o.history_out;
    csv::Table ht;
    ht.header = {"epoch", "train_loss", "val_loss"};
    for (std::size_t e = 0; e < hist.train_loss.size(); ++e)
        ht.rows.push_back({std::to_string(e), csv::format_double(hist.train_loss[e]),
                           csv::format_double(hist.val_loss[e])});
    csv::write_file(hist_path, ht);
    man.output("history", hist_path);

    man.config({{"train", o.train_path},
                {"val", o.val_path},
                {"model_out", o.model_out},
                {"layers", o.layers},
                {"epochs", o.epochs},
                {"patience", o.patience},
                {"batch_size", o.batch_size},
                {"lr", o.lr},
                {"momentum", o.momentum},
                {"su_format", o.su_format},
                {"standardize_targets", o.standardize_targets}});
    man.extra()["result"] = {{"best_epoch", hist.best_epoch},
                             {"best_val_loss", hist.best_val_loss},
                             {"epochs_run", hist.train_loss.size()},
                             {"stop_reason", hist.stop_reason}};
    man.write(o.manifest.empty() ? default_manifest_path(o.model_out) : o.manifest);
    std::cout << "train: " << hist.stop_reason << " after " << hist.train_loss.size()
              << " epochs, best val loss " << hist.best_val_loss << " at epoch "
              << hist.best_epoch << '\n';
    return 0;
}

// ---------------------------------------------------------------------- eval

struct EvalOpts {
    std::string model, test_path, report_out, curves_out, manifest;
    bool su_format = false;
};

json tag_report(const EvalReport& r) {
    auto fmt1 = [](double v) {
        std::ostringstream os;
        os.precision(1);
        os << std::fixed << v;
        return os.str();
    };
    return {{"count", r.count},
            {"mse", r.mse},
            {"angular_deg_p50", r.angular_p50},
            {"angular_deg_p90", r.angular_p90},
            {"magnitude_pct_p50", r.magnitude_p50},
            {"magnitude_pct_p90", r.magnitude_p90},
            // "median (90th percentile)" display form
            {"angular_deg", fmt1(r.angular_p50) + " (" + fmt1(r.angular_p90) + ")"},
            {"magnitude_pct", fmt1(r.magnitude_p50) + " (" + fmt1(r.magnitude_p90) + ")"}};
}

int run_eval(const EvalOpts& o) {
    Manifest man("eval", 0);
    man.input("model", o.model);
    man.input("test", o.test_path);

    const NetworkParams net = load_model(o.model);
    LoadOptions lo;
    lo.su_format = o.su_format;
    const auto samples = load_liftmaps(o.test_path, lo);
    if (samples.empty()) throw format_error(o.test_path + ": test set is empty");

    const EvalReport overall = evaluate(net, to_batch(samples));

    json report{{"mse", overall.mse},
                {"r2_x", overall.r2_x},
                {"r2_y", overall.r2_y},
                {"angular_deg_p50", overall.angular_p50},
                {"angular_deg_p90", overall.angular_p90},
                {"magnitude_pct_p50", overall.magnitude_p50},
                {"magnitude_pct_p90", overall.magnitude_p90},
                {"count", overall.count},
                {"excluded_zero_true", overall.excluded_zero_true},
                {"excluded_zero_pred", overall.excluded_zero_pred}};

    // geometry-tag breakdown; counts partition the total
    std::map<std::string, std::vector<LiftSample>> by_tag;
    for (const auto& s : samples) by_tag[to_string(s.geometry_tag)].push_back(s);
    json per;
    for (const auto& [tag, group] : by_tag)
        per[tag] = tag_report(evaluate(net, to_batch(group)));
    report["per_geometry"] = std::move(per);

    std::ofstream rep(o.report_out, std::ios::binary);
    if (!rep) throw format_error("cannot write report " + o.report_out);
    rep << report.dump(2) << '\n';
    rep.close();
    man.output("report", o.report_out);

    const std::string curves_path =
        o.curves_out.empty() ? o.report_out + ".curves.csv" : o.curves_out;
    csv::Table ct;
    ct.header = {"percentile", "angular_deg", "magnitude_pct"};
    for (int p = 0; p <= 100; ++p) {
        const std::string ang =
            overall.angular_curve_deg.empty()
                ? "nan"
                : csv::format_double(percentile(overall.angular_curve_deg, p));
        const std::string mag =
            overall.magnitude_curve_pct.empty()
                ? "nan"
                : csv::format_double(percentile(overall.magnitude_curve_pct, p));
        ct.rows.push_back({std::to_string(p), ang, mag});
    }
    csv::write_file(curves_path, ct);
    man.output("curves", curves_path);

    man.config({{"model", o.model},
                {"test", o.test_path},
                {"su_format", o.su_format}});
    man.extra()["summary"] = report;
    man.write(o.manifest.empty() ? default_manifest_path(o.report_out) : o.manifest);
    std::cout << "eval: " << overall.count << " samples, angular p50 "
              << overall.angular_p50 << " deg, magnitude p50 " << overall.magnitude_p50
              << "%\n";
    return 0;
}

// ------------------------------------------------------------------- liftmap

struct LiftmapOpts {
    std::string model, geometry, output, manifest;
    double U_m = 1.0;
    double a = 10e-6;
    double rho = 1000.0;
    double mu = 1e-3;
    int grid = 64;
};

int run_liftmap(const LiftmapOpts& o) {
    Manifest man("liftmap", 0);
    man.input("model", o.model);

    const NetworkParams net = load_model(o.model);
    auto field = make_field(o.geometry, o.U_m);
    if (o.grid < 2) throw config_error("--grid must be at least 2");

    const SectionBounds bb = field->bounding_box();
    csv::Table t;
    t.header = {"x", "y", "C_Lx", "C_Ly"};
    std::size_t interior = 0, skipped = 0;
    for (int j = 0; j < o.grid; ++j) {
        const double y = bb.y_min + (bb.y_max - bb.y_min) * j / (o.grid - 1);
        for (int i = 0; i < o.grid; ++i) {
            const double x = bb.x_min + (bb.x_max - bb.x_min) * i / (o.grid - 1);
            if (!(field->boundary_distance(x, y) > 0.0)) continue;
            ++interior;
            try {
                const DerivativeSet d = field->eval_derivatives(x, y);
                const FeatureVector f = nondim_features(d, o.rho, o.mu, o.a);
                const LiftCoefficient c = forward(net, f);
                t.rows.push_back({csv::format_double(x), csv::format_double(y),
                                  csv::format_double(c.C_Lx),
                                  csv::format_double(c.C_Ly)});
            } catch (const degenerate_point_error&) {
                ++skipped; // stagnation point: features undefined
            }
        }
    }
    csv::write_file(o.output, t);
    man.output("map", o.output);

    man.config({{"model", o.model},
                {"geometry", o.geometry},
                {"U_m", o.U_m},
                {"a", o.a},
                {"rho", o.rho},
                {"mu", o.mu},
                {"grid", o.grid}});
    man.extra()["interior_points"] = interior;
    man.extra()["skipped_points"] = skipped;
    man.extra()["rows"] = t.rows.size();
    man.write(o.manifest.empty() ? default_manifest_path(o.output) : o.manifest);
    std::cout << "liftmap: " << t.rows.size() << " points (" << skipped
              << " degenerate skipped)\n";
    return 0;
}

// --------------------------------------------------------------------- trace

struct TraceOpts {
    std::string model, synthetic, geometry, field3d_path, particles_path, output,
        manifest;
    double U_m = 1.0;
    double a = 10e-6;
    double rho = 1000.0;
    double mu = 1e-3;
    double stiffness = default_planted_stiffness;
    double dt = 1e-4;
    double max_time = 1.0;
    double channel_length = 0.0;
    double force_threshold = 1e-12;
    int dwell = 50;
    int record_every = 1;
    std::uint64_t max_steps = 2000000;
};

std::vector<ParticleState> load_particles(const std::string& path, double default_a) {
    const csv::Table t = csv::read_file(path);
    const std::size_t ci = t.column("id");
    const std::size_t cx = t.column("x");
    const std::size_t cy = t.column("y");
    const std::size_t cz = t.find_column("z");
    const std::size_t ca = t.find_column("a");
    std::vector<ParticleState> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        ParticleState p;
        p.id = static_cast<int>(csv::to_double(row[ci]));
        p.pos.x = csv::to_double(row[cx]);
        p.pos.y = csv::to_double(row[cy]);
        p.pos.z = cz != csv::Table::npos ? csv::to_double(row[cz]) : 0.0;
        p.a = ca != csv::Table::npos ? csv::to_double(row[ca]) : default_a;
        out.push_back(p);
    }
    if (out.empty()) throw format_error(path + ": no particles");
    return out;
}

void write_trajectories(const std::string& path, const std::vector<Trajectory>& trs) {
    csv::Table t;
    t.header = {"particle_id", "t", "x", "y", "z"};
    for (const auto& tr : trs)
        for (const auto& pt : tr.points)
            t.rows.push_back({std::to_string(tr.particle_id), csv::format_double(pt.t),
                              csv::format_double(pt.pos.x), csv::format_double(pt.pos.y),
                              csv::format_double(pt.pos.z)});
    csv::write_file(path, t);
}

json termination_summary(const std::vector<Trajectory>& trs) {
    std::map<std::string, int> counts;
    json per = json::array();
    for (const auto& tr : trs) {
        ++counts[to_string(tr.reason)];
        json e{{"id", tr.particle_id},
               {"reason", to_string(tr.reason)},
               {"t_end", tr.points.back().t},
               {"samples", tr.points.size()}};
        if (!tr.diagnostic.empty()) e["diagnostic"] = tr.diagnostic;
        per.push_back(std::move(e));
    }
    return {{"counts", counts}, {"particles", per}};
}

int run_trace(const TraceOpts& o) {
    Manifest man("trace", 0);
    man.input("particles", o.particles_path);

    if (o.model.empty() == o.synthetic.empty())
        throw config_error("exactly one of --model or --synthetic-lift is required");

    TraceConfig cfg;
    cfg.dt = o.dt;
    cfg.max_time = o.max_time;
    cfg.max_steps = o.max_steps;
    cfg.channel_length = o.channel_length;
    cfg.force_threshold = o.force_threshold;
    cfg.equilibrium_dwell = o.dwell;
    cfg.rho = o.rho;
    cfg.mu = o.mu;
    cfg.record_every = o.record_every;

    const auto particles = load_particles(o.particles_path, o.a);

    NetworkParams net;
    if (!o.model.empty()) {
        man.input("model", o.model);
        net = load_model(o.model);
    }

    std::vector<Trajectory> trs;
    if (!o.field3d_path.empty()) {
        if (o.model.empty())
            throw config_error("--field3d tracing requires --model");
        man.input("field", o.field3d_path);
        auto field = load_gridded_field3d(o.field3d_path);
        auto lift = model_lift_source_3d(net);
        trs = trace_curved(particles, *field, *lift, cfg);
    } else {
        auto field = make_field(o.geometry, o.U_m);
        std::unique_ptr<LiftSource> lift =
            o.model.empty() ? make_synthetic_lift(o.synthetic, *field, o.stiffness)
                            : model_lift_source(net);
        trs = trace(particles, *field, *lift, cfg);
    }

    write_trajectories(o.output, trs);
    man.output("trajectories", o.output);

    man.config({{"model", o.model},
                {"synthetic_lift", o.synthetic},
                {"geometry", o.geometry},
                {"field3d", o.field3d_path},
                {"U_m", o.U_m},
                {"a", o.a},
                {"rho", o.rho},
                {"mu", o.mu},
                {"stiffness", o.stiffness},
                {"dt", o.dt},
                {"max_time", o.max_time},
                {"channel_length", o.channel_length},
                {"force_threshold", o.force_threshold},
                {"equilibrium_dwell", o.dwell},
                {"record_every", o.record_every},
                {"max_steps", o.max_steps}});
    man.extra()["termination"] = termination_summary(trs);
    man.write(o.manifest.empty() ? default_manifest_path(o.output) : o.manifest);

    std::map<std::string, int> counts;
    for (const auto& tr : trs) ++counts[to_string(tr.reason)];
    std::cout << "trace: " << trs.size() << " particles;";
    for (const auto& [reason, n] : counts) std::cout << ' ' << reason << '=' << n;
    std::cout << '\n';
    return 0;
}

// ------------------------------------------------------------ config file

/// Flat key=value file; '#' starts a comment; keys are long option names
/// without the leading dashes ('_' and '-' interchangeable). Values become
/// "--key=value" tokens inserted before explicit flags, so flags win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot read config file " + path);
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw format_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
        std::string key = line.substr(0, eq);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::replace(key.begin(), key.end(), '_', '-');
        std::string value = line.substr(eq + 1);
        const auto vfirst = value.find_first_not_of(" \t");
        value = vfirst == std::string::npos ? "" : value.substr(vfirst);
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> raw(argv + 1, argv + argc);

    CLI::App app{"Inertial-lift model pipeline"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    AugmentOpts ao;
    TrainOpts to;
    EvalOpts eo;
    LiftmapOpts mo;
    TraceOpts ro;
    std::string config_path;

    auto add_config = [&config_path](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "flat key=value config file; explicit flags override");
    };

    CLI::App* aug = app.add_subcommand(
        "augment", "Expand a sample table with rotated/mirrored copies");
    add_config(aug);
    aug->add_option("-i,--input", ao.input, "sample CSV")->required();
    aug->add_option("-o,--output", ao.output, "augmented CSV")->required();
    aug->add_option("--delta-theta", ao.delta_theta_deg,
                    "rotation increment in degrees (must divide 360)");
    aug->add_option("--flip", ao.flip, "also emit x-axis mirror images");
    aug->add_flag("--paper-exact", ao.paper_exact,
                  "split augmented rows independently instead of keeping all "
                  "images of a base sample in one partition");
    aug->add_option("--split", ao.split,
                    "train,val,test fractions; writes three extra CSVs");
    aug->add_option("--seed", ao.seed, "split shuffle seed");
    aug->add_flag("--su-format", ao.su_format,
                  "input targets use the centerline/height convention with an "
                  "H column");
    aug->add_flag("--lenient", ao.lenient, "skip bad rows instead of failing");
    aug->add_option("--manifest", ao.manifest, "manifest path override");

    CLI::App* trn = app.add_subcommand("train", "Fit the lift model");
    add_config(trn);
    trn->add_option("--train", to.train_path, "training sample CSV")->required();
    trn->add_option("--val", to.val_path, "validation sample CSV")->required();
    trn->add_option("-o,--model-out", to.model_out, "model file to write")->required();
    trn->add_option("--history-out", to.history_out,
                    "loss history CSV (default <model>.history.csv)");
    trn->add_option("--layers", to.layers, "comma-separated layer widths");
    trn->add_option("--epochs", to.epochs, "maximum training epochs");
    trn->add_option("--patience", to.patience, "early-stopping patience");
    trn->add_option("--batch-size", to.batch_size, "minibatch size");
    trn->add_option("--lr", to.lr, "learning rate");
    trn->add_option("--momentum", to.momentum, "Nesterov momentum");
    trn->add_option("--seed", to.seed, "init/shuffle seed");
    trn->add_flag("--su-format", to.su_format, "inputs use the centerline/height "
                                               "target convention");
    trn->add_flag("--standardize-targets", to.standardize_targets,
                  "z-score targets during training");
    trn->add_option("--manifest", to.manifest, "manifest path override");

    CLI::App* evl = app.add_subcommand("eval", "Score a model on a test table");
    add_config(evl);
    evl->add_option("--model", eo.model, "model file")->required();
    evl->add_option("--test", eo.test_path, "test sample CSV")->required();
    evl->add_option("-o,--report-out", eo.report_out, "JSON report path")->required();
    evl->add_option("--curves-out", eo.curves_out,
                    "percentile-curve CSV (default <report>.curves.csv)");
    evl->add_flag("--su-format", eo.su_format, "inputs use the centerline/height "
                                               "target convention");
    evl->add_option("--manifest", eo.manifest, "manifest path override");

    CLI::App* map = app.add_subcommand(
        "liftmap", "Sweep a cross-section and export predicted coefficients");
    add_config(map);
    map->add_option("--model", mo.model, "model file")->required();
    map->add_option("--geometry", mo.geometry,
                    "rect:W:H | circle:D | triangle:S | gridded:PATH[:ORDER]")
        ->required();
    map->add_option("-o,--output", mo.output, "map CSV (x,y,C_Lx,C_Ly)")->required();
    map->add_option("--um", mo.U_m, "peak velocity for analytic geometries [m/s]");
    map->add_option("--a", mo.a, "particle diameter [m]");
    map->add_option("--rho", mo.rho, "fluid density [kg/m^3]");
    map->add_option("--mu", mo.mu, "dynamic viscosity [Pa s]");
    map->add_option("--grid", mo.grid, "lattice resolution per axis");
    map->add_option("--manifest", mo.manifest, "manifest path override");

    CLI::App* trc = app.add_subcommand("trace", "Integrate particle trajectories");
    add_config(trc);
    trc->add_option("--model", ro.model, "trained model file");
    trc->add_option("--synthetic-lift", ro.synthetic,
                    "built-in closure: zero | linear | radial | pseudo");
    trc->add_option("--geometry", ro.geometry,
                    "rect:W:H | circle:D | triangle:S | gridded:PATH[:ORDER]");
    trc->add_option("--field3d", ro.field3d_path,
                    "structured 3D field CSV (x,y,z,u,v,w); overrides --geometry");
    trc->add_option("--particles", ro.particles_path,
                    "particle CSV (id,x,y[,z][,a])")
        ->required();
    trc->add_option("-o,--output", ro.output, "trajectory CSV")->required();
    trc->add_option("--um", ro.U_m, "peak velocity for analytic geometries [m/s]");
    trc->add_option("--a", ro.a, "default particle diameter [m]");
    trc->add_option("--rho", ro.rho, "fluid density [kg/m^3]");
    trc->add_option("--mu", ro.mu, "dynamic viscosity [Pa s]");
    trc->add_option("--stiffness", ro.stiffness, "planted closure stiffness [N/m]");
    trc->add_option("--dt", ro.dt, "base integration step [s]");
    trc->add_option("--max-time", ro.max_time, "simulated time budget [s]");
    trc->add_option("--channel-length", ro.channel_length,
                    "axial outlet position [m]; 0 disables");
    trc->add_option("--force-threshold", ro.force_threshold,
                    "equilibrium force level [N]");
    trc->add_option("--dwell", ro.dwell, "quiet steps required for equilibrium");
    trc->add_option("--record-every", ro.record_every, "sample thinning stride");
    trc->add_option("--max-steps", ro.max_steps, "accepted-step budget");
    trc->add_option("--manifest", ro.manifest, "manifest path override");

    // Inject config-file tokens after the subcommand name so explicit flags
    // (later tokens, take-last) override them.
    std::vector<std::string> args;
    std::string pre_config;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config" && i + 1 < raw.size()) pre_config = raw[i + 1];
        else if (raw[i].rfind("--config=", 0) == 0) pre_config = raw[i].substr(9);
    }
    try {
        if (!pre_config.empty() && !raw.empty()) {
            const auto cfg_tokens = config_tokens(pre_config);
            args.push_back(raw[0]); // subcommand
            args.insert(args.end(), cfg_tokens.begin(), cfg_tokens.end());
            args.insert(args.end(), raw.begin() + 1, raw.end());
        } else {
            args = raw;
        }

        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const format_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (aug->parsed()) return run_augment(ao);
        if (trn->parsed()) return run_train(to);
        if (evl->parsed()) return run_eval(eo);
        if (map->parsed()) return run_liftmap(mo);
        if (trc->parsed()) return run_trace(ro);
    } catch (const training_diverged_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
