#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "solarpot/solarpot.hpp"

using namespace solarpot;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kPartial = 1, kInput = 2 };

struct Common {
    std::string config;
    std::string in;
    std::string out;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool needs_out = true) {
    cmd->add_option("--config", c.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--in", c.in, "input sections collection (defaults to config paths.sections)");
    auto* o = cmd->add_option("--out", c.out, "output collection");
    if (needs_out) o->required();
    cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    cmd->add_option("--seed", c.seed, "random seed");
}

ingest::RunConfig config_for(const Common& c) {
    ingest::RunConfig cfg = ingest::load_config(c.config);
    if (c.workers) cfg.workers = *c.workers;
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

std::optional<json> sections_override(const Common& c) {
    if (c.in.empty()) return std::nullopt;
    return ingest::read_json_file(c.in);
}

using Stage = json (*)(json, const pipeline::Context&);

int run_stage(const Common& c, Stage stage, pipeline::LoadOptions load) {
    const ingest::RunConfig cfg = config_for(c);
    const pipeline::Context ctx = pipeline::make_context(cfg, sections_override(c), load);
    const json out = stage(pipeline::with_frame(ctx.layers.sections, ctx), ctx);
    ingest::write_json_file(c.out, out);
    for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
    const auto st = pipeline::stats(out);
    std::cerr << st.sections << " sections, " << st.errors << " with errors\n";
    return st.error_fraction() > cfg.max_error_fraction ? kPartial : kOk;
}

void write_masks(const json& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const json& f : report["features"]) {
        if (pipeline::has_error(f) || !f["properties"].contains("horizon_deg")) continue;
        std::ofstream os(std::filesystem::path(dir) / (ingest::feature_id(f) + ".csv"));
        if (!os) throw InputError("cannot write masks into " + dir);
        write_mask_csv(pipeline::mask_from_properties(f), os);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rooftop solar potential from roof sections, footprints, weather and terrain"};
    app.set_version_flag("--version", std::string(pipeline::kVersion));
    app.require_subcommand(1);

    Common run_opts;
    std::string summary_path, masks_dir;
    auto* run = app.add_subcommand("run", "full pipeline: regularize, azimuth, pitch, pack, shade, pvout");
    add_common(run, run_opts, false);
    run->add_option("--summary", summary_path, "summary JSON (defaults to config paths.summary)");
    run->add_option("--masks-dir", masks_dir, "write one horizon mask CSV per section");

    Common reg_opts, az_opts, pack_opts, shade_opts, pv_opts, predict_opts;
    std::string shade_masks;
    add_common(app.add_subcommand("regularize", "replace section outlines with facade-aligned boxes"), reg_opts);
    add_common(app.add_subcommand("azimuth", "fill missing section azimuths"), az_opts);
    add_common(app.add_subcommand("pack", "maximum panel count per section"), pack_opts);
    auto* shade = app.add_subcommand("shade", "horizon masks and sky-view factors");
    add_common(shade, shade_opts);
    shade->add_option("--masks-dir", shade_masks, "write one horizon mask CSV per section");
    add_common(app.add_subcommand("pvout", "annual yield and potential per section"), pv_opts);

    auto* pitch_cmd = app.add_subcommand("pitch", "pitch model training and prediction");
    pitch_cmd->require_subcommand(1);
    auto* predict = pitch_cmd->add_subcommand("predict", "fill missing section pitches");
    add_common(predict, predict_opts);
    std::string train_in, train_out;
    std::uint64_t train_seed = 42;
    unsigned train_workers = 1;
    pitch::ForestParams fp;
    auto* train = pitch_cmd->add_subcommand("train", "fit the pitch model on a training CSV");
    train->add_option("--in", train_in, "training CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--out", train_out, "model JSON")->required();
    train->add_option("--seed", train_seed, "random seed");
    train->add_option("--workers", train_workers, "worker threads (0 = all cores)");
    train->add_option("--trees", fp.n_trees, "number of trees");
    train->add_option("--max-depth", fp.max_depth, "maximum tree depth");
    train->add_option("--min-leaf", fp.min_leaf, "minimum samples per leaf");

    double n_modules = 0, power_wp = 0, pvout = 0;
    auto* potential = app.add_subcommand("potential", "n_modules * power_wp/1000 * pvout");
    potential->add_option("--n-modules", n_modules)->required();
    potential->add_option("--power-wp", power_wp)->required();
    potential->add_option("--pvout", pvout, "kWh per kWp per year")->required();

    std::string agg_in, agg_out;
    double cell_size = 1000.0;
    auto* agg = app.add_subcommand("aggregate", "sum section potentials on a square grid");
    agg->add_option("--in", agg_in, "report collection")->required()->check(CLI::ExistingFile);
    agg->add_option("--out", agg_out, "grid collection")->required();
    agg->add_option("--cell-size", cell_size, "grid cell size in meters");

    int cs_year = 2021;
    double cs_lat = 43.6, cs_lon = 3.87;
    std::string cs_out;
    auto* cs = app.add_subcommand("clearsky", "write a clear-sky hourly weather year");
    cs->add_option("--year", cs_year);
    cs->add_option("--lat", cs_lat);
    cs->add_option("--lon", cs_lon);
    cs->add_option("--out", cs_out, "weather CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInput;
    }

    try {
        if (*run) {
            const auto t0 = std::chrono::steady_clock::now();
            const ingest::RunConfig cfg = config_for(run_opts);
            const pipeline::Context ctx =
                pipeline::make_context(cfg, sections_override(run_opts), {.weather = true, .dem = true, .pitch_model = true});
            const json report = pipeline::run_all(ctx);
            const std::string out = !run_opts.out.empty() ? run_opts.out : cfg.paths.report.value_or("");
            if (out.empty()) throw InputError("no report path: pass --out or set paths.report");
            ingest::write_json_file(out, report);
            const std::string masks = !masks_dir.empty() ? masks_dir : cfg.paths.masks_dir.value_or("");
            if (!masks.empty()) write_masks(report, masks);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const json sum = pipeline::summary(report, ctx, secs);
            const std::string sp = !summary_path.empty() ? summary_path : cfg.paths.summary.value_or("");
            if (!sp.empty()) ingest::write_json_file(sp, sum);
            for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
            const auto st = pipeline::stats(report);
            std::cerr << st.sections << " sections, " << st.errors << " with errors, "
                      << sum["potential_kwh_per_year_total"].get<double>() << " kWh/year\n";
            if (st.errors) std::cerr << "warning: " << st.errors << " sections recorded errors\n";
            return st.error_fraction() > cfg.max_error_fraction ? kPartial : kOk;
        }
        if (*train) {
            fp.seed = train_seed;
            fp.threads = train_workers;
            const auto rows = pitch::load_training_csv(train_in);
            pitch::save_pitch_model(pitch::train_pitch_model(rows, fp), train_out);
            std::cerr << "trained on " << rows.size() << " rows\n";
            return kOk;
        }
        if (*potential) {
            std::cout << ingest::format_number(pipeline::potential_kwh_per_year(n_modules, power_wp, pvout)) << '\n';
            return kOk;
        }
        if (*agg) {
            ingest::write_json_file(agg_out, pipeline::aggregate(ingest::read_json_file(agg_in), cell_size));
            return kOk;
        }
        if (*cs) {
            ingest::save_weather(cs_out, solar::clearsky_year(cs_year, cs_lat, cs_lon));
            return kOk;
        }
        if (app.got_subcommand("regularize")) return run_stage(reg_opts, pipeline::stage_regularize, {});
        if (app.got_subcommand("azimuth")) return run_stage(az_opts, pipeline::stage_azimuth, {});
        if (*predict) return run_stage(predict_opts, pipeline::stage_pitch, {.pitch_model = true});
        if (app.got_subcommand("pack")) return run_stage(pack_opts, pipeline::stage_pack, {});
        if (*shade) {
            const int rc = run_stage(shade_opts, pipeline::stage_shade, {.dem = true});
            if (!shade_masks.empty()) write_masks(ingest::read_json_file(shade_opts.out), shade_masks);
            return rc;
        }
        if (app.got_subcommand("pvout")) return run_stage(pv_opts, pipeline::stage_pvout, {.weather = true});
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
    return kOk;
}
