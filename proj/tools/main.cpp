#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "sdfshadow/bench.hpp"
#include "sdfshadow/error.hpp"
#include "sdfshadow/image.hpp"
#include "sdfshadow/parallel.hpp"
#include "sdfshadow/pipeline.hpp"
#include "sdfshadow/render.hpp"

namespace fs = std::filesystem;
using namespace sdfshadow;

namespace {

constexpr const char* kConfigKeys = R"(Scenario keys (JSON, all optional):
  id               scenario name used in CSV rows          default "default"
  scene            sphere | sphere_only | thin_plate | orbit default "sphere"
  size             S (64/128) | M (128/256) | L (256/512)   default "M"
  coarse_dims      int or [x, y, z], overrides size
  fine_dims        int or [x, y, z], overrides size
  rays_per_texel   x, rays per masked texel per frame      default 5
  mask_distance    d, ray mask threshold, number or "inf"  default 0.1
  alpha            temporal decay of the previous frame    default 0.95
  frames           frames to simulate                      default 10
  animate          move dynamic instances                  default true
  light_angle      light half-angle in radians, 0 = scene  default 0
  beta             coarse sign offset                      default 0.1 x coarse cell diagonal
  bias             fine-field thickening                   default 0.01
  seed             RNG seed                                default 1
  repeats          timing repeats per frame (median)       default 5
  render           time the lighting pass                  default true
  image_width      0 = scene camera                        default 0
  image_height     0 = scene camera                        default 0
  output_dir       where fields, images and CSV go         default none
Shadow marching: max_step 0.05, epsilon = one fine cell, up to 256 iterations.
Exit codes: 0 ok, 2 usage, 3 config, 4 I/O, 5 internal invariant.
Environment: SDFSHADOW_THREADS sets the default worker count.)";

struct Common {
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads (0 = SDFSHADOW_THREADS or all cores)")
        ->capture_default_str();
}

void apply_common(const Common& c) { set_thread_count(c.threads); }

// Options that describe a scene and its field pipeline.
struct SceneFlags {
    std::string config;
    std::string scene = "sphere";
    std::string size = "M";
    std::uint64_t frames = 10;
    int x = 5;
    std::string d = "0.1";
    double alpha = 0.95;
    std::optional<double> beta;
    double bias = kDefaultBias;
    double light_angle = 0.0;
    bool static_scene = false;
    std::string assets;
};

void add_scene_flags(CLI::App* cmd, SceneFlags& f) {
    cmd->add_option("--config", f.config, "Scenario JSON; explicit flags override its keys");
    cmd->add_option("--scene", f.scene, "Scene id: sphere, sphere_only, thin_plate, orbit")->capture_default_str();
    cmd->add_option("--size", f.size, "Field sizes: S (64/128), M (128/256), L (256/512)")->capture_default_str();
    cmd->add_option("--frames", f.frames, "Frames to simulate")->capture_default_str();
    cmd->add_option("-x,--rays-per-texel", f.x, "Rays per masked texel per frame")->capture_default_str();
    cmd->add_option("-d,--mask-distance", f.d, "Ray mask distance d (number or inf)")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Temporal decay alpha")->capture_default_str();
    cmd->add_option("--beta", f.beta, "Coarse sign offset (default 0.1 x coarse cell diagonal)");
    cmd->add_option("--bias", f.bias, "Fine-field thickening bias")->capture_default_str();
    cmd->add_option("--light-angle", f.light_angle, "Light half-angle in radians (0 = scene default)")
        ->capture_default_str();
    cmd->add_flag("--static", f.static_scene, "Freeze dynamic instances at frame 0");
    cmd->add_option("--assets", f.assets, "Directory holding bundled meshes");
}

double parse_mask_distance(const std::string& s) {
    if (s == "inf" || s == "infinity") return kInfinity;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("mask distance must be a number or 'inf', got '" + s + "'");
    }
}

Scenario scenario_from_flags(const CLI::App* cmd, const SceneFlags& f, const Common& c) {
    Scenario s = f.config.empty() ? Scenario{} : load_scenario(f.config);
    auto given = [&](const char* name) { return f.config.empty() || cmd->count(name) > 0; };
    if (given("--scene")) s.scene = f.scene;
    if (given("--size")) {
        s.size = f.size;
        s.coarse_dims.reset();
        s.fine_dims.reset();
    }
    if (given("--frames")) s.frames = f.frames;
    if (given("--rays-per-texel")) s.rays_per_texel = f.x;
    if (given("--mask-distance")) s.mask_distance = parse_mask_distance(f.d);
    if (given("--alpha")) s.alpha = f.alpha;
    if (f.beta) s.beta = f.beta;
    if (given("--bias")) s.bias = f.bias;
    if (given("--light-angle")) s.light_angle = f.light_angle;
    if (f.static_scene) s.animate = false;
    if (f.config.empty() || cmd->count("--seed")) s.seed = c.seed;
    size_preset(s.size);
    return s;
}

void warn_if_large(const Scenario& s) {
    const GridSpec fine{s.fine(), {}};
    if (fine.count() >= std::size_t{512} * 512 * 512 && std::thread::hardware_concurrency() <= 2) {
        std::cerr << "warning: size " << s.size << " on " << std::thread::hardware_concurrency()
                  << " core(s) will be slow\n";
    }
}

std::string with_extension(const std::string& path, const std::string& ext) {
    return fs::path(path).replace_extension(ext).string();
}

// Runs the pipeline through every frame of the scenario.
Pipeline run_pipeline(const Scenario& s, const std::string& assets) {
    s.validate();
    Scene scene = s.build_scene(assets);
    scene.validate(s.frames);
    PipelineConfig pc = s.pipeline_config();
    pc.recompute_static = false;
    Pipeline p(std::move(scene), pc);
    for (std::uint64_t f = 0; f < s.frames; ++f) p.step(f);
    return p;
}

int cmd_generate(const CLI::App* cmd, const SceneFlags& flags, const Common& c, const std::string& out_dir) {
    const Scenario s = scenario_from_flags(cmd, flags, c);
    warn_if_large(s);
    const Pipeline p = run_pipeline(s, flags.assets);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
    const std::string coarse = (fs::path(out_dir) / "coarse.rsdf").string();
    const std::string fine = (fs::path(out_dir) / "fine.rsdf").string();
    save_field(coarse, p.coarse());
    save_field(fine, p.fine());
    std::cout << "wrote " << coarse << "\nwrote " << fine << "\n";
    return 0;
}

struct RenderFlags {
    std::string mode = "rtsdf";
    bool reference = false;
    int spp = 256;
    std::string field = "live";
    std::string out = "render.pfm";
    int width = 0, height = 0;
    double max_step = kDefaultMaxStep;
    double jitter = 0.0;
    int jitter_draws = 4;
    bool no_triangulate = false;
    double surface_offset = MarchParams{}.surface_offset;
};

ShadeParams shade_params(const RenderFlags& r, const DistanceField& field, std::uint64_t seed, double background) {
    ShadeParams sp;
    sp.march = MarchParams::for_field(field.grid);
    sp.march.max_step = r.max_step;
    sp.march.jitter = r.jitter;
    sp.march.triangulate = !r.no_triangulate;
    sp.march.surface_offset = r.surface_offset;
    sp.jitter_draws = r.jitter_draws;
    sp.seed = seed;
    sp.background = background;
    sp.march.validate(field.grid);
    return sp;
}

int cmd_render(const CLI::App* cmd, const SceneFlags& flags, const RenderFlags& r, const Common& c) {
    Scenario s = scenario_from_flags(cmd, flags, c);
    if (r.width > 0) s.image_width = r.width;
    if (r.height > 0) s.image_height = r.height;
    const std::string mode = r.reference ? "reference" : r.mode;
    if (mode != "reference" && mode != "rtsdf" && mode != "coarse-only") {
        throw UsageError("unknown mode '" + mode + "' (reference, rtsdf, coarse-only)");
    }

    ShadeOutput img;
    if (r.field == "live") {
        warn_if_large(s);
        const Pipeline p = run_pipeline(s, flags.assets);
        if (mode == "reference") {
            const GBuffer g = rasterize_gbuffer(p.scene(), p.geometry());
            img = reference_render(g, p.geometry().bvh, p.scene().lights, r.spp, s.seed, p.scene().background);
        } else {
            const DistanceField field = mode == "rtsdf" ? p.fine() : p.coarse();
            img = p.render(field, shade_params(r, field, s.seed, p.scene().background));
        }
    } else {
        s.validate();
        const DistanceField field = load_field(r.field);
        Scene scene = s.build_scene(flags.assets);
        if (!(field.grid.bounds.contains(scene.bounds, 1e-5) && scene.bounds.contains(field.grid.bounds, 1e-5))) {
            throw ConfigError("field bounds do not match scene '" + scene.id + "'");
        }
        const FrameGeometry geo(scene.mesh_at(field.frame));
        const GBuffer g = rasterize_gbuffer(scene, geo);
        if (mode == "reference") {
            img = reference_render(g, geo.bvh, scene.lights, r.spp, s.seed, scene.background);
        } else {
            img = shade_with_occlusion(g, field, scene.lights, shade_params(r, field, s.seed, scene.background));
        }
    }
    write_pfm(r.out, img.radiance);
    const std::string preview = with_extension(r.out, ".ppm");
    write_ppm(preview, img.radiance);
    std::cout << "wrote " << r.out << "\nwrote " << preview << "\n";
    return 0;
}

int axis_index(const std::string& a) {
    if (a == "x") return 0;
    if (a == "y") return 1;
    if (a == "z") return 2;
    throw UsageError("axis must be x, y or z");
}

int cmd_slice(const std::string& field_path, const std::string& axis, int index, double scale,
              const std::string& out) {
    const DistanceField field = load_field(field_path);
    const ScalarImage img = slice(field, axis_index(axis), index);
    write_ppm_rgb(out, img.width, img.height, signed_colors(img, scale));
    write_pfm(with_extension(out, ".pfm"), img);
    std::cout << "wrote " << out << " (" << img.width << "x" << img.height << ")\n";
    return 0;
}

struct BenchFlags {
    std::string sweep = "none";
    std::string csv = "bench.csv";
    int repeats = 5;
    bool ghosting = false;
};

std::vector<Scenario> sweep_scenarios(const Scenario& base, const std::string& sweep) {
    std::vector<Scenario> out;
    auto add = [&](auto mutate, const std::string& tag) {
        Scenario s = base;
        mutate(s);
        s.id = base.id + "_" + tag;
        out.push_back(s);
    };
    if (sweep == "none") {
        out.push_back(base);
    } else if (sweep == "x") {
        for (int x : {0, 1, 5, 10, 15}) add([x](Scenario& s) { s.rays_per_texel = x; }, "x" + std::to_string(x));
    } else if (sweep == "d") {
        for (double d : {0.01, 0.05, 0.1, 0.5, kInfinity}) {
            std::ostringstream tag;
            tag << "d" << d;
            add([d](Scenario& s) { s.mask_distance = d; }, tag.str());
        }
    } else if (sweep == "size") {
        for (const char* n : {"S", "M", "L"}) {
            add([n](Scenario& s) {
                    s.size = n;
                    s.coarse_dims.reset();
                    s.fine_dims.reset();
                },
                n);
        }
    } else {
        throw UsageError("unknown sweep '" + sweep + "' (none, x, d, size)");
    }
    return out;
}

int cmd_bench(const CLI::App* cmd, const SceneFlags& flags, const BenchFlags& b, const Common& c) {
    Scenario base = scenario_from_flags(cmd, flags, c);
    if (cmd->count("--repeats") || flags.config.empty()) base.repeats = b.repeats;
    if (b.ghosting) {
        GhostingConfig g;
        g.scenario = base;
        if (!cmd->count("--scene") && flags.config.empty()) g.scenario.scene = "orbit";
        g.scenario.animate = true;
        const GhostingReport rep = ghosting_experiment(g, flags.assets);
        rep.print(std::cout);
        return rep.envelope_violations == 0 && rep.immediate_violations == 0 ? 0 : 5;
    }
    std::ofstream csv(b.csv);
    if (!csv) throw IoError("cannot write '" + b.csv + "'");
    write_csv_header(csv);
    std::vector<ScenarioRun> runs;
    for (const Scenario& s : sweep_scenarios(base, b.sweep)) {
        warn_if_large(s);
        runs.push_back(run_scenario(s, flags.assets));
        write_csv(csv, runs.back());
        const PassTimings t = runs.back().typical();
        std::cout << s.id << ": V " << t.voxelize_ns * 1e-6 << " ms, JF " << t.flood_ns * 1e-6 << " ms, RT "
                  << t.sample_ns * 1e-6 << " ms, DL " << t.lighting_ns * 1e-6 << " ms, masked "
                  << t.masked_texels << ", rays " << t.rays_traced << "\n";
    }
    std::cout << "workers: " << thread_count() << " (timings are wall clock; expect noise)\n";
    if (runs.size() >= 2) trend_report(runs).print(std::cout);
    std::cout << "wrote " << b.csv << "\n";
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b) {
    const ImageMetrics m = compare(read_pfm(a), read_pfm(b));
    std::cout << "pixels " << m.pixels << "\nrmse " << m.rmse << "\nmae " << m.mae << "\nmax " << m.max_error << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SDF soft-shadow pipeline: fields, renders, slices, benchmarks"};
    app.footer(kConfigKeys);
    app.require_subcommand(1);

    Common common;
    SceneFlags gen_flags, render_flags, bench_flags;
    std::string gen_out = "fields";
    auto* gen = app.add_subcommand("generate", "Build coarse and fine fields and write them to disk");
    add_common(gen, common);
    add_scene_flags(gen, gen_flags);
    gen->add_option("-o,--out", gen_out, "Output directory")->capture_default_str();

    RenderFlags rf;
    auto* ren = app.add_subcommand("render", "Render a frame with SDF shadows or the ray-traced reference");
    add_common(ren, common);
    add_scene_flags(ren, render_flags);
    ren->add_option("--mode", rf.mode, "reference, rtsdf or coarse-only")->capture_default_str();
    ren->add_flag("--reference", rf.reference, "Same as --mode reference");
    ren->add_option("--spp", rf.spp, "Shadow rays per pixel for the reference")->capture_default_str();
    ren->add_option("--field", rf.field, "Field file, or 'live' to build it now")->capture_default_str();
    ren->add_option("-o,--out", rf.out, "Output PFM; a PPM preview is written next to it")->capture_default_str();
    ren->add_option("--width", rf.width, "Image width (0 = scene camera)");
    ren->add_option("--height", rf.height, "Image height (0 = scene camera)");
    ren->add_option("--max-step", rf.max_step, "Largest march step (inf disables the cap)")->capture_default_str();
    ren->add_option("--jitter", rf.jitter, "Start offset jitter in step units, [0, 1)")->capture_default_str();
    ren->add_option("--jitter-draws", rf.jitter_draws, "Jittered marches averaged per pixel")->capture_default_str();
    ren->add_option("--surface-offset", rf.surface_offset, "Shadow-ray start height in cells above the receiver")
        ->capture_default_str();
    ren->add_flag("--no-triangulate", rf.no_triangulate, "Use the raw sample distance in the cone term");

    std::string slice_field, slice_axis = "y", slice_out = "slice.ppm";
    int slice_index = 0;
    double slice_scale = 1.0;
    auto* sl = app.add_subcommand("slice", "Export one plane of a field as an image");
    add_common(sl, common);
    sl->add_option("--field", slice_field, "Field file")->required();
    sl->add_option("--axis", slice_axis, "x, y or z")->capture_default_str();
    sl->add_option("--index", slice_index, "Cell index along the axis")->capture_default_str();
    sl->add_option("--scale", slice_scale, "Distance mapped to full brightness")->capture_default_str();
    sl->add_option("-o,--out", slice_out, "Output PPM (a PFM of raw values is written next to it)")
        ->capture_default_str();

    BenchFlags bf;
    auto* bench = app.add_subcommand("bench", "Run timing sweeps and write CSV plus a trend report");
    add_common(bench, common);
    add_scene_flags(bench, bench_flags);
    bench->add_option("--sweep", bf.sweep, "none, x, d or size")->capture_default_str();
    bench->add_option("--csv", bf.csv, "CSV output path")->capture_default_str();
    bench->add_option("--repeats", bf.repeats, "Timing repeats per frame")->capture_default_str();
    bench->add_flag("--ghosting", bf.ghosting, "Run the stale-value decay experiment instead");

    std::string cmp_a, cmp_b;
    auto* cmp = app.add_subcommand("compare", "Print RMSE, MAE and max error between two PFM images");
    add_common(cmp, common);
    cmp->add_option("a", cmp_a, "First image")->required();
    cmp->add_option("b", cmp_b, "Second image")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorKind::usage);
    }

    try {
        apply_common(common);
        if (*gen) return cmd_generate(gen, gen_flags, common, gen_out);
        if (*ren) return cmd_render(ren, render_flags, rf, common);
        if (*sl) return cmd_slice(slice_field, slice_axis, slice_index, slice_scale, slice_out);
        if (*bench) return cmd_bench(bench, bench_flags, bf, common);
        if (*cmp) return cmd_compare(cmp_a, cmp_b);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::invariant);
    }
    return static_cast<int>(ErrorKind::usage);
}
