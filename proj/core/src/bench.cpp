#include "sdfshadow/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "sdfshadow/error.hpp"
#include "sdfshadow/image.hpp"
#include "sdfshadow/parallel.hpp"

namespace sdfshadow {

using nlohmann::json;

namespace {

template <typename T>
T median(std::vector<T> v) {
    if (v.empty()) return T{};
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

Dims parse_dims(const json& j, const char* key) {
    if (j.is_number_integer()) {
        const int n = j.get<int>();
        return {n, n, n};
    }
    if (j.is_array() && j.size() == 3) return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
    throw ConfigError(std::string("'") + key + "' must be an integer or an array of three integers");
}

double parse_distance(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return kInfinity;
        throw ConfigError("mask_distance must be a number or \"inf\"");
    }
    return j.get<double>();
}

}  // namespace

Dims Scenario::coarse() const { return coarse_dims ? *coarse_dims : size_preset(size).coarse; }
Dims Scenario::fine() const { return fine_dims ? *fine_dims : size_preset(size).fine; }

PipelineConfig Scenario::pipeline_config() const {
    PipelineConfig c;
    c.coarse = coarse();
    c.fine = fine();
    c.sampling.rays_per_texel = rays_per_texel;
    c.sampling.mask_distance = mask_distance;
    c.sampling.decay_alpha = alpha;
    c.sampling.seed = seed;
    c.beta = beta;
    c.bias = bias;
    c.recompute_static = true;
    return c;
}

Scene Scenario::build_scene(const std::string& asset_dir) const {
    SceneOptions o;
    o.light_angle = light_angle;
    o.animate = animate;
    o.asset_dir = asset_dir;
    Scene s = make_scene(scene, o);
    if (image_width > 0) s.camera.width = image_width;
    if (image_height > 0) s.camera.height = image_height;
    return s;
}

void Scenario::validate() const {
    if (id.empty()) throw ConfigError("scenario id must not be empty");
    if (frames < 1) throw ConfigError("frames must be at least 1");
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
    if (image_width < 0 || image_height < 0) throw ConfigError("image size must be non-negative");
    pipeline_config().validate();
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    static const std::vector<std::string> known = {
        "id", "scene", "size", "coarse_dims", "fine_dims", "rays_per_texel", "mask_distance", "alpha", "frames",
        "animate", "light_angle", "beta", "bias", "seed", "repeats", "render", "image_width", "image_height",
        "output_dir"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown scenario key '" + key + "'");
        }
    }
    Scenario s;
    try {
        s.id = j.value("id", s.id);
        s.scene = j.value("scene", s.scene);
        s.size = j.value("size", s.size);
        if (j.contains("coarse_dims")) s.coarse_dims = parse_dims(j["coarse_dims"], "coarse_dims");
        if (j.contains("fine_dims")) s.fine_dims = parse_dims(j["fine_dims"], "fine_dims");
        s.rays_per_texel = j.value("rays_per_texel", s.rays_per_texel);
        if (j.contains("mask_distance")) s.mask_distance = parse_distance(j["mask_distance"]);
        s.alpha = j.value("alpha", s.alpha);
        s.frames = j.value("frames", s.frames);
        s.animate = j.value("animate", s.animate);
        s.light_angle = j.value("light_angle", s.light_angle);
        if (j.contains("beta")) s.beta = j["beta"].get<double>();
        s.bias = j.value("bias", s.bias);
        s.seed = j.value("seed", s.seed);
        s.repeats = j.value("repeats", s.repeats);
        s.render = j.value("render", s.render);
        s.image_width = j.value("image_width", s.image_width);
        s.image_height = j.value("image_height", s.image_height);
        s.output_dir = j.value("output_dir", s.output_dir);
    } catch (const json::type_error& e) {
        throw ConfigError(std::string("scenario value has the wrong type: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
    json j = {{"id", s.id},
              {"scene", s.scene},
              {"size", s.size},
              {"rays_per_texel", s.rays_per_texel},
              {"alpha", s.alpha},
              {"frames", s.frames},
              {"animate", s.animate},
              {"light_angle", s.light_angle},
              {"bias", s.bias},
              {"seed", s.seed},
              {"repeats", s.repeats},
              {"render", s.render},
              {"image_width", s.image_width},
              {"image_height", s.image_height},
              {"output_dir", s.output_dir}};
    if (std::isinf(s.mask_distance)) {
        j["mask_distance"] = "inf";
    } else {
        j["mask_distance"] = s.mask_distance;
    }
    if (s.coarse_dims) j["coarse_dims"] = *s.coarse_dims;
    if (s.fine_dims) j["fine_dims"] = *s.fine_dims;
    if (s.beta) j["beta"] = *s.beta;
    return j.dump(2);
}

PassTimings ScenarioRun::typical() const {
    std::vector<PassTimings> use(frames.begin() + (frames.size() > 1 ? 1 : 0), frames.end());
    PassTimings t;
    auto pick = [&](auto member) {
        std::vector<std::int64_t> v;
        for (const auto& f : use) v.push_back(f.*member);
        return median(v);
    };
    t.voxelize_ns = pick(&PassTimings::voxelize_ns);
    t.flood_ns = pick(&PassTimings::flood_ns);
    t.sample_ns = pick(&PassTimings::sample_ns);
    t.lighting_ns = pick(&PassTimings::lighting_ns);
    std::vector<std::size_t> masked, rays;
    for (const auto& f : use) {
        masked.push_back(f.masked_texels);
        rays.push_back(f.rays_traced);
    }
    t.masked_texels = median(masked);
    t.rays_traced = median(rays);
    return t;
}

ScenarioRun run_scenario(const Scenario& s, const std::string& asset_dir) {
    s.validate();
    Scene scene = s.build_scene(asset_dir);
    scene.validate(s.frames);
    Pipeline pipeline(std::move(scene), s.pipeline_config());
    ShadeParams shade;
    shade.march = MarchParams::for_field(pipeline.fine_grid());
    shade.seed = s.seed;
    shade.background = pipeline.scene().background;

    ScenarioRun run;
    run.scenario = s;
    run.worker_count = thread_count();
    for (std::uint64_t f = 0; f < s.frames; ++f) {
        std::vector<std::int64_t> v, jf, rt, dl;
        PassTimings kept;
        for (int r = 0; r < s.repeats; ++r) {
            const bool last = r + 1 == s.repeats;
            std::optional<Pipeline> scratch;
            if (!last) scratch.emplace(pipeline);
            Pipeline& p = last ? pipeline : *scratch;
            PassTimings t = p.step(f);
            if (s.render) p.render(p.fine(), shade, &t);
            v.push_back(t.voxelize_ns);
            jf.push_back(t.flood_ns);
            rt.push_back(t.sample_ns);
            dl.push_back(t.lighting_ns);
            if (last) kept = t;
        }
        kept.voxelize_ns = median(v);
        kept.flood_ns = median(jf);
        kept.sample_ns = median(rt);
        kept.lighting_ns = median(dl);
        run.frames.push_back(kept);
    }

    if (!s.output_dir.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(s.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + s.output_dir + "': " + ec.message());
        const std::string base = (fs::path(s.output_dir) / s.id).string();
        save_field(base + "_coarse.rsdf", pipeline.coarse());
        const DistanceField fine = pipeline.fine();
        save_field(base + "_fine.rsdf", fine);
        const ShadeOutput img = pipeline.render(fine, shade);
        write_pfm(base + ".pfm", img.radiance);
        write_ppm(base + ".ppm", img.radiance);
        const ScalarImage sl = slice(fine, 1, fine.grid.dims[1] / 2);
        write_ppm_rgb(base + "_slice_y.ppm", sl.width, sl.height, signed_colors(sl, 1.0));
        std::ofstream csv(base + ".csv");
        if (!csv) throw IoError("cannot write '" + base + ".csv'");
        write_csv_header(csv);
        write_csv(csv, run);
    }
    return run;
}

void write_csv_header(std::ostream& out) { out << "scenario_id,frame,pass,duration_ns,masked_texels,rays_traced\n"; }

void write_csv(std::ostream& out, const ScenarioRun& run) {
    for (const auto& f : run.frames) {
        const std::pair<const char*, std::int64_t> rows[] = {
            {"V", f.voxelize_ns}, {"JF", f.flood_ns}, {"RT", f.sample_ns}, {"DL", f.lighting_ns}};
        for (const auto& [pass, ns] : rows) {
            out << run.scenario.id << ',' << f.frame << ',' << pass << ',' << ns << ',' << f.masked_texels << ','
                << f.rays_traced << '\n';
        }
    }
}

bool TrendReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const TrendVerdict& v) { return v.pass; });
}

void TrendReport::print(std::ostream& out) const {
    out << "trend over " << knob << "\n";
    out << std::left << std::setw(20) << "scenario" << std::setw(10) << knob << std::setw(12) << "cells"
        << std::setw(12) << "masked" << std::setw(14) << "rays" << std::setw(14) << "JF ms" << "RT ms\n";
    for (const auto& r : rows) {
        std::ostringstream kv;
        kv << r.knob_value;
        out << std::left << std::setw(20) << r.scenario_id << std::setw(10) << kv.str() << std::setw(12) << r.cells
            << std::setw(12) << r.masked_texels << std::setw(14) << r.rays_traced << std::setw(14) << std::fixed
            << std::setprecision(3) << r.flood_ns * 1e-6 << r.sample_ns * 1e-6 << "\n";
        out.unsetf(std::ios::fixed);
    }
    for (const auto& v : verdicts) out << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << "\n";
}

TrendReport trend_report(const std::vector<ScenarioRun>& runs) {
    if (runs.size() < 2) throw ConfigError("a trend needs at least two scenarios");
    const Scenario& a = runs.front().scenario;
    bool vary_x = false, vary_d = false, vary_size = false;
    for (const auto& r : runs) {
        const Scenario& b = r.scenario;
        if (b.scene != a.scene || b.alpha != a.alpha || b.animate != a.animate || b.light_angle != a.light_angle) {
            throw ConfigError("trend scenarios must share scene, alpha, animation and light");
        }
        vary_x |= b.rays_per_texel != a.rays_per_texel;
        vary_d |= b.mask_distance != a.mask_distance;
        vary_size |= b.coarse() != a.coarse() || b.fine() != a.fine();
    }
    const int varying = int(vary_x) + int(vary_d) + int(vary_size);
    if (varying != 1) throw ConfigError("trend scenarios must vary exactly one of x, d or size");

    TrendReport rep;
    rep.knob = vary_x ? "x" : vary_d ? "d" : "size";
    for (const auto& r : runs) {
        const PassTimings t = r.typical();
        TrendRow row;
        row.scenario_id = r.scenario.id;
        const GridSpec coarse{r.scenario.coarse(), {}};
        row.cells = coarse.count();
        row.knob_value = vary_x ? r.scenario.rays_per_texel
                         : vary_d ? r.scenario.mask_distance
                                  : static_cast<double>(row.cells);
        row.masked_texels = t.masked_texels;
        row.rays_traced = t.rays_traced;
        row.flood_ns = t.flood_ns;
        row.sample_ns = t.sample_ns;
        rep.rows.push_back(row);
    }
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const TrendRow& l, const TrendRow& r) { return l.knob_value < r.knob_value; });

    auto fmt = [](double v) {
        std::ostringstream s;
        s << std::setprecision(4) << v;
        return s.str();
    };
    if (vary_d) {
        bool rays_up = true, masked_up = true;
        std::string detail;
        for (std::size_t i = 1; i < rep.rows.size(); ++i) {
            rays_up &= rep.rows[i].rays_traced > rep.rows[i - 1].rays_traced;
            masked_up &= rep.rows[i].masked_texels >= rep.rows[i - 1].masked_texels;
        }
        std::string masked;
        for (const auto& r : rep.rows) {
            detail += (detail.empty() ? "" : " < ") + std::to_string(r.rays_traced);
            masked += (masked.empty() ? "" : " <= ") + std::to_string(r.masked_texels);
        }
        rep.verdicts.push_back({"rays traced strictly increasing in d", rays_up, detail});
        rep.verdicts.push_back({"masked texels non-decreasing in d", masked_up, masked});
    } else if (vary_x) {
        std::size_t exact = 0;
        for (const auto& r : rep.rows) {
            exact += r.rays_traced == r.masked_texels * static_cast<std::size_t>(r.knob_value);
        }
        rep.verdicts.push_back({"rays traced = masked texels * x", exact == rep.rows.size(),
                                std::to_string(exact) + " of " + std::to_string(rep.rows.size()) + " runs exact"});

        // Least-squares line through (x, RT); the per-texel loop and resample are a fixed cost.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(rep.rows.size());
        for (const auto& r : rep.rows) {
            const double y = static_cast<double>(r.sample_ns);
            sx += r.knob_value;
            sy += y;
            sxx += r.knob_value * r.knob_value;
            sxy += r.knob_value * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / n;
        bool fits = slope > 0;
        double worst = 0;
        for (const auto& r : rep.rows) {
            const double fit = intercept + slope * r.knob_value;
            const double dev = std::abs(static_cast<double>(r.sample_ns) / fit - 1.0);
            worst = std::max(worst, dev);
            fits &= fit > 0 && dev <= kLinearTolerance;
        }
        rep.verdicts.push_back({"RT cost linear in x within 30%", fits,
                                "RT = " + fmt(intercept * 1e-6) + " ms + " + fmt(slope * 1e-6) +
                                    " ms * x, worst deviation " + fmt(100 * worst) + "%"});

        const auto find = [&](double x) -> const TrendRow* {
            for (const auto& r : rep.rows)
                if (r.knob_value == x) return &r;
            return nullptr;
        };
        if (const TrendRow *lo = find(5), *hi = find(10); lo && hi && lo->sample_ns > 0) {
            const double ratio = static_cast<double>(hi->sample_ns) / lo->sample_ns;
            rep.verdicts.push_back({"RT cost x=10 vs x=5 within 30% of 2x", std::abs(ratio / 2.0 - 1.0) <= kLinearTolerance,
                                    "ratio " + fmt(ratio)});
        }
    } else {
        bool up = true;
        std::string detail;
        for (std::size_t i = 1; i < rep.rows.size(); ++i) {
            up &= rep.rows[i].flood_ns > rep.rows[i - 1].flood_ns;
            const double cell_ratio = static_cast<double>(rep.rows[i].cells) / rep.rows[i - 1].cells;
            const double time_ratio = static_cast<double>(rep.rows[i].flood_ns) / std::max<std::int64_t>(1, rep.rows[i - 1].flood_ns);
            detail += (detail.empty() ? "" : "; ") + std::string("time x") + fmt(time_ratio) + " for cells x" +
                      fmt(cell_ratio);
        }
        rep.verdicts.push_back({"JF time strictly increasing with cell count", up, detail});
    }
    return rep;
}

void GhostingReport::print(std::ostream& out) const {
    out << "tracked texels " << tracked_texels << " (" << excluded_inside
        << " inside-classified set aside), envelope checks " << envelope_checks << ", violations "
        << envelope_violations << ", worst ratio " << worst_envelope_ratio << "\n";
    out << "c > d checks " << immediate_checks << ", violations " << immediate_violations << "\n";
    out << "half-life " << (half_life ? std::to_string(*half_life) : std::string("n/a")) << " frames\n";
    out << "age  texels  deficit/gap  alpha^(k+1)  |fine-exact|\n";
    for (const auto& a : curve) {
        out << std::setw(3) << a.age << "  " << std::setw(6) << a.texels << "  " << std::setw(11)
            << std::setprecision(4) << a.mean_deficit_ratio << "  " << std::setw(11) << a.envelope << "  "
            << a.mean_oracle_error << "\n";
    }
}

GhostingReport ghosting_experiment(const GhostingConfig& cfg, const std::string& asset_dir) {
    const Scenario& s = cfg.scenario;
    s.validate();
    if (!s.animate) throw ConfigError("the ghosting experiment needs an animated scenario");
    Scene scene = s.build_scene(asset_dir);
    if (!scene.animated()) throw ConfigError("scene '" + s.scene + "' has no moving parts");
    scene.validate(s.frames);
    PipelineConfig pc = s.pipeline_config();
    pc.recompute_static = false;
    const GridSpec fine{pc.fine, scene.bounds};
    const std::size_t n = fine.count();
    const double d = pc.sampling.mask_distance;
    const double alpha = pc.sampling.decay_alpha;

    auto coarse_at_texels = [&](const DistanceField& coarse, std::vector<float>& out) {
        out = resample(coarse, fine).values;
    };

    // Pass 1: the frame each texel's coarse value last changed, and whether it rose.
    constexpr std::uint32_t kNever = 0;
    std::vector<std::uint32_t> settled(n, kNever);
    std::vector<std::uint8_t> rose(n, 0);
    std::vector<float> c_prev, c_now;
    {
        Pipeline p(scene, pc);
        for (std::uint64_t f = 0; f < s.frames; ++f) {
            p.step(f);
            coarse_at_texels(p.coarse(), c_now);
            if (f > 0) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (c_now[i] != c_prev[i]) {
                        settled[i] = static_cast<std::uint32_t>(f);
                        rose[i] = c_now[i] > c_prev[i];
                    }
                }
            }
            std::swap(c_prev, c_now);
        }
    }
    const std::vector<float> c_final = c_prev;

    // Pass 2: identical run, measuring against the gap at the settle frame.
    // Texels whose resolved sign goes negative are set aside: a negative ray
    // result rises as closer back-face hits arrive, so the decay bound, which
    // assumes a non-increasing ray result, does not apply to them.
    struct Sample {
        int age;
        double deficit, env, ratio, oracle;
    };
    GhostingReport rep;
    std::vector<float> gap(n, 0.0f);
    std::vector<std::uint8_t> tracked(n, 0), inside(n, 0);
    std::unordered_map<std::size_t, std::vector<Sample>> samples;
    Pipeline p(std::move(scene), pc);
    for (std::uint64_t f = 0; f < s.frames; ++f) {
        p.step(f);
        const DistanceField& fv = p.fine_unbiased();
        coarse_at_texels(p.coarse(), c_now);
        for (std::size_t i = 0; i < n; ++i) {
            if (c_now[i] > d) {
                ++rep.immediate_checks;
                if (fv.values[i] != c_now[i]) ++rep.immediate_violations;
            }
            const std::uint32_t t0 = settled[i];
            if (t0 == kNever || !rose[i] || c_final[i] > d) continue;
            if (f + 1 == t0) {
                gap[i] = c_final[i] - fv.values[i];
                tracked[i] = gap[i] >= cfg.min_gap;
                continue;
            }
            if (!tracked[i] || f < t0) continue;
            const int age = static_cast<int>(f - t0);
            const auto r = resolve_sign(p.builder().state().texel(i));
            if (r && *r < 0) inside[i] = 1;
            const double target = r ? std::min<double>(c_now[i], *r) : c_now[i];
            const double deficit = std::max(0.0, target - fv.values[i]);
            const double exact = p.geometry().bvh.nearest_distance(fine.cell_center(i));
            samples[i].push_back({age, deficit, std::pow(alpha, age + 1) * gap[i], deficit / gap[i],
                                  std::abs(fv.values[i] - exact)});
        }
    }
    std::map<int, std::vector<double>> ratios, oracle;
    for (const auto& [i, texel_samples] : samples) {
        if (!tracked[i]) continue;
        if (inside[i]) {
            ++rep.excluded_inside;
            continue;
        }
        ++rep.tracked_texels;
        for (const Sample& smp : texel_samples) {
            ++rep.envelope_checks;
            if (smp.deficit > (1.0 + cfg.slack) * smp.env + cfg.abs_tolerance) ++rep.envelope_violations;
            if (smp.env > 0) rep.worst_envelope_ratio = std::max(rep.worst_envelope_ratio, smp.deficit / smp.env);
            ratios[smp.age].push_back(smp.ratio);
            oracle[smp.age].push_back(smp.oracle);
        }
    }
    for (const auto& [age, v] : ratios) {
        GhostingAge a;
        a.age = age;
        a.texels = v.size();
        double sum = 0, osum = 0;
        for (double x : v) sum += x;
        for (double x : oracle[age]) osum += x;
        a.mean_deficit_ratio = sum / v.size();
        a.mean_oracle_error = osum / v.size();
        a.envelope = std::pow(alpha, age + 1);
        if (!rep.half_life && a.mean_deficit_ratio <= 0.5) rep.half_life = age;
        rep.curve.push_back(a);
    }
    return rep;
}

}  // namespace sdfshadow
