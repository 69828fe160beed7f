#include "sdfshadow/scene.hpp"

#include "sdfshadow/error.hpp"
#include "sdfshadow/shapes.hpp"

#ifndef SDFSHADOW_ASSET_DIR
#define SDFSHADOW_ASSET_DIR "assets"
#endif

namespace sdfshadow {

Ray Camera::primary_ray(double px, double py) const {
    const Vec3 forward = normalize(target - position);
    const Vec3 right = normalize(cross(forward, up));
    const Vec3 true_up = cross(right, forward);
    const double half_h = std::tan(vertical_fov_deg * kPi / 360.0);
    const double half_w = half_h * width / height;
    const double sx = (2.0 * px / width - 1.0) * half_w;
    const double sy = (1.0 - 2.0 * py / height) * half_h;
    return {position, normalize(forward + right * sx + true_up * sy)};
}

Affine3 OrbitTrack::transform(std::uint64_t frame) const {
    const double angle = phase + radians_per_frame * static_cast<double>(frame);
    const Vec3 offset{radius * std::cos(angle), 0.0, radius * std::sin(angle)};
    return Affine3::translation(center + offset) * Affine3::rotation_y(-angle);
}

TriangleMesh Scene::mesh_at(std::uint64_t frame) const {
    std::vector<TriangleMesh> parts;
    std::uint32_t tag = 0;
    for (const auto& p : statics) parts.push_back(p.mesh.with_tag(tag++));
    for (const auto& d : dynamics) parts.push_back(d.part.mesh.transformed(d.track.transform(frame)).with_tag(tag++));
    return merge(parts);
}

std::vector<double> Scene::albedos() const {
    std::vector<double> a;
    for (const auto& p : statics) a.push_back(p.albedo);
    for (const auto& d : dynamics) a.push_back(d.part.albedo);
    return a;
}

void Scene::validate(std::uint64_t frames) const {
    if (statics.empty() && dynamics.empty()) throw ConfigError("scene '" + id + "' has no geometry");
    const double slack = 1e-9 * std::max(1.0, bounds.diagonal());
    for (const auto& p : statics) {
        if (!bounds.contains(p.mesh.bounds(), slack)) throw ConfigError("static part outside scene bounds");
    }
    for (const auto& d : dynamics) {
        for (std::uint64_t f = 0; f < std::max<std::uint64_t>(frames, 1); ++f) {
            const Box3 b = d.part.mesh.transformed(d.track.transform(f)).bounds();
            if (!bounds.contains(b, slack)) {
                throw ConfigError("dynamic instance leaves scene bounds at frame " + std::to_string(f));
            }
        }
    }
}

std::string default_asset_dir() { return SDFSHADOW_ASSET_DIR; }

std::vector<std::string> scene_ids() { return {"sphere", "sphere_only", "thin_plate", "orbit"}; }

namespace {

Light key_light(const SceneOptions& o, double default_angle) {
    return Light::directional_light({0.35, 1.0, 0.25}, o.light_angle > 0 ? o.light_angle : default_angle);
}

// Thin leaves fanned around a vertical stem; each leaf is a single-sided quad
// of zero thickness.
TriangleMesh plant() {
    std::vector<TriangleMesh> parts;
    parts.push_back(shapes::box({{-0.02, 0.0, -0.02}, {0.02, 1.1, 0.02}}));
    const int leaves = 6;
    for (int i = 0; i < leaves; ++i) {
        const double angle = 2.0 * kPi * i / leaves + 0.3;
        const double base = 0.45 + 0.1 * i;
        const Vec3 dir{std::cos(angle), 0.0, std::sin(angle)};
        const Vec3 side{-dir.z, 0.0, dir.x};
        const double len = 0.7, half_w = 0.1;
        const Vec3 root{0.0, base, 0.0};
        const Vec3 tip = root + dir * len + Vec3{0, 0.15, 0};
        std::vector<Vec3> v = {root - side * 0.02, root + side * 0.02,
                               root + dir * (0.5 * len) + side * half_w + Vec3{0, 0.1, 0},
                               tip, root + dir * (0.5 * len) - side * half_w + Vec3{0, 0.1, 0}};
        std::vector<TriangleIndices> t = {{0, 4, 1}, {1, 4, 2}, {2, 4, 3}};
        parts.push_back(TriangleMesh::build(std::move(v), std::move(t)));
    }
    return merge(parts);
}

}  // namespace

Scene make_scene(const std::string& id, const SceneOptions& o) {
    Scene s;
    s.id = id;
    const double half = 2.0;
    s.bounds = {{-half, -0.5, -half}, {half, 2 * half - 0.5, half}};
    const TriangleMesh ground = shapes::ground_quad(-half, half, -half, half, 0.0);
    if (id == "sphere") {
        s.statics.push_back({ground, 0.8});
        s.statics.push_back({shapes::uv_sphere({0, 1.0, 0}, 0.5, o.sphere_stacks, o.sphere_slices), 0.8});
        s.lights.push_back(key_light(o, 0.08));
        s.camera = {{0, 3.2, -3.2}, {0, 0.3, 0}, {0, 1, 0}, 50.0, 160, 120};
    } else if (id == "sphere_only") {
        s.bounds = {{-half, -half, -half}, {half, half, half}};
        s.statics.push_back({shapes::uv_sphere({0, 0, 0}, 1.0, o.sphere_stacks, o.sphere_slices), 0.8});
        s.lights.push_back(key_light(o, 0.08));
        s.camera = {{0, 1.5, -4}, {0, 0, 0}, {0, 1, 0}, 45.0, 160, 120};
    } else if (id == "thin_plate") {
        s.statics.push_back({ground, 0.8});
        s.statics.push_back({plant(), 0.6});
        s.lights.push_back(Light::directional_light({0.45, 1.0, 0.3}, o.light_angle > 0 ? o.light_angle : 0.03));
        s.camera = {{-1.0, 3.4, -3.0}, {0.2, 0.3, 0.2}, {0, 1, 0}, 50.0, 160, 120};
    } else if (id == "orbit") {
        s.statics.push_back({ground, 0.8});
        s.statics.push_back({shapes::uv_sphere({0, 0.5, 0}, 0.5, 24, 32), 0.8});
        const TriangleMesh teapot = load_mesh_file(
            (o.asset_dir.empty() ? default_asset_dir() : o.asset_dir) + "/teapot_proxy.obj", Affine3::scale(0.35));
        if (o.animate) {
            s.dynamics.push_back({{teapot, 0.7}, OrbitTrack{{0, 0.0, 0}, 1.2, 0.06, 0.0}});
        } else {
            s.statics.push_back({teapot.transformed(OrbitTrack{{0, 0.0, 0}, 1.2, 0.06, 0.0}.transform(0)), 0.7});
        }
        s.lights.push_back(key_light(o, 0.08));
        s.camera = {{0, 3.5, -3.5}, {0, 0.3, 0}, {0, 1, 0}, 50.0, 160, 120};
    } else {
        std::string known;
        for (const auto& k : scene_ids()) known += " " + k;
        throw UsageError("unknown scene '" + id + "' (known:" + known + ")");
    }
    return s;
}

}  // namespace sdfshadow
