#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sdfshadow/bvh.hpp"
#include "sdfshadow/light.hpp"
#include "sdfshadow/mesh.hpp"

namespace sdfshadow {

struct Ray {
    Vec3 origin;
    Vec3 direction;
};

/// Pinhole camera. Pixel (0, 0) is the top-left corner of the image.
struct Camera {
    Vec3 position{0, 2, -4};
    Vec3 target{0, 0, 0};
    Vec3 up{0, 1, 0};
    double vertical_fov_deg = 45.0;
    int width = 160;
    int height = 120;

    Ray primary_ray(double px, double py) const;
};

struct Part {
    TriangleMesh mesh;
    double albedo = 0.8;
};

/// Circular motion about the vertical axis through `center`.
struct OrbitTrack {
    Vec3 center{0, 0, 0};
    double radius = 1.0;
    double radians_per_frame = 0.05;
    double phase = 0.0;

    Affine3 transform(std::uint64_t frame) const;
};

struct DynamicInstance {
    Part part;
    OrbitTrack track;
};

struct Scene {
    std::string id;
    std::vector<Part> statics;
    std::vector<DynamicInstance> dynamics;
    std::vector<Light> lights;
    Box3 bounds;
    Camera camera;
    double background = 0.0;

    bool animated() const { return !dynamics.empty(); }
    /// All parts merged, dynamic ones placed for `frame`. Triangle tags index
    /// albedos(): statics first, then dynamics.
    TriangleMesh mesh_at(std::uint64_t frame) const;
    std::vector<double> albedos() const;
    /// Throws ConfigError unless `bounds` contains every part for frames [0, frames).
    void validate(std::uint64_t frames) const;
};

/// Merged mesh plus its BVH for one frame.
struct FrameGeometry {
    TriangleMesh mesh;
    BvhIndex bvh;

    explicit FrameGeometry(TriangleMesh m) : mesh(std::move(m)), bvh(mesh) {}
};

struct SceneOptions {
    double light_angle = 0.0;     // radians; 0 keeps the scene default
    bool animate = true;
    int sphere_stacks = 48;       // sphere tessellation
    int sphere_slices = 64;
    std::string asset_dir;        // where bundled OBJ files live; empty = build default
};

/// Procedural stand-in scenes:
///   sphere       ground plane with a sphere hovering above it
///   sphere_only  a lone sphere (radius 1) centered in the bounds
///   thin_plate   ground plane with a plant made of thin leaves on a stem
///   orbit        ground plane with a teapot proxy orbiting a static sphere
/// Unknown ids throw UsageError.
Scene make_scene(const std::string& id, const SceneOptions& options = {});
std::vector<std::string> scene_ids();

std::string default_asset_dir();

}  // namespace sdfshadow
