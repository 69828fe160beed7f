#include <doctest.h>

#include <cstring>
#include <sstream>

#include "helpers.hpp"
#include "sdfshadow/error.hpp"
#include "sdfshadow/bvh.hpp"
#include "sdfshadow/image.hpp"
#include "sdfshadow/render.hpp"

using namespace sdfshadow;

namespace {

Camera front_camera(int w, int h) {
    Camera c;
    c.position = {0, 0, -4};
    c.target = {0, 0, 0};
    c.width = w;
    c.height = h;
    return c;
}

Camera top_camera(int w, int h) {
    Camera c;
    c.position = {0, 5, 0.001};
    c.target = {0, 0, 0};
    c.vertical_fov_deg = 30;
    c.width = w;
    c.height = h;
    return c;
}

GBuffer single_pixel(const Vec3& position, const Vec3& normal, float albedo) {
    GBuffer g;
    g.width = g.height = 1;
    g.position = {position};
    g.normal = {normal};
    g.albedo = {albedo};
    g.coverage = {1};
    return g;
}

}  // namespace

TEST_CASE("rasterize_gbuffer: sky and cube face") {
    const BvhIndex bvh(testing::unit_cube().with_tag(0));
    const auto g = rasterize_gbuffer(front_camera(21, 21), bvh, {0.5});
    const std::size_t center = 10 * 21 + 10;
    REQUIRE(g.coverage[center]);
    CHECK(g.normal[center].z == doctest::Approx(-1.0));
    CHECK(g.position[center].z == doctest::Approx(-1.0));
    CHECK(g.albedo[center] == doctest::Approx(0.5));
    CHECK_FALSE(g.coverage[0]);
}

TEST_CASE("rasterize_gbuffer flips normals toward the camera") {
    // The quad's normal is +y; view it from below.
    const BvhIndex bvh(shapes::ground_quad(-5, 5, -5, 5, 0.0).with_tag(0));
    Camera c = front_camera(9, 9);
    c.position = {0, -3, 0.001};
    const auto g = rasterize_gbuffer(c, bvh, {1.0});
    REQUIRE(g.coverage[4 * 9 + 4]);
    CHECK(g.normal[4 * 9 + 4].y == doctest::Approx(-1.0));
}

TEST_CASE("shade: surfaces facing away from the light are black") {
    const DistanceField open({{4, 4, 4}, {Vec3::splat(-2), Vec3::splat(2)}}, 0.0f);
    ShadeParams p;
    p.march = MarchParams::for_field(open.grid);
    const auto img = shade(single_pixel({0, 0, 0}, {0, -1, 0}, 1.0f), open, {Light::directional_light({0, 1, 0}, 0.1)}, p);
    CHECK(img.pixels[0] == 0.0f);
}

TEST_CASE("shade: a fully lit plane is uniform") {
    const BvhIndex bvh(shapes::ground_quad(-10, 10, -10, 10, 0.0).with_tag(0));
    const auto g = rasterize_gbuffer(top_camera(16, 12), bvh, {0.8});
    const DistanceField open({{8, 8, 8}, {Vec3{-10, -1, -10}, Vec3{10, 10, 10}}}, 50.0f);
    ShadeParams p;
    p.march = MarchParams::for_field(open.grid);
    p.march.surface_offset = 0;
    const auto img = shade(g, open, {Light::directional_light({0, 1, 0}, 0.1, 2.0)}, p);
    for (std::size_t i = 0; i < g.size(); ++i) {
        REQUIRE(g.coverage[i]);
        CHECK(img.pixels[i] == doctest::Approx(1.6));
    }
    const auto reference = reference_render(g, bvh, {Light::directional_light({0, 1, 0}, 0.1, 2.0)}, 16, 1);
    CHECK(compare(img, reference.radiance).max_error < 1e-6);
}

TEST_CASE("shade: sky pixels take the background value") {
    const BvhIndex bvh(testing::unit_cube().with_tag(0));
    const auto g = rasterize_gbuffer(front_camera(11, 11), bvh, {0.5});
    const DistanceField open({{4, 4, 4}, {Vec3::splat(-3), Vec3::splat(3)}}, 50.0f);
    ShadeParams p;
    p.march = MarchParams::for_field(open.grid);
    p.background = 0.25;
    const auto img = shade(g, open, {Light::directional_light({0, 0, -1}, 0.1)}, p);
    CHECK(img.pixels[0] == doctest::Approx(0.25));
    CHECK(unshadowed(g, {Light::directional_light({0, 0, -1}, 0.1)}, 0.25).pixels[0] == doctest::Approx(0.25));
}

TEST_CASE("shade: hard-shadow fallback takes the larger occlusion") {
    const TriangleMesh parts[] = {shapes::ground_quad(-4, 4, -4, 4, 0.0).with_tag(0),
                                  shapes::box({{-0.5, 1.0, -0.5}, {0.5, 1.2, 0.5}}).with_tag(0)};
    const auto mesh = merge(parts);
    const BvhIndex bvh(mesh);
    const auto g = single_pixel({0, 0, 0}, {0, 1, 0}, 1.0f);
    const DistanceField open({{8, 8, 8}, {Vec3{-4, -1, -4}, Vec3{4, 4, 4}}}, 50.0f);
    ShadeParams p;
    p.march = MarchParams::for_field(open.grid);
    const std::vector<Light> lights{Light::directional_light({0, 1, 0}, 0.05)};
    CHECK(shade(g, open, lights, p).pixels[0] == doctest::Approx(1.0));
    p.hard_shadow_fallback = true;
    p.bvh = &bvh;
    CHECK(shade(g, open, lights, p).pixels[0] == 0.0f);
}

TEST_CASE("reference_render: a zero-radius light casts binary shadows") {
    const TriangleMesh parts[] = {shapes::ground_quad(-4, 4, -4, 4, 0.0).with_tag(0),
                                  shapes::uv_sphere({0, 1, 0}, 0.5, 16, 24).with_tag(1)};
    const auto mesh = merge(parts);
    const BvhIndex bvh(mesh);
    const auto g = rasterize_gbuffer(top_camera(40, 30), bvh, {0.8, 0.8});
    const auto out = reference_render(g, bvh, {Light::directional_light({0.3, 1, 0}, 0.0)}, 8, 3);
    std::size_t shadowed = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const float o = out.occlusion.pixels[i];
        CHECK((o == 0.0f || o == 1.0f));
        shadowed += o == 1.0f;
    }
    CHECK(shadowed > 0);
}

TEST_CASE("reference_render: contact hardening under a raised plate") {
    // Penumbra width on the ground grows with the occluder height.
    const auto width_for = [](double height) {
        const TriangleMesh parts[] = {shapes::ground_quad(-6, 6, -6, 6, 0.0).with_tag(0),
                                      shapes::ground_quad(-6, 0, -6, 6, height).with_tag(0)};
        const BvhIndex bvh(merge(parts));
        GBuffer g;
        g.width = 121;
        g.height = 1;
        for (int x = 0; x < g.width; ++x) {
            g.position.push_back({-1.5 + 3.0 * x / (g.width - 1), 0, 0});
            g.normal.push_back({0, 1, 0});
            g.albedo.push_back(1.0f);
            g.coverage.push_back(1);
        }
        const auto out = reference_render(g, bvh, {Light::directional_light({0, 1, 0}, 0.15)}, 256, 9);
        int partial = 0;
        for (float o : out.occlusion.pixels) partial += o > 0.02f && o < 0.98f;
        return partial;
    };
    const int low = width_for(0.5), high = width_for(2.0);
    CHECK(low > 0);
    CHECK(high > low);
}

TEST_CASE("compare") {
    const auto a = make_image(8, 4, 0.3f);
    auto b = a;
    SUBCASE("identical") {
        const auto m = compare(a, b);
        CHECK(m.rmse == 0.0);
        CHECK(m.mae == 0.0);
        CHECK(m.max_error == 0.0);
        CHECK(m.pixels == 32);
    }
    SUBCASE("constant offset") {
        for (auto& v : b.pixels) v += 0.1f;
        const auto m = compare(a, b);
        CHECK(m.mae == doctest::Approx(0.1).epsilon(1e-5));
        CHECK(m.rmse == doctest::Approx(0.1).epsilon(1e-5));
        CHECK(m.max_error == doctest::Approx(0.1).epsilon(1e-5));
    }
    SUBCASE("mask limits the pixels") {
        b.pixels[0] = 1.3f;
        std::vector<std::uint8_t> mask(32, 1);
        mask[0] = 0;
        CHECK(compare(a, b, &mask).max_error == 0.0);
        CHECK(compare(a, b, &mask).pixels == 31);
        CHECK(compare(a, b).max_error == doctest::Approx(1.0));
    }
    SUBCASE("dimension mismatch") { CHECK_THROWS_AS(compare(a, make_image(4, 8)), UsageError); }
}

TEST_CASE("pfm round trip in both byte orders") {
    ScalarImage img = make_image(3, 2);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = 0.25f * static_cast<float>(i);
    std::stringstream buf;
    write_pfm(buf, img);
    const auto back = read_pfm(buf);
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    CHECK(back.pixels == img.pixels);

    // Big-endian color file, top row stored last.
    std::string be = "PF\n1 2\n1.0\n";
    const auto push = [&](float v) {
        std::uint32_t u;
        std::memcpy(&u, &v, 4);
        for (int s = 24; s >= 0; s -= 8) be.push_back(static_cast<char>((u >> s) & 0xff));
    };
    for (float v : {0.0f, 0.0f, 0.0f}) push(v);
    for (float v : {0.3f, 0.6f, 0.9f}) push(v);
    std::istringstream in(be);
    const auto color = read_pfm(in);
    CHECK(color.at(0, 0) == doctest::Approx(0.6));
    CHECK(color.at(0, 1) == 0.0f);

    std::istringstream junk("P6\n1 1\n255\n");
    CHECK_THROWS_AS(read_pfm(junk), FormatError);
}
