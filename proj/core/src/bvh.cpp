#include "sdfshadow/bvh.hpp"

#include <algorithm>
#include <numeric>

#include "sdfshadow/distance.hpp"
#include "sdfshadow/error.hpp"

namespace sdfshadow {
namespace {

struct RayBox {
    double o[3];
    double inv[3];
};

// Zero direction components become a tiny value of the same sign, so the slab
// products stay finite and the test needs no per-axis branch.
RayBox make_ray_box(const Vec3& origin, const Vec3& direction) {
    RayBox r{};
    for (int a = 0; a < 3; ++a) {
        const double d = direction[a];
        r.o[a] = origin[a];
        r.inv[a] = 1.0 / (d == 0.0 ? std::copysign(1e-300, d) : d);
    }
    return r;
}

// Entry parameter of the ray into the box clipped to [0, t_max], or +inf on miss.
inline double enter_box(const RayBox& r, const Box3& box, double t_max) {
    const double x0 = (box.lo.x - r.o[0]) * r.inv[0], x1 = (box.hi.x - r.o[0]) * r.inv[0];
    const double y0 = (box.lo.y - r.o[1]) * r.inv[1], y1 = (box.hi.y - r.o[1]) * r.inv[1];
    const double z0 = (box.lo.z - r.o[2]) * r.inv[2], z1 = (box.hi.z - r.o[2]) * r.inv[2];
    const double t0 = std::max(std::max(std::min(x0, x1), std::min(y0, y1)), std::max(std::min(z0, z1), 0.0));
    const double t1 = std::min(std::min(std::max(x0, x1), std::max(y0, y1)), std::min(std::max(z0, z1), t_max));
    return t0 <= t1 ? t0 : kInfinity;
}

inline std::optional<double> intersect_edges(const Vec3& origin, const Vec3& direction, const Vec3& a, const Vec3& e1,
                                             const Vec3& e2, double t_max) {
    const Vec3 pvec = cross(direction, e2);
    const double det = dot(e1, pvec);
    if (det == 0.0) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(direction, qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double t = dot(e2, qvec) * inv_det;
    if (t < 0.0 || t > t_max) return std::nullopt;
    return t;
}

// Past this depth splits fall back to the median so the tree stays shallow.
constexpr std::uint32_t kMaxSahDepth = 40;

double half_area(const Box3& b) {
    const Vec3 e = b.extent();
    return e.x * e.y + e.y * e.z + e.z * e.x;
}

bool closer(double t, std::uint32_t id, const std::optional<RayHit>& best) {
    return !best || t < best->t || (t == best->t && id < best->triangle);
}

}  // namespace

std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction, const Vec3& a, const Vec3& b,
                                         const Vec3& c, double t_max) {
    return intersect_edges(origin, direction, a, b - a, c - a, t_max);
}

std::optional<RayHit> brute_force_query(const TriangleMesh& mesh, const Vec3& origin, const Vec3& direction,
                                        double t_max) {
    std::optional<RayHit> best;
    for (std::uint32_t i = 0; i < mesh.triangle_count(); ++i) {
        const auto [a, b, c] = mesh.corners(i);
        const auto t = intersect_triangle(origin, direction, a, b, c, t_max);
        if (t && closer(*t, i, best)) {
            best = RayHit{*t, i, dot(direction, mesh.normals()[i]) < 0 ? Facing::front : Facing::back};
        }
    }
    return best;
}

BvhIndex::BvhIndex(const TriangleMesh& mesh) {
    if (mesh.empty()) throw InvariantError("cannot build a BVH over an empty mesh");
    const std::size_t n = mesh.triangle_count();
    corners_.reserve(n);
    std::vector<Vec3> centroids;
    centroids.reserve(n);
    std::vector<Box3> tri_boxes;
    tri_boxes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = mesh.corners(i);
        corners_.push_back(c);
        Box3 b;
        for (const auto& v : c) b.expand(v);
        tri_boxes.push_back(b);
        centroids.push_back((c[0] + c[1] + c[2]) / 3.0);
    }
    normals_.assign(mesh.normals().begin(), mesh.normals().end());
    tags_.assign(mesh.tags().begin(), mesh.tags().end());
    permutation_.resize(n);
    std::iota(permutation_.begin(), permutation_.end(), 0u);

    struct Task {
        std::uint32_t node, begin, end, depth;
    };
    nodes_.reserve(2 * n / kLeafSize + 2);
    nodes_.emplace_back();
    std::vector<Task> stack{{0, 0, static_cast<std::uint32_t>(n), 0}};
    while (!stack.empty()) {
        const Task task = stack.back();
        stack.pop_back();
        Box3 box, centroid_box;
        for (std::uint32_t s = task.begin; s < task.end; ++s) {
            box.expand(tri_boxes[permutation_[s]]);
            centroid_box.expand(centroids[permutation_[s]]);
        }
        nodes_[task.node].box = box;
        const std::uint32_t count = task.end - task.begin;
        const int axis = centroid_box.longest_axis();
        if (count <= kLeafSize || centroid_box.extent()[axis] <= 0.0) {
            nodes_[task.node].first = task.begin;
            nodes_[task.node].count = count;
            continue;
        }
        std::uint32_t mid = task.begin + count / 2;
        int split_axis = axis;
        int split_bin = 0;
        bool use_sah = false;
        double best_cost = half_area(box) * count;
        for (int ax = 0; ax < 3 && task.depth < kMaxSahDepth; ++ax) {
            const double lo = centroid_box.lo[ax], ext = centroid_box.extent()[ax];
            if (ext <= 0.0) continue;
            std::array<Box3, kBins> bin_box;
            std::array<std::uint32_t, kBins> bin_count{};
            for (std::uint32_t s = task.begin; s < task.end; ++s) {
                const std::uint32_t id = permutation_[s];
                const int b = std::min(kBins - 1, static_cast<int>(kBins * (centroids[id][ax] - lo) / ext));
                bin_box[b].expand(tri_boxes[id]);
                ++bin_count[b];
            }
            std::array<double, kBins> right_cost{};
            Box3 acc;
            std::uint32_t acc_n = 0;
            for (int b = kBins - 1; b > 0; --b) {
                acc.expand(bin_box[b]);
                acc_n += bin_count[b];
                right_cost[b] = acc_n ? half_area(acc) * acc_n : 0.0;
            }
            acc = Box3{};
            acc_n = 0;
            for (int b = 0; b < kBins - 1; ++b) {
                acc.expand(bin_box[b]);
                acc_n += bin_count[b];
                if (acc_n == 0 || acc_n == count) continue;
                const double cost = half_area(acc) * acc_n + right_cost[b + 1];
                if (cost < best_cost) {
                    best_cost = cost;
                    split_axis = ax;
                    split_bin = b + 1;
                    use_sah = true;
                }
            }
        }
        if (use_sah) {
            const double lo = centroid_box.lo[split_axis], ext = centroid_box.extent()[split_axis];
            const auto it = std::stable_partition(
                permutation_.begin() + task.begin, permutation_.begin() + task.end, [&](std::uint32_t id) {
                    return std::min(kBins - 1, static_cast<int>(kBins * (centroids[id][split_axis] - lo) / ext)) <
                           split_bin;
                });
            mid = static_cast<std::uint32_t>(it - permutation_.begin());
        } else {
            std::nth_element(permutation_.begin() + task.begin, permutation_.begin() + mid,
                             permutation_.begin() + task.end, [&](std::uint32_t l, std::uint32_t r) {
                                 const double cl = centroids[l][axis], cr = centroids[r][axis];
                                 return cl < cr || (cl == cr && l < r);
                             });
        }
        const auto left = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        const auto right = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[task.node].first = left;
        nodes_[task.node].count = 0;
        stack.push_back({right, mid, task.end, task.depth + 1});
        stack.push_back({left, task.begin, mid, task.depth + 1});
    }
    packed_.reserve(n);
    for (const std::uint32_t id : permutation_) {
        const auto& c = corners_[id];
        packed_.push_back({c[0], c[1] - c[0], c[2] - c[0], id});
    }
}

std::optional<RayHit> BvhIndex::ray_query(const Vec3& origin, const Vec3& direction, double t_max) const {
    const RayBox rb = make_ray_box(origin, direction);
    std::optional<RayHit> best;
    double limit = t_max;
    struct Entry {
        std::uint32_t node;
        double t;
    };
    Entry stack[64];
    int top = 0;
    const double t_root = enter_box(rb, nodes_[0].box, limit);
    if (t_root == kInfinity) return best;
    stack[top++] = {0, t_root};
    while (top > 0) {
        const Entry e = stack[--top];
        if (e.t > limit) continue;
        const Node& node = nodes_[e.node];
        if (node.leaf()) {
            for (std::uint32_t s = node.first; s < node.first + node.count; ++s) {
                const Packed& p = packed_[s];
                const auto t = intersect_edges(origin, direction, p.a, p.e1, p.e2, limit);
                if (t && closer(*t, p.id, best)) {
                    best = RayHit{*t, p.id, dot(direction, normals_[p.id]) < 0 ? Facing::front : Facing::back};
                    limit = *t;
                }
            }
            continue;
        }
        const std::uint32_t l = node.first, r = node.first + 1;
        const double tl = enter_box(rb, nodes_[l].box, limit);
        const double tr = enter_box(rb, nodes_[r].box, limit);
        if (tl <= tr) {
            if (tr != kInfinity) stack[top++] = {r, tr};
            if (tl != kInfinity) stack[top++] = {l, tl};
        } else {
            stack[top++] = {l, tl};
            if (tr != kInfinity) stack[top++] = {r, tr};
        }
    }
    return best;
}

bool BvhIndex::occluded(const Vec3& origin, const Vec3& direction, double t_max) const {
    const RayBox rb = make_ray_box(origin, direction);
    std::uint32_t stack[64];
    int top = 0;
    if (enter_box(rb, nodes_[0].box, t_max) == kInfinity) return false;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (node.leaf()) {
            for (std::uint32_t s = node.first; s < node.first + node.count; ++s) {
                const Packed& p = packed_[s];
                if (const auto t = intersect_edges(origin, direction, p.a, p.e1, p.e2, t_max); t && *t > 0.0) {
                    return true;
                }
            }
            continue;
        }
        const std::uint32_t l = node.first, r = node.first + 1;
        if (enter_box(rb, nodes_[r].box, t_max) != kInfinity) stack[top++] = r;
        if (enter_box(rb, nodes_[l].box, t_max) != kInfinity) stack[top++] = l;
    }
    return false;
}

double BvhIndex::nearest_distance(const Vec3& point) const {
    double best_sq = kInfinity;
    struct Entry {
        std::uint32_t node;
        double d2;
    };
    Entry stack[64];
    int top = 0;
    stack[top++] = {0, box_distance_sq(nodes_[0].box, point)};
    while (top > 0) {
        const Entry e = stack[--top];
        if (e.d2 >= best_sq) continue;
        const Node& node = nodes_[e.node];
        if (node.leaf()) {
            for (std::uint32_t s = node.first; s < node.first + node.count; ++s) {
                const auto& c = corners_[permutation_[s]];
                const Vec3 q = closest_point_on_triangle(point, c[0], c[1], c[2]);
                best_sq = std::min(best_sq, dot(q - point, q - point));
            }
            continue;
        }
        const std::uint32_t l = node.first, r = node.first + 1;
        const double dl = box_distance_sq(nodes_[l].box, point);
        const double dr = box_distance_sq(nodes_[r].box, point);
        if (dl <= dr) {
            stack[top++] = {r, dr};
            stack[top++] = {l, dl};
        } else {
            stack[top++] = {l, dl};
            stack[top++] = {r, dr};
        }
    }
    return std::sqrt(best_sq);
}

}  // namespace sdfshadow
