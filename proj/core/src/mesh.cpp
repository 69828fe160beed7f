#include "sdfshadow/mesh.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "sdfshadow/error.hpp"

namespace sdfshadow {

TriangleMesh TriangleMesh::build(std::vector<Vec3> vertices, std::vector<TriangleIndices> triangles,
                                 LoadReport* report) {
    TriangleMesh mesh;
    mesh.vertices_ = std::move(vertices);
    LoadReport local;
    for (const auto& t : triangles) {
        for (const auto idx : t) {
            if (idx >= mesh.vertices_.size()) {
                throw FormatError("triangle index " + std::to_string(idx) + " out of range (" +
                                  std::to_string(mesh.vertices_.size()) + " vertices)");
            }
        }
        const Vec3& a = mesh.vertices_[t[0]];
        const Vec3 n = cross(mesh.vertices_[t[1]] - a, mesh.vertices_[t[2]] - a);
        const double twice_area = length(n);
        if (!(0.5 * twice_area >= kDegenerateArea)) {
            ++local.triangles_dropped;
            continue;
        }
        mesh.triangles_.push_back(t);
        mesh.normals_.push_back(n / twice_area);
        for (const auto idx : t) mesh.bounds_.expand(mesh.vertices_[idx]);
    }
    mesh.tags_.assign(mesh.triangles_.size(), 0);
    local.triangles_kept = mesh.triangles_.size();
    if (report) *report = local;
    return mesh;
}

TriangleMesh TriangleMesh::with_tag(std::uint32_t tag) const {
    TriangleMesh copy = *this;
    copy.tags_.assign(copy.triangles_.size(), tag);
    return copy;
}

TriangleMesh TriangleMesh::transformed(const Affine3& xf) const {
    std::vector<Vec3> moved;
    moved.reserve(vertices_.size());
    for (const auto& v : vertices_) moved.push_back(xf.apply(v));
    TriangleMesh out = build(std::move(moved), triangles_);
    if (out.triangle_count() == triangle_count()) out.tags_ = tags_;
    return out;
}

TriangleMesh merge(std::span<const TriangleMesh> parts) {
    TriangleMesh out;
    for (const auto& part : parts) {
        const auto base = static_cast<std::uint32_t>(out.vertices_.size());
        out.vertices_.insert(out.vertices_.end(), part.vertices_.begin(), part.vertices_.end());
        for (const auto& t : part.triangles_) out.triangles_.push_back({t[0] + base, t[1] + base, t[2] + base});
        out.normals_.insert(out.normals_.end(), part.normals_.begin(), part.normals_.end());
        out.tags_.insert(out.tags_.end(), part.tags_.begin(), part.tags_.end());
        if (!part.empty()) out.bounds_.expand(part.bounds_);
    }
    return out;
}

namespace {

bool parse_double(std::string_view token, double& out) {
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_long(std::string_view token, long& out) {
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

}  // namespace

TriangleMesh load_mesh(std::string_view source, const Affine3& transform, std::ostream* diagnostics,
                       LoadReport* report) {
    std::vector<Vec3> vertices;
    std::vector<TriangleIndices> triangles;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        const std::size_t eol = std::min(source.find('\n', pos), source.size());
        std::string_view line = source.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) {
            if (eol == source.size()) break;
            continue;
        }
        if (tokens[0] == "v") {
            if (tokens.size() < 4 || tokens.size() > 5) throw ParseError(line_no, "vertex needs 3 coordinates");
            Vec3 p;
            for (int k = 0; k < 3; ++k) {
                if (!parse_double(tokens[k + 1], p[k])) {
                    throw ParseError(line_no, "bad coordinate '" + std::string(tokens[k + 1]) + "'");
                }
            }
            vertices.push_back(transform.apply(p));
        } else if (tokens[0] == "f") {
            if (tokens.size() < 4) throw ParseError(line_no, "face needs at least 3 vertices");
            std::vector<std::uint32_t> poly;
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                const auto slash = tokens[k].find('/');
                long idx = 0;
                if (!parse_long(tokens[k].substr(0, slash), idx) || idx == 0) {
                    throw ParseError(line_no, "bad face index '" + std::string(tokens[k]) + "'");
                }
                const long resolved = idx > 0 ? idx - 1 : static_cast<long>(vertices.size()) + idx;
                if (resolved < 0 || resolved >= static_cast<long>(vertices.size())) {
                    throw ParseError(line_no, "face index " + std::to_string(idx) + " out of range");
                }
                poly.push_back(static_cast<std::uint32_t>(resolved));
            }
            for (std::size_t k = 1; k + 1 < poly.size(); ++k) triangles.push_back({poly[0], poly[k], poly[k + 1]});
        }
        if (eol == source.size()) break;
    }

    LoadReport local;
    TriangleMesh mesh = TriangleMesh::build(std::move(vertices), std::move(triangles), &local);
    if (diagnostics) {
        *diagnostics << "mesh load: " << local.triangles_kept << " triangles kept, " << local.triangles_dropped
                     << " degenerate dropped\n";
    }
    if (report) *report = local;
    if (mesh.empty()) throw EmptyMeshError("mesh has no triangles after cleanup");
    return mesh;
}

TriangleMesh load_mesh_file(const std::string& path, const Affine3& transform, std::ostream* diagnostics) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open mesh file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return load_mesh(text.str(), transform, diagnostics);
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
    out << std::setprecision(9);
    for (const auto& v : mesh.vertices()) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const auto& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace sdfshadow
