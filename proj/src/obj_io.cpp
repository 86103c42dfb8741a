#include "willmore/obj_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace willmore::io {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary keeps LF on every platform
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

}  // namespace

void write_obj(std::ostream& os, const geom::Mesh& mesh) {
    for (const auto& v : mesh.vertices)
        os << "v " << fmt17(v[0]) << ' ' << fmt17(v[1]) << ' ' << fmt17(v[2]) << '\n';
    for (const auto& t : mesh.triangles)
        os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_obj(const std::string& path, const geom::Mesh& mesh) {
    auto os = open_or_throw(path);
    write_obj(os, mesh);
}

void write_curvature_csv(std::ostream& os, const geom::Mesh& mesh) {
    if (mesh.H.size() != mesh.vertices.size() || mesh.K.size() != mesh.vertices.size())
        throw std::invalid_argument("write_curvature_csv: per-vertex fields missing");
    os << "vertex,H,K\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        os << i << ',' << fmt17(mesh.H[i]) << ',' << fmt17(mesh.K[i]) << '\n';
}

void write_curvature_csv(const std::string& path, const geom::Mesh& mesh) {
    auto os = open_or_throw(path);
    write_curvature_csv(os, mesh);
}

}  // namespace willmore::io
