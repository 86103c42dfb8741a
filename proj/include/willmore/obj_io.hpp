#pragma once

#include <iosfwd>
#include <string>

#include "willmore/geometry.hpp"

namespace willmore::io {

/// Wavefront OBJ: one `v x y z` per vertex (full double precision) and one
/// 1-based `f i j k` per triangle, LF line endings.
void write_obj(std::ostream& os, const geom::Mesh& mesh);
void write_obj(const std::string& path, const geom::Mesh& mesh);

/// Per-vertex curvature sidecar, CSV with header "vertex,H,K".
void write_curvature_csv(std::ostream& os, const geom::Mesh& mesh);
void write_curvature_csv(const std::string& path, const geom::Mesh& mesh);

}  // namespace willmore::io
