#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "npd/geometry.hpp"

namespace npd {

struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;
  // Zero-area faces removed during validation.
  std::size_t dropped_degenerate_faces = 0;
};

// OFF or OBJ by file extension. Parse failures throw FormatError with
// the offending line number; out-of-range indices are parse errors,
// zero-area faces are dropped and counted.
TriangleMesh load_mesh(const std::filesystem::path& path);

TriangleMesh parse_off(std::istream& in, const std::string& label);
TriangleMesh parse_obj(std::istream& in, const std::string& label);

// Analytic shapes for dataset construction without external files.
// Variant 0 is the canonical axis-aligned instance; other variants vary
// proportions, tessellation and orientation deterministically.
enum class BuiltinShape { kPlane, kSphere, kCylinder, kCube };

TriangleMesh make_builtin_mesh(BuiltinShape shape, std::uint32_t variant);

// Accepts either a mesh file path or a builtin spec of the form
// "builtin:<plane|sphere|cylinder|cube>[:variant]".
TriangleMesh resolve_mesh_spec(const std::string& spec);
bool is_builtin_spec(const std::string& spec);

// n points sampled with probability proportional to triangle area and
// uniform barycentric placement (square-root trick). One counter stream
// per sample index, so output is independent of evaluation order.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n,
                          std::uint64_t seed);

}  // namespace npd
