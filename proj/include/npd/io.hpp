#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "npd/geometry.hpp"

namespace npd {

// Binary point cloud, magic "PCB1": u32 LE count, then N * 3 f32 LE.
inline constexpr std::uint32_t kPcbVersion = 1;
// Binary plane set, magic "PLN1": u32 LE count, then N * 4 f32 LE
// (nx, ny, nz, c) with unit-length normals.
inline constexpr std::uint32_t kPlnVersion = 1;

void write_point_cloud(std::ostream& out, const PointCloud& cloud);
void write_point_cloud(const std::filesystem::path& path,
                       const PointCloud& cloud);
PointCloud read_point_cloud(std::istream& in, const std::string& label);
PointCloud read_point_cloud(const std::filesystem::path& path);

void write_plane_set(std::ostream& out, const PlaneSet& planes);
void write_plane_set(const std::filesystem::path& path, const PlaneSet& planes);
PlaneSet read_plane_set(std::istream& in, const std::string& label);
PlaneSet read_plane_set(const std::filesystem::path& path);

namespace io {

// Little-endian primitives used by all binary formats. Reads throw
// FormatError on truncation; floats are rejected unless finite.
void put_u32(std::ostream& out, std::uint32_t v);
void put_f32(std::ostream& out, float v);
void put_bytes(std::ostream& out, const void* data, std::size_t n);
std::uint32_t get_u32(std::istream& in, const std::string& what);
float get_f32(std::istream& in, const std::string& what);
void get_bytes(std::istream& in, void* data, std::size_t n,
               const std::string& what);
void expect_magic(std::istream& in, const char magic[4],
                  const std::string& label);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace io

}  // namespace npd
