#include "npd/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "npd/errors.hpp"

namespace npd {
namespace io {

void put_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw DataError("write failed");
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  put_bytes(out, b, 4);
}

void put_f32(std::ostream& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void get_bytes(std::istream& in, void* data, std::size_t n,
               const std::string& what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError("truncated input while reading " + what);
  }
}

std::uint32_t get_u32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  get_bytes(in, b, 4, what);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

float get_f32(std::istream& in, const std::string& what) {
  return std::bit_cast<float>(get_u32(in, what));
}

void expect_magic(std::istream& in, const char magic[4],
                  const std::string& label) {
  char got[4];
  get_bytes(in, got, 4, label + " magic");
  if (std::memcmp(got, magic, 4) != 0) {
    throw FormatError(label + ": bad magic, expected '" +
                      std::string(magic, 4) + "' got '" + std::string(got, 4) +
                      "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace io

namespace {

constexpr char kPcbMagic[4] = {'P', 'C', 'B', '1'};
constexpr char kPlnMagic[4] = {'P', 'L', 'N', '1'};

float checked_f32(std::istream& in, const std::string& what) {
  const float v = io::get_f32(in, what);
  if (!std::isfinite(v)) throw FormatError(what + ": non-finite value");
  return v;
}

}  // namespace

void write_point_cloud(std::ostream& out, const PointCloud& cloud) {
  io::put_bytes(out, kPcbMagic, 4);
  io::put_u32(out, static_cast<std::uint32_t>(cloud.size()));
  for (const Point3& p : cloud) {
    io::put_f32(out, static_cast<float>(p.x));
    io::put_f32(out, static_cast<float>(p.y));
    io::put_f32(out, static_cast<float>(p.z));
  }
}

void write_point_cloud(const std::filesystem::path& path,
                       const PointCloud& cloud) {
  std::ostringstream buf(std::ios::binary);
  write_point_cloud(buf, cloud);
  io::write_file(path, buf.str());
}

PointCloud read_point_cloud(std::istream& in, const std::string& label) {
  io::expect_magic(in, kPcbMagic, label);
  const std::uint32_t n = io::get_u32(in, label + " point count");
  PointCloud cloud(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::string what = label + " point " + std::to_string(i);
    cloud[i].x = checked_f32(in, what);
    cloud[i].y = checked_f32(in, what);
    cloud[i].z = checked_f32(in, what);
  }
  return cloud;
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_point_cloud(in, path.string());
}

void write_plane_set(std::ostream& out, const PlaneSet& planes) {
  io::put_bytes(out, kPlnMagic, 4);
  io::put_u32(out, static_cast<std::uint32_t>(planes.size()));
  for (const Plane& pl : planes) {
    io::put_f32(out, static_cast<float>(pl.normal.x));
    io::put_f32(out, static_cast<float>(pl.normal.y));
    io::put_f32(out, static_cast<float>(pl.normal.z));
    io::put_f32(out, static_cast<float>(pl.intercept));
  }
}

void write_plane_set(const std::filesystem::path& path,
                     const PlaneSet& planes) {
  std::ostringstream buf(std::ios::binary);
  write_plane_set(buf, planes);
  io::write_file(path, buf.str());
}

PlaneSet read_plane_set(std::istream& in, const std::string& label) {
  io::expect_magic(in, kPlnMagic, label);
  const std::uint32_t n = io::get_u32(in, label + " plane count");
  PlaneSet planes(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::string what = label + " plane " + std::to_string(i);
    planes[i].normal.x = checked_f32(in, what);
    planes[i].normal.y = checked_f32(in, what);
    planes[i].normal.z = checked_f32(in, what);
    planes[i].intercept = checked_f32(in, what);
    // Stored at f32 precision, so allow f32-scale unit deviation.
    const double len = norm(planes[i].normal);
    if (std::abs(len - 1.0) > 1e-5) {
      throw FormatError(what + ": normal is not unit length (|n| = " +
                        std::to_string(len) + ")");
    }
  }
  return planes;
}

PlaneSet read_plane_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_plane_set(in, path.string());
}

}  // namespace npd
