#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "pplab/grid.hpp"

namespace pplab {

// On-disk field format, little-endian throughout:
//   16-byte header: magic "PPLF", version u8, dim u8, points_per_axis u16,
//                   half_width f64
//   center:  dim f64
//   values:  points_per_axis^dim f64, row-major
// Total size = 16 + 8*dim + 8*count bytes.

namespace detail {

inline void put_u16(std::ofstream& os, std::uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

inline void put_f64(std::ofstream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline bool get_u16(std::ifstream& is, std::uint16_t& v) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), 2)) return false;
    v = std::uint16_t(b[0] | (std::uint16_t(b[1]) << 8));
    return true;
}

inline bool get_f64(std::ifstream& is, double& v) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
    std::memcpy(&v, &u, 8);
    return true;
}

}  // namespace detail

inline constexpr char kFieldMagic[4] = {'P', 'P', 'L', 'F'};
inline constexpr std::uint8_t kFieldVersion = 1;

inline void field_io_write(const ScalarField& u, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("field_io_write: cannot open " + path);
    os.write(kFieldMagic, 4);
    const unsigned char ver = kFieldVersion, dim = static_cast<unsigned char>(u.spec.dim);
    os.write(reinterpret_cast<const char*>(&ver), 1);
    os.write(reinterpret_cast<const char*>(&dim), 1);
    detail::put_u16(os, std::uint16_t(u.spec.points_per_axis));
    detail::put_f64(os, u.spec.half_width);
    for (double c : u.spec.center) detail::put_f64(os, c);
    for (double v : u.values) detail::put_f64(os, v);
    if (!os) throw IoError("field_io_write: short write to " + path);
}

inline ScalarField field_io_read(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("field_io_read: cannot open " + path);
    char magic[4];
    unsigned char ver = 0, dim = 0;
    std::uint16_t ppa = 0;
    double hw = 0.0;
    if (!is.read(magic, 4) || std::memcmp(magic, kFieldMagic, 4) != 0)
        throw IoError("field_io_read: malformed header (bad magic) in " + path);
    if (!is.read(reinterpret_cast<char*>(&ver), 1) || ver != kFieldVersion)
        throw IoError("field_io_read: malformed header (version) in " + path);
    if (!is.read(reinterpret_cast<char*>(&dim), 1)) throw IoError("field_io_read: malformed header in " + path);
    if (dim < 1 || dim > 4) throw IoError("field_io_read: dimension overflow in " + path);
    if (!detail::get_u16(is, ppa) || !detail::get_f64(is, hw))
        throw IoError("field_io_read: malformed header in " + path);
    Vec center(dim);
    for (double& c : center)
        if (!detail::get_f64(is, c)) throw IoError("field_io_read: truncated center in " + path);
    GridSpec spec(dim, center, hw, ppa);
    ScalarField u(spec);
    for (double& v : u.values)
        if (!detail::get_f64(is, v)) throw IoError("field_io_read: truncated payload in " + path);
    return u;
}

}  // namespace pplab
