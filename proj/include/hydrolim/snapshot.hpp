#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>

#include "hydrolim/field.hpp"

namespace hydrolim {

/// Field snapshot file: magic "HLIM1", then nx (u32), ny (u32),
/// reality_flag (u8), time (f64), all little-endian, followed by the
/// coefficients as interleaved (real, imag) f64 pairs in k-major order
/// (k = -nx/2 first).
namespace snapshot {

inline void write(const std::string& path, const SpectralField& f, double time) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("snapshot: cannot open for write: " + path);
    os.write("HLIM1", 5);
    const uint32_t nx = static_cast<uint32_t>(f.nx());
    const uint32_t ny = static_cast<uint32_t>(f.ny());
    const uint8_t real_flag = f.reality ? 1 : 0;
    os.write(reinterpret_cast<const char*>(&nx), 4);
    os.write(reinterpret_cast<const char*>(&ny), 4);
    os.write(reinterpret_cast<const char*>(&real_flag), 1);
    os.write(reinterpret_cast<const char*>(&time), 8);
    for (const auto& z : f.c) {
        const double re = z.real(), im = z.imag();
        os.write(reinterpret_cast<const char*>(&re), 8);
        os.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!os) throw std::runtime_error("snapshot: write failed: " + path);
}

struct Loaded {
    SpectralField field;
    double time = 0.0;
};

inline Loaded read(const std::string& path, double dealias_fraction = 2.0 / 3.0) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open: " + path);
    char magic[5];
    is.read(magic, 5);
    if (!is || std::memcmp(magic, "HLIM1", 5) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);
    uint32_t nx = 0, ny = 0;
    uint8_t real_flag = 0;
    double time = 0.0;
    is.read(reinterpret_cast<char*>(&nx), 4);
    is.read(reinterpret_cast<char*>(&ny), 4);
    is.read(reinterpret_cast<char*>(&real_flag), 1);
    is.read(reinterpret_cast<char*>(&time), 8);
    Loaded out{SpectralField(make_grid(static_cast<int>(nx), static_cast<int>(ny), dealias_fraction),
                             real_flag != 0),
               time};
    for (auto& z : out.field.c) {
        double re = 0.0, im = 0.0;
        is.read(reinterpret_cast<char*>(&re), 8);
        is.read(reinterpret_cast<char*>(&im), 8);
        z = Complex(re, im);
    }
    if (!is) throw std::runtime_error("snapshot: truncated file: " + path);
    return out;
}

}  // namespace snapshot
}  // namespace hydrolim
