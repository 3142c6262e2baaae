#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "vacrand/errors.hpp"

namespace vacrand {

using AdcSample = std::int16_t;

inline constexpr int kAdcBits = 16;
inline constexpr int kAdcMin = -32768;
inline constexpr int kAdcMax = 32767;

// 16-bit ADC model: round to nearest, ties away from zero, saturate.
inline AdcSample quantize(double x) {
    if (!std::isfinite(x)) throw DomainError("quantize: non-finite input");
    const double r = (x >= 0.0) ? std::floor(x + 0.5) : std::ceil(x - 0.5);
    if (r < static_cast<double>(kAdcMin)) return static_cast<AdcSample>(kAdcMin);
    if (r > static_cast<double>(kAdcMax)) return static_cast<AdcSample>(kAdcMax);
    return static_cast<AdcSample>(r);
}

struct SampleBlock {
    std::vector<AdcSample> samples;
    double sample_rate_hz = 60e6;   // metadata only

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

// Raw capture format: contiguous signed 16-bit little-endian, no header.
inline SampleBlock load_capture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const std::streamoff bytes = in.tellg();
    in.seekg(0);
    if (bytes % 2 != 0)
        throw FormatError(path.string() + ": truncated sample (odd file length)");

    SampleBlock block;
    block.samples.resize(static_cast<std::size_t>(bytes / 2));
    std::vector<unsigned char> buf(static_cast<std::size_t>(bytes));
    if (bytes > 0) {
        in.read(reinterpret_cast<char*>(buf.data()), bytes);
        if (!in) throw IoError("read failed on " + path.string());
        for (std::size_t i = 0; i < block.samples.size(); ++i) {
            const std::uint16_t lo = buf[2 * i];
            const std::uint16_t hi = buf[2 * i + 1];
            block.samples[i] = static_cast<AdcSample>(
                static_cast<std::uint16_t>(lo | (hi << 8)));
        }
    }
    return block;
}

inline void store_capture(const SampleBlock& block, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    std::vector<unsigned char> buf(block.samples.size() * 2);
    for (std::size_t i = 0; i < block.samples.size(); ++i) {
        const auto u = static_cast<std::uint16_t>(block.samples[i]);
        buf[2 * i] = static_cast<unsigned char>(u & 0xFF);
        buf[2 * i + 1] = static_cast<unsigned char>(u >> 8);
    }
    if (!buf.empty())
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed on " + path.string());
}

} // namespace vacrand
