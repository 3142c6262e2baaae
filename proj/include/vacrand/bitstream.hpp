#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vacrand/errors.hpp"

namespace vacrand {

// Packed bit buffer, LSB-first within each byte; exact bit length tracked.
class BitStream {
public:
    BitStream() = default;

    void push_bit(bool b) {
        const std::size_t byte = nbits_ / 8;
        if (byte == bytes_.size()) bytes_.push_back(0);
        if (b) bytes_[byte] |= static_cast<std::uint8_t>(1u << (nbits_ % 8));
        ++nbits_;
    }

    // append 8 bits at once, bit 0 of v first
    void push_byte(std::uint8_t v) {
        if (nbits_ % 8 == 0) {
            bytes_.push_back(v);
            nbits_ += 8;
        } else {
            for (int k = 0; k < 8; ++k) push_bit((v >> k) & 1u);
        }
    }

    bool bit(std::size_t i) const {
        return (bytes_[i / 8] >> (i % 8)) & 1u;
    }

    std::size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    std::uint64_t count_ones() const {
        std::uint64_t ones = 0;
        const std::size_t full = nbits_ / 8;
        for (std::size_t i = 0; i < full; ++i)
            ones += static_cast<std::uint64_t>(__builtin_popcount(bytes_[i]));
        for (std::size_t i = full * 8; i < nbits_; ++i)
            ones += bit(i) ? 1 : 0;
        return ones;
    }

    void clear() {
        bytes_.clear();
        nbits_ = 0;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t nbits_ = 0;
};

// --- packed file format ------------------------------------------------
// Header-less packed bytes; a trailing partial byte is zero-padded. When the
// bit count is not a byte multiple, the exact count is kept in a "<file>.nbits"
// sidecar (decimal ASCII). Without a sidecar the length is 8 * file size.

inline void write_packed(const BitStream& bits, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    if (!bits.bytes().empty())
        out.write(reinterpret_cast<const char*>(bits.bytes().data()),
                  static_cast<std::streamsize>(bits.bytes().size()));
    if (!out) throw IoError("write failed on " + path.string());
    const auto sidecar = path.string() + ".nbits";
    if (bits.size() % 8 != 0) {
        std::ofstream sc(sidecar, std::ios::trunc);
        sc << bits.size() << "\n";
        if (!sc) throw IoError("write failed on " + sidecar);
    } else {
        std::error_code ec;
        std::filesystem::remove(sidecar, ec);
    }
}

inline BitStream read_packed(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    std::size_t nbits = bytes.size() * 8;
    std::ifstream sc(path.string() + ".nbits");
    if (sc) {
        std::size_t declared = 0;
        sc >> declared;
        if (!sc || declared > bytes.size() * 8 || declared + 8 <= bytes.size() * 8)
            throw FormatError(path.string() + ".nbits: inconsistent bit count");
        nbits = declared;
    }
    BitStream bits;
    for (std::size_t i = 0; i < nbits; ++i)
        bits.push_bit((bytes[i / 8] >> (i % 8)) & 1u);
    return bits;
}

// --- ASCII '0'/'1' format (NIST STS interop) ----------------------------
// one character per bit, newline every 2^20 bits

inline constexpr std::size_t kAsciiLineBits = 1u << 20;

inline void write_ascii01(const BitStream& bits, std::ostream& out) {
    std::string line;
    line.reserve(1 << 16);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        line.push_back(bits.bit(i) ? '1' : '0');
        if ((i + 1) % kAsciiLineBits == 0) line.push_back('\n');
        if (line.size() >= (1u << 16)) {
            out.write(line.data(), static_cast<std::streamsize>(line.size()));
            line.clear();
        }
    }
    if (!line.empty())
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
}

inline void write_ascii01(const BitStream& bits, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_ascii01(bits, out);
    if (!out) throw IoError("write failed on " + path.string());
}

inline BitStream read_ascii01(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    BitStream bits;
    char c;
    while (in.get(c)) {
        if (c == '0') bits.push_bit(false);
        else if (c == '1') bits.push_bit(true);
        else if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        else throw FormatError(path.string() + ": unexpected character in bit file");
    }
    return bits;
}

} // namespace vacrand
