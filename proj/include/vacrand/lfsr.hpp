#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "vacrand/adc.hpp"
#include "vacrand/bitstream.hpp"
#include "vacrand/errors.hpp"

namespace vacrand {

inline constexpr int kLfsrCells = 63;

// ----------------------------------------------------------------------
// Serial form: 63-cell maximum-length LFSR, two-element feedback path.
//   s_j' = s_{j-1}           for j = 1..62
//   s_0' = s_62 ^ s_61 ^ d
// The cell-array version below is the reference model; the packed version
// is used where long serial runs are needed and is tested against it.
// ----------------------------------------------------------------------

struct SerialLfsrState {
    std::array<std::uint8_t, kLfsrCells> s{};
};

inline SerialLfsrState serial_step(const SerialLfsrState& st, bool d) {
    SerialLfsrState out;
    for (int j = 62; j >= 1; --j) out.s[j] = st.s[j - 1];
    out.s[0] = st.s[62] ^ st.s[61] ^ static_cast<std::uint8_t>(d);
    return out;
}

struct SerialLfsrPacked {
    std::uint64_t s = 0;   // bit j = cell j

    void step(bool d) {
        const std::uint64_t new0 =
            ((s >> 62) ^ (s >> 61) ^ static_cast<std::uint64_t>(d)) & 1u;
        s = ((s << 1) | new0) & ((1ull << 63) - 1);
    }
    bool cell(int j) const { return (s >> j) & 1u; }
};

// ----------------------------------------------------------------------
// Word-parallel form (normative output path).  One step consumes a full
// 16-bit sample; all right-hand sides use the pre-step state:
//   m_j' = s_j                                  for j = 0..62
//   s_j' = m_j ^ m_{j+1} ^ d_j                  for j = 0..61  (d_j = 0, j >= 16)
//   s_62' = m_62 ^ s_0
// ----------------------------------------------------------------------

struct ParallelLfsrState {
    std::uint64_t s = 0;
    std::uint64_t m = 0;

    bool operator==(const ParallelLfsrState&) const = default;
};

inline ParallelLfsrState parallel_step(const ParallelLfsrState& st, std::uint16_t word) {
    constexpr std::uint64_t low62 = (1ull << 62) - 1;
    ParallelLfsrState out;
    out.s = (((st.m ^ (st.m >> 1)) & low62) ^ word) |
            ((((st.m >> 62) ^ st.s) & 1u) << 62);
    out.m = st.s;
    return out;
}

// Output byte: bit k = m_{2k}, k = 0..7 (even-cell snapshot, m_0 -> LSB),
// taken after the step that consumed the current sample.
inline std::uint8_t extract_bits(const ParallelLfsrState& st) {
    std::uint32_t x = static_cast<std::uint32_t>(st.m) & 0x5555u;
    x = (x | (x >> 1)) & 0x3333u;
    x = (x | (x >> 2)) & 0x0F0Fu;
    x = (x | (x >> 4)) & 0x00FFu;
    return static_cast<std::uint8_t>(x);
}

// Cell-by-cell twin of parallel_step/extract_bits, kept as the test oracle
// and as the slow engine for throughput comparison.
struct ParallelLfsrScalar {
    std::array<std::uint8_t, kLfsrCells> s{};
    std::array<std::uint8_t, kLfsrCells> m{};

    void step(std::uint16_t word) {
        std::array<std::uint8_t, kLfsrCells> ns{}, nm{};
        for (int j = 0; j < kLfsrCells; ++j) nm[j] = s[j];
        for (int j = 0; j <= 61; ++j) {
            const std::uint8_t dj = (j < 16) ? ((word >> j) & 1u) : 0u;
            ns[j] = m[j] ^ m[j + 1] ^ dj;
        }
        ns[62] = m[62] ^ s[0];
        s = ns;
        m = nm;
    }

    std::uint8_t extract() const {
        std::uint8_t out = 0;
        for (int k = 0; k < 8; ++k)
            out |= static_cast<std::uint8_t>(m[2 * k] << k);
        return out;
    }

    ParallelLfsrState packed() const {
        ParallelLfsrState st;
        for (int j = 0; j < kLfsrCells; ++j) {
            st.s |= static_cast<std::uint64_t>(s[j] & 1u) << j;
            st.m |= static_cast<std::uint64_t>(m[j] & 1u) << j;
        }
        return st;
    }

    static ParallelLfsrScalar from_packed(const ParallelLfsrState& st) {
        ParallelLfsrScalar sc;
        for (int j = 0; j < kLfsrCells; ++j) {
            sc.s[j] = (st.s >> j) & 1u;
            sc.m[j] = (st.m >> j) & 1u;
        }
        return sc;
    }
};

// ----------------------------------------------------------------------
// Extraction stream
// ----------------------------------------------------------------------

struct ExtractorConfig {
    std::array<int, 8> output_taps{0, 2, 4, 6, 8, 10, 12, 14};
    int word_width = 16;
    std::size_t warmup_steps = 63;
    ParallelLfsrState initial_state{};   // all-zero by default

    void validate() const {
        if (word_width != 16)
            throw DomainError("ExtractorConfig: word_width is fixed at 16");
        int prev = -1;
        for (int t : output_taps) {
            if (t <= prev || t >= kLfsrCells)
                throw DomainError("ExtractorConfig: taps must be strictly ascending and < 63");
            prev = t;
        }
        // the tap set is part of the output format and is not configurable
        const std::array<int, 8> fixed{0, 2, 4, 6, 8, 10, 12, 14};
        if (output_taps != fixed)
            throw DomainError("ExtractorConfig: tap set is fixed to m_0, m_2, ..., m_14");
    }
};

enum class Engine { packed, scalar };

// Stateful streaming extractor: one parallel step per sample, 8 bits out per
// sample once the warm-up discard has elapsed.
class Extractor {
public:
    explicit Extractor(const ExtractorConfig& cfg = {}, Engine engine = Engine::packed)
        : cfg_(cfg), engine_(engine), state_(cfg.initial_state),
          scalar_(ParallelLfsrScalar::from_packed(cfg.initial_state)) {
        cfg_.validate();
    }

    void process(std::span<const AdcSample> samples, BitStream& out) {
        if (engine_ == Engine::packed) {
            for (AdcSample x : samples) {
                state_ = parallel_step(state_, static_cast<std::uint16_t>(x));
                if (steps_ >= cfg_.warmup_steps) out.push_byte(extract_bits(state_));
                ++steps_;
            }
        } else {
            for (AdcSample x : samples) {
                scalar_.step(static_cast<std::uint16_t>(x));
                if (steps_ >= cfg_.warmup_steps) out.push_byte(scalar_.extract());
                ++steps_;
            }
        }
    }

    std::size_t steps() const { return steps_; }

private:
    ExtractorConfig cfg_;
    Engine engine_;
    ParallelLfsrState state_;
    ParallelLfsrScalar scalar_;
    std::size_t steps_ = 0;
};

struct ExtractResult {
    BitStream bits;
    bool input_shorter_than_warmup = false;
};

inline ExtractResult extract_stream(const SampleBlock& block,
                                    const ExtractorConfig& cfg = {},
                                    Engine engine = Engine::packed) {
    ExtractResult res;
    Extractor ex(cfg, engine);
    ex.process(block.samples, res.bits);
    res.input_shorter_than_warmup = block.samples.size() < cfg.warmup_steps;
    return res;
}

} // namespace vacrand
