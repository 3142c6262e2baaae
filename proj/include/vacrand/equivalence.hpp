#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vacrand/lfsr.hpp"
#include "vacrand/prng.hpp"

namespace vacrand {

// The word-parallel recursion admits more than one reading of how the two
// register banks are clocked.  The equivalence checker treats the reading as
// part of the search space:
//
//   simultaneous      - every right-hand side uses the pre-step state; this is
//                       the reading used by the output extractor (parallel_step).
//   sequential_s0     - the wrap cell uses the freshly computed s_0.
//   pipeline_snapshot - the working register is s alone (s_j' = s_j ^ s_{j+1}
//                       ^ d_j, wrap s_62' = s_62 ^ s_0'); m only snapshots the
//                       previous s for the output taps.
enum class ParallelReading { simultaneous, sequential_s0, pipeline_snapshot };

inline const char* to_string(ParallelReading r) {
    switch (r) {
        case ParallelReading::simultaneous: return "simultaneous";
        case ParallelReading::sequential_s0: return "sequential-s0";
        case ParallelReading::pipeline_snapshot: return "pipeline-snapshot";
    }
    return "?";
}

namespace detail {

struct ReadingMachine {
    ParallelReading reading;
    std::uint64_t s = 0, m = 0;

    void step(std::uint16_t w) {
        constexpr std::uint64_t low62 = (1ull << 62) - 1;
        std::uint64_t ns = ((m ^ (m >> 1)) & low62) ^ w;
        switch (reading) {
            case ParallelReading::simultaneous:
                ns |= (((m >> 62) ^ s) & 1u) << 62;
                m = s;
                s = ns;
                return;
            case ParallelReading::sequential_s0:
                ns |= (((m >> 62) ^ ns) & 1u) << 62;
                m = s;
                s = ns;
                return;
            case ParallelReading::pipeline_snapshot: {
                std::uint64_t t = ((s ^ (s >> 1)) & low62) ^ w;
                t |= (((s >> 62) ^ t) & 1u) << 62;
                m = s;
                s = t;
                return;
            }
        }
    }

    bool cell(int idx) const {   // 0..62 = s bank, 63..125 = m bank
        return idx < 63 ? ((s >> idx) & 1u) : ((m >> (idx - 63)) & 1u);
    }
};

// Drives the serial machine with the bits of a word sequence placed on a
// regular slot grid: bit j of word u sits at serial slot stride*u + spacing*j
// (LSB-first) or stride*u + spacing*(15-j) (MSB-first); all other slots are 0.
struct ScheduledSerial {
    std::span<const std::uint16_t> words;
    int stride;
    int spacing;
    bool lsb_first;
    SerialLfsrPacked reg;
    std::uint64_t tau = 0;   // serial steps taken

    bool slot_bit(std::uint64_t slot) const {
        const std::uint64_t u = slot / static_cast<std::uint64_t>(stride);
        const int rem = static_cast<int>(slot % static_cast<std::uint64_t>(stride));
        if (u >= words.size()) return false;
        if (rem % spacing != 0) return false;
        const int pos = rem / spacing;
        if (pos >= 16) return false;
        const int j = lsb_first ? pos : 15 - pos;
        return (words[u] >> j) & 1u;
    }

    void step() {
        reg.step(slot_bit(tau));
        ++tau;
    }
};

} // namespace detail

struct EquivalenceMapping {
    ParallelReading reading{};
    bool lsb_first = true;
    int slot_spacing = 1;
    int serial_steps_per_word = 63;
    int phase = 0;
    // serial cell i lives at parallel cell cell_of[i] (0..62 s bank, 63..125 m bank)
    std::array<int, 63> cell_of{};
};

struct ReadingOutcome {
    ParallelReading reading{};
    bool found = false;
    EquivalenceMapping mapping{};
    std::string note;
};

struct EquivalenceReport {
    bool pass = false;
    std::uint64_t words_checked = 0;
    std::vector<ReadingOutcome> outcomes;

    std::string summary() const {
        std::ostringstream os;
        os << (pass ? "PASS" : "FAIL") << " serial/parallel equivalence over "
           << words_checked << " words\n";
        for (const auto& oc : outcomes) {
            os << "  reading " << to_string(oc.reading) << ": ";
            if (oc.found) {
                const auto& mp = oc.mapping;
                os << "mapping found (" << (mp.lsb_first ? "LSB" : "MSB")
                   << "-first, 1 bit per " << mp.slot_spacing
                   << " serial step(s), " << mp.serial_steps_per_word
                   << " serial steps per word, phase " << mp.phase << "; ";
                bool reversal = true;
                for (int i = 0; i < 63; ++i)
                    if (mp.cell_of[i] != 62 - i) { reversal = false; break; }
                if (reversal)
                    os << "state map: serial cell i = s-register cell 62-i)";
                else
                    os << "state map: cell table)";
                os << "\n";
            } else {
                os << "no consistent mapping; " << oc.note << "\n";
            }
        }
        return os.str();
    }
};

namespace detail {

constexpr int kProbeWords = 320;
constexpr int kSigWords = (kProbeWords + 63) / 64;
using Signature = std::array<std::uint64_t, kSigWords>;

// Discovery: run the candidate machines on an internal pseudorandom probe and
// look for a per-cell signature match between serial and parallel states.
inline std::optional<EquivalenceMapping> discover(ParallelReading reading,
                                                  bool lsb, int spacing, int stride) {
    if (spacing * 15 >= stride) return std::nullopt;

    std::vector<std::uint16_t> probe(kProbeWords);
    Xoshiro256pp rng(0xC0FFEE123456789ull);
    for (auto& w : probe) w = static_cast<std::uint16_t>(rng.next());

    // parallel trajectory: cell signatures over all probe steps
    std::array<Signature, 126> par{};
    {
        ReadingMachine pm{reading};
        for (int t = 0; t < kProbeWords; ++t) {
            pm.step(probe[t]);
            for (int c = 0; c < 126; ++c)
                if (pm.cell(c)) par[c][t / 64] |= 1ull << (t % 64);
        }
    }

    for (int phase = 0; phase < stride; ++phase) {
        std::array<Signature, 63> ser{};
        ScheduledSerial ss{probe, stride, spacing, lsb, {}, 0};
        for (int t = 1; t <= kProbeWords; ++t) {
            const std::uint64_t target =
                static_cast<std::uint64_t>(stride) * t + phase;
            while (ss.tau < target) ss.step();
            for (int i = 0; i < 63; ++i)
                if (ss.reg.cell(i)) ser[i][(t - 1) / 64] |= 1ull << ((t - 1) % 64);
        }

        EquivalenceMapping mp;
        mp.reading = reading;
        mp.lsb_first = lsb;
        mp.slot_spacing = spacing;
        mp.serial_steps_per_word = stride;
        mp.phase = phase;
        bool all = true;
        for (int i = 0; i < 63 && all; ++i) {
            int hit = -1;
            for (int c = 0; c < 126; ++c) {
                if (ser[i] == par[c]) { hit = c; break; }
            }
            if (hit < 0) all = false;
            else mp.cell_of[i] = hit;
        }
        if (all) return mp;
    }
    return std::nullopt;
}

// Consistency check of a discovered mapping over a full word sequence.
inline bool validate(const EquivalenceMapping& mp, std::span<const std::uint16_t> words) {
    ReadingMachine pm{mp.reading};
    ScheduledSerial ss{words, mp.serial_steps_per_word, mp.slot_spacing,
                       mp.lsb_first, {}, 0};
    for (std::size_t t = 1; t <= words.size(); ++t) {
        pm.step(words[t - 1]);
        const std::uint64_t target =
            static_cast<std::uint64_t>(mp.serial_steps_per_word) * t + mp.phase;
        while (ss.tau < target) ss.step();
        for (int i = 0; i < 63; ++i)
            if (ss.reg.cell(i) != pm.cell(mp.cell_of[i])) return false;
    }
    return true;
}

} // namespace detail

// Establishes, by brute force over candidate injection orders, slot spacings,
// strides, phases and recursion readings, how N parallel steps correspond to
// the serial machine fed the same bits; then checks the discovered mapping
// over the supplied word sequence.
inline EquivalenceReport serial_parallel_equivalence(std::span<const std::uint16_t> words) {
    EquivalenceReport rep;
    rep.words_checked = words.size();

    for (ParallelReading reading : {ParallelReading::simultaneous,
                                    ParallelReading::sequential_s0,
                                    ParallelReading::pipeline_snapshot}) {
        ReadingOutcome oc;
        oc.reading = reading;
        for (bool lsb : {true, false}) {
            for (int spacing : {1, 2}) {
                for (int stride : {16, 63}) {
                    auto mp = detail::discover(reading, lsb, spacing, stride);
                    if (mp && detail::validate(*mp, words)) {
                        oc.found = true;
                        oc.mapping = *mp;
                        break;
                    }
                }
                if (oc.found) break;
            }
            if (oc.found) break;
        }
        if (!oc.found)
            oc.note = "searched LSB/MSB order x bit spacing {1,2} x "
                      "{16,63} serial steps per word x all phases";
        rep.outcomes.push_back(oc);
        if (oc.found) rep.pass = true;
    }
    return rep;
}

} // namespace vacrand
