#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdint>
#include <vector>

#include "vacrand/equivalence.hpp"
#include "vacrand/prng.hpp"

using namespace vacrand;

namespace {

// Test-side simulators, written as plain cell arrays so the library's packed
// machines are checked against an independent formulation.

struct SerialSim {
    std::array<int, 63> s{};
    void step(int d) {
        std::array<int, 63> n{};
        for (int j = 1; j < 63; ++j) n[j] = s[j - 1];
        n[0] = s[62] ^ s[61] ^ d;
        s = n;
    }
};

struct PipelineSim {   // s_j' = s_j ^ s_{j+1} ^ d_j, s_62' = s_62 ^ s_0'
    std::array<int, 63> s{};
    std::array<int, 63> m{};
    void step(std::uint16_t w) {
        std::array<int, 63> n{};
        for (int j = 0; j <= 61; ++j)
            n[j] = s[j] ^ s[j + 1] ^ ((j < 16) ? ((w >> j) & 1) : 0);
        n[62] = s[62] ^ n[0];
        m = s;
        s = n;
    }
};

// independent verification of a reported mapping over a word sequence
bool verify_mapping_independently(const EquivalenceMapping& mp,
                                  const std::vector<std::uint16_t>& words) {
    if (mp.reading != ParallelReading::pipeline_snapshot) return false;

    PipelineSim par;
    SerialSim ser;
    std::uint64_t tau = 0;
    const auto slot_bit = [&](std::uint64_t slot) -> int {
        const auto u = slot / static_cast<std::uint64_t>(mp.serial_steps_per_word);
        const int rem = static_cast<int>(slot % mp.serial_steps_per_word);
        if (u >= words.size()) return 0;
        if (rem % mp.slot_spacing != 0) return 0;
        const int pos = rem / mp.slot_spacing;
        if (pos >= 16) return 0;
        const int j = mp.lsb_first ? pos : 15 - pos;
        return (words[u] >> j) & 1;
    };

    for (std::size_t t = 1; t <= words.size(); ++t) {
        par.step(words[t - 1]);
        const std::uint64_t target =
            static_cast<std::uint64_t>(mp.serial_steps_per_word) * t + mp.phase;
        while (tau < target) {
            ser.step(slot_bit(tau));
            ++tau;
        }
        for (int i = 0; i < 63; ++i) {
            const int c = mp.cell_of[i];
            const int pv = c < 63 ? par.s[c] : par.m[c - 63];
            if (ser.s[i] != pv) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("all-zero word sequence is trivially consistent") {
    std::vector<std::uint16_t> words(500, 0);
    const auto rep = serial_parallel_equivalence(words);
    CHECK(rep.pass);
    CHECK(rep.words_checked == 500);
}

TEST_CASE("simultaneous reading admits no serial correspondence") {
    std::vector<std::uint16_t> words = {1, 2, 3};
    const auto rep = serial_parallel_equivalence(words);
    REQUIRE(rep.outcomes.size() == 3);
    for (const auto& oc : rep.outcomes) {
        if (oc.reading == ParallelReading::simultaneous) CHECK_FALSE(oc.found);
        if (oc.reading == ParallelReading::sequential_s0) CHECK_FALSE(oc.found);
        if (oc.reading == ParallelReading::pipeline_snapshot) CHECK(oc.found);
    }
}

TEST_CASE("single word 0x0001: mapping discovered by brute force and re-verified") {
    std::vector<std::uint16_t> words = {0x0001};
    const auto rep = serial_parallel_equivalence(words);
    REQUIRE(rep.pass);
    const ReadingOutcome* found = nullptr;
    for (const auto& oc : rep.outcomes)
        if (oc.found) found = &oc;
    REQUIRE(found != nullptr);
    CHECK(found->mapping.lsb_first);
    CHECK(found->mapping.serial_steps_per_word == 63);
    CHECK(found->mapping.slot_spacing == 1);
    CHECK(verify_mapping_independently(found->mapping, words));
}

TEST_CASE("discovered mapping is the index reversal at phase 0") {
    std::vector<std::uint16_t> words = {0xBEEF, 0x1234};
    const auto rep = serial_parallel_equivalence(words);
    REQUIRE(rep.pass);
    for (const auto& oc : rep.outcomes) {
        if (!oc.found) continue;
        CHECK(oc.mapping.phase == 0);
        for (int i = 0; i < 63; ++i) CHECK(oc.mapping.cell_of[i] == 62 - i);
    }
}

TEST_CASE("mapping found on a prefix stays consistent over 1e5 random words") {
    Xoshiro256pp rng(20240601);
    std::vector<std::uint16_t> words(100'000);
    for (auto& w : words) w = static_cast<std::uint16_t>(rng.next());
    const auto rep = serial_parallel_equivalence(words);
    REQUIRE(rep.pass);
    CHECK(rep.words_checked == 100'000);

    // spot-check the reported mapping independently on a sub-sequence
    const ReadingOutcome* found = nullptr;
    for (const auto& oc : rep.outcomes)
        if (oc.found) found = &oc;
    REQUIRE(found != nullptr);
    std::vector<std::uint16_t> prefix(words.begin(), words.begin() + 2'000);
    CHECK(verify_mapping_independently(found->mapping, prefix));
}

TEST_CASE("report renders one line per reading") {
    std::vector<std::uint16_t> words = {7, 8, 9};
    const auto rep = serial_parallel_equivalence(words);
    const auto text = rep.summary();
    CHECK(text.find("simultaneous") != std::string::npos);
    CHECK(text.find("sequential-s0") != std::string::npos);
    CHECK(text.find("pipeline-snapshot") != std::string::npos);
    CHECK(text.find("PASS") != std::string::npos);
}
