#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vacrand/lfsr.hpp"
#include "vacrand/noise.hpp"
#include "vacrand/prng.hpp"

using namespace vacrand;

namespace {

std::uint64_t pack_state(const SerialLfsrState& st) {
    std::uint64_t v = 0;
    for (int j = 0; j < 63; ++j) v |= static_cast<std::uint64_t>(st.s[j] & 1) << j;
    return v;
}

ParallelLfsrState random_state(Xoshiro256pp& rng) {
    ParallelLfsrState st;
    st.s = rng.next() & ((1ull << 63) - 1);
    st.m = rng.next() & ((1ull << 63) - 1);
    return st;
}

} // namespace

// ---------------- serial form ----------------

TEST_CASE("serial_step injects into cell 0 on a zero state") {
    SerialLfsrState st;
    const auto next = serial_step(st, true);
    CHECK(next.s[0] == 1);
    for (int j = 1; j < 63; ++j) CHECK(next.s[j] == 0);
}

TEST_CASE("serial_step feedback cancels while the shift proceeds") {
    SerialLfsrState st;
    st.s[62] = 1;
    st.s[61] = 1;
    const auto next = serial_step(st, false);
    CHECK(next.s[0] == 0);          // 1 ^ 1 ^ 0
    CHECK(next.s[62] == 1);         // old s_61 shifted up
    int ones = 0;
    for (auto c : next.s) ones += c;
    CHECK(ones == 1);
}

TEST_CASE("100 zero-input steps match an independent bit-by-bit simulation") {
    // oracle: a deliberately different formulation using an explicit history
    // of injected cell-0 values, b_n = b_{n-63} ^ b_{n-62}
    std::vector<int> b(200, 0);
    b[0] = 1;   // seed pattern: s_0 = 1 at time 0 means b history all 0 except...
    // build reference state evolution directly
    std::vector<std::array<int, 63>> states(101);
    states[0].fill(0);
    states[0][0] = 1;
    for (int t = 1; t <= 100; ++t) {
        for (int j = 62; j >= 1; --j) states[t][j] = states[t - 1][j - 1];
        states[t][0] = states[t - 1][62] ^ states[t - 1][61];
    }

    SerialLfsrState st;
    st.s[0] = 1;
    for (int t = 1; t <= 100; ++t) {
        st = serial_step(st, false);
        for (int j = 0; j < 63; ++j) REQUIRE(st.s[j] == states[t][j]);
    }
}

TEST_CASE("packed serial register equals the cell-array reference") {
    SerialLfsrState st;
    SerialLfsrPacked pk;
    Xoshiro256pp rng(1234);
    for (int t = 0; t < 2000; ++t) {
        const bool d = rng.next() & 1;
        st = serial_step(st, d);
        pk.step(d);
        REQUIRE(pk.s == pack_state(st));
    }
}

// ---------------- parallel form ----------------

TEST_CASE("parallel_step on a zero state injects word bits into s") {
    ParallelLfsrState st;
    const auto a = parallel_step(st, 1);
    CHECK(a.s == 1ull);
    CHECK(a.m == 0ull);

    const auto b = parallel_step(st, 0x8000);
    CHECK(b.s == (1ull << 15));
    CHECK(b.m == 0ull);
}

TEST_CASE("packed and scalar parallel steps agree on 1e5 random pairs") {
    Xoshiro256pp rng(555);
    for (int trial = 0; trial < 100'000; ++trial) {
        const auto st = random_state(rng);
        const auto word = static_cast<std::uint16_t>(rng.next());
        const auto fast = parallel_step(st, word);
        auto sc = ParallelLfsrScalar::from_packed(st);
        sc.step(word);
        REQUIRE(sc.packed() == fast);
    }
}

TEST_CASE("parallel_step equals an affine GF(2) model probed from the scalar form") {
    // build A (126x126) and B (126x16) by probing unit vectors through the
    // scalar implementation, then check the packed step against A.x ^ B.d
    struct V126 {
        std::uint64_t s, m;
        V126 operator^(const V126& o) const { return {s ^ o.s, m ^ o.m}; }
        bool operator==(const V126&) const = default;
    };
    const auto scalar_map = [](const ParallelLfsrState& x, std::uint16_t w) {
        auto sc = ParallelLfsrScalar::from_packed(x);
        sc.step(w);
        const auto p = sc.packed();
        return V126{p.s, p.m};
    };

    const V126 offset = scalar_map({}, 0);   // affine part (must be zero)
    CHECK(offset.s == 0);
    CHECK(offset.m == 0);

    std::array<V126, 126> A;
    for (int i = 0; i < 126; ++i) {
        ParallelLfsrState e;
        if (i < 63) e.s = 1ull << i;
        else e.m = 1ull << (i - 63);
        A[i] = scalar_map(e, 0);
    }
    std::array<V126, 16> B;
    for (int j = 0; j < 16; ++j)
        B[j] = scalar_map({}, static_cast<std::uint16_t>(1u << j));

    Xoshiro256pp rng(808);
    for (int trial = 0; trial < 20'000; ++trial) {
        const auto st = random_state(rng);
        const auto w = static_cast<std::uint16_t>(rng.next());
        V126 acc{0, 0};
        for (int i = 0; i < 63; ++i)
            if ((st.s >> i) & 1) acc = acc ^ A[i];
        for (int i = 0; i < 63; ++i)
            if ((st.m >> i) & 1) acc = acc ^ A[63 + i];
        for (int j = 0; j < 16; ++j)
            if ((w >> j) & 1) acc = acc ^ B[j];
        const auto fast = parallel_step(st, w);
        REQUIRE(acc == (V126{fast.s, fast.m}));
    }
}

TEST_CASE("parallel_step is linear: 1e4 randomized superposition trials") {
    Xoshiro256pp rng(99);
    const auto zero = parallel_step({}, 0);
    REQUIRE(zero.s == 0);
    REQUIRE(zero.m == 0);
    for (int trial = 0; trial < 10'000; ++trial) {
        const auto x1 = random_state(rng);
        const auto x2 = random_state(rng);
        const auto w1 = static_cast<std::uint16_t>(rng.next());
        const auto w2 = static_cast<std::uint16_t>(rng.next());
        const auto lhs = parallel_step(
            {x1.s ^ x2.s, x1.m ^ x2.m}, static_cast<std::uint16_t>(w1 ^ w2));
        const auto a = parallel_step(x1, w1);
        const auto b = parallel_step(x2, w2);
        REQUIRE(lhs.s == (a.s ^ b.s));
        REQUIRE(lhs.m == (a.m ^ b.m));
    }
}

TEST_CASE("zero state with zero word is a fixed point") {
    ParallelLfsrState st;
    for (int i = 0; i < 100; ++i) st = parallel_step(st, 0);
    CHECK(st.s == 0);
    CHECK(st.m == 0);
}

// ---------------- output taps ----------------

TEST_CASE("extract_bits snapshots the even m cells") {
    ParallelLfsrState st;
    CHECK(extract_bits(st) == 0x00);
    st.m = (1ull << 63) - 1;
    CHECK(extract_bits(st) == 0xFF);
    st.m = (1ull << 0) | (1ull << 14);
    CHECK(extract_bits(st) == 0x81);
    st.m = (1ull << 1) | (1ull << 3);   // odd cells are not tapped
    CHECK(extract_bits(st) == 0x00);
}

// ---------------- stream extraction ----------------

TEST_CASE("warm-up consumes the first 63 samples") {
    SampleBlock block;
    block.samples.assign(63, 1);
    const auto r = extract_stream(block);
    CHECK(r.bits.empty());

    block.samples.push_back(1);
    const auto r2 = extract_stream(block);
    CHECK(r2.bits.size() == 8);
}

TEST_CASE("short input sets the warning flag") {
    SampleBlock block;
    block.samples.assign(10, 3);
    const auto r = extract_stream(block);
    CHECK(r.input_shorter_than_warmup);
    CHECK(r.bits.empty());
}

TEST_CASE("extraction ratio: 8 bits per sample after warm-up") {
    NoiseParams p;
    p.sigma_q = 4253.7;
    p.sigma_e = 1481.8;
    const auto block = generate_samples(p, 5000, 321);
    const auto r = extract_stream(block);
    CHECK(r.bits.size() == 8 * (5000 - 63));
}

TEST_CASE("packed and scalar engines produce identical streams") {
    NoiseParams p;
    p.sigma_q = 4253.7;
    p.sigma_e = 1481.8;
    const auto block = generate_samples(p, 20'000, 9);
    const auto fast = extract_stream(block, {}, Engine::packed);
    const auto slow = extract_stream(block, {}, Engine::scalar);
    REQUIRE(fast.bits.size() == slow.bits.size());
    CHECK(fast.bits.bytes() == slow.bits.bytes());
}

TEST_CASE("golden stream: fixed capture reproduces the checked-in output") {
    const std::filesystem::path dir = VACRAND_TEST_DATA_DIR;
    const auto input = load_capture(dir / "golden_input.i16");
    const auto golden = read_packed(dir / "golden_output.bits");
    for (Engine eng : {Engine::packed, Engine::scalar}) {
        const auto r = extract_stream(input, {}, eng);
        REQUIRE(r.bits.size() == golden.size());
        CHECK(r.bits.bytes() == golden.bytes());
    }
}

TEST_CASE("extracted stream is roughly balanced at 1e6 samples") {
    NoiseParams p;
    p.sigma_q = 4253.7;
    p.sigma_e = 1481.8;
    const auto block = generate_samples(p, 1'000'000, 2718);
    const auto r = extract_stream(block);
    const double n = static_cast<double>(r.bits.size());
    const double frac = static_cast<double>(r.bits.count_ones()) / n;
    CHECK(std::abs(frac - 0.5) < 5.0 * 0.5 / std::sqrt(n));
}
