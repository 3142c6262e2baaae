#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace vacrand::gf2 {

// 63x63 matrix over GF(2); row i is a 63-bit column mask in a uint64.
struct Mat63 {
    std::array<std::uint64_t, 63> row{};

    bool operator==(const Mat63&) const = default;

    static Mat63 identity() {
        Mat63 m;
        for (int i = 0; i < 63; ++i) m.row[i] = 1ull << i;
        return m;
    }

    bool get(int i, int j) const { return (row[i] >> j) & 1u; }
    void set(int i, int j) { row[i] |= 1ull << j; }
};

inline std::uint64_t mul_vec(const Mat63& a, std::uint64_t v) {
    std::uint64_t out = 0;
    for (int i = 0; i < 63; ++i)
        out |= static_cast<std::uint64_t>(__builtin_parityll(a.row[i] & v)) << i;
    return out;
}

inline Mat63 mul(const Mat63& a, const Mat63& b) {
    // row i of a*b = XOR of rows of b selected by bits of a's row i
    Mat63 c;
    for (int i = 0; i < 63; ++i) {
        std::uint64_t bits = a.row[i];
        std::uint64_t acc = 0;
        while (bits) {
            const int j = __builtin_ctzll(bits);
            acc ^= b.row[j];
            bits &= bits - 1;
        }
        c.row[i] = acc;
    }
    return c;
}

inline Mat63 pow(Mat63 base, std::uint64_t e) {
    Mat63 r = Mat63::identity();
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

// Zero-input transition of the 63-cell serial LFSR:
// s_j' = s_{j-1} (j = 1..62), s_0' = s_62 ^ s_61.
inline Mat63 transition_matrix() {
    Mat63 m;
    for (int j = 1; j < 63; ++j) m.set(j, j - 1);
    m.set(0, 62);
    m.set(0, 61);
    return m;
}

// Trial-division factorization (distinct primes) of a 64-bit integer.
inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            primes.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) primes.push_back(n);
    return primes;
}

// True iff the multiplicative order of m is exactly `order`:
// m^order = I and m^(order/p) != I for every prime p | order.
inline bool order_is(const Mat63& m, std::uint64_t order) {
    if (pow(m, order) != Mat63::identity()) return false;
    for (std::uint64_t p : distinct_prime_factors(order)) {
        if (pow(m, order / p) == Mat63::identity()) return false;
    }
    return true;
}

} // namespace vacrand::gf2
