#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vacrand/adc.hpp"
#include "vacrand/bitstream.hpp"
#include "vacrand/errors.hpp"

namespace vacrand {

// --- special functions ------------------------------------------------------

namespace special {

// Regularized upper incomplete gamma Q(a,x): power series for the lower
// function when x < a+1, modified-Lentz continued fraction otherwise.
// Both converge to ~1e-15 relative for the (a,x) ranges the tests use.
inline double igamc(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("igamc: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;

    const double lg = std::lgamma(a);
    const double prefix = std::exp(a * std::log(x) - x - lg);

    if (x < a + 1.0) {
        // P(a,x) series: sum_{n>=0} x^n / (a (a+1) ... (a+n))
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - prefix * sum;
    }
    // Q(a,x) continued fraction (Lentz):
    //   Q = prefix * 1/(x+1-a - 1(1-a)/(x+3-a - 2(2-a)/(x+5-a - ...)))
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return prefix * h;
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace special

// --- bit views over packed streams -------------------------------------------

// Non-owning window into a BitStream, so segment-wise testing never copies.
struct BitSpanView {
    const BitStream* bs = nullptr;
    std::size_t offset = 0;
    std::size_t nbits = 0;

    BitSpanView(const BitStream& b) : bs(&b), offset(0), nbits(b.size()) {}
    BitSpanView(const BitStream& b, std::size_t off, std::size_t n)
        : bs(&b), offset(off), nbits(n) {}

    bool bit(std::size_t i) const { return bs->bit(offset + i); }
    std::size_t size() const { return nbits; }
};

// --- reports ------------------------------------------------------------------

struct TestReport {
    std::string test_name;
    std::uint64_t n_bits = 0;
    double statistic = 0.0;
    double p_value = 0.0;
    bool pass = false;
    double alpha = 0.01;
};

namespace detail {

inline double clamp01(double p) {
    if (p < 0.0) return 0.0;
    if (p > 1.0) return 1.0;
    return p;
}

inline TestReport finish(std::string name, std::uint64_t n, double stat, double p,
                         double alpha) {
    TestReport r;
    r.test_name = std::move(name);
    r.n_bits = n;
    r.statistic = stat;
    r.p_value = clamp01(p);
    r.alpha = alpha;
    r.pass = r.p_value >= alpha;
    return r;
}

inline void require_bits(const BitSpanView& v, std::size_t need, const char* test) {
    if (v.size() < need)
        throw DomainError(std::string(test) + ": need at least " +
                          std::to_string(need) + " bits");
}

inline TestReport monobit_impl(const BitSpanView& v, double alpha) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v.bit(i) ? 1 : -1;
    const double s_obs =
        std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(v.size()));
    const double p = std::erfc(s_obs / std::sqrt(2.0));
    return finish("monobit_frequency", v.size(), s_obs, p, alpha);
}

inline TestReport runs_impl(const BitSpanView& v, double alpha) {
    const std::size_t n = v.size();
    std::uint64_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) ones += v.bit(i);
    const double pi = static_cast<double>(ones) / static_cast<double>(n);
    // monobit prerequisite; fail closed with p = 0 by convention
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n)))
        return finish("runs", n, 0.0, 0.0, alpha);
    std::uint64_t v_n = 1;
    bool prev = v.bit(0);
    for (std::size_t i = 1; i < n; ++i) {
        const bool b = v.bit(i);
        v_n += (b != prev);
        prev = b;
    }
    const double num = std::abs(static_cast<double>(v_n) -
                                2.0 * static_cast<double>(n) * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * static_cast<double>(n)) * pi * (1.0 - pi);
    const double p = std::erfc(num / den);
    return finish("runs", n, static_cast<double>(v_n), p, alpha);
}

inline TestReport block_frequency_impl(const BitSpanView& v, std::size_t block_len,
                                       double alpha) {
    const std::size_t n = v.size();
    const std::size_t nblocks = n / block_len;
    double chi2 = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::uint64_t ones = 0;
        for (std::size_t i = 0; i < block_len; ++i) ones += v.bit(b * block_len + i);
        const double d = static_cast<double>(ones) / static_cast<double>(block_len) - 0.5;
        chi2 += d * d;
    }
    chi2 *= 4.0 * static_cast<double>(block_len);
    const double p = special::igamc(static_cast<double>(nblocks) / 2.0, chi2 / 2.0);
    return finish("block_frequency", n, chi2, p, alpha);
}

inline TestReport cumulative_sums_impl(const BitSpanView& v, double alpha) {
    const std::size_t n = v.size();
    std::int64_t s = 0, zmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        s += v.bit(i) ? 1 : -1;
        const std::int64_t a = s < 0 ? -s : s;
        if (a > zmax) zmax = a;
    }
    const double z = static_cast<double>(zmax);
    const double dn = static_cast<double>(n);
    const double sq = std::sqrt(dn);
    double sum1 = 0.0;
    for (std::int64_t k = static_cast<std::int64_t>(std::floor((-dn / z + 1.0) / 4.0));
         k <= static_cast<std::int64_t>(std::floor((dn / z - 1.0) / 4.0)); ++k) {
        sum1 += special::normal_cdf((4.0 * k + 1.0) * z / sq) -
                special::normal_cdf((4.0 * k - 1.0) * z / sq);
    }
    double sum2 = 0.0;
    for (std::int64_t k = static_cast<std::int64_t>(std::floor((-dn / z - 3.0) / 4.0));
         k <= static_cast<std::int64_t>(std::floor((dn / z - 1.0) / 4.0)); ++k) {
        sum2 += special::normal_cdf((4.0 * k + 3.0) * z / sq) -
                special::normal_cdf((4.0 * k + 1.0) * z / sq);
    }
    return finish("cumulative_sums", n, z, 1.0 - sum1 + sum2, alpha);
}

} // namespace detail

// --- public tests (NIST SP 800-22 style subset) -------------------------------

inline TestReport monobit_frequency(const BitSpanView& v, double alpha = 0.01) {
    detail::require_bits(v, 100, "monobit_frequency");
    return detail::monobit_impl(v, alpha);
}

inline TestReport runs_test(const BitSpanView& v, double alpha = 0.01) {
    detail::require_bits(v, 100, "runs");
    return detail::runs_impl(v, alpha);
}

inline TestReport block_frequency(const BitSpanView& v, std::size_t block_len = 128,
                                  double alpha = 0.01) {
    if (block_len < 2) throw DomainError("block_frequency: block_len too small");
    detail::require_bits(v, 100 * block_len, "block_frequency");
    return detail::block_frequency_impl(v, block_len, alpha);
}

inline TestReport cumulative_sums(const BitSpanView& v, double alpha = 0.01) {
    detail::require_bits(v, 100, "cumulative_sums");
    return detail::cumulative_sums_impl(v, alpha);
}

// --- raw-sample bit planes (diagnostics / negative controls) ------------------

enum class BitRepresentation { twos_complement, magnitude };

inline BitStream nth_bit_stream(const SampleBlock& block, int bit_index,
                                BitRepresentation repr) {
    if (bit_index < 0 || bit_index > 15)
        throw DomainError("nth_bit_stream: bit index must be 0..15");
    BitStream out;
    for (AdcSample x : block.samples) {
        std::uint32_t u;
        if (repr == BitRepresentation::twos_complement) {
            u = static_cast<std::uint16_t>(x);
        } else {
            const std::int32_t v = x;
            u = static_cast<std::uint32_t>(v < 0 ? -v : v);
        }
        out.push_bit((u >> bit_index) & 1u);
    }
    return out;
}

// --- external-suite interop ----------------------------------------------------

enum class ExportFormat { ascii01, packed };

inline void export_for_external(const BitStream& bits, ExportFormat fmt,
                                const std::filesystem::path& path) {
    if (fmt == ExportFormat::ascii01)
        write_ascii01(bits, path);
    else
        write_packed(bits, path);
}

inline BitStream import_external(const std::filesystem::path& path, ExportFormat fmt) {
    return fmt == ExportFormat::ascii01 ? read_ascii01(path) : read_packed(path);
}

} // namespace vacrand
