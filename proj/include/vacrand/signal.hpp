#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "vacrand/adc.hpp"
#include "vacrand/errors.hpp"

namespace vacrand {

// --- autocorrelation ------------------------------------------------------

struct AutocorrelationResult {
    std::vector<double> values;   // A(d), d = 1..d_max
    double confidence = 0.0;      // 2/sqrt(n) white-noise band
    std::size_t n = 0;
    bool mean_warning = false;    // |mean| > sigma/100
};

// A(d) = <x_i x_{i+d}> / <x_i^2>; numerator averaged over the n-d valid
// pairs, denominator over all n samples. No mean subtraction unless asked:
// the hardware signal is AC-coupled, real captures may carry DC offset.
inline AutocorrelationResult autocorrelation(const SampleBlock& block,
                                             std::size_t d_max,
                                             bool subtract_mean = false) {
    const auto& x = block.samples;
    const std::size_t n = x.size();
    if (d_max < 1 || n <= d_max)
        throw DomainError("autocorrelation: need n > d_max >= 1");

    AutocorrelationResult res;
    res.n = n;
    res.confidence = 2.0 / std::sqrt(static_cast<double>(n));
    res.values.resize(d_max);

    std::int64_t sum = 0, sumsq = 0;
    for (AdcSample v : x) {
        sum += v;
        sumsq += static_cast<std::int64_t>(v) * v;
    }
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    const double meansq = static_cast<double>(sumsq) / static_cast<double>(n);
    const double var = meansq - mean * mean;
    res.mean_warning = std::abs(mean) > std::sqrt(var < 0 ? 0 : var) / 100.0;

    if (!subtract_mean) {
        if (sumsq == 0) throw DomainError("autocorrelation: all-zero block");
        for (std::size_t d = 1; d <= d_max; ++d) {
            std::int64_t acc = 0;
            for (std::size_t i = 0; i + d < n; ++i)
                acc += static_cast<std::int64_t>(x[i]) * x[i + d];
            res.values[d - 1] =
                (static_cast<double>(acc) / static_cast<double>(n - d)) / meansq;
        }
    } else {
        if (var <= 0) throw DomainError("autocorrelation: zero variance");
        for (std::size_t d = 1; d <= d_max; ++d) {
            double acc = 0.0;
            for (std::size_t i = 0; i + d < n; ++i)
                acc += (x[i] - mean) * (x[i + d] - mean);
            res.values[d - 1] = (acc / static_cast<double>(n - d)) / var;
        }
    }
    return res;
}

// --- shot noise -----------------------------------------------------------

inline constexpr double kElectronCharge = 1.602176634e-19;   // coulombs

struct ShotNoiseParams {
    double photocurrent_a = 0.0;     // average photocurrent I
    double bandwidth_hz = 0.0;       // measurement bandwidth B
    double transimpedance_ohm = 0.0; // effective transimpedance R_eff
    double load_ohm = 50.0;          // load impedance Z

    void validate() const {
        if (!(photocurrent_a > 0 && bandwidth_hz > 0 && transimpedance_ohm > 0 &&
              load_ohm > 0))
            throw DomainError("ShotNoiseParams: all parameters must be positive");
    }
};

struct ShotNoisePower {
    double watts = 0.0;
    double dbm = 0.0;
};

// P = 4 e I B R_eff^2 / Z
inline ShotNoisePower shot_noise_power(const ShotNoiseParams& p) {
    p.validate();
    ShotNoisePower out;
    out.watts = 4.0 * kElectronCharge * p.photocurrent_a * p.bandwidth_hz *
                p.transimpedance_ohm * p.transimpedance_ohm / p.load_ohm;
    out.dbm = 10.0 * std::log10(out.watts / 1e-3);
    return out;
}

// --- distribution / moments -------------------------------------------------

struct DistributionReport {
    double mean = 0.0;
    double stddev = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    bool degenerate = false;              // zero variance; higher moments undefined
    std::vector<std::uint64_t> histogram; // 256 bins of width 256 over the code range
    static constexpr int kBins = 256;
    static constexpr int kBinWidth = 256;
};

inline DistributionReport distribution_report(const SampleBlock& block) {
    const auto& x = block.samples;
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("distribution_report: need at least 2 samples");

    DistributionReport rep;
    rep.histogram.assign(DistributionReport::kBins, 0);

    std::int64_t sum = 0;
    for (AdcSample v : x) {
        sum += v;
        rep.histogram[(static_cast<int>(v) + 32768) / DistributionReport::kBinWidth]++;
    }
    rep.mean = static_cast<double>(sum) / static_cast<double>(n);

    // central moments, compensated second pass
    struct Acc {
        double sum = 0, c = 0;
        void add(double v) {
            const double y = v - c, t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
    } m2, m3, m4;
    for (AdcSample v : x) {
        const double d = v - rep.mean;
        const double d2 = d * d;
        m2.add(d2);
        m3.add(d2 * d);
        m4.add(d2 * d2);
    }
    const double v2 = m2.sum / static_cast<double>(n);
    const double v3 = m3.sum / static_cast<double>(n);
    const double v4 = m4.sum / static_cast<double>(n);
    rep.stddev = std::sqrt(v2 < 0 ? 0 : v2);
    if (v2 <= 0.0) {
        rep.degenerate = true;
        rep.skewness = std::numeric_limits<double>::quiet_NaN();
        rep.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.skewness = v3 / std::pow(v2, 1.5);
        rep.excess_kurtosis = v4 / (v2 * v2) - 3.0;
    }
    return rep;
}

} // namespace vacrand
