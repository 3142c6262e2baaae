#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "vacrand/adc.hpp"
#include "vacrand/errors.hpp"
#include "vacrand/prng.hpp"

namespace vacrand {

// Additive source model: total noise = quantum + electronic, both zero-mean
// Gaussian in ADC counts, quantized by the 16-bit converter.
struct NoiseParams {
    double sigma_q = 0.0;        // quantum noise std-dev (counts)
    double sigma_e = 0.0;        // electronic noise std-dev (counts)
    int adc_bits = 16;
    double ar_coefficient = 0.0; // AR(1) correlation knob; 0 = white

    void validate() const {
        if (!(std::isfinite(sigma_q) && sigma_q >= 0.0))
            throw DomainError("NoiseParams: sigma_q must be finite and >= 0");
        if (!(std::isfinite(sigma_e) && sigma_e >= 0.0))
            throw DomainError("NoiseParams: sigma_e must be finite and >= 0");
        if (adc_bits != 16)
            throw DomainError("NoiseParams: only 16-bit ADC is supported");
        if (!(ar_coefficient >= 0.0 && ar_coefficient < 1.0))
            throw DomainError("NoiseParams: ar_coefficient must lie in [0,1)");
    }
};

// Streaming generator so the pipeline never has to materialize a whole run.
// Each of the two noise components is AR(1)-filtered separately with the
// innovation scaled by sqrt(1-rho^2); started from the stationary marginal,
// the per-sample variance is exactly sigma^2 for every t.
class NoiseSource {
public:
    NoiseSource(const NoiseParams& params, std::uint64_t seed)
        : params_(params), gauss_(seed) {
        params_.validate();
        rho_ = params_.ar_coefficient;
        innov_scale_ = std::sqrt(1.0 - rho_ * rho_);
    }

    void fill(std::span<AdcSample> out) {
        const double sq = params_.sigma_q;
        const double se = params_.sigma_e;
        for (auto& s : out) {
            double gq = gauss_.next();
            double ge = gauss_.next();
            if (rho_ > 0.0) {
                if (started_) {
                    gq = rho_ * prev_q_ + innov_scale_ * gq;
                    ge = rho_ * prev_e_ + innov_scale_ * ge;
                }
                prev_q_ = gq;
                prev_e_ = ge;
                started_ = true;
            }
            s = quantize(sq * gq + se * ge);
        }
    }

private:
    NoiseParams params_;
    GaussianStream gauss_;
    double rho_ = 0.0;
    double innov_scale_ = 1.0;
    double prev_q_ = 0.0;
    double prev_e_ = 0.0;
    bool started_ = false;
};

inline SampleBlock generate_samples(const NoiseParams& params, std::size_t n,
                                    std::uint64_t seed) {
    NoiseSource src(params, seed);
    SampleBlock block;
    block.samples.resize(n);
    src.fill(block.samples);
    return block;
}

// Laser off: same draw structure with the quantum component forced to zero,
// so the electronic stream is reproducible against generate_samples.
inline SampleBlock generate_electronic_only(const NoiseParams& params, std::size_t n,
                                            std::uint64_t seed) {
    NoiseParams p = params;
    p.sigma_q = 0.0;
    return generate_samples(p, n, seed);
}

} // namespace vacrand
