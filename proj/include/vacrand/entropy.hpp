#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vacrand/adc.hpp"
#include "vacrand/errors.hpp"

namespace vacrand {

// Population standard deviation after subtracting the empirical mean.
// Integer sums are exact for any realistic block length.
inline double sample_stddev(const SampleBlock& block) {
    const auto n = block.samples.size();
    if (n < 2) throw DomainError("sample_stddev: need at least 2 samples");
    std::int64_t sum = 0;
    std::int64_t sq = 0;
    for (AdcSample x : block.samples) {
        sum += x;
        sq += static_cast<std::int64_t>(x) * x;
    }
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    const double var = static_cast<double>(sq) / static_cast<double>(n) - mean * mean;
    return std::sqrt(var < 0.0 ? 0.0 : var);
}

// sigma_q = sqrt(sigma_t^2 - sigma_e^2): the quantum share of the variance
// under the independent additive model.
inline double sigma_quantum(double sigma_t, double sigma_e) {
    if (!(sigma_e >= 0.0) || !(sigma_t > sigma_e))
        throw DomainError(
            "sigma_quantum: electronic noise dominates; no extractable "
            "quantum entropy under this model");
    return std::sqrt(sigma_t * sigma_t - sigma_e * sigma_e);
}

namespace detail {

// Phi(b) - Phi(a) over one quantizer bin, evaluated through erfc on the tail
// side so the difference keeps full relative precision for |x| >> sigma.
inline double gaussian_bin_prob(double lo, double hi, double sigma) {
    const double rs2 = 1.0 / (sigma * std::numbers::sqrt2);
    const double a = lo * rs2;
    const double b = hi * rs2;
    if (a >= 0.0)
        return 0.5 * (std::erfc(a) - std::erfc(b));
    if (b <= 0.0)
        return 0.5 * (std::erfc(-b) - std::erfc(-a));
    return 0.5 * (std::erf(b) - std::erf(a));
}

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

// Shannon entropy (bits) of a zero-mean Gaussian discretized by the 16-bit
// quantizer: unit-width bins centered on integers, with the two edge codes
// absorbing the clipped tail mass.  Terms with p = 0 contribute nothing.
inline double entropy_discrete_gaussian(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("entropy_discrete_gaussian: sigma must be > 0");
    detail::KahanSum H;
    const auto term = [&](double p) {
        if (p > 0.0) H.add(-p * std::log2(p));
    };

    // interior codes -32767..32766; negative side mirrors the positive side
    term(detail::gaussian_bin_prob(-0.5, 0.5, sigma));
    for (int x = 1; x <= 32766; ++x) {
        const double p = detail::gaussian_bin_prob(x - 0.5, x + 0.5, sigma);
        if (p == 0.0 && x > 8.0 * sigma) break;   // remaining terms underflow
        term(p);
        term(p);
    }
    term(detail::gaussian_bin_prob(32766.5, 32767.5, sigma));      // code -32767
    term(0.5 * std::erfc(32767.5 / (sigma * std::numbers::sqrt2))); // code -32768 (tail)
    term(0.5 * std::erfc(32766.5 / (sigma * std::numbers::sqrt2))); // code +32767 (tail)
    return H.sum;
}

// Differential-entropy closed form log2(sqrt(2 pi e) sigma).
inline double entropy_closed_form(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("entropy_closed_form: sigma must be > 0");
    return std::log2(std::sqrt(2.0 * std::numbers::pi * std::numbers::e) * sigma);
}

// Bound on |H - H'|: log2(sqrt(2 pi) sigma) / (sqrt(2 pi) sigma).
inline double footnote_bound(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("footnote_bound: sigma must be > 0");
    const double y = std::sqrt(2.0 * std::numbers::pi) * sigma;
    if (!(y > 1.0)) throw DomainError("footnote_bound: requires sqrt(2 pi) sigma > 1");
    return std::log2(y) / y;
}

// --- conditional entropy demo ------------------------------------------

// Small discrete distribution on contiguous integer support.
struct DiscreteDist {
    int offset = 0;                 // value of index 0
    std::vector<double> p;

    void validate() const {
        double total = 0.0;
        for (double v : p) {
            if (!(v >= 0.0)) throw DomainError("DiscreteDist: negative probability");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw DomainError("DiscreteDist: probabilities must sum to 1");
    }
};

inline double shannon_entropy_bits(const std::vector<double>& p) {
    detail::KahanSum H;
    for (double v : p)
        if (v > 0.0) H.add(-v * std::log2(v));
    return H.sum;
}

// Exhaustively enumerates the joint distribution of (X_q + X_e, X_e) for
// independent X_q, X_e, and returns (H(X_t|X_e), H(X_q)).  The two must agree:
// knowing the electronic noise exactly leaves exactly the quantum entropy.
inline std::pair<double, double> conditional_entropy_demo(const DiscreteDist& q,
                                                          const DiscreteDist& e) {
    q.validate();
    e.validate();
    if (q.p.size() * e.p.size() > 10000)
        throw DomainError("conditional_entropy_demo: joint support too large");

    // H(X_t|X_e) = H(X_t, X_e) - H(X_e)
    std::vector<double> joint;
    joint.reserve(q.p.size() * e.p.size());
    for (double pe : e.p)
        for (double pq : q.p) joint.push_back(pe * pq);
    const double h_joint = shannon_entropy_bits(joint);
    const double h_e = shannon_entropy_bits(e.p);
    const double h_q = shannon_entropy_bits(q.p);
    return {h_joint - h_e, h_q};
}

// --- report --------------------------------------------------------------

struct EntropyReport {
    double sigma_t = 0.0;
    double sigma_e = 0.0;
    double sigma_q = 0.0;
    double h_sum = 0.0;              // discretized Shannon entropy, bits/sample
    double h_closed = 0.0;           // closed-form approximation
    double bound = 0.0;              // approximation error bound
    double max_extraction_ratio = 0.0;

    std::string to_text() const {
        std::ostringstream os;
        os.precision(10);
        os << "sigma_t: " << sigma_t << "\n"
           << "sigma_e: " << sigma_e << "\n"
           << "sigma_q: " << sigma_q << "\n"
           << "h_sum_bits: " << h_sum << "\n"
           << "h_closed_bits: " << h_closed << "\n"
           << "bound_bits: " << bound << "\n"
           << "max_extraction_ratio: " << max_extraction_ratio << "\n";
        return os.str();
    }
};

inline EntropyReport make_entropy_report(double sigma_t, double sigma_e) {
    EntropyReport r;
    r.sigma_t = sigma_t;
    r.sigma_e = sigma_e;
    r.sigma_q = sigma_quantum(sigma_t, sigma_e);
    r.h_sum = entropy_discrete_gaussian(r.sigma_q);
    r.h_closed = entropy_closed_form(r.sigma_q);
    r.bound = footnote_bound(r.sigma_q);
    r.max_extraction_ratio = r.h_sum / 16.0;
    return r;
}

inline EntropyReport make_entropy_report(const SampleBlock& total,
                                         const SampleBlock& electronic) {
    return make_entropy_report(sample_stddev(total), sample_stddev(electronic));
}

} // namespace vacrand
