#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vacrand/entropy.hpp"
#include "vacrand/noise.hpp"
#include "vacrand/signal.hpp"

using namespace vacrand;

TEST_CASE("autocorrelation of a constant block is 1 at every lag") {
    SampleBlock b;
    b.samples.assign(1000, 7);
    const auto r = autocorrelation(b, 10);
    for (double v : r.values) CHECK(v == Catch::Approx(1.0));
}

TEST_CASE("autocorrelation of an alternating block") {
    SampleBlock b;
    for (int i = 0; i < 1000; ++i) b.samples.push_back(i % 2 ? 900 : -900);
    const auto r = autocorrelation(b, 4);
    CHECK(r.values[0] == Catch::Approx(-1.0));
    CHECK(r.values[1] == Catch::Approx(1.0));
    CHECK(r.values[2] == Catch::Approx(-1.0));
    CHECK(r.values[3] == Catch::Approx(1.0));
}

TEST_CASE("autocorrelation input validation") {
    SampleBlock b;
    b.samples = {1, 2, 3};
    CHECK_THROWS_AS(autocorrelation(b, 3), DomainError);
    CHECK_THROWS_AS(autocorrelation(b, 0), DomainError);
}

TEST_CASE("white noise: >= 95% of lags inside the 2/sqrt(n) band") {
    NoiseParams p;
    p.sigma_q = 4253.7;
    p.sigma_e = 1481.8;
    const auto block = generate_samples(p, 1'000'000, 404);
    const auto r = autocorrelation(block, 100);
    CHECK(r.confidence == Catch::Approx(2.0 / std::sqrt(1e6)));
    int inside = 0;
    for (double v : r.values)
        if (std::abs(v) <= r.confidence) ++inside;
    CHECK(inside >= 95);
    CHECK_FALSE(r.mean_warning);
}

TEST_CASE("AR(1) source shows the dialed-in lag-1 correlation") {
    NoiseParams p;
    p.sigma_q = 4000.0;
    p.sigma_e = 1000.0;
    p.ar_coefficient = 0.5;
    const auto block = generate_samples(p, 500'000, 1001);
    const auto r = autocorrelation(block, 5);
    CHECK(r.values[0] == Catch::Approx(0.5).margin(0.02));
    CHECK(r.values[0] > r.confidence);   // clearly outside the white band
    CHECK(r.values[1] == Catch::Approx(0.25).margin(0.02));
}

TEST_CASE("periodic block: lag equal to the period returns near 1") {
    SampleBlock b;
    const int pattern[] = {100, -300, 250, 90, -120, 40, -60, 10};
    for (int rep = 0; rep < 200; ++rep)
        for (int v : pattern) b.samples.push_back(static_cast<AdcSample>(v));
    const auto r = autocorrelation(b, 8);
    CHECK(r.values[7] == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("mean-subtracted variant removes a DC offset") {
    NoiseParams p;
    p.sigma_e = 500.0;
    auto block = generate_electronic_only(p, 200'000, 6);
    for (auto& s : block.samples)
        s = static_cast<AdcSample>(std::min(32767, s + 2000));   // inject DC
    const auto raw = autocorrelation(block, 3);
    CHECK(raw.mean_warning);
    CHECK(raw.values[0] > 0.9);   // DC dominates the raw estimator
    const auto centered = autocorrelation(block, 3, true);
    CHECK(std::abs(centered.values[0]) < 5.0 * centered.confidence);
}

TEST_CASE("shot noise power at the reference operating point") {
    ShotNoiseParams p;
    p.photocurrent_a = 1.7e-3;
    p.bandwidth_hz = 1e3;
    p.transimpedance_ohm = 540e3;
    p.load_ohm = 50.0;
    const auto out = shot_noise_power(p);
    CHECK(out.dbm == Catch::Approx(-52.0).margin(0.1));
    CHECK(out.dbm == Catch::Approx(-51.96963178).margin(1e-6));
    CHECK(out.watts == Catch::Approx(6.353848008e-9).epsilon(1e-9));
}

TEST_CASE("shot noise scaling: +3.01 dB per doubled bandwidth, +6.02 per doubled R") {
    ShotNoiseParams p;
    p.photocurrent_a = 1.7e-3;
    p.bandwidth_hz = 1e3;
    p.transimpedance_ohm = 540e3;
    const auto base = shot_noise_power(p);

    auto pb = p;
    pb.bandwidth_hz *= 2.0;
    CHECK(shot_noise_power(pb).dbm - base.dbm ==
          Catch::Approx(10.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK(shot_noise_power(pb).watts == Catch::Approx(2.0 * base.watts).epsilon(1e-12));

    auto pr = p;
    pr.transimpedance_ohm *= 2.0;
    CHECK(shot_noise_power(pr).dbm - base.dbm ==
          Catch::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK(shot_noise_power(pr).watts == Catch::Approx(4.0 * base.watts).epsilon(1e-12));

    auto pi = p;
    pi.photocurrent_a *= 3.0;
    CHECK(shot_noise_power(pi).watts == Catch::Approx(3.0 * base.watts).epsilon(1e-12));
}

TEST_CASE("shot noise rejects nonpositive parameters") {
    ShotNoiseParams p;
    CHECK_THROWS_AS(shot_noise_power(p), DomainError);
}

TEST_CASE("two-point distribution: skewness 0, excess kurtosis -2") {
    SampleBlock b;
    for (int i = 0; i < 10'000; ++i) b.samples.push_back(i % 2 ? 1 : -1);
    const auto rep = distribution_report(b);
    CHECK(rep.mean == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.stddev == Catch::Approx(1.0));
    CHECK(rep.skewness == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.excess_kurtosis == Catch::Approx(-2.0).margin(1e-12));
    CHECK_FALSE(rep.degenerate);
}

TEST_CASE("constant block is degenerate") {
    SampleBlock b;
    b.samples.assign(100, 5);
    const auto rep = distribution_report(b);
    CHECK(rep.stddev == 0.0);
    CHECK(rep.degenerate);
    CHECK(std::isnan(rep.skewness));
    CHECK(std::isnan(rep.excess_kurtosis));
}

TEST_CASE("simulated Gaussian moments at n = 1e7") {
    NoiseParams p;
    p.sigma_q = 4253.7;
    p.sigma_e = 1481.8;
    const auto block = generate_samples(p, 10'000'000, 313);
    const auto rep = distribution_report(block);
    CHECK(std::abs(rep.skewness) < 0.01);
    CHECK(std::abs(rep.excess_kurtosis) < 0.05);
    // consistency with the entropy module's estimator
    CHECK(rep.stddev == Catch::Approx(sample_stddev(block)).margin(1e-9));
    std::uint64_t mass = 0;
    for (auto c : rep.histogram) mass += c;
    CHECK(mass == block.size());
}
