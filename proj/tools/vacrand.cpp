// vacrand: vacuum-fluctuation QRNG digital pipeline tool.
// Exit codes: 0 ok, 1 internal error, 2 usage/config error, 3 I/O error,
// 4 malformed data, 5 parameter domain error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "vacrand/vacrand.hpp"

using nlohmann::json;
using namespace vacrand;

namespace {

struct GlobalOpts {
    bool quiet = false;
    std::uint64_t seed = 1;
    std::string config_path;
};

void write_samples_stream(const NoiseParams& params, std::uint64_t n,
                          std::uint64_t seed, const std::string& out_path,
                          double rate_hz) {
    (void)rate_hz;
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    NoiseSource src(params, seed);
    std::vector<AdcSample> chunk(524288);
    std::vector<unsigned char> raw(chunk.size() * 2);
    std::uint64_t left = n;
    while (left > 0) {
        const std::size_t take =
            static_cast<std::size_t>(std::min<std::uint64_t>(left, chunk.size()));
        src.fill(std::span<AdcSample>(chunk.data(), take));
        for (std::size_t i = 0; i < take; ++i) {
            const auto u = static_cast<std::uint16_t>(chunk[i]);
            raw[2 * i] = static_cast<unsigned char>(u & 0xFF);
            raw[2 * i + 1] = static_cast<unsigned char>(u >> 8);
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(take * 2));
        if (!out) throw IoError("write failed on " + out_path);
        left -= take;
    }
}

BitStream load_bits(const std::string& path, const std::string& fmt) {
    if (fmt == "ascii") return read_ascii01(path);
    return read_packed(path);
}

void print_test_report(std::ostream& os, const TestReport& r) {
    os << r.test_name << ": n=" << r.n_bits << " statistic=" << r.statistic
       << " p=" << r.p_value << " alpha=" << r.alpha << " "
       << (r.pass ? "PASS" : "FAIL") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vacuum-fluctuation QRNG: simulate, extract, analyze, test"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_flag("--quiet", g.quiet, "suppress informational output");
    app.add_option("--seed", g.seed, "global PRNG seed (subcommand --seed overrides)");
    app.add_option("--config", g.config_path, "pipeline config file");

    int rc = 0;

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "generate simulated ADC noise samples");
    struct {
        double sigma_q = 0, sigma_e = 0, ar = 0, rate = 60e6;
        std::uint64_t n = 0, seed = 0;
        bool seed_set = false, electronic_only = false;
        std::string out;
    } s;
    sim->add_option("--sigma-q", s.sigma_q, "quantum noise std-dev (counts)")->required();
    sim->add_option("--sigma-e", s.sigma_e, "electronic noise std-dev (counts)")->required();
    sim->add_option("--n", s.n, "number of samples")->required();
    sim->add_option("--seed", s.seed, "seed")->each([&](const std::string&) { s.seed_set = true; });
    sim->add_option("--out", s.out, "output raw s16le file")->required();
    sim->add_option("--ar", s.ar, "AR(1) coefficient in [0,1)");
    sim->add_option("--rate", s.rate, "sample rate metadata (Hz)");
    sim->add_flag("--electronic-only", s.electronic_only, "laser off: quantum term forced to 0");
    sim->callback([&] {
        NoiseParams p;
        p.sigma_q = s.electronic_only ? 0.0 : s.sigma_q;
        p.sigma_e = s.sigma_e;
        p.ar_coefficient = s.ar;
        write_samples_stream(p, s.n, s.seed_set ? s.seed : g.seed, s.out, s.rate);
        if (!g.quiet)
            std::cerr << "wrote " << s.n << " samples to " << s.out << "\n";
    });

    // ---- extract ----
    auto* ext = app.add_subcommand("extract", "run the LFSR extractor over a capture");
    struct {
        std::string in, out, format = "packed", engine = "packed";
        std::size_t warmup = 63;
    } e;
    ext->add_option("--in", e.in, "input raw s16le capture")->required();
    ext->add_option("--out", e.out, "output file, or - for raw bytes on stdout")->required();
    ext->add_option("--format", e.format, "packed | ascii")
        ->check(CLI::IsMember({"packed", "ascii"}));
    ext->add_option("--warmup", e.warmup, "warm-up samples to discard (default 63)");
    ext->add_option("--engine", e.engine, "packed | scalar (reference)")
        ->check(CLI::IsMember({"packed", "scalar"}));
    ext->callback([&] {
        PipelineConfig cfg;
        cfg.source = FileSource{e.in};
        cfg.extractor.warmup_steps = e.warmup;
        cfg.engine = e.engine == "scalar" ? Engine::scalar : Engine::packed;
        if (e.out == "-") {
            const auto res = run_pipeline(cfg, &std::cout);
            if (!g.quiet)
                std::cerr << "extracted " << res.bits_out << " bits from "
                          << res.samples_in << " samples\n";
        } else {
            cfg.out_path = e.out;
            cfg.format = e.format == "ascii" ? OutputFormat::ascii01 : OutputFormat::packed;
            const auto res = run_pipeline(cfg);
            if (!g.quiet)
                std::cerr << "extracted " << res.bits_out << " bits from "
                          << res.samples_in << " samples into " << e.out << "\n";
        }
    });

    // ---- entropy ----
    auto* ent = app.add_subcommand("entropy", "variance decomposition and entropy budget");
    struct {
        std::string total, electronic, json_path;
    } en;
    ent->add_option("--total", en.total, "capture with laser on")->required();
    ent->add_option("--electronic", en.electronic, "capture with laser off")->required();
    ent->add_option("--json", en.json_path, "also write a JSON report");
    ent->callback([&] {
        const auto rep = make_entropy_report(load_capture(en.total),
                                             load_capture(en.electronic));
        std::cout << rep.to_text();
        if (!en.json_path.empty()) {
            json j{{"sigma_t", rep.sigma_t},
                   {"sigma_e", rep.sigma_e},
                   {"sigma_q", rep.sigma_q},
                   {"h_sum_bits", rep.h_sum},
                   {"h_closed_bits", rep.h_closed},
                   {"bound_bits", rep.bound},
                   {"max_extraction_ratio", rep.max_extraction_ratio}};
            std::ofstream out(en.json_path, std::ios::trunc);
            if (!out) throw IoError("cannot open " + en.json_path);
            out << j.dump(2) << "\n";
        }
    });

    // ---- autocorr ----
    auto* ac = app.add_subcommand("autocorr", "normalized autocorrelation of a capture");
    struct {
        std::string in, out;
        std::size_t max_lag = 100;
        bool subtract_mean = false;
    } a;
    ac->add_option("--in", a.in, "input capture")->required();
    ac->add_option("--max-lag", a.max_lag, "largest lag to evaluate");
    ac->add_option("--out", a.out, "write two-column lag/value file");
    ac->add_flag("--subtract-mean", a.subtract_mean, "mean-subtracted diagnostic variant");
    ac->callback([&] {
        const auto block = load_capture(a.in);
        const auto r = autocorrelation(block, a.max_lag, a.subtract_mean);
        std::size_t outside = 0;
        for (double v : r.values)
            if (std::abs(v) > r.confidence) ++outside;
        std::cout << "n: " << r.n << "\n"
                  << "max_lag: " << r.values.size() << "\n"
                  << "confidence_2sigma: " << r.confidence << "\n"
                  << "lags_outside_band: " << outside << "\n"
                  << "mean_warning: " << (r.mean_warning ? "true" : "false") << "\n";
        if (!a.out.empty()) {
            std::ofstream out(a.out, std::ios::trunc);
            if (!out) throw IoError("cannot open " + a.out);
            for (std::size_t d = 1; d <= r.values.size(); ++d)
                out << d << " " << r.values[d - 1] << "\n";
        }
    });

    // ---- shotnoise ----
    auto* sn = app.add_subcommand("shotnoise", "theoretical shot-noise power");
    struct {
        double current = 0, bandwidth = 0, reff = 0, z = 50;
    } sh;
    sn->add_option("--current", sh.current, "average photocurrent (A)")->required();
    sn->add_option("--bandwidth", sh.bandwidth, "measurement bandwidth (Hz)")->required();
    sn->add_option("--reff", sh.reff, "effective transimpedance (ohm)")->required();
    sn->add_option("--z", sh.z, "load impedance (ohm), default 50");
    sn->callback([&] {
        ShotNoiseParams p;
        p.photocurrent_a = sh.current;
        p.bandwidth_hz = sh.bandwidth;
        p.transimpedance_ohm = sh.reff;
        p.load_ohm = sh.z;
        const auto out = shot_noise_power(p);
        std::cout << "watts: " << out.watts << "\n"
                  << "dbm: " << out.dbm << "\n";
    });

    // ---- dist ----
    auto* di = app.add_subcommand("dist", "distribution report for a capture");
    struct {
        std::string in, hist;
    } d;
    di->add_option("--in", d.in, "input capture")->required();
    di->add_option("--hist", d.hist, "write histogram (bin_low count) file");
    di->callback([&] {
        const auto rep = distribution_report(load_capture(d.in));
        std::cout << "mean: " << rep.mean << "\n"
                  << "stddev: " << rep.stddev << "\n"
                  << "skewness: " << rep.skewness << "\n"
                  << "excess_kurtosis: " << rep.excess_kurtosis << "\n"
                  << "degenerate: " << (rep.degenerate ? "true" : "false") << "\n";
        if (!d.hist.empty()) {
            std::ofstream out(d.hist, std::ios::trunc);
            if (!out) throw IoError("cannot open " + d.hist);
            for (std::size_t b = 0; b < rep.histogram.size(); ++b)
                out << (static_cast<int>(b) * DistributionReport::kBinWidth - 32768)
                    << " " << rep.histogram[b] << "\n";
        }
    });

    // ---- test ----
    auto* ts = app.add_subcommand("test", "built-in statistical randomness tests");
    struct {
        std::string in, in_format = "packed", tests = "monobit,runs,blockfreq,cusum";
        double alpha = 0.01;
    } t;
    ts->add_option("--in", t.in, "input bit stream")->required();
    ts->add_option("--in-format", t.in_format, "packed | ascii")
        ->check(CLI::IsMember({"packed", "ascii"}));
    ts->add_option("--tests", t.tests, "comma list: monobit,runs,blockfreq,cusum");
    ts->add_option("--alpha", t.alpha, "significance level (default 0.01)");
    ts->callback([&] {
        const auto bits = load_bits(t.in, t.in_format);
        std::stringstream names(t.tests);
        std::string name;
        bool any = false;
        while (std::getline(names, name, ',')) {
            if (name == "monobit")
                print_test_report(std::cout, monobit_frequency(bits, t.alpha));
            else if (name == "runs")
                print_test_report(std::cout, runs_test(bits, t.alpha));
            else if (name == "blockfreq")
                print_test_report(std::cout, block_frequency(bits, 128, t.alpha));
            else if (name == "cusum")
                print_test_report(std::cout, cumulative_sums(bits, t.alpha));
            else
                throw ConfigError("unknown test '" + name + "'");
            any = true;
        }
        if (!any) throw ConfigError("no tests selected");
    });

    // ---- export ----
    auto* ex = app.add_subcommand("export", "convert bit streams between formats");
    struct {
        std::string in, in_format = "packed", out, format = "ascii01";
    } x;
    ex->add_option("--in", x.in, "input bit stream")->required();
    ex->add_option("--in-format", x.in_format, "packed | ascii")
        ->check(CLI::IsMember({"packed", "ascii"}));
    ex->add_option("--out", x.out, "output file")->required();
    ex->add_option("--format", x.format, "ascii01 | packed")
        ->check(CLI::IsMember({"ascii01", "packed"}));
    ex->callback([&] {
        const auto bits = load_bits(x.in, x.in_format);
        export_for_external(bits, x.format == "packed" ? ExportFormat::packed
                                                       : ExportFormat::ascii01,
                            x.out);
        if (!g.quiet)
            std::cerr << "exported " << bits.size() << " bits to " << x.out << "\n";
    });

    // ---- bench ----
    auto* be = app.add_subcommand("bench", "single-threaded extractor throughput");
    struct {
        double duration = 10.0;
        std::string engine = "packed";
        std::size_t samples = 1u << 22;
    } b;
    be->add_option("--duration", b.duration, "benchmark duration in seconds (>= 1)");
    be->add_option("--engine", b.engine, "packed | scalar")
        ->check(CLI::IsMember({"packed", "scalar"}));
    be->add_option("--samples", b.samples, "in-memory sample buffer size");
    be->callback([&] {
        BenchConfig cfg;
        cfg.duration_s = b.duration;
        cfg.engine = b.engine == "scalar" ? Engine::scalar : Engine::packed;
        cfg.buffer_samples = b.samples;
        const auto rep = bench(cfg);
        std::cout << "engine: " << b.engine << "\n"
                  << "raw_samples_per_s: " << rep.raw_samples_per_s << "\n"
                  << "output_bits_per_s: " << rep.output_bits_per_s << "\n"
                  << "output_mbit_per_s: " << rep.output_bits_per_s / 1e6 << "\n"
                  << "bytes_processed: " << rep.bytes_processed << "\n"
                  << "wall_time_s: " << rep.wall_time_s << "\n"
                  << "single_threaded: " << (rep.single_threaded ? "true" : "false")
                  << "\n";
    });

    // ---- pipeline ----
    auto* pl = app.add_subcommand("pipeline", "run a configured source->extract->output pipeline");
    pl->callback([&] {
        if (g.config_path.empty())
            throw ConfigError("pipeline requires --config FILE");
        auto cfg = parse_config_file(g.config_path);
        if (cfg.out_path == "-") {
            const auto res = run_pipeline(cfg, &std::cout);
            if (!g.quiet)
                std::cerr << "pipeline: " << res.samples_in << " samples -> "
                          << res.bits_out << " bits\n";
        } else {
            const auto res = run_pipeline(cfg);
            if (!g.quiet)
                std::cerr << "pipeline: " << res.samples_in << " samples -> "
                          << res.bits_out << " bits -> " << cfg.out_path.string()
                          << "\n";
        }
    });

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 4;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
