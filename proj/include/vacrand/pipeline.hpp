#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "vacrand/adc.hpp"
#include "vacrand/bitstream.hpp"
#include "vacrand/errors.hpp"
#include "vacrand/lfsr.hpp"
#include "vacrand/noise.hpp"

namespace vacrand {

// --- configuration -----------------------------------------------------------

enum class OutputFormat { packed, ascii01 };

struct SimulateSource {
    NoiseParams params;
    std::uint64_t n = 0;
    std::uint64_t seed = 1;
    bool electronic_only = false;
};

struct FileSource {
    std::filesystem::path path;
};

struct PipelineConfig {
    std::variant<SimulateSource, FileSource> source;
    ExtractorConfig extractor;
    Engine engine = Engine::packed;
    std::filesystem::path out_path;
    OutputFormat format = OutputFormat::packed;
    std::size_t chunk_samples = 524288;   // 1 MiB of samples per chunk
    double bench_duration_s = 10.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config line " + std::to_string(line) + ": bad boolean '" + v + "'");
}

template <typename T>
T parse_num(const std::string& v, int line) {
    std::istringstream is(v);
    T out;
    is >> out;
    if (!is || !(is >> std::ws).eof())
        throw ConfigError("config line " + std::to_string(line) + ": bad number '" + v + "'");
    return out;
}

} // namespace detail

// Flat "key = value" file with [source] / [extractor] / [output] / [bench]
// sections; '#' starts a comment. Full key list in the README.
inline PipelineConfig parse_config(std::istream& in) {
    PipelineConfig cfg;
    SimulateSource sim;
    FileSource file;
    std::string source_type;
    std::string section;
    std::string raw;
    int line = 0;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto h = s.find('#'); h != std::string::npos) s.erase(h);
        s = detail::trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("config line " + std::to_string(line) + ": bad section header");
            section = s.substr(1, s.size() - 2);
            if (section != "source" && section != "extractor" && section != "output" &&
                section != "bench" && section != "pipeline")
                throw ConfigError("config line " + std::to_string(line) +
                                  ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));

        if (section == "source") {
            if (key == "type") source_type = val;
            else if (key == "sigma_q") sim.params.sigma_q = detail::parse_num<double>(val, line);
            else if (key == "sigma_e") sim.params.sigma_e = detail::parse_num<double>(val, line);
            else if (key == "ar") sim.params.ar_coefficient = detail::parse_num<double>(val, line);
            else if (key == "n") sim.n = detail::parse_num<std::uint64_t>(val, line);
            else if (key == "seed") sim.seed = detail::parse_num<std::uint64_t>(val, line);
            else if (key == "electronic_only") sim.electronic_only = detail::parse_bool(val, line);
            else if (key == "path") file.path = val;
            else throw ConfigError("config line " + std::to_string(line) +
                                   ": unknown key '" + key + "' in [source]");
        } else if (section == "extractor") {
            if (key == "warmup")
                cfg.extractor.warmup_steps = detail::parse_num<std::size_t>(val, line);
            else if (key == "engine") {
                if (val == "packed") cfg.engine = Engine::packed;
                else if (val == "scalar") cfg.engine = Engine::scalar;
                else throw ConfigError("config line " + std::to_string(line) +
                                       ": engine must be packed or scalar");
            } else throw ConfigError("config line " + std::to_string(line) +
                                   ": unknown key '" + key + "' in [extractor]");
        } else if (section == "output") {
            if (key == "path") cfg.out_path = val;
            else if (key == "format") {
                if (val == "packed") cfg.format = OutputFormat::packed;
                else if (val == "ascii") cfg.format = OutputFormat::ascii01;
                else throw ConfigError("config line " + std::to_string(line) +
                                       ": format must be packed or ascii");
            } else throw ConfigError("config line " + std::to_string(line) +
                                     ": unknown key '" + key + "' in [output]");
        } else if (section == "pipeline") {
            if (key == "chunk_samples")
                cfg.chunk_samples = detail::parse_num<std::size_t>(val, line);
            else throw ConfigError("config line " + std::to_string(line) +
                                   ": unknown key '" + key + "' in [pipeline]");
        } else if (section == "bench") {
            if (key == "duration_s")
                cfg.bench_duration_s = detail::parse_num<double>(val, line);
            else throw ConfigError("config line " + std::to_string(line) +
                                   ": unknown key '" + key + "' in [bench]");
        } else {
            throw ConfigError("config line " + std::to_string(line) +
                              ": key outside any section");
        }
    }

    if (source_type == "simulate") {
        cfg.source = sim;
    } else if (source_type == "file") {
        if (file.path.empty())
            throw ConfigError("config: [source] type = file requires path");
        cfg.source = file;
    } else {
        throw ConfigError("config: [source] type must be 'simulate' or 'file'");
    }
    if (cfg.chunk_samples == 0) throw ConfigError("config: chunk_samples must be > 0");
    return cfg;
}

inline PipelineConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    return parse_config(in);
}

// --- streaming output sink ----------------------------------------------------

namespace detail {

class BitWriter {
public:
    BitWriter(std::ostream& out, OutputFormat fmt) : out_(out), fmt_(fmt) {}

    void write(const BitStream& chunk) {
        if (fmt_ == OutputFormat::packed) {
            if (chunk.size() % 8 != 0)
                throw FormatError("BitWriter: packed chunks must be byte-aligned");
            out_.write(reinterpret_cast<const char*>(chunk.bytes().data()),
                       static_cast<std::streamsize>(chunk.bytes().size()));
        } else {
            std::string buf;
            buf.reserve(chunk.size() + chunk.size() / kAsciiLineBits + 1);
            for (std::size_t i = 0; i < chunk.size(); ++i) {
                buf.push_back(chunk.bit(i) ? '1' : '0');
                if (++bits_done_ % kAsciiLineBits == 0) buf.push_back('\n');
            }
            out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        }
        if (!out_) throw IoError("pipeline: write failed");
        bits_written_ += chunk.size();
    }

    std::uint64_t bits_written() const { return bits_written_; }

private:
    std::ostream& out_;
    OutputFormat fmt_;
    std::uint64_t bits_written_ = 0;
    std::uint64_t bits_done_ = 0;
};

} // namespace detail

// --- pipeline ------------------------------------------------------------------

struct PipelineResult {
    std::uint64_t samples_in = 0;
    std::uint64_t bits_out = 0;
};

// source -> extractor -> sink as a chunked stream; bounded memory, identical
// output for any chunk size.  `data_override`, when set, receives the packed
// bytes instead of cfg.out_path (piping mode).
inline PipelineResult run_pipeline(const PipelineConfig& cfg,
                                   std::ostream* data_override = nullptr) {
    std::ofstream file_out;
    std::ostream* out = data_override;
    OutputFormat fmt = data_override ? OutputFormat::packed : cfg.format;
    if (!out) {
        if (cfg.out_path.empty()) throw ConfigError("pipeline: no output path");
        file_out.open(cfg.out_path,
                      fmt == OutputFormat::packed
                          ? std::ios::binary | std::ios::trunc
                          : std::ios::trunc);
        if (!file_out) throw IoError("cannot open " + cfg.out_path.string());
        out = &file_out;
    }

    detail::BitWriter writer(*out, fmt);
    Extractor extractor(cfg.extractor, cfg.engine);
    PipelineResult res;
    std::vector<AdcSample> chunk(cfg.chunk_samples);
    BitStream bits;

    if (std::holds_alternative<SimulateSource>(cfg.source)) {
        const auto& sim = std::get<SimulateSource>(cfg.source);
        NoiseParams params = sim.params;
        if (sim.electronic_only) params.sigma_q = 0.0;
        NoiseSource src(params, sim.seed);
        std::uint64_t left = sim.n;
        while (left > 0) {
            const std::size_t take =
                static_cast<std::size_t>(std::min<std::uint64_t>(left, chunk.size()));
            src.fill(std::span<AdcSample>(chunk.data(), take));
            bits.clear();
            extractor.process(std::span<const AdcSample>(chunk.data(), take), bits);
            writer.write(bits);
            res.samples_in += take;
            left -= take;
        }
    } else {
        const auto& fs = std::get<FileSource>(cfg.source);
        std::error_code ec;
        const auto fsize = std::filesystem::file_size(fs.path, ec);
        if (ec) throw IoError("cannot stat " + fs.path.string());
        if (fsize % 2 != 0)
            throw FormatError(fs.path.string() + ": truncated sample (odd file length)");
        std::ifstream in(fs.path, std::ios::binary);
        if (!in) throw IoError("cannot open " + fs.path.string());
        std::vector<unsigned char> raw(chunk.size() * 2);
        std::uint64_t left = fsize / 2;
        while (left > 0) {
            const std::size_t take =
                static_cast<std::size_t>(std::min<std::uint64_t>(left, chunk.size()));
            in.read(reinterpret_cast<char*>(raw.data()),
                    static_cast<std::streamsize>(take * 2));
            if (!in) throw IoError("read failed on " + fs.path.string());
            for (std::size_t i = 0; i < take; ++i)
                chunk[i] = static_cast<AdcSample>(static_cast<std::uint16_t>(
                    raw[2 * i] | (static_cast<std::uint16_t>(raw[2 * i + 1]) << 8)));
            bits.clear();
            extractor.process(std::span<const AdcSample>(chunk.data(), take), bits);
            writer.write(bits);
            res.samples_in += take;
            left -= take;
        }
    }
    res.bits_out = writer.bits_written();
    return res;
}

// --- throughput benchmark --------------------------------------------------------

struct BenchConfig {
    double duration_s = 10.0;
    Engine engine = Engine::packed;
    std::size_t buffer_samples = 1u << 22;   // 8 MiB of pre-generated samples
    std::uint64_t seed = 0xB0BACAFEull;
};

struct BenchReport {
    double raw_samples_per_s = 0.0;
    double output_bits_per_s = 0.0;
    std::uint64_t bytes_processed = 0;
    double wall_time_s = 0.0;
    bool single_threaded = true;
    unsigned checksum = 0;   // keeps the measured loop observable
};

// Steady-state single-threaded extraction throughput over in-memory samples;
// simulation and disk I/O are excluded by construction.  Output bytes land in
// a reused buffer, as a real double-buffered consumer would.
inline BenchReport bench(const BenchConfig& cfg) {
    if (!(cfg.duration_s >= 1.0)) throw DomainError("bench: duration must be >= 1 s");

    std::vector<AdcSample> samples(cfg.buffer_samples);
    NoiseParams np;
    np.sigma_q = 4253.7;
    np.sigma_e = 1481.8;
    NoiseSource(np, cfg.seed).fill(samples);

    std::vector<std::uint8_t> out(samples.size());
    BenchReport rep;

    const auto run_pass_packed = [&](ParallelLfsrState& st) {
        std::uint8_t* o = out.data();
        for (AdcSample x : samples) {
            st = parallel_step(st, static_cast<std::uint16_t>(x));
            *o++ = extract_bits(st);
        }
    };
    const auto run_pass_scalar = [&](ParallelLfsrScalar& st) {
        std::uint8_t* o = out.data();
        for (AdcSample x : samples) {
            st.step(static_cast<std::uint16_t>(x));
            *o++ = st.extract();
        }
    };

    using clock = std::chrono::steady_clock;
    std::uint64_t samples_done = 0;
    double elapsed = 0.0;

    if (cfg.engine == Engine::packed) {
        ParallelLfsrState st;
        run_pass_packed(st);   // warm-up pass (also flushes the 63-step discard)
        rep.checksum ^= out[out.size() / 2];
        const auto t0 = clock::now();
        do {
            run_pass_packed(st);
            rep.checksum ^= out[samples_done % out.size()];
            samples_done += samples.size();
            elapsed = std::chrono::duration<double>(clock::now() - t0).count();
        } while (elapsed < cfg.duration_s);
    } else {
        ParallelLfsrScalar st;
        run_pass_scalar(st);
        rep.checksum ^= out[out.size() / 2];
        const auto t0 = clock::now();
        do {
            run_pass_scalar(st);
            rep.checksum ^= out[samples_done % out.size()];
            samples_done += samples.size();
            elapsed = std::chrono::duration<double>(clock::now() - t0).count();
        } while (elapsed < cfg.duration_s);
    }

    rep.wall_time_s = elapsed;
    rep.raw_samples_per_s = static_cast<double>(samples_done) / elapsed;
    rep.output_bits_per_s = 8.0 * rep.raw_samples_per_s;
    rep.bytes_processed = samples_done * 2;
    return rep;
}

} // namespace vacrand
