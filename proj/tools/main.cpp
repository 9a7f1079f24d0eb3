// wrng: pool-based normal pseudo-random number generator.
//
// Subcommands: gen (finite batch), stream (unbounded raw stream),
// test (statistical suite), bench (throughput), diag (stride-flaw demo).
// Exit codes: 0 success/pass, 1 test failure, 2 usage error, 3 state-file
// error.

#include <bit>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wrng/reference.hpp"
#include "wrng/stats.hpp"
#include "wrng/wallace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTestFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitStateFile = 3;

struct Options {
    std::uint64_t seed = 1;
    std::uint64_t stream_id = 0;
    std::uint64_t count = 10;
    double mu = 0.0;
    double sigma = 1.0;
    std::uint32_t f = 3;
    std::uint32_t pool_exponent = 10;
    std::string format = "text";
    std::string state_file;
    std::string suite = "all";
    std::vector<std::string> methods = {"wallace", "polar", "boxmuller"};
    double seconds = 1.0;
    std::uint64_t samples = 0;  // 0 = suite default
    bool diag_flawed = false;
    std::uint32_t gamma = 1;
};

wrng::WallaceConfig make_config(const Options& opt) {
    wrng::WallaceConfig cfg;
    cfg.pool_exponent = opt.pool_exponent;
    cfg.throwaway_f = opt.f;
    cfg.seed = opt.seed;
    cfg.stream_id = opt.stream_id;
    return cfg;
}

bool write_text(std::FILE* out, std::span<const double> vals) {
    for (double v : vals)
        if (std::fprintf(out, "%.17g\n", v) < 0) return false;
    return true;
}

bool write_f64le(std::FILE* out, std::span<const double> vals) {
    std::vector<unsigned char> buf(vals.size() * 8);
    std::size_t o = 0;
    for (double v : vals) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i)
            buf[o++] = static_cast<unsigned char>(bits >> (8 * i));
    }
    return std::fwrite(buf.data(), 1, buf.size(), out) == buf.size();
}

bool emit(std::FILE* out, std::span<const double> vals, const std::string& fmt) {
    return fmt == "text" ? write_text(out, vals) : write_f64le(out, vals);
}

// ---------------------------------------------------------------- gen

int cmd_gen(const Options& opt) {
    std::unique_ptr<wrng::WallaceState> state;
    if (!opt.state_file.empty()) {
        std::ifstream in(opt.state_file, std::ios::binary);
        if (in) {
            std::vector<std::uint8_t> bytes(
                (std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
            try {
                state = std::make_unique<wrng::WallaceState>(
                    wrng::WallaceState::load_state(bytes));
            } catch (const wrng::malformed_state_error& e) {
                std::fprintf(stderr, "wrng: %s: %s\n", opt.state_file.c_str(),
                             e.what());
                return kExitStateFile;
            }
        }
    }
    if (!state)
        state = std::make_unique<wrng::WallaceState>(make_config(opt));

    std::vector<double> buf(1u << 14);
    std::uint64_t left = opt.count;
    while (left > 0) {
        std::size_t take = static_cast<std::size_t>(
            std::min<std::uint64_t>(left, buf.size()));
        state->fill(std::span<double>(buf.data(), take), opt.mu, opt.sigma);
        if (!emit(stdout, std::span<const double>(buf.data(), take),
                  opt.format))
            break;
        left -= take;
    }
    std::fflush(stdout);

    if (!opt.state_file.empty()) {
        auto bytes = state->save_state();
        std::ofstream out(opt.state_file,
                          std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::fprintf(stderr, "wrng: cannot write %s\n",
                         opt.state_file.c_str());
            return kExitStateFile;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------- stream

int cmd_stream(const Options& opt) {
    std::signal(SIGPIPE, SIG_IGN);  // closed consumer is clean termination
    wrng::WallaceState state(make_config(opt));
    std::vector<double> buf(1u << 14);
    for (;;) {
        state.fill(std::span<double>(buf), opt.mu, opt.sigma);
        if (!emit(stdout, buf, opt.format)) return kExitOk;
        if (std::fflush(stdout) != 0) return kExitOk;
    }
}

// ---------------------------------------------------------------- test

struct TestTally {
    int tests = 0;
    int failed = 0;

    void line(const std::string& name, double statistic,
              const std::string& threshold, bool pass) {
        ++tests;
        failed += !pass;
        std::printf("%-34s statistic=%-12.5g threshold=%-22s %s\n",
                    name.c_str(), statistic, threshold.c_str(),
                    pass ? "PASS" : "FAIL");
    }
};

void test_uniformity(const Options& opt, TestTally& tally) {
    const std::size_t pairs = opt.samples ? opt.samples : 1000000;
    constexpr double kPi2 = 1.5707963267948966;

    auto run = [&](const char* name, auto make_gen) {
        int ok_u = 0, ok_v = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto gen = make_gen(seed);
            std::vector<double> u, v;
            u.reserve(pairs);
            v.reserve(pairs);
            for (std::size_t i = 0; i < pairs; ++i) {
                wrng::NormalPair p = gen();
                wrng::UvPair q = wrng::to_uv(p.x, p.y);
                if (q.skip) continue;
                u.push_back(q.u);
                v.push_back(q.v);
            }
            double su = wrng::chi2_bins(u, 1000, 0.0, 1.0).statistic;
            double sv = wrng::chi2_bins(v, 1000, -kPi2, kPi2).statistic;
            bool pu = su >= 842.0 && su <= 1156.0;
            bool pv = sv >= 842.0 && sv <= 1156.0;
            ok_u += pu;
            ok_v += pv;
            char detail[40];
            std::snprintf(detail, sizeof detail, "uniformity.%s.seed%llu",
                          name, static_cast<unsigned long long>(seed));
            std::printf("%-34s u=%.1f v=%.1f\n", detail, su, sv);
        }
        tally.line(std::string("uniformity.") + name + ".u", ok_u,
                   ">=4/5 seeds in [842,1156]", ok_u >= 4);
        tally.line(std::string("uniformity.") + name + ".v", ok_v,
                   ">=4/5 seeds in [842,1156]", ok_v >= 4);
    };

    run("wallace", [&](std::uint64_t seed) {
        Options o = opt;
        o.seed = seed;
        auto st = std::make_shared<wrng::WallaceState>(make_config(o));
        return [st]() {
            double z[2];
            st->fill(std::span<double>(z, 2));
            return wrng::NormalPair{z[0], z[1]};
        };
    });
    run("boxmuller", [&](std::uint64_t seed) {
        auto us = std::make_shared<wrng::UniformState>(seed, opt.stream_id);
        return [us]() { return wrng::box_muller_next(*us); };
    });
    run("polar", [&](std::uint64_t seed) {
        auto us = std::make_shared<wrng::UniformState>(seed, opt.stream_id);
        return [us]() { return wrng::polar_next(*us); };
    });
}

void test_moments(const Options& opt, TestTally& tally) {
    const std::size_t n = opt.samples ? opt.samples : 10000000;
    wrng::WallaceState st(make_config(opt));
    auto values = st.fill(n);
    wrng::MomentsReport m = wrng::moments(values);
    const double b1 = 4.0 / std::sqrt(double(n));
    const double b2 = 4.0 * std::sqrt(2.0 / double(n));
    const double b4 = 4.0 * std::sqrt(96.0 / double(n));
    char thr[48];
    std::snprintf(thr, sizeof thr, "|m1| <= %.3g", b1);
    tally.line("moments.mean", m.m1, thr, std::abs(m.m1) <= b1);
    std::snprintf(thr, sizeof thr, "|m2-1| <= %.3g", b2);
    tally.line("moments.second", m.m2, thr, std::abs(m.m2 - 1.0) <= b2);
    std::snprintf(thr, sizeof thr, "|m4-3| <= %.3g", b4);
    tally.line("moments.fourth", m.m4, thr, std::abs(m.m4 - 3.0) <= b4);
}

void test_autocorr(const Options& opt, TestTally& tally) {
    const std::size_t n = opt.samples ? opt.samples : 1000000;
    const std::uint32_t pool_n = 1u << opt.pool_exponent;
    const double threshold = std::max(0.01, 4.0 / std::sqrt(double(n)));
    char thr[48];
    std::snprintf(thr, sizeof thr, "|r| <= %.3g", threshold);

    if (opt.diag_flawed) {
        auto z = wrng::pool_stream_flawed(opt.seed, opt.stream_id,
                                          opt.pool_exponent, opt.gamma, n);
        std::size_t lag = 2 * std::size_t{pool_n} - opt.gamma;
        double r = wrng::autocorr_at_lag(z, lag).r;
        tally.line("autocorr.flawed.lag" + std::to_string(lag), r, thr,
                   std::abs(r) <= threshold);
        return;
    }
    auto z = wrng::pool_stream_default(opt.seed, opt.stream_id,
                                       opt.pool_exponent, n);
    for (std::size_t lag : {2 * std::size_t{pool_n} - 1,
                            2 * std::size_t{pool_n} - pool_n / 2}) {
        double r = wrng::autocorr_at_lag(z, lag).r;
        tally.line("autocorr.default.lag" + std::to_string(lag), r, thr,
                   std::abs(r) <= threshold);
    }
}

void test_sumsq(const Options& opt, TestTally& tally) {
    const std::uint64_t passes = opt.samples ? opt.samples : 10000;
    wrng::WallaceState st(make_config(opt));
    auto [mean, var] = wrng::sumsq_distribution_check(st, passes);
    const double nu = 2.0 * (1u << opt.pool_exponent);
    char thr[48];
    std::snprintf(thr, sizeof thr, "within 10%% of %.0f", nu);
    tally.line("sumsq.mean", mean, thr, std::abs(mean - nu) <= 0.1 * nu);
    std::snprintf(thr, sizeof thr, "within 30%% of %.0f", 2.0 * nu);
    tally.line("sumsq.variance", var, thr,
               std::abs(var - 2.0 * nu) <= 0.3 * 2.0 * nu);
}

int cmd_test(const Options& opt) {
    TestTally tally;
    if (opt.suite == "uniformity" || opt.suite == "all")
        test_uniformity(opt, tally);
    if (opt.suite == "moments" || opt.suite == "all")
        test_moments(opt, tally);
    if (opt.suite == "autocorr" || opt.suite == "all")
        test_autocorr(opt, tally);
    if (opt.suite == "sumsq" || opt.suite == "all") test_sumsq(opt, tally);
    std::printf("summary tests=%d failed=%d result=%s\n", tally.tests,
                tally.failed, tally.failed == 0 ? "PASS" : "FAIL");
    return tally.failed == 0 ? kExitOk : kExitTestFail;
}

// ---------------------------------------------------------------- bench

double bench_ns_per_value(const Options& opt, const std::string& method) {
    const std::size_t block = 1u << 16;
    std::vector<double> buf(block);
    double sink = 0.0;
    std::uint64_t produced = 0;
    double elapsed = 0.0;

    wrng::WallaceState wallace(make_config(opt));
    wrng::UniformState uniform(opt.seed, opt.stream_id);
    auto start = std::chrono::steady_clock::now();
    do {
        if (method == "wallace")
            wallace.fill(std::span<double>(buf), opt.mu, opt.sigma);
        else if (method == "polar")
            wrng::polar_fill(uniform, buf, opt.mu, opt.sigma);
        else
            wrng::box_muller_fill(uniform, buf, opt.mu, opt.sigma);
        sink += buf[block / 2];
        produced += block;
        elapsed = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    } while (elapsed < opt.seconds);
    if (std::isnan(sink)) std::fprintf(stderr, "bench sink NaN\n");
    return elapsed * 1e9 / double(produced);
}

int cmd_bench(const Options& opt) {
    std::printf("%-10s %14s %14s\n", "method", "ns/value", "Mvalues/s");
    for (const std::string& m : opt.methods) {
        double ns = bench_ns_per_value(opt, m);
        std::printf("%-10s %14.2f %14.1f\n", m.c_str(), ns, 1000.0 / ns);
        std::printf("bench.%s.ns_per_value=%.3f\n", m.c_str(), ns);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- diag

int cmd_diag(const Options& opt) {
    const std::uint32_t n = 1u << opt.pool_exponent;
    if (opt.gamma >= n) {
        std::fprintf(stderr, "wrng: --gamma must be in [0, %u)\n", n);
        return kExitUsage;
    }
    const std::size_t samples = opt.samples ? opt.samples : 1000000;
    const std::size_t lag = 2 * std::size_t{n} - opt.gamma;

    auto flawed = wrng::pool_stream_flawed(opt.seed, opt.stream_id,
                                           opt.pool_exponent, opt.gamma,
                                           samples);
    auto recommended = wrng::pool_stream_default(opt.seed, opt.stream_id,
                                                 opt.pool_exponent, samples);
    double r_flawed = wrng::autocorr_at_lag(flawed, lag).r;
    double r_default = wrng::autocorr_at_lag(recommended, lag).r;

    std::printf("stride diagnostic at lag 2N-gamma = %zu (N=%u, gamma=%u, %zu samples)\n",
                lag, n, opt.gamma, samples);
    std::printf("%-44s r=%+.5f\n",
                "unit strides, fixed offsets and rotation:", r_flawed);
    std::printf("%-44s r=%+.5f\n", "recommended parameters, redrawn per pass:",
                r_default);
    std::printf("diag.flawed.r=%.6f\ndiag.default.r=%.6f\n", r_flawed,
                r_default);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Pool-based normal pseudo-random number generator"};
    app.require_subcommand(1);

    auto add_generator_flags = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "64-bit seed");
        sub->add_option("--stream-id", opt.stream_id,
                        "independent-stream selector");
        sub->add_option("--f", opt.f, "throw-away factor (>= 1)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--pool-exponent", opt.pool_exponent,
                        "pool half-size N = 2^p")
            ->check(CLI::Range(8, 20));
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a batch of values");
    add_generator_flags(gen);
    gen->add_option("--count", opt.count, "number of values");
    gen->add_option("--mu", opt.mu, "mean");
    gen->add_option("--sigma", opt.sigma, "standard deviation (>= 0)")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--format", opt.format, "text | f64le")
        ->check(CLI::IsMember({"text", "f64le"}));
    gen->add_option("--state-file", opt.state_file,
                    "load state before and save after (resumable)");

    CLI::App* stream =
        app.add_subcommand("stream", "write an unbounded stream to stdout");
    add_generator_flags(stream);
    stream->add_option("--mu", opt.mu, "mean");
    stream->add_option("--sigma", opt.sigma, "standard deviation (>= 0)")
        ->check(CLI::NonNegativeNumber);
    stream->add_option("--format", opt.format, "f64le (default) | text")
        ->check(CLI::IsMember({"text", "f64le"}));

    CLI::App* test = app.add_subcommand("test", "run the statistical suite");
    add_generator_flags(test);
    test->add_option("--suite", opt.suite,
                     "uniformity | moments | autocorr | sumsq | all")
        ->check(CLI::IsMember(
            {"uniformity", "moments", "autocorr", "sumsq", "all"}));
    test->add_option("--samples", opt.samples,
                     "override per-suite sample count")
        ->check(CLI::PositiveNumber);
    test->add_flag("--diag-flawed", opt.diag_flawed,
                   "run autocorr against the flawed unit-stride scheme");
    test->add_option("--gamma", opt.gamma, "offset for the flawed scheme");

    CLI::App* bench = app.add_subcommand("bench", "measure throughput");
    add_generator_flags(bench);
    bench->add_option("--methods", opt.methods,
                      "comma-separated subset of wallace,polar,boxmuller")
        ->delimiter(',')
        ->check(CLI::IsMember({"wallace", "polar", "boxmuller"}));
    bench->add_option("--seconds", opt.seconds, "duration per method")
        ->check(CLI::PositiveNumber);

    CLI::App* diag =
        app.add_subcommand("diag", "contrast flawed and recommended strides");
    add_generator_flags(diag);
    diag->add_option("--samples", opt.samples, "stream length")
        ->check(CLI::PositiveNumber);
    diag->add_option("--gamma", opt.gamma, "fixed offset of the flawed scheme");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(opt);
        if (stream->parsed()) {
            if (!stream->count("--format")) opt.format = "f64le";
            return cmd_stream(opt);
        }
        if (test->parsed()) return cmd_test(opt);
        if (bench->parsed()) return cmd_bench(opt);
        if (diag->parsed()) return cmd_diag(opt);
    } catch (const wrng::malformed_state_error& e) {
        std::fprintf(stderr, "wrng: %s\n", e.what());
        return kExitStateFile;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "wrng: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
