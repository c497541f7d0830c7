#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "homlim/model.hpp"
#include "homlim/presets.hpp"
#include "oracle.hpp"

using namespace homlim;
using Catch::Approx;

namespace {

AlgorithmCost unit_cost() {
    CustomCoefficients k;
    k.io_coeff = 1;
    k.io_n_exp = 0;
    k.work_coeff = 1;
    k.work_n_exp = 0;
    k.wave_coeff = 1;
    return custom_cost(k);
}

AlgorithmCost compute_plus_wave() {
    CustomCoefficients k;
    k.work_n_exp = 0;
    k.wave_coeff = 1;
    return custom_cost(k);
}

struct Instance {
    ComputerSpec spec;
    AlgorithmCost cost;
    oracle::Machine machine;
    oracle::Kernel kernel;
    double n;
};

// Table 2 ranges: densities in [1e-30, 1e30], V in [1e-14, 1e14], n in [1e3, 1e30].
Instance random_instance(std::mt19937_64& rng, double n_hi = 1e30) {
    const double pi = oracle::log_uniform(rng, 1e-30, 1e30);
    const double beta = oracle::log_uniform(rng, 1e-30, 1e30);
    const double s = oracle::log_uniform(rng, 1e-30, 1e30);
    const double V = oracle::log_uniform(rng, 1e-14, 1e14);
    const int which = std::uniform_int_distribution<int>(0, 2)(rng);
    const oracle::Kernel kernel = static_cast<oracle::Kernel>(which);
    const AlgorithmCost cost = which == 0 ? mxm_cost() : which == 1 ? cg_cost() : fft_cost();
    const double n = oracle::log_uniform(rng, 1e3, n_hi);
    return {ComputerSpec(pi, beta, s, 3e8, V), cost, oracle::Machine{pi, beta, s, 3e8, V}, kernel, n};
}

}  // namespace

TEST_CASE("unit densities give unit components") {
    const ComputerSpec spec(1, 1, 1, 1, 10);
    const auto b = time_breakdown(spec, unit_cost(), 1, 1);
    CHECK(b.t_work == Approx(1).epsilon(1e-15));
    CHECK(b.t_io == Approx(1).epsilon(1e-15));
    CHECK(b.t_lat == Approx(1).epsilon(1e-15));
    CHECK(b.total == Approx(3).epsilon(1e-15));
    CHECK(b.performance == Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("Fugaku CG at n = 1e12, v = V matches the hand evaluation") {
    const ComputerSpec spec = preset("fugaku");
    const auto b = time_breakdown(spec, cg_cost(), 1e12, spec.volume());
    CHECK(b.t_work == Approx(3.4836065573770492e-5).epsilon(1e-12));
    CHECK(b.t_io == Approx(2.0613496932515337e-4).epsilon(1e-12));
    CHECK(b.t_lat == Approx(6.196773353931867e-5).epsilon(1e-12));
    CHECK(b.total == Approx(3.0293876843824254e-4).epsilon(1e-12));
    CHECK(classify_regime(b) == Regime::MemoryBound);
}

TEST_CASE("doubling v halves t_work and t_io when L = 0") {
    const ComputerSpec spec(2, 3, 1e-9, 1, 100);
    CustomCoefficients k;
    k.io_coeff = 5;  // Q independent of S
    k.io_n_exp = 1;
    const auto cost = custom_cost(k);
    const auto a = time_breakdown(spec, cost, 1e4, 10);
    const auto b = time_breakdown(spec, cost, 1e4, 20);
    CHECK(b.t_work == Approx(a.t_work / 2).epsilon(1e-14));
    CHECK(b.t_io == Approx(a.t_io / 2).epsilon(1e-14));
    CHECK(b.t_lat == 0.0);
}

TEST_CASE("regime classification") {
    CHECK(classify_regime({3, 1, 1, 5, 1, 0}) == Regime::ComputeBound);
    CHECK(classify_regime({1, 1, 1, 3, 1, 0}) == Regime::ComputeBound);
    CHECK(classify_regime({0.1, 0.2, 5, 5.3, 1, 0}) == Regime::LatencyBound);
    CHECK(classify_regime({1, 2, 2, 5, 1, 0}) == Regime::MemoryBound);
    CHECK(to_string(Regime::MemoryBound) == "MEMORY_BOUND");
    CHECK(parse_regime("LATENCY_BOUND") == Regime::LatencyBound);
    CHECK(regime_color(Regime::ComputeBound) == "yellow-brown");
    CHECK(regime_color(Regime::MemoryBound) == "blue");
    CHECK(regime_color(Regime::LatencyBound) == "green");
}

TEST_CASE("optimal volume of 1/v + v^(1/3)") {
    const ComputerSpec spec(1, 1, 1, 1, 10);
    const auto opt = optimal_volume(spec, compute_plus_wave(), 1);
    CHECK(opt.v_star == Approx(2.2795070569547776).epsilon(1e-7));
    CHECK(opt.breakdown.total == Approx(1.7547653506033233).epsilon(1e-12));
}

TEST_CASE("latency-free cost uses the whole machine") {
    const ComputerSpec spec(1e3, 1e2, 1e-4, 3e8, 50);
    CustomCoefficients k;
    k.io_coeff = 3;
    k.io_n_exp = 1;
    k.io_s_exp = 0.5;
    const auto opt = optimal_volume(spec, custom_cost(k), 1e6);
    CHECK(opt.v_star == Approx(50).epsilon(1e-9));
}

TEST_CASE("Frontier CG n = 1e12 matches a dense grid") {
    const ComputerSpec spec = preset("frontier");
    const auto opt = optimal_volume(spec, cg_cost(), 1e12);
    oracle::Machine m{spec.pi(), spec.beta(), spec.s(), spec.c(), spec.volume(), 0.5L};
    const auto grid = oracle::brute_force_optimum(m, oracle::Kernel::CG, 1e12);
    CHECK(opt.breakdown.total <= static_cast<double>(grid.f) * (1 + 1e-6));
}

TEST_CASE("model properties on random instances") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const Instance in = random_instance(rng);
        INFO("instance " << i << " n=" << in.n << " pi=" << in.spec.pi() << " beta=" << in.spec.beta()
                         << " s=" << in.spec.s() << " V=" << in.spec.volume());
        const double log_v = std::log(in.spec.volume()) - 30 * std::log(10.0) * std::uniform_real_distribution<double>(0, 1)(rng);

        // additivity (in whichever domain is representable)
        const LogBreakdown lb = log_breakdown(in.spec, in.cost, std::log(in.n), log_v);
        const double lt = lb.total();
        const double parts = logm::add3(lb.work, lb.io, lb.lat);
        CHECK(lt == parts);

        // optimizer dominance over a 1e4-point log grid, in log space to survive 1e30 ranges
        const auto opt = optimal_volume(in.spec, in.cost, in.n);
        const double log_n = std::log(in.n);
        const double hi = std::log(in.spec.volume());
        const double lo = hi + std::log(kVolumeFloorRatio);
        double grid_min = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 10000; ++j) {
            const double x = j == 9999 ? hi : lo + (hi - lo) * j / 9999.0;
            grid_min = std::min(grid_min, log_total_time(in.spec, in.cost, log_n, x));
        }
        CHECK(opt.diagnostics.f_star <= grid_min + 1e-6);
        CHECK(opt.v_star <= in.spec.volume());
        CHECK(opt.v_star >= in.spec.volume() * kVolumeFloorRatio * (1 - 1e-12));
    }
}

TEST_CASE("time breakdown matches the long double oracle where representable") {
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const Instance in = random_instance(rng, 1e12);
        const double v = in.spec.volume() * oracle::log_uniform(rng, 1e-30, 1);
        const oracle::Times t = oracle::times(in.machine, in.kernel, in.n, v);
        if (!(t.total() < 1e300L) || !(t.total() > 1e-300L)) continue;
        const auto b = time_breakdown(in.spec, in.cost, in.n, v);
        CHECK(b.t_work == Approx(static_cast<double>(t.work)).epsilon(1e-9));
        CHECK(b.t_lat == Approx(static_cast<double>(t.lat)).epsilon(1e-9));
        CHECK(b.total == Approx(static_cast<double>(t.total())).epsilon(1e-6));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("minimized time does not increase when a resource grows tenfold") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const Instance in = random_instance(rng);
        const double base = optimal_volume(in.spec, in.cost, in.n).diagnostics.f_star;
        const ComputerSpec bumped[] = {in.spec.with_pi(in.spec.pi() * 10), in.spec.with_beta(in.spec.beta() * 10),
                                       in.spec.with_s(in.spec.s() * 10), in.spec.with_c(in.spec.c() * 10)};
        for (const auto& b : bumped) {
            CHECK(optimal_volume(b, in.cost, in.n).diagnostics.f_star <= base + 1e-9);
        }
    }
}

TEST_CASE("additive model brackets the roofline max") {
    std::mt19937_64 rng(8);
    CustomCoefficients k;
    for (int i = 0; i < 200; ++i) {
        k.io_coeff = oracle::log_uniform(rng, 1e-3, 1e3);
        k.io_n_exp = std::uniform_real_distribution<double>(0, 3)(rng);
        k.io_s_exp = std::uniform_real_distribution<double>(0, 1)(rng);
        k.work_n_exp = std::uniform_real_distribution<double>(0, 3)(rng);
        const ComputerSpec spec(oracle::log_uniform(rng, 1e-5, 1e5), oracle::log_uniform(rng, 1e-5, 1e5),
                                oracle::log_uniform(rng, 1e-5, 1e5), 3e8, 1e3);
        const auto b = time_breakdown(spec, custom_cost(k), oracle::log_uniform(rng, 1, 1e6),
                                      oracle::log_uniform(rng, 1e-3, 1e3));
        const double m = std::max(b.t_work, b.t_io);
        CHECK(b.t_lat == 0.0);
        CHECK(m <= b.total);
        CHECK(b.total <= 2 * m);
    }
}

TEST_CASE("domain errors") {
    const ComputerSpec spec(1, 1, 1, 1, 10);
    CHECK_THROWS_AS(time_breakdown(spec, cg_cost(), 10, 0), DomainError);
    CHECK_THROWS_AS(time_breakdown(spec, cg_cost(), 10, 11), DomainError);
    CHECK_THROWS_AS(time_breakdown(spec, cg_cost(), 0.5, 1), DomainError);
    CHECK_THROWS_AS(optimal_volume(spec, cg_cost(), 0), DomainError);
    CHECK_NOTHROW(time_breakdown(spec, cg_cost(), 10, 10 * (1 + 1e-14)));
    CHECK_THROWS_AS(ComputerSpec(0, 1, 1, 1, 1), SpecError);
    CHECK_THROWS_AS(ComputerSpec(1, 1, 1, 1, -1), SpecError);
    CHECK_THROWS_WITH(ComputerSpec(-1, 1, 1, 1, 1), Catch::Matchers::ContainsSubstring("pi > 0"));
}

TEST_CASE("extreme corners stay finite in the log domain") {
    const ComputerSpec spec(1e-30, 1e-30, 1e-30, 3e8, 1e-14);
    const double lt = log_total_time(spec, mxm_cost(), std::log(1e30), std::log(1e-44));
    CHECK(std::isfinite(lt));
    CHECK_NOTHROW(time_breakdown(spec, mxm_cost(), 1e30, 1e-44));
    // W = 2e300 flop on 1e-44 flop/s
    CHECK_THROWS_AS(time_breakdown(spec, mxm_cost(), 1e100, 1e-14), std::overflow_error);
    CHECK(std::isfinite(log_total_time(spec, mxm_cost(), std::log(1e100), std::log(1e-14))));
    const auto opt = optimal_volume(spec, cg_cost(), 1e3);
    CHECK(std::isfinite(opt.diagnostics.f_star));
}
