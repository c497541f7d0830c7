#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "homlim/presets.hpp"
#include "homlim/sweep.hpp"

using namespace homlim;
using Catch::Approx;

namespace {

const ComputerSpec kIdeal(1, 1, 1, 3e8, 1);

SweepGrid one_axis(SweepParam p, double n = 1e6) {
    SweepGrid g;
    g.axes.push_back(default_axis(p));
    g.n = n;
    return g;
}

// Each label occupies one contiguous run.
bool contiguous(const std::vector<Regime>& seq) {
    std::map<Regime, int> runs;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i == 0 || seq[i] != seq[i - 1]) ++runs[seq[i]];
    }
    for (const auto& [r, count] : runs) {
        if (count > 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("axis values") {
    const auto v = default_axis(SweepParam::Pi).values();
    REQUIRE(v.size() == 20);
    CHECK(v.front() == 1e-30);
    CHECK(v.back() == 1e30);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] / v[i - 1] == Approx(std::pow(1e60, 1.0 / 19)).epsilon(1e-9));
    const auto lin = SweepAxis{SweepParam::C, 1, 3, 3, Spacing::Linear}.values();
    CHECK(lin == std::vector<double>{1, 2, 3});
    CHECK(to_string(SweepParam::ActiveV) == "v");
    CHECK(parse_sweep_param("V") == SweepParam::V);
    CHECK(parse_sweep_param("v") == SweepParam::ActiveV);
}

TEST_CASE("pi axis for CG: 20 records, time non-increasing") {
    const auto recs = run_sweep(one_axis(SweepParam::Pi), kIdeal, cg_cost());
    REQUIRE(recs.size() == 20);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        REQUIRE(recs[i].ok());
        if (i > 0) CHECK(recs[i].total <= recs[i - 1].total * (1 + 1e-12));
    }
}

TEST_CASE("every density axis and V give non-increasing time") {
    for (auto p : {SweepParam::Pi, SweepParam::Beta, SweepParam::S, SweepParam::C, SweepParam::V}) {
        for (const auto& cost : {mxm_cost(), cg_cost(), fft_cost()}) {
            const auto recs = run_sweep(one_axis(p, 1e9), kIdeal, cost);
            for (std::size_t i = 1; i < recs.size(); ++i) {
                INFO(to_string(p) << " " << cost.name() << " i=" << i);
                REQUIRE(recs[i].ok());
                CHECK(recs[i].total <= recs[i - 1].total * (1 + 1e-9));
            }
        }
    }
}

TEST_CASE("no axes gives one record equal to a direct call") {
    SweepGrid g;
    g.n = 1e9;
    const ComputerSpec spec = preset("frontier");
    const auto recs = run_sweep(g, spec, fft_cost());
    REQUIRE(recs.size() == 1);
    const auto direct = optimal_volume(spec, fft_cost(), 1e9);
    CHECK(recs[0].total == direct.breakdown.total);
    CHECK(recs[0].v_star == direct.v_star);
    CHECK(recs[0].pi == spec.pi());
}

TEST_CASE("pinned and swept active volume skip the optimizer") {
    SweepGrid g;
    g.v = 0.5;
    g.n = 1e6;
    auto recs = run_sweep(g, kIdeal, cg_cost());
    CHECK(recs[0].v_star == 0.5);
    CHECK(recs[0].total == total_time(kIdeal, cg_cost(), 1e6, 0.5));

    g.v.reset();
    g.axes.push_back({SweepParam::ActiveV, 1e-3, 1, 4, Spacing::Log});
    recs = run_sweep(g, kIdeal, cg_cost());
    REQUIRE(recs.size() == 4);
    CHECK(recs[3].v_star == 1.0);
    CHECK(recs[1].v_star == Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("row-major order, last axis fastest") {
    SweepGrid g;
    g.axes.push_back({SweepParam::Pi, 1, 100, 3, Spacing::Log});
    g.axes.push_back({SweepParam::S, 1, 10, 2, Spacing::Log});
    const auto recs = run_sweep(g, kIdeal, cg_cost());
    REQUIRE(recs.size() == 6);
    CHECK(recs[0].pi == 1);
    CHECK(recs[0].s == 1);
    CHECK(recs[1].pi == 1);
    CHECK(recs[1].s == 10);
    CHECK(recs[2].pi == Approx(10).epsilon(1e-12));
    CHECK(recs[5].pi == 100);
    CHECK(recs[5].s == 10);
}

TEST_CASE("MxM (pi, s) grid: regimes are contiguous along each axis") {
    SweepGrid g;
    g.axes.push_back(default_axis(SweepParam::Pi));
    g.axes.push_back(default_axis(SweepParam::S));
    const auto recs = run_sweep(g, kIdeal, mxm_cost());
    REQUIRE(recs.size() == 400);
    for (int i = 0; i < 20; ++i) {
        std::vector<Regime> row, col;
        for (int j = 0; j < 20; ++j) {
            row.push_back(recs[i * 20 + j].regime);
            col.push_back(recs[j * 20 + i].regime);
        }
        INFO("line " << i);
        CHECK(contiguous(row));
        CHECK(contiguous(col));
        // raising pi never brings COMPUTE_BOUND back
        bool left_compute = false;
        for (Regime r : col) {
            if (r != Regime::ComputeBound) left_compute = true;
            if (left_compute) CHECK(r != Regime::ComputeBound);
        }
    }
}

TEST_CASE("regime label is the argmax") {
    SweepGrid g;
    g.axes.push_back(default_axis(SweepParam::Beta));
    g.axes.push_back(default_axis(SweepParam::C));
    for (const auto& r : run_sweep(g, kIdeal, fft_cost())) {
        REQUIRE(r.ok());
        const double m = std::max({r.t_work, r.t_io, r.t_lat});
        if (r.regime == Regime::ComputeBound) CHECK(r.t_work == m);
        if (r.regime == Regime::MemoryBound) CHECK((r.t_io == m && r.t_work < m));
        if (r.regime == Regime::LatencyBound) CHECK((r.t_lat == m && r.t_work < m && r.t_io < m));
    }
}

TEST_CASE("cap is enforced before evaluation") {
    SweepGrid g;
    g.axes = {default_axis(SweepParam::Pi), default_axis(SweepParam::Beta), default_axis(SweepParam::S)};
    g.max_points = 7999;
    CHECK_THROWS_AS(run_sweep(g, kIdeal, cg_cost()), SpecError);
    g.axes = {{SweepParam::Pi, 1, 2, 1000, Spacing::Log}, {SweepParam::S, 1, 2, 1000, Spacing::Log},
              {SweepParam::N, 1e3, 1e4, 2, Spacing::Log}};
    g.max_points = kDefaultSweepCap;
    CHECK(g.size() == 2'000'000);
    CHECK_THROWS_AS(run_sweep(g, kIdeal, cg_cost()), SpecError);
}

TEST_CASE("invalid grids") {
    SweepGrid g;
    g.axes = {default_axis(SweepParam::Pi), default_axis(SweepParam::Beta), default_axis(SweepParam::S),
              default_axis(SweepParam::C)};
    CHECK_THROWS_AS(g.validate(), SpecError);
    g.axes = {default_axis(SweepParam::Pi), default_axis(SweepParam::Pi)};
    CHECK_THROWS_AS(g.validate(), SpecError);
    g.axes = {{SweepParam::Pi, 0, 1, 5, Spacing::Log}};
    CHECK_THROWS_AS(g.validate(), SpecError);
    g.axes = {{SweepParam::Pi, 2, 1, 5, Spacing::Log}};
    CHECK_THROWS_AS(g.validate(), SpecError);
}

TEST_CASE("failing points are recorded, not fatal") {
    SweepGrid g;
    g.axes.push_back({SweepParam::ActiveV, 0.1, 10, 3, Spacing::Log});  // 10 > V
    const auto recs = run_sweep(g, kIdeal, cg_cost());
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].ok());
    CHECK(recs[1].ok());
    CHECK_FALSE(recs[2].ok());
    CHECK(std::isnan(recs[2].total));

    SweepGrid h;
    h.axes.push_back({SweepParam::N, 0.1, 10, 3, Spacing::Log});  // n < 1
    const auto more = run_sweep(h, kIdeal, cg_cost());
    CHECK_FALSE(more[0].ok());
    CHECK(more[2].ok());
}

TEST_CASE("thread count does not change results") {
    SweepGrid g;
    g.axes = {default_axis(SweepParam::Pi), default_axis(SweepParam::S)};
    g.n = 1e12;
    const auto a = run_sweep(g, kIdeal, fft_cost(), 1);
    const auto b = run_sweep(g, kIdeal, fft_cost(), 8);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].total == b[i].total);
        CHECK(a[i].v_star == b[i].v_star);
        CHECK(a[i].regime == b[i].regime);
    }
}

TEST_CASE("spot check re-evaluates records standalone") {
    SweepGrid g;
    g.axes = {default_axis(SweepParam::Beta), default_axis(SweepParam::N)};
    const ComputerSpec spec = preset("fugaku");
    auto recs = run_sweep(g, spec, cg_cost());
    CHECK(spot_check(recs, g, spec, cg_cost(), 100, 42).empty());
    for (auto& r : recs) r.total *= 1.5;
    CHECK(spot_check(recs, g, spec, cg_cost(), 100, 42).size() == 100);
}

TEST_CASE("peak performance") {
    const auto pure = custom_cost(CustomCoefficients{});
    for (const char* name : {"frontier", "dgx-gh200"}) {
        const ComputerSpec spec = preset(name);
        SweepGrid g = one_axis(SweepParam::N);
        for (const auto& r : run_sweep(g, spec, pure)) CHECK(r.performance == Approx(spec.total_compute()).epsilon(1e-9));
        const auto peak = peak_performance_over_n(spec, pure);
        CHECK(peak.perf_peak == Approx(spec.total_compute()).epsilon(1e-9));
    }
    const auto fugaku = peak_performance_over_n(preset("fugaku"), cg_cost());
    CHECK(fugaku.perf_peak > 0);
    CHECK(fugaku.n_peak >= 1e3);
}

TEST_CASE("saturation point") {
    const auto pure = custom_cost(CustomCoefficients{});
    CHECK(saturation_point(run_sweep(one_axis(SweepParam::Beta), kIdeal, pure)) == std::size_t{0});

    const auto cg = run_sweep(one_axis(SweepParam::Pi, 1e3), kIdeal, cg_cost());
    const auto sat = saturation_point(cg);
    REQUIRE(sat.has_value());
    CHECK(*sat + 1 < cg.size());

    std::vector<SweepRecord> synthetic(10);
    double t = 1.0;
    for (auto& r : synthetic) {
        r.total = t;
        t *= 0.9;
    }
    CHECK_FALSE(saturation_point(synthetic).has_value());
}

TEST_CASE("metric values") {
    SweepRecord r;
    r.pi = 2;
    r.V = 5;
    r.total = 3;
    r.performance = 4;
    CHECK(metric_value(r, Metric::TotalTime) == 3);
    CHECK(metric_value(r, Metric::Performance) == 4);
    CHECK(metric_value(r, Metric::Efficiency) == Approx(0.4));
    CHECK(parse_metric("efficiency") == Metric::Efficiency);
}
