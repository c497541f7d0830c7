#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "homlim/io.hpp"
#include "homlim/presets.hpp"

using namespace homlim;
using Catch::Approx;

namespace {

// One unit in the 9th significant digit.
double ulp9(double x) { return x == 0 ? 0 : std::pow(10.0, std::floor(std::log10(std::abs(x))) - 8); }

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_sci(1.0) == "1.00000000e+00");
    CHECK(format_sci(2978378378378378.4) == "2.97837838e+15");
    CHECK(format_sci(-1e-300) == "-1.00000000e-300");
    CHECK(format_sci(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_sci(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::isnan(parse_csv_number("nan")));
    CHECK(parse_csv_number("1.50000000e+03") == 1500);
}

TEST_CASE("header is exact") {
    std::ostringstream os;
    write_sweep_csv(os, {});
    CHECK(os.str() == "pi,beta,s,c,V,n,v_star,t_work,t_io,t_lat,total,performance,regime\n");
    std::ostringstream sc;
    write_scale_csv(sc, {});
    CHECK(sc.str() == "v,n,total,efficiency\n");
}

TEST_CASE("CSV round trip within one unit of the 9th digit") {
    SweepGrid g;
    g.axes = {default_axis(SweepParam::Pi), default_axis(SweepParam::N)};
    const auto recs = run_sweep(g, preset("fugaku"), fft_cost());
    std::ostringstream os;
    write_sweep_csv(os, recs);
    const auto back = parse_sweep_csv(os.str());
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& a = recs[i];
        const auto& b = back[i];
        const std::pair<double, double> fields[] = {{a.pi, b.pi},         {a.beta, b.beta},       {a.s, b.s},
                                                    {a.c, b.c},           {a.V, b.V},             {a.n, b.n},
                                                    {a.v_star, b.v_star}, {a.t_work, b.t_work},   {a.t_io, b.t_io},
                                                    {a.t_lat, b.t_lat},   {a.total, b.total},     {a.performance, b.performance}};
        for (const auto& [x, y] : fields) CHECK(std::abs(x - y) <= ulp9(x));
        CHECK(a.regime == b.regime);
        CHECK(a.ok() == b.ok());
    }
}

TEST_CASE("error rows") {
    SweepRecord r;
    r.error = "active volume must satisfy 0 < v <= V\nsecond line";
    r.total = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream os;
    write_sweep_row(os, r);
    const std::string text = os.str();
    CHECK(text.rfind("# error: active volume", 0) == 0);
    CHECK(text.find("second line") < text.find('\n'));
    CHECK(text.ends_with(",ERROR\n"));
    const auto back = parse_sweep_csv(text);
    REQUIRE(back.size() == 1);
    CHECK_FALSE(back[0].ok());
    CHECK(std::isnan(back[0].total));
}

TEST_CASE("malformed CSV") {
    CHECK_THROWS_AS(parse_sweep_csv("1,2,3\n"), SpecError);
    CHECK_THROWS(parse_sweep_csv("1,1,1,1,1,1,1,1,1,1,1,1,SIDEWAYS\n"));
}

TEST_CASE("JSON record") {
    SweepGrid g;
    const auto r = run_sweep(g, preset("frontier"), cg_cost()).front();
    const auto j = to_json(r);
    CHECK(j.is_object());
    CHECK(j.size() == 13);
    CHECK(j.begin().key() == "pi");
    CHECK(j["regime"] == std::string(to_string(r.regime)));
    CHECK(j["total"].get<double>() == r.total);
}

TEST_CASE("metric table") {
    SweepGrid g;
    g.axes = {{SweepParam::Pi, 1, 100, 3, Spacing::Log}, {SweepParam::S, 1, 10, 2, Spacing::Log}};
    g.metric = Metric::Performance;
    const ComputerSpec spec(1, 1, 1, 3e8, 1);
    const auto recs = run_sweep(g, spec, cg_cost());
    std::ostringstream os;
    write_metric_table(os, g, recs);
    const auto lines = split(os.str(), '\n');
    CHECK(lines[0] == "# metric=performance rows=pi cols=s");
    CHECK(lines[1] == "pi,1.00000000e+00,1.00000000e+01");
    CHECK(split(lines[2], ',').size() == 3);
    CHECK(lines[5] == "# regime colors");
    for (std::size_t i = 7; i < 10; ++i) {
        const auto cells = split(lines[i], ',');
        REQUIRE(cells.size() == 3);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            CHECK((cells[j] == "yellow-brown" || cells[j] == "blue" || cells[j] == "green"));
        }
    }
}

TEST_CASE("key=value parsing") {
    const auto kv = parse_key_values("# comment\n a = 1 \n\nb=two words # trailing\n");
    CHECK(kv.at("a") == "1");
    CHECK(kv.at("b") == "two words");
    CHECK(kv.size() == 2);
    CHECK_THROWS(parse_key_values("no equals sign\n"));
}
