#include "metriclab/errors.hpp"
#include "metriclab/fractal.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

using namespace metriclab;

namespace {

std::size_t find_label(const FiniteMetricSpace& m, const std::string& label) {
    const auto& ls = m.labels();
    auto it = std::find(ls.begin(), ls.end(), label);
    REQUIRE_MESSAGE(it != ls.end(), "missing label " << label);
    return static_cast<std::size_t>(it - ls.begin());
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const LabError& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::domain;
}

}  // namespace

TEST_CASE("schedules") {
    auto h = harmonic_schedule(4);
    REQUIRE(h.r.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(h.r[i] == doctest::Approx(1.0 / std::sqrt(i + 2.0)));
    CHECK_NOTHROW(validate_schedule(h));
    CHECK(kind_of([] { validate_schedule(SlitSchedule{{0.5, 1.0}}); }) == ErrorKind::schedule);
    CHECK(kind_of([] { validate_schedule(SlitSchedule{{0.0}}); }) == ErrorKind::schedule);
}

TEST_CASE("level-1 slit carpet: split slit nodes and the detour around the endpoint") {
    const double h = 1.0 / 8;
    auto m = slit_carpet_space(SlitSchedule{{0.5}}, h);
    CHECK(m.size() == 81 + 3);  // three interior slit nodes are doubled
    CHECK(validate_metric(m).ok());
    const auto l = find_label(m, "0.5,0.5|L"), r = find_label(m, "0.5,0.5|R");
    CHECK(m(l, r) == doctest::Approx(0.5));  // up 0.25 to the endpoint and back down
    const auto top = find_label(m, "0.5,0.75");
    CHECK(m(l, top) == doctest::Approx(0.25));
    CHECK(m(r, top) == doctest::Approx(0.25));
    // away from the slit the metric is the grid (l1) metric
    CHECK(m(find_label(m, "0,0"), find_label(m, "1,1")) == doctest::Approx(2.0));
}

TEST_CASE("carpet metric agrees with a removed-slit grid at double resolution") {
    // oracle: plain grid at mesh h/2 with the closed slit's nodes deleted
    const int n = 16;
    auto m = slit_carpet_space(SlitSchedule{{0.5}}, 1.0 / n);
    const int fine = 2 * n;
    auto blocked = [&](int c, int r) { return c == fine / 2 && r >= fine / 4 && r <= 3 * fine / 4; };
    const double h = 1.0 / n;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int c1 = static_cast<int>(rng() % (n + 1)), r1 = static_cast<int>(rng() % (n + 1));
        int c2 = static_cast<int>(rng() % (n + 1)), r2 = static_cast<int>(rng() % (n + 1));
        if (c1 == n / 2 || c2 == n / 2) continue;
        auto d = oracle::grid_bfs(fine, fine, 2 * c1, 2 * r1, blocked);
        const double reference = d[static_cast<std::size_t>(2 * r2 * (fine + 1) + 2 * c2)] * h / 2;
        auto label = [&](int c, int r) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g,%.12g", c * h, r * h);
            return std::string(buf);
        };
        const double got = m(find_label(m, label(c1, r1)), find_label(m, label(c2, r2)));
        CHECK(got <= reference + 1e-12);
        CHECK(reference <= got + 2 * h + 1e-12);
    }
}

TEST_CASE("two-level carpet and resolution errors") {
    auto m = slit_carpet_space(SlitSchedule{{0.5, 0.5}}, 1.0 / 16);
    CHECK(validate_metric(m).ok());
    CHECK(kind_of([] { slit_carpet_space(SlitSchedule{{0.5, 0.5}}, 1.0 / 6); }) == ErrorKind::resolution);
    CHECK(kind_of([] { slit_carpet_space(SlitSchedule{{0.5, 0.5}}, 0.3); }) == ErrorKind::resolution);
    try {
        slit_carpet_space(SlitSchedule{{0.5, 0.1}}, 1.0 / 8);
        FAIL("expected a resolution error");
    } catch (const LabError& e) {
        CHECK(e.kind() == ErrorKind::resolution);
        CHECK(std::string(e.what()).find("level 1") != std::string::npos);
    }
}

TEST_CASE("pillow carpet restricted to the plane equals the slit carpet") {
    const SlitSchedule s{{0.5, 0.5}};
    auto slit = slit_carpet_space(s, 1.0 / 16);
    auto pillow = pillow_carpet_space(s, 1.0 / 16);
    CHECK(pillow.size() > slit.size());
    CHECK(validate_metric(pillow).ok());
    std::vector<std::size_t> idx;
    for (const auto& l : slit.labels()) idx.push_back(find_label(pillow, l));
    for (std::size_t i = 0; i < slit.size(); i += 7)
        for (std::size_t j = 0; j < slit.size(); j += 5) CHECK(pillow(idx[i], idx[j]) == doctest::Approx(slit(i, j)));
}

TEST_CASE("standard snowflake stage 1") {
    auto c = snowflake_curve(1, {}, 0.0, 1.0);
    REQUIRE(c.vertices.size() == 5);
    CHECK(c.vertices[2][0] == doctest::Approx(0.5));
    CHECK(c.vertices[2][1] == doctest::Approx(std::sqrt(3.0) / 6));
    CHECK(c.arc.back() == doctest::Approx(4.0 / 3));
    auto arc = snowflake_polyline(1, {}, 0.0, 1.0);
    CHECK(arc(0, 4) == doctest::Approx(4.0 / 3));
    auto chord = snowflake_polyline(1, {}, 0.0, 1.0, CurveMetric::chordal);
    CHECK(chord(0, 4) == doctest::Approx(1.0));
    CHECK(validate_metric(chord).ok());
}

TEST_CASE("flat snowflake") {
    auto l = flat_flatness(4);
    REQUIRE(l.size() == 4);
    for (int k = 1; k <= 4; ++k) CHECK(l[k - 1] == std::ldexp(1.0, -k) + 1.0);
    auto c = snowflake_curve(4, l);
    CHECK(c.vertices.size() == 257);
    double expected = 1.0;
    for (double lk : l) expected *= (2.0 + lk) / 3.0;
    CHECK(c.arc.back() == doctest::Approx(expected));
    // the stage-1 peak rises (1/2) sqrt(l^2 - 1) times the base 1/3
    CHECK(c.vertices[128][1] == doctest::Approx(0.5 * std::sqrt(l[0] * l[0] - 1.0) / 3.0));
    CHECK(validate_metric(snowflake_polyline(4, l, 0.0, 1.0, CurveMetric::chordal)).ok());
}

TEST_CASE("snowflake construction errors") {
    CHECK(kind_of([] { snowflake_curve(2, {0.9, 1.5}); }) == ErrorKind::construction);
    CHECK(kind_of([] { snowflake_curve(3, {40.0, 40.0, 40.0}); }) == ErrorKind::construction);
    CHECK_NOTHROW(snowflake_curve(5, {}));
}

TEST_CASE("Wu line") {
    CHECK(wu_L(0.5, 0.5) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
    for (double alpha : {0.3, 0.5, 0.9})
        for (double c : {0.01, 0.2, 0.5}) {
            const double direct = (1.0 / c) * std::pow(c * alpha / (1.0 - c * (1.0 - alpha)), alpha);
            CHECK(wu_L(alpha, c) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(wu_phi(c, alpha, c) == doctest::Approx(wu_L(alpha, c) * c).epsilon(1e-12));
            CHECK(wu_phi(1.0, alpha, c) == doctest::Approx(1.0).epsilon(1e-12));
        }

    auto w = default_wu_schedule(8);
    CHECK_NOTHROW(validate_wu_schedule(w, 8));
    // points outside every I_n
    CHECK(wu_line_metric(-0.5, -0.1, w, 8) == 0.4);
    CHECK(wu_line_metric(1.5, 2.0, w, 8) == 0.5);

    // metric axioms on a sample that hits several intervals
    std::vector<double> xs;
    for (int i = 0; i <= 60; ++i) xs.push_back(0.1 + i * 0.015);
    std::vector<std::vector<double>> rows(xs.size(), std::vector<double>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) rows[i][j] = wu_line_metric(xs[i], xs[j], w, 8);
    CHECK(validate_metric(rows).ok());

    WuSchedule bad = w;
    bad.alpha[2] = bad.alpha[1];
    try {
        validate_wu_schedule(bad, 8);
        FAIL("expected a schedule error");
    } catch (const LabError& e) {
        CHECK(e.kind() == ErrorKind::schedule);
        CHECK(std::string(e.what()).find("n = 3") != std::string::npos);
    }
}

TEST_CASE("product rugs") {
    RugOptions o;
    o.line = RugLine::snowflake;
    o.epsilon = 0.5;
    o.h = 0.25;
    auto r = product_rug_space(o);
    CHECK(r.size() == 25);
    CHECK(validate_metric(r).ok());
    // (0,0) to (1,0): sqrt(1^(2 eps)) = 1; (0,0) to (0.25, 1): sqrt(0.25 + 1)
    CHECK(r(find_label(r, "0,0"), find_label(r, "1,0")) == doctest::Approx(1.0));
    CHECK(r(find_label(r, "0,0"), find_label(r, "0.25,1")) == doctest::Approx(std::sqrt(1.25)));

    o.line = RugLine::wu;
    o.truncation = 6;
    o.wu = default_wu_schedule(6);
    auto wu = product_rug_space(o);
    CHECK(validate_metric(wu).ok());
}

TEST_CASE("model tangents") {
    auto t = model_tangent_space(ModelKind::t, 1.0, 0.25);
    CHECK(validate_metric(t.space).ok());
    CHECK(t.space.label(t.base) == "0,0");
    CHECK(t.space(find_label(t.space, "0.5,0|U"), find_label(t.space, "0.5,0|D")) == doctest::Approx(1.0));
    for (std::size_t i = 0; i < t.space.size(); ++i) CHECK(t.space(t.base, i) <= 1.0 + 1e-12);

    auto q = model_tangent_space(ModelKind::quarter, 1.0, 0.25);
    auto hh = model_tangent_space(ModelKind::half, 1.0, 0.25);
    auto p = model_tangent_space(ModelKind::plane, 1.0, 0.25);
    CHECK(q.space.size() < hh.space.size());
    CHECK(hh.space.size() < p.space.size());
    CHECK(model_tangent_space(ModelKind::line, 1.0, 0.25).space.size() == 9);

    for (auto k : {ModelKind::l, ModelKind::d}) {
        auto w = model_tangent_space(k, 1.0, 0.25);
        CHECK(validate_metric(w.space).ok());
        for (std::size_t i = 0; i < w.space.size(); ++i) CHECK(w.space(w.base, i) <= 1.0 + 1e-12);
    }
    CHECK(parse_model_kind("segment") == ModelKind::line);
    CHECK(kind_of([] { parse_model_kind("torus"); }) == ErrorKind::domain);
    CHECK(kind_of([] { model_tangent_space(ModelKind::plane, 1.0, 1e-5); }) == ErrorKind::resolution);
}

TEST_CASE("square map") {
    auto p = square_map_phi(0.5, std::numbers::pi / 4);
    CHECK(p.rho == 0.25);
    CHECK(p.angle == doctest::Approx(std::numbers::pi / 2));
    auto r1 = square_map_phi(1.0, 0.0);
    auto r2 = square_map_phi(1.0, std::numbers::pi);
    CHECK(r1.angle == 0.0);
    CHECK(r2.angle == doctest::Approx(2 * std::numbers::pi));
    // opposite slit sides: the geodesic goes through the tip
    CHECK(t_distance(r1, r2) == doctest::Approx(2.0));
    CHECK(t_distance(square_map_phi(1.0, 0.1), square_map_phi(1.0, 0.2)) ==
          doctest::Approx(2.0 * std::sin(0.1)));
    CHECK(kind_of([] { square_map_phi(1.0, 4.0); }) == ErrorKind::domain);

    auto [dom, cod] = phi_half_disk_sample(1.0, 0.25);
    CHECK(dom.size() == cod.size());
    CHECK(validate_metric(cod).ok());
}
