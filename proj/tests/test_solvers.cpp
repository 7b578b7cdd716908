#include <doctest.h>

#include <random>

#include "geotomo/phantoms.hpp"
#include "geotomo/solvers.hpp"
#include "oracles.hpp"

using namespace geotomo;

TEST_CASE("anneal_minimize: convex bowl") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x0(8);
    for (auto& v : x0) v = u(rng);
    AnnealConfig cfg;
    cfg.step_scale = 0.5;
    cfg.seed = 99;
    auto obj = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    std::vector<double> best = anneal_minimize(obj, x0, cfg);
    CHECK(obj(best) <= 1e-4);
}

TEST_CASE("anneal_minimize: Rosenbrock from (-1.2, 1)") {
    auto rosen = [](const std::vector<double>& x) {
        double a = 1.0 - x[0];
        double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    AnnealConfig cfg;
    cfg.step_scale = 0.5;
    cfg.seed = 7;
    std::vector<double> best = anneal_minimize(rosen, {-1.2, 1.0}, cfg);
    CHECK(rosen(best) <= 1e-2);
}

TEST_CASE("anneal_minimize: empty input, never-worse property, determinism") {
    auto obj = [](const std::vector<double>& x) {
        double s = 1.0;
        for (double v : x) s += std::cos(3 * v) + 0.1 * v * v;
        return s;
    };
    CHECK(anneal_minimize(obj, {}, AnnealConfig{}).empty());

    AnnealConfig cfg;
    cfg.step_scale = 1.0;
    cfg.seed = 31;
    std::vector<double> x0 = {2.0, -3.0, 0.5};
    std::vector<double> a = anneal_minimize(obj, x0, cfg);
    CHECK(obj(a) <= obj(x0));
    std::vector<double> b = anneal_minimize(obj, x0, cfg);
    CHECK(a == b);
}

TEST_CASE("constrained_lsq: consistent square data is a fixed point") {
    ConstrainedLsqProblem p;
    p.angles_deg = {0.0, 90.0, 180.0, 270.0};
    p.targets = {0.5, 0.5, 0.5, 0.5};  // exact support of a unit square
    std::vector<double> y = constrained_lsq(p);
    for (int i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("constrained_lsq: all-zero targets give zero") {
    ConstrainedLsqProblem p;
    p.angles_deg = {10.0, 100.0, 200.0, 290.0};
    p.targets = {0.0, 0.0, 0.0, 0.0};
    for (double v : constrained_lsq(p)) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("constrained_lsq: one inflated entry against the enumeration oracle") {
    ConstrainedLsqProblem p;
    p.angles_deg = {0.0, 60.0, 120.0, 180.0, 240.0, 300.0};
    p.targets = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    p.targets[2] += 0.8;  // inconsistent spike
    std::vector<double> y = constrained_lsq(p);

    oracles::EnumerationQp oracle{p.angles_deg, p.targets};
    std::vector<double> want = oracle.solve();
    REQUIRE(want.size() == y.size());
    for (size_t i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-6));

    // the correction stays local and is smaller than the inflation
    double change = 0.0;
    for (size_t i = 0; i < y.size(); ++i) change += (y[i] - p.targets[i]) * (y[i] - p.targets[i]);
    CHECK(std::sqrt(change) < 0.8);
    CHECK(std::abs(y[0] - 1.0) < 0.3);
}

TEST_CASE("constrained_lsq matches the oracle on random instances up to 8 directions") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_int_distribution<int> nd(4, 8);
        int n = nd(rng);
        ConstrainedLsqProblem p;
        for (int i = 0; i < n; ++i) p.angles_deg.push_back(i * 360.0 / n + 3.0);
        for (int i = 0; i < n; ++i) p.targets.push_back(u(rng));
        std::vector<double> y = constrained_lsq(p);
        std::vector<double> want = oracles::EnumerationQp{p.angles_deg, p.targets}.solve();
        REQUIRE(!want.empty());
        CAPTURE(trial);
        for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-6));
    }
}

TEST_CASE("constrained_lsq output satisfies every constraint to 1e-9") {
    std::mt19937_64 rng(56);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    ConstrainedLsqProblem p;
    int n = 36;
    for (int i = 0; i < n; ++i) p.angles_deg.push_back(i * 10.0 + 0.5);
    for (int i = 0; i < n; ++i) p.targets.push_back(u(rng));
    std::vector<double> y = constrained_lsq(p);
    for (int b = 0; b < n; ++b) {
        int a = (b + n - 1) % n, c = (b + 1) % n;
        double ta = p.angles_deg[a], tb = p.angles_deg[b], tc = p.angles_deg[c];
        if (tb < ta) tb += 360.0;
        if (tc < tb) tc += 360.0;
        double lhs = y[b] * std::sin(deg2rad(tc - ta));
        double rhs = y[a] * std::sin(deg2rad(tc - tb)) + y[c] * std::sin(deg2rad(tb - ta));
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("constrained_lsq rejects degenerate direction sets") {
    ConstrainedLsqProblem p;
    p.angles_deg = {0.0, 10.0, 20.0};  // spans far less than a halfplane
    p.targets = {1.0, 1.0, 1.0};
    CHECK_THROWS(constrained_lsq(p));
    ConstrainedLsqProblem p2;
    p2.angles_deg = {0.0, 1.0};
    p2.targets = {1.0, 1.0};
    CHECK_THROWS(constrained_lsq(p2));
}

TEST_CASE("polyfit_ls: exact line fit and precondition") {
    std::vector<std::array<double, 2>> samples;
    for (int i = 0; i < 10; ++i) samples.push_back({static_cast<double>(i), 3.0 + 2.0 * i});
    Polynomial poly = polyfit_ls(samples, 1);
    for (const auto& s : samples) CHECK(poly.eval(s[0]) == doctest::Approx(s[1]).epsilon(1e-12));
    CHECK_THROWS(polyfit_ls(samples, 10));  // needs degree+1 < #samples
}

TEST_CASE("polyfit_ls residual is a global least-squares minimum") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 2>> samples;
    for (int i = 0; i <= 40; ++i) samples.push_back({i * 3.5, std::sin(i * 0.3) + u(rng) * 0.2});
    const int degree = 6;
    Polynomial fit = polyfit_ls(samples, degree);
    auto residual = [&](const Polynomial& p) {
        double acc = 0.0;
        for (const auto& s : samples) {
            double d = p.eval(s[0]) - s[1];
            acc += d * d;
        }
        return acc;
    };
    double best = residual(fit);
    for (int trial = 0; trial < 50; ++trial) {
        Polynomial other = fit;
        for (auto& c : other.coeffs) c += u(rng) * 0.05;
        CHECK(residual(other) >= best - 1e-9);
    }
}

TEST_CASE("polyfit on hexagon widths finds minima within 3 degrees") {
    PhantomSpec p1 = make_phantom(1);  // width minima at 30, 90, 150
    std::vector<std::array<double, 2>> samples;
    for (int a = 1; a <= 140; ++a)
        samples.push_back({static_cast<double>(a), width(p1.polygon, a)});
    Polynomial fit = polyfit_ls(samples, 11);
    std::vector<double> minima = poly_local_minima(fit, 0.0, 140.0);
    REQUIRE(minima.size() >= 2);
    // every in-range edge-normal angle is matched by a fitted minimum; the
    // fit may also wiggle near the kinks, which the downstream spacing
    // filter discards
    for (double truth : {30.0, 90.0}) {
        double nearest = 1e9;
        for (double m : minima) nearest = std::min(nearest, std::abs(m - truth));
        CHECK(nearest <= 3.0);
    }
}

TEST_CASE("poly_local_minima: quadratic, monotone, refinement accuracy") {
    // (x - 70)^2 expressed through a fit
    std::vector<std::array<double, 2>> samples;
    for (int i = 0; i <= 140; i += 5)
        samples.push_back({static_cast<double>(i), (i - 70.0) * (i - 70.0)});
    Polynomial quad = polyfit_ls(samples, 2);
    std::vector<double> minima = poly_local_minima(quad, 0.0, 140.0);
    REQUIRE(minima.size() == 1);
    CHECK(std::abs(minima[0] - 70.0) <= 0.01);

    std::vector<std::array<double, 2>> line;
    for (int i = 0; i <= 10; ++i) line.push_back({static_cast<double>(i), 2.0 * i});
    CHECK(poly_local_minima(polyfit_ls(line, 1), 0.0, 10.0).empty());
}
