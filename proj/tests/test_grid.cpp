#include <doctest.h>

#include <random>

#include "geotomo/grid.hpp"
#include "geotomo/phantoms.hpp"
#include "oracles.hpp"

using namespace geotomo;

TEST_CASE("threshold basics") {
    ImageGrid img(4);
    CHECK(threshold(img, 0.5).sum() == 0.0);

    ImageGrid mixed(2);
    mixed.pixels = {0.4, 0.6, 0.5, 0.51};
    ImageGrid out = threshold(mixed, 0.5);
    CHECK(out.pixels == std::vector<double>{0.0, 1.0, 0.0, 1.0});
}

TEST_CASE("threshold is idempotent on binary images") {
    std::mt19937_64 rng(3);
    ImageGrid img(16);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : img.pixels) v = u(rng);
    ImageGrid bin1 = threshold(img, 0.5);
    for (double t : {0.1, 0.5, 0.9})
        CHECK(threshold(bin1, t).pixels == bin1.pixels);
}

TEST_CASE("bin: constant image and explicit sums") {
    ImageGrid ones(4, 1.0, 1.0);
    ImageGrid b = bin(ones, 2);
    CHECK(b.size == 2);
    for (double v : b.pixels) CHECK(v == doctest::Approx(4.0));

    ImageGrid two(2);
    two.pixels = {1, 2, 3, 4};
    CHECK(bin(two, 2).pixels[0] == doctest::Approx(10.0));
}

TEST_CASE("bin conserves total mass exactly and rejects mismatched factors") {
    std::mt19937_64 rng(4);
    ImageGrid img(24);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (auto& v : img.pixels) v = u(rng);
    for (int f : {2, 3, 4}) CHECK(bin(img, f).sum() == doctest::Approx(img.sum()).epsilon(1e-15));
    CHECK_THROWS_WITH(bin(img, 5), doctest::Contains("bin factor mismatch"));
}

TEST_CASE("median filter examples and oracle") {
    CHECK(median_filter_1x3({0, 100, 0}) == std::vector<double>{50, 0, 50});
    CHECK(median_filter_1x3({5, 5, 5, 5}) == std::vector<double>{5, 5, 5, 5});
    CHECK(median_filter_1x3({0, 0, 7, 0, 0}) == oracles::brute_median_1x3({0, 0, 7, 0, 0}));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> len(1, 30);
        std::vector<double> row(len(rng));
        for (auto& v : row) v = u(rng);
        CHECK(median_filter_1x3(row) == oracles::brute_median_1x3(row));
    }
}

TEST_CASE("morphological opening removes isolated pixels") {
    ImageGrid img(64);
    img.at(20, 31) = 1.0;
    CHECK(morphological_open(img).sum() == 0.0);
}

TEST_CASE("morphological opening preserves a solid square (oracle check)") {
    ImageGrid img(40);
    for (int r = 10; r < 30; ++r)
        for (int c = 10; c < 30; ++c) img.at(r, c) = 1.0;
    ImageGrid opened = morphological_open(img);
    ImageGrid expected = oracles::brute_open(img, diamond_se(2));
    CHECK(opened.pixels == expected.pixels);
    // the 20x20 square is a dilate of its erosion: nothing is lost
    CHECK(opened.sum() == doctest::Approx(img.sum()));
}

TEST_CASE("morphological opening keeps a full-ones image") {
    ImageGrid img(16, 1.0, 1.0);
    CHECK(morphological_open(img).pixels == img.pixels);
}

TEST_CASE("opening is anti-extensive on random binary images") {
    std::mt19937_64 rng(77);
    std::bernoulli_distribution coin(0.55);
    for (int trial = 0; trial < 10; ++trial) {
        ImageGrid img(32);
        for (auto& v : img.pixels) v = coin(rng) ? 1.0 : 0.0;
        ImageGrid opened = morphological_open(img);
        ImageGrid expected = oracles::brute_open(img, diamond_se(2));
        CHECK(opened.pixels == expected.pixels);
        for (size_t i = 0; i < img.pixels.size(); ++i) CHECK(opened.pixels[i] <= img.pixels[i]);
    }
}

TEST_CASE("rasterize: axis-aligned square covering a 10x10 pixel block") {
    // pixel centers of a 32-grid lie on half-integers around 0; a square
    // spanning [-5, 5] in both axes covers exactly the 10x10 center block
    ConvexPolygon sq = convex_hull({{-5, -5}, {5, -5}, {5, 5}, {-5, 5}});
    CHECK(rasterize(sq, 32, 1.0).count() == 100);
    CHECK(rasterize(ConvexPolygon{}, 32, 1.0).count() == 0);
}

TEST_CASE("rasterize phantom 1 matches its analytic area within 0.5%") {
    PhantomSpec p1 = make_phantom(1);
    double analytic = 1.5 * std::sqrt(3.0) * 60.0 * 60.0;
    long long count = rasterize_phantom(p1, 512).count();
    CHECK(std::abs(count - analytic) / analytic < 0.005);
}

TEST_CASE("rasterize is monotone under polygon inclusion") {
    ConvexPolygon inner = make_phantom(1).polygon;
    ConvexPolygon outer = inner;
    for (Vec2& v : outer.vertices) v = v * 1.15;
    PixelSet a = rasterize(inner, 256, 1.0);
    PixelSet b = rasterize(outer, 256, 1.0);
    for (size_t i = 0; i < a.mask.size(); ++i)
        if (a.mask[i]) CHECK(b.mask[i]);
}
