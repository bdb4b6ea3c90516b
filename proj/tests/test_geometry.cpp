#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "secrelay/geometry.hpp"

using namespace secrelay;
using std::numbers::pi;

namespace {

// Kolmogorov distance of a sample against a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

}  // namespace

TEST_CASE("polar points normalize the angle") {
    CHECK(PolarPoint(1.0, -pi / 2).theta() == doctest::Approx(3 * pi / 2));
    CHECK(PolarPoint(1.0, 5 * pi).theta() == doctest::Approx(pi));
    const auto p = PolarPoint(2.0, 0.3).to_planar();
    const auto back = PolarPoint::from_planar(p);
    CHECK(back.r() == doctest::Approx(2.0));
    CHECK(back.theta() == doctest::Approx(0.3));
    CHECK_THROWS_AS(PolarPoint(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("endpoints sit on the x axis") {
    const auto e = Endpoints::for_distance(20.0);
    CHECK(e.source == PlanarPoint{10.0, 0.0});
    CHECK(e.destination == PlanarPoint{-10.0, 0.0});
    CHECK(distance(e.source, e.destination) == 20.0);
}

TEST_CASE("hop distances") {
    auto h = hop_distances(PolarPoint(0.0, 1.234), 20.0);
    CHECK(h.d_sr == doctest::Approx(10.0));
    CHECK(h.d_rd == doctest::Approx(10.0));

    h = hop_distances(PolarPoint(10.0, 0.0), 20.0);
    CHECK(h.d_sr == doctest::Approx(0.0));
    CHECK(h.d_rd == doctest::Approx(20.0));

    h = hop_distances(PolarPoint(5.0, pi / 2), 20.0);
    CHECK(h.d_sr == doctest::Approx(std::sqrt(125.0)).epsilon(1e-12));
    CHECK(h.d_rd == doctest::Approx(std::sqrt(125.0)).epsilon(1e-12));

    SUBCASE("sum of squares identity and reflections") {
        for (double r : {0.0, 1.5, 7.0, 13.0, 40.0}) {
            for (double t : {0.0, 0.4, 1.3, 2.9, 4.0, 5.5}) {
                const double d = 20.0;
                const auto a = hop_distances(PolarPoint(r, t), d);
                CHECK(a.d_sr * a.d_sr + a.d_rd * a.d_rd == doctest::Approx(2 * r * r + d * d / 2).epsilon(1e-12));
                const auto mirrored = hop_distances(PolarPoint(r, -t), d);
                CHECK(mirrored.d_sr == doctest::Approx(a.d_sr).epsilon(1e-12));
                CHECK(mirrored.d_rd == doctest::Approx(a.d_rd).epsilon(1e-12));
                const auto swapped = hop_distances(PolarPoint(r, pi - t), d);
                CHECK(swapped.d_sr == doctest::Approx(a.d_rd).epsilon(1e-12));
                CHECK(swapped.d_rd == doctest::Approx(a.d_sr).epsilon(1e-12));
            }
        }
    }

    CHECK_THROWS_AS((void)hop_distances(PolarPoint(1.0, 0.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)hop_distances(PolarPoint(1.0, 0.0), -3.0), std::invalid_argument);
    CHECK_THROWS_AS((void)hop_distances(PolarPoint(NAN, 0.0), 20.0), std::invalid_argument);
}

TEST_CASE("default window") {
    auto w = default_window(20.0, 1e-5);
    CHECK(w.center == PlanarPoint{0.0, 0.0});
    CHECK(w.radius == doctest::Approx(4.0 / std::sqrt(1e-5)));
    w = default_window(100.0, 1e-3);
    CHECK(w.radius == doctest::Approx(500.0));
    CHECK(default_window(20.0, 0.0).radius == doctest::Approx(100.0));
    CHECK(w.contains({499.0, 0.0}));
    CHECK_FALSE(w.contains({0.0, 501.0}));
    CHECK(w.area() == doctest::Approx(pi * 500.0 * 500.0));
}

TEST_CASE("exterior mean aggregate") {
    const SimulationWindow w{{0.0, 0.0}, 300.0};
    SUBCASE("centered transmitter has a closed form") {
        for (double alpha : {2.5, 4.0, 5.3}) {
            const double expected = 2 * pi * 1e-4 * std::pow(300.0, 2 - alpha) / (alpha - 2);
            CHECK(exterior_mean_aggregate({0.0, 0.0}, w, 1e-4, alpha) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("off-center transmitter against a polar grid sum") {
        const PlanarPoint tx{120.0, 50.0};
        const double alpha = 3.0;
        const double density = 2e-4;
        // Midpoint rule on the window exterior, radius out to 300 * 400 with a log-spaced grid.
        double sum = 0.0;
        const int nr = 4000;
        const int nt = 720;
        const double lr0 = std::log(300.0);
        const double lr1 = std::log(300.0 * 400.0);
        for (int i = 0; i < nr; ++i) {
            const double lr = lr0 + (i + 0.5) * (lr1 - lr0) / nr;
            const double rho = std::exp(lr);
            for (int j = 0; j < nt; ++j) {
                const double t = (j + 0.5) * 2 * pi / nt;
                const double dx = rho * std::cos(t) - tx.x;
                const double dy = rho * std::sin(t) - tx.y;
                sum += std::pow(dx * dx + dy * dy, -alpha / 2) * rho * rho;
            }
        }
        sum *= density * (lr1 - lr0) / nr * 2 * pi / nt;
        const double tail = 2 * pi * density * std::pow(300.0 * 400.0, 2 - alpha) / (alpha - 2);
        CHECK(exterior_mean_aggregate(tx, w, density, alpha) == doctest::Approx(sum + tail).epsilon(1e-4));
    }
    CHECK(exterior_mean_aggregate({1.0, 0.0}, w, 0.0, 4.0) == 0.0);
    CHECK_THROWS_AS((void)exterior_mean_aggregate({400.0, 0.0}, w, 1e-4, 4.0), std::invalid_argument);
}

TEST_CASE("poisson field sampling") {
    const SimulationWindow w{{0.0, 0.0}, 500.0};
    TrialRng rng(11);
    CHECK(sample_ppp(0.0, w, rng).empty());

    SUBCASE("mean count") {
        const int draws = 10'000;
        double total = 0.0;
        for (int i = 0; i < draws; ++i) {
            TrialRng r(42, 0, static_cast<std::uint64_t>(i));
            total += static_cast<double>(sample_ppp(1e-3, w, r).size());
        }
        const double mean = 1e-3 * pi * 500.0 * 500.0;
        CHECK(total / draws == doctest::Approx(mean).epsilon(3 * std::sqrt(mean / draws) / mean));
    }
    SUBCASE("points stay inside and are uniform in radius") {
        TrialRng r(5);
        const auto pts = sample_ppp(1e-3, w, r);
        std::vector<double> radii;
        for (const auto& p : pts) {
            CHECK(w.contains(p));
            radii.push_back(p.norm());
        }
        const double d = ks_distance(radii, [](double x) { return x * x / (500.0 * 500.0); });
        CHECK(d < 1.63 / std::sqrt(static_cast<double>(radii.size())));
    }
    SUBCASE("fixed seed repeats") {
        TrialRng a(99, 3, 7);
        TrialRng b(99, 3, 7);
        CHECK(sample_ppp(1e-4, w, a) == sample_ppp(1e-4, w, b));
    }
}

TEST_CASE("nearest to origin") {
    CHECK_FALSE(nearest_to_origin({}).has_value());
    const std::vector<PlanarPoint> pts{{3.0, 4.0}, {1.0, 0.0}};
    CHECK(*nearest_to_origin(pts) == PlanarPoint{1.0, 0.0});

    SUBCASE("ties go to the smaller angle, then to input order") {
        const std::vector<PlanarPoint> tie{{0.0, 1.0}, {1.0, 0.0}, {-1.0, 0.0}};
        CHECK(*nearest_to_origin(tie) == PlanarPoint{1.0, 0.0});
        const std::vector<PlanarPoint> same{{0.0, 2.0}, {0.0, 2.0}};
        CHECK(*nearest_to_origin(same) == PlanarPoint{0.0, 2.0});
    }

    SUBCASE("distance law of the nearest relay") {
        const double lambda = 1e-3;
        const SimulationWindow w{{0.0, 0.0}, 250.0};
        auto cdf = [&](double r) { return 1.0 - std::exp(-lambda * pi * r * r); };
        std::vector<double> full;
        std::vector<double> direct;
        for (std::uint64_t i = 0; i < 10'000; ++i) {
            TrialRng a(3, 1, i);
            if (const auto p = nearest_to_origin(sample_ppp(lambda, w, a))) full.push_back(p->norm());
            TrialRng b(3, 2, i);
            if (const auto p = sample_nearest_to_origin(lambda, w, b)) direct.push_back(p->norm());
        }
        CHECK(ks_distance(full, cdf) < 0.02);
        CHECK(ks_distance(direct, cdf) < 0.02);
        double mean = 0.0;
        for (double r : direct) mean += r;
        mean /= static_cast<double>(direct.size());
        // Rayleigh mean 1/(2 sqrt(lambda)), standard deviation sqrt((4 - pi)/(4 pi lambda)).
        const double se = std::sqrt((4 - pi) / (4 * pi * lambda)) / std::sqrt(static_cast<double>(direct.size()));
        CHECK(std::fabs(mean - 1.0 / (2 * std::sqrt(lambda))) < 4 * se);
    }

    SUBCASE("off-center windows fall back to the full field") {
        const SimulationWindow w{{30.0, 0.0}, 100.0};
        TrialRng a(8, 0, 1);
        TrialRng b(8, 0, 1);
        CHECK(sample_nearest_to_origin(1e-3, w, a) == nearest_to_origin(sample_ppp(1e-3, w, b)));
    }
}
