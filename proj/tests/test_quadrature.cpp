#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "secrelay/analytic.hpp"
#include "secrelay/integrate.hpp"
#include "secrelay/montecarlo.hpp"
#include "secrelay/quadrature.hpp"

using namespace secrelay;
namespace qd = secrelay::quadrature;
namespace an = secrelay::analytic;
using std::numbers::pi;

namespace {

SystemParams make(double alpha, double lambda_e, double d_sd, double lambda_r = 1e-3) {
    SystemParams p;
    p.alpha = alpha;
    p.lambda_e = lambda_e;
    p.d_sd = d_sd;
    p.lambda_r = lambda_r;
    return p;
}

}  // namespace

TEST_CASE("adaptive Gauss-Kronrod") {
    const IntegrationOptions opts{1e-12, 0.0, 200};
    const auto r = integrate([](double x) { return std::sin(x); }, 0.0, pi, opts);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
    const auto s = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opts);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-10));
    const auto t = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0, opts);
    CHECK(t.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, {1e-14, 0.0, 3}),
                    NonConvergence);
}

TEST_CASE("fading weight rule") {
    for (std::size_t order : {16, 64, 128}) {
        const FadingWeightRule rule(order);
        const auto nodes = rule.nodes();
        REQUIRE(nodes.size() == order);
        double total = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            CHECK(nodes[i].weight > 0.0);
            if (i) CHECK(nodes[i].abscissa > nodes[i - 1].abscissa);
            total += nodes[i].weight;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(FadingWeightRule(1), std::invalid_argument);

    SUBCASE("order 64 meets 1e-6 on one-dimensional cases") {
        const FadingWeightRule rule(64);
        // E exp(-k/h) = 2 sqrt(k) K1(2 sqrt(k)).
        for (double k : {1e-6, 1e-3, 0.1, 1.0, 5.0}) {
            const double exact = 2 * std::sqrt(k) * std::cyl_bessel_k(1.0, 2 * std::sqrt(k));
            CHECK(std::fabs(rule.expectation([&](double h) { return std::exp(-k / h); }) - exact) < 1e-6);
        }
        for (double alpha : {2.5, 4.0, 6.0}) {
            for (double k : {1e-5, 1e-2, 0.5, 3.0}) {
                const double beta = 2.0 / alpha;
                const double ref = oracle::fading_expectation(k, alpha);
                CHECK(std::fabs(rule.expectation([&](double h) { return std::exp(-k * std::pow(h, -beta)); }) - ref) <
                      1e-6);
            }
        }
    }
}

TEST_CASE("adaptive fading expectation against an independent integrator") {
    for (double alpha : {2.2, 3.0, 4.0, 7.0}) {
        for (double k : {0.0, 1e-7, 1e-3, 0.2, 2.0, 20.0}) {
            const double ref = k == 0.0 ? 1.0 : oracle::fading_expectation(k, alpha);
            CHECK(qd::fading_expectation(k, alpha).value == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("colluding correlation integral") {
    SUBCASE("midpoint relay against a brute-force grid") {
        const double grid = oracle::colluding_correlation_grid(10.0, 10.0, 10.0, 4.0, 0.05, 400.0);
        const auto f = qd::correlation_integral_colluding(10.0, 10.0, 10.0, 4.0, 1e-6);
        CHECK(f.value == doctest::Approx(grid).epsilon(1e-2));
        CHECK(f.value == doctest::Approx(grid).epsilon(1e-4));
    }
    SUBCASE("asymmetric hops and other exponents on a coarser grid") {
        for (double alpha : {3.0, 5.0}) {
            const double grid = oracle::colluding_correlation_grid(14.0, 14.0, 8.0, alpha, 0.1, 800.0);
            const auto f = qd::correlation_integral_colluding(14.0, 14.0, 8.0, alpha, 1e-6);
            CHECK(f.value == doctest::Approx(grid).epsilon(2e-3));
        }
    }
    SUBCASE("bounded by dropping either factor") {
        for (double alpha : {2.3, 4.0, 6.0}) {
            for (double ds : {0.5, 3.0, 10.0, 40.0}) {
                for (double dr : {0.5, 3.0, 10.0, 40.0}) {
                    const double sep = 0.5 * (ds + dr);
                    const double v = qd::correlation_integral_colluding(sep, ds, dr, alpha, 1e-6).value;
                    CHECK(v >= 0.0);
                    CHECK(v <= an::coefficient_a(1.0, alpha) * std::min(ds * ds, dr * dr) * (1 + 1e-9));
                }
            }
        }
    }
    CHECK(qd::correlation_integral_colluding(0.0, 0.0, 20.0, 4.0, 1e-6).value == 0.0);
    CHECK(qd::correlation_integral_colluding(1e-3, 1e-3, 20.0, 4.0, 1e-6).value < 1e-5);
    CHECK_THROWS_AS((void)qd::correlation_integral_colluding(10.0, 10.0, 10.0, 4.0, 1e-13, 3), NonConvergence);
}

TEST_CASE("spatial correlation integral with explicit relay") {
    const qd::QuadratureConfig cfg;
    const PolarPoint relay(5.0, pi / 3);
    const auto hops = hop_distances(relay, 20.0);
    const auto e = qd::spatial_correlation_integral_colluding(hops.d_sr, hops.d_rd, relay, 20.0, 4.0, cfg);
    CHECK(e.value == doctest::Approx(qd::correlation_integral_colluding(hops.d_sr, hops.d_sr, hops.d_rd, 4.0, 1e-6).value));
    CHECK_THROWS_AS((void)qd::spatial_correlation_integral_colluding(hops.d_sr + 1.0, hops.d_rd, relay, 20.0, 4.0, cfg),
                    std::invalid_argument);
    const auto degenerate = qd::spatial_correlation_integral_colluding(0.0, 20.0, PolarPoint(10.0, 0.0), 20.0, 4.0, cfg);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.value == 0.0);
}

TEST_CASE("colluding exact relay probability") {
    CHECK(qd::p_relay_colluding_exact(PolarPoint(3, 1), make(4, 0, 20)).value == 1.0);

    SUBCASE("sandwiched by the closed-form bound and its ratio limit") {
        for (double lambda_e : {1e-6, 1e-5, 1e-4, 1e-3}) {
            for (const auto& relay : {PolarPoint(0, 0), PolarPoint(5, pi / 3), PolarPoint(10, pi / 2), PolarPoint(7, 2.5)}) {
                const auto p = make(4, lambda_e, 20);
                const double exact = qd::p_relay_colluding_exact(relay, p).value;
                const double lower = an::p_relay_colluding_lower(relay, p);
                const auto hops = hop_distances(relay, 20.0);
                const double a = an::coefficient_a(lambda_e, 4);
                CHECK(exact >= lower);
                CHECK(exact / lower < std::exp(a * std::min(hops.d_sr * hops.d_sr, hops.d_rd * hops.d_rd)));
            }
        }
    }
    SUBCASE("ratio to the bound tends to one") {
        double prev = 1.0;
        for (double lambda_e : {1e-6, 1e-5, 1e-4, 1e-3}) {
            const auto p = make(4, lambda_e, 20);
            const double ratio =
                qd::p_relay_colluding_exact(PolarPoint(0, 0), p).value / an::p_relay_colluding_lower(PolarPoint(0, 0), p);
            if (lambda_e == 1e-6) CHECK(ratio <= 1.01);
            CHECK(ratio >= prev);
            prev = ratio;
        }
    }
    SUBCASE("reflection symmetry") {
        const auto p = make(3.5, 3e-4, 20);
        for (double t : {0.3, 1.1, 2.0}) {
            const double v = qd::p_relay_colluding_exact(PolarPoint(6, t), p).value;
            CHECK(qd::p_relay_colluding_exact(PolarPoint(6, -t), p).value == doctest::Approx(v).epsilon(1e-6));
        }
    }
    SUBCASE("relay on top of the source keeps one hop") {
        const auto p = make(4, 1e-4, 20);
        const auto e = qd::p_relay_colluding_exact(PolarPoint(10, 0), p);
        CHECK(e.degenerate);
        CHECK(e.value == doctest::Approx(an::p_direct_colluding(p)).epsilon(1e-14));
    }
    SUBCASE("agrees with simulation") {
        const auto p = make(4, 1e-4, 20);
        const PolarPoint relay(5, pi / 3);
        montecarlo::TrialConfig cfg;
        cfg.trials = 1'000'000;
        cfg.seed = 20;
        const auto est = montecarlo::run_fixed_relay(p, relay, cfg);
        CHECK(est.contains(qd::p_relay_colluding_exact(relay, p).value));
    }
}

TEST_CASE("non-colluding direct probability") {
    CHECK(qd::p_direct_noncolluding(make(4, 0, 20)).value == 1.0);
    for (double alpha : {2.5, 4.0, 6.0}) {
        for (double lambda_e : {1e-6, 1e-4, 1e-3}) {
            const auto p = make(alpha, lambda_e, 30);
            const double v = qd::p_direct_noncolluding(p).value;
            CHECK(v >= an::p_direct_colluding(p));
            CHECK(v <= 1.0);
        }
    }
    const auto p = make(4, 1e-4, 20);
    montecarlo::TrialConfig cfg;
    cfg.trials = 1'000'000;
    cfg.seed = 21;
    cfg.model = EavesdropperModel::NonColluding;
    CHECK(montecarlo::run_direct(p, cfg).contains(qd::p_direct_noncolluding(p).value));
}

TEST_CASE("non-colluding relay probabilities") {
    const auto p = make(4, 1e-4, 20);
    SUBCASE("product bound") {
        const double single = qd::p_direct_noncolluding(make(4, 1e-4, 10)).value;
        CHECK(qd::p_relay_noncolluding_lower(PolarPoint(0, 0), p).value == doctest::Approx(single * single).epsilon(1e-12));
        CHECK(qd::p_relay_noncolluding_lower(PolarPoint(0, 0), make(4, 0, 20)).value == 1.0);
        for (double r : {0.0, 4.0, 9.0, 25.0}) {
            const PolarPoint relay(r, 0.8);
            CHECK(qd::p_relay_noncolluding_lower(relay, p).value >= an::p_relay_noncolluding_lower_jensen(relay, p));
        }
    }
    SUBCASE("exact value") {
        CHECK(qd::p_relay_noncolluding_exact(PolarPoint(5, 1), make(4, 0, 20)).value == 1.0);
        for (const auto& relay : {PolarPoint(0, 0), PolarPoint(5, pi / 3), PolarPoint(12, 2.0)}) {
            for (double lambda_e : {1e-5, 1e-4, 1e-3}) {
                const auto q = make(4, lambda_e, 20);
                const double exact = qd::p_relay_noncolluding_exact(relay, q).value;
                CHECK(exact >= qd::p_relay_noncolluding_lower(relay, q).value);
                CHECK(exact <= 1.0);
                CHECK(exact >= qd::p_relay_colluding_exact(relay, q).value - 1e-9);
            }
        }
        const PolarPoint relay(5, pi / 3);
        montecarlo::TrialConfig cfg;
        cfg.trials = 1'000'000;
        cfg.seed = 22;
        cfg.model = EavesdropperModel::NonColluding;
        CHECK(montecarlo::run_fixed_relay(p, relay, cfg).contains(qd::p_relay_noncolluding_exact(relay, p).value));
    }
    SUBCASE("reflection symmetry") {
        const double v = qd::p_relay_noncolluding_exact(PolarPoint(6, 0.5), p).value;
        CHECK(qd::p_relay_noncolluding_exact(PolarPoint(6, -0.5), p).value == doctest::Approx(v).epsilon(1e-3));
    }
    SUBCASE("serial and parallel agree bit for bit") {
        qd::QuadratureConfig serial;
        serial.execution = ExecutionMode::Serial;
        qd::QuadratureConfig parallel;
        parallel.execution = ExecutionMode::Parallel;
        const PolarPoint relay(5, pi / 3);
        CHECK(qd::p_relay_noncolluding_exact(relay, p, serial).value ==
              qd::p_relay_noncolluding_exact(relay, p, parallel).value);
        CHECK(qd::p_selected_relay_noncolluding_lower(p, serial).value ==
              qd::p_selected_relay_noncolluding_lower(p, parallel).value);
    }
    SUBCASE("cost warning") {
        qd::QuadratureConfig cfg;
        cfg.node_budget = 1000;
        CHECK(qd::p_relay_noncolluding_exact(PolarPoint(5, 1), p, cfg).cost_warning);
        CHECK_FALSE(qd::p_relay_noncolluding_exact(PolarPoint(5, 1), p).cost_warning);
    }
    SUBCASE("degenerate relay") {
        const auto e = qd::p_relay_noncolluding_exact(PolarPoint(10, 0), p);
        CHECK(e.degenerate);
        CHECK(e.value == doctest::Approx(qd::p_direct_noncolluding(p).value).epsilon(1e-12));
    }
}

TEST_CASE("selected relay series") {
    const qd::QuadratureConfig cfg;
    SUBCASE("matches its closed-form sum") {
        for (double cs : {0.0, 1e-4, 3e-3, 0.2}) {
            for (double cr : {1e-5, 2e-3, 0.5}) {
                for (double d : {20.0, 150.0}) {
                    const double lr = 1e-3;
                    const double s = cs + cr + lr * pi;
                    const double b = (cr - cs) * d;
                    const double closed = pi * lr / s * std::exp(-0.25 * (cs + cr) * d * d + b * b / (4 * s));
                    const auto v = qd::selected_relay_series(cs, cr, lr, d, cfg);
                    CHECK(v.value == doctest::Approx(closed).epsilon(1e-11));
                }
            }
        }
    }
    SUBCASE("matches the Bessel-form radial integral") {
        for (double cs : {1e-5, 3e-3, 0.05}) {
            for (double cr : {2e-5, 1e-3, 0.4}) {
                const double v = qd::selected_relay_series(cs, cr, 1e-3, 20.0, cfg).value;
                CHECK(v == doctest::Approx(oracle::selected_relay_bessel(cs, cr, 1e-3, 20.0)).epsilon(1e-9));
            }
        }
    }
    SUBCASE("far-from-origin peak") {
        // x = b^2 / 4s is about 1.25e7 here; the large exponents cancel, hence the looser tolerance.
        const double cs = 1e-6, cr = 5000.0, lr = 1e-3, d = 100.0;
        const double s = cs + cr + lr * pi;
        const double b = (cr - cs) * d;
        const double closed = pi * lr / s * std::exp(-0.25 * (cs + cr) * d * d + b * b / (4 * s));
        const auto v = qd::selected_relay_series(cs, cr, lr, d, cfg);
        CHECK(v.terms > 20000);
        CHECK(v.value == doctest::Approx(closed).epsilon(1e-7));
    }
    SUBCASE("term budget") {
        qd::QuadratureConfig small = cfg;
        small.series_max_terms = 5;
        CHECK_THROWS_AS((void)qd::selected_relay_series(1e-5, 2.0, 1e-3, 100.0, small), NonConvergence);
    }
    CHECK_THROWS_AS((void)qd::selected_relay_series(1e-3, 1e-3, 0.0, 20.0, cfg), std::invalid_argument);
}

TEST_CASE("selected relay non-colluding bound") {
    CHECK(qd::p_selected_relay_noncolluding_lower(make(4, 0, 20, 1e-3)).value == 1.0);
    CHECK_THROWS_AS((void)qd::p_selected_relay_noncolluding_lower(make(4, 1e-5, 20, 0.0)), std::invalid_argument);
    const auto p = make(4, 1e-5, 20, 1e-3);
    const double v = qd::p_selected_relay_noncolluding_lower(p).value;
    CHECK(v == doctest::Approx(oracle::selected_relay_noncolluding_bessel(p)).epsilon(1e-4));
    CHECK(v >= an::p_selected_relay_colluding_lower(p));
    montecarlo::TrialConfig cfg;
    cfg.trials = 200'000;
    cfg.seed = 23;
    cfg.model = EavesdropperModel::NonColluding;
    const auto est = montecarlo::run_selected_relay(p, cfg);
    CHECK(v <= est.p_hat + 3 * est.standard_error());
}

TEST_CASE("configuration validation") {
    qd::QuadratureConfig cfg;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.fading_order = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)qd::p_relay_colluding_exact(PolarPoint(0, 0), make(2.0, 1e-5, 20)), std::invalid_argument);
}
