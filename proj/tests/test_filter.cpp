#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qpefl/filter.hpp"

#include "oracles.hpp"

using namespace qpefl;

TEST_CASE("filter config construction") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig c = make_filter_config(g, 15);
    CHECK(c.y_c == 15);
    CHECK_THAT(c.omega_c, Catch::Matchers::WithinRel(two_pi * 15.0 / 64.0, 1e-15));

    const FilterConfig cm = make_filter_config_m(g, 2);
    CHECK(cm.y_c == 15);
    CHECK(cm.m == 2);

    CHECK_THROWS_AS(make_filter_config(g, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_filter_config(g, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_filter_config_m(g, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_filter_config_m(g, 6), std::invalid_argument);
}

TEST_CASE("exactness at grid and half-grid energies") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    const Window rect = make_window(WindowKind::rectangular, g);
    const Window sine = make_window(WindowKind::sine, g);

    for (std::size_t yp = 0; yp < g.size; ++yp) {
        const Renormalization r = renormalization(rect, g, cfg, g.omega(double(yp)));
        CHECK(std::fabs(r.dR) <= 1e-12);
        if (yp <= 15) CHECK_THAT(r.R, Catch::Matchers::WithinAbs(1.0, 1e-12));
        else CHECK(std::fabs(r.R) <= 1e-12);
    }
    // sine: exact whenever the two occupied bins sit on one side of the cut
    for (std::size_t yp = 0; yp + 1 < g.size; ++yp) {
        if (yp == 15) continue;  // pair straddles the cutoff, dR = 1/2
        const Renormalization r = renormalization(sine, g, cfg, g.omega(double(yp) + 0.5));
        CHECK(std::fabs(r.dR) <= 1e-12);
    }
    const Renormalization straddle = renormalization(sine, g, cfg, g.omega(15.5));
    CHECK_THAT(straddle.dR, Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("partition of unity and the dR convention") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    auto gen = oracles::rng(17);
    std::uniform_real_distribution<double> unif(0.0, g.span());
    for (WindowKind kind : {WindowKind::rectangular, WindowKind::sine, WindowKind::kaiser}) {
        const Window w = make_window(kind, g, 3.0);
        for (int rep = 0; rep < 40; ++rep) {
            const double e = unif(gen);
            const Renormalization r = renormalization(w, g, cfg, e);
            CHECK(r.R >= 0.0);
            CHECK(r.R <= 1.0 + 1e-12);
            const double expected = reduce_energy(e, g) <= cfg.omega_c ? 1.0 - r.R : r.R;
            CHECK(std::fabs(r.dR - expected) <= 1e-12);
        }
    }
    // midway between omega_{y_c} and omega_{y_c + 1}: strictly transitional
    const Renormalization mid =
        renormalization(make_window(WindowKind::kaiser, g, 3.0), g, cfg, g.omega(15.5));
    CHECK(mid.R > 0.0);
    CHECK(mid.R < 1.0);
}

TEST_CASE("filter curve: Gibbs overshoot for the rectangular window") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    const Window rect = make_window(WindowKind::rectangular, g);
    const FilterCurve curve = filter_curve(rect, g, cfg, uniform_energy_samples(g, 10000));
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.energies.size(); ++i)
        if (curve.energies[i] < cfg.omega_c) worst = std::max(worst, curve.dR[i]);
    CHECK(worst > 0.04);
}

TEST_CASE("filter curve: kaiser alpha=6 plateau is flat to 1e-10") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    const Window w = make_window(WindowKind::kaiser, g, 6.0);
    const double delta = g.cell() * 12.0;
    const double e_targ = cfg.omega_c - delta;
    double worst = 0.0;
    for (double e = delta / 2; e <= e_targ + delta / 2; e += g.span() / 2000.0)
        worst = std::max(worst, renormalization(w, g, cfg, e).dR);
    CHECK(worst < 1e-10);
}

TEST_CASE("filter curve input validation and low-energy behaviour") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    const Window w = make_window(WindowKind::sine, g);
    CHECK_THROWS_AS(filter_curve(w, g, cfg, {g.span()}), std::invalid_argument);
    CHECK_THROWS_AS(filter_curve(w, g, cfg, {-0.1}), std::invalid_argument);

    // peak at y = 0 stays inside the kept region
    for (WindowKind kind : {WindowKind::rectangular, WindowKind::sine, WindowKind::kaiser}) {
        const Renormalization r = renormalization(make_window(kind, g, 3.0), g, cfg, 0.0);
        CHECK(r.R >= 0.5);
    }
}

TEST_CASE("two boundaries and window ordering in the far region") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    const Window rect = make_window(WindowKind::rectangular, g);
    const Window sine = make_window(WindowKind::sine, g);
    const Window kais = make_window(WindowKind::kaiser, g, 3.0);

    // dR rises toward both period boundaries (cutoff at y_c and wrap at 0)
    const double cell = g.cell();
    for (const Window& w : {rect, sine, kais}) {
        const double near_zero = renormalization(w, g, cfg, 0.25 * cell).dR;
        const double near_top = renormalization(w, g, cfg, g.span() - 0.25 * cell).dR;
        const double deep = renormalization(w, g, cfg, g.omega(7.3)).dR;
        CHECK(near_zero > deep);
        CHECK(near_top > deep);
    }

    // fixed sample set at least 8 cells away from both boundaries, avoiding
    // the grid and half-grid points where rect resp. sine are exact
    for (double y_pos : {8.4, 10.7, 12.3, 24.6, 30.2, 40.7, 47.8}) {
        const double e = g.omega(y_pos);
        const double dr_rect = renormalization(rect, g, cfg, e).dR;
        const double dr_sine = renormalization(sine, g, cfg, e).dR;
        const double dr_kais = renormalization(kais, g, cfg, e).dR;
        CHECK(dr_rect > dr_sine);
        CHECK(dr_sine > dr_kais);
    }
}

TEST_CASE("deep-plateau deviation is bounded by the leakage estimate") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    const Window w = make_window(WindowKind::kaiser, g, 3.0);
    const double eps_max = kaiser_eps_max(3.0, g);
    const double delta = g.cell() * 6.0;
    for (double e = 2.0 * delta; e <= cfg.omega_c - 2.0 * delta; e += g.span() / 997.0)
        CHECK(renormalization(w, g, cfg, e).dR <= eps_max);
}

TEST_CASE("kaiser filter parameters: formulas") {
    const QpeGrid g = make_grid(6, 1.0);
    const FilterConfig cfg = make_filter_config(g, 15);
    const KaiserFilterParams p = kaiser_params(3.0, g, cfg, 1e-7);
    CHECK_THAT(p.delta, Catch::Matchers::WithinRel(two_pi / 64.0 * 6.0, 1e-14));
    CHECK_THAT(p.delta, Catch::Matchers::WithinAbs(0.589, 1e-3));
    CHECK_THAT(p.e_targ, Catch::Matchers::WithinRel(cfg.omega_c - p.delta, 1e-14));
    CHECK_THAT(p.n_estimate, Catch::Matchers::WithinRel(64.0, 1e-12));

    CHECK_THROWS_AS(kaiser_params(8.0, g, cfg, 1e-7), std::invalid_argument);  // y_c <= ceil(2a)
    CHECK_THROWS_AS(kaiser_params(3.0, g, cfg, 0.0), std::invalid_argument);
}

TEST_CASE("kaiser filter parameters: measured transition at n=8 and n=9") {
    // reference transition widths 0.2556 (n=8) and 0.1279 (n=9), +-20%
    {
        const QpeGrid g = make_grid(8, 1.0);
        const FilterConfig cfg = make_filter_config(g, 63);
        const KaiserFilterParams p = kaiser_params(3.0, g, cfg, 1e-7);
        CHECK(2.0 * p.delta_meas > 0.8 * 0.2556);
        CHECK(2.0 * p.delta_meas < 1.2 * 0.2556);
        CHECK(2.0 * p.transition_meas > 0.8 * 0.2556);
        CHECK(2.0 * p.transition_meas < 1.2 * 0.2556);
    }
    {
        const QpeGrid g = make_grid(9, 1.0);
        const FilterConfig cfg = make_filter_config(g, 127);
        const KaiserFilterParams p = kaiser_params(3.0, g, cfg, 1e-7);
        CHECK(2.0 * p.delta_meas > 0.8 * 0.1279);
        CHECK(2.0 * p.delta_meas < 1.2 * 0.1279);
    }
}
