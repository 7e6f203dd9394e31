// Parameter maps: closed forms in (beta, gamma) against the energy-scale route.
//
// Frozen values come from tests/oracle/frozen_values.py (mpmath, 40 digits), which
// evaluates the energy-scale formulas from E_J = 1, E_C = gamma, E_em = beta^2.

#include <doctest.h>

#include "qpband/params.hpp"

#include <cmath>
#include <stdexcept>

using namespace qpband;

namespace {

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST_CASE("normalized parameters match high-precision values") {
    struct Case {
        double beta, gamma, a, b, delta, homega;
    };
    const Case cases[] = {
        {0.5, 1.0, 0.70710678118654752, 0.35355339059327376, 10.452503719011012, 3.414213562373095},
        {0.1, 1.0, 17.677669529663686, 8.8388347648318431, 172.87067781281444, 37.355339059327372},
        {0.5, 0.2, 0.98058067569092016, 0.098058067569092021, 18.15402502022538, 3.9611613513818403},
        {0.1, 10.0, 2.4875929755249726, 12.437964877624863, 167.86825561207746, 6.9751859510499451},
        {0.2, 0.2, 6.1286292230682503, 0.61286292230682506, 86.103277475314371, 14.257258446136501},
    };
    for (const auto& c : cases) {
        CAPTURE(c.beta);
        CAPTURE(c.gamma);
        const auto np = normalized_from_dimensionless(DimensionlessParamsd{c.beta, c.gamma});
        CHECK(rel(np.a, c.a) < 1e-14);
        CHECK(rel(np.b, c.b) < 1e-14);
        CHECK(rel(np.delta, c.delta) < 1e-14);
        CHECK(rel(np.homega_over_2J, c.homega) < 1e-14);
    }
}

TEST_CASE("b = gamma a / 2 holds exactly") {
    for (double beta : {0.05, 0.1, 0.37, 1.0}) {
        for (double gamma : {0.1, 0.2, 3.3, 20.0}) {
            const auto np = normalized_from_dimensionless(DimensionlessParamsd{beta, gamma});
            CHECK(np.b == gamma * np.a / 2.0);
        }
    }
}

TEST_CASE("gamma -> 0 limit: a -> 1/(4 beta^2), b -> 0, delta -> inf; gamma = 0 is rejected") {
    const auto np = normalized_from_dimensionless(DimensionlessParamsd{0.5, 1e-8});
    CHECK(np.a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(np.b < 1e-8);
    CHECK(np.delta > 1e4);
    CHECK_THROWS_AS(normalized_from_dimensionless(DimensionlessParamsd{0.5, 0.0}), std::domain_error);
    CHECK_THROWS_AS(normalized_from_dimensionless(DimensionlessParamsd{0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(normalized_from_dimensionless(DimensionlessParamsd{-0.1, 1.0}), std::domain_error);
    CHECK_THROWS_AS(normalized_from_dimensionless(DimensionlessParamsd{0.1, NAN}), std::domain_error);
}

TEST_CASE("energies_from_dimensionless and its inverse") {
    auto e = energies_from_dimensionless(DimensionlessParamsd{1.0, 1.0}, 1.0);
    CHECK(e.e_josephson == 1.0);
    CHECK(e.e_charging == 1.0);
    CHECK(e.e_em == 1.0);

    e = energies_from_dimensionless(DimensionlessParamsd{0.5, 5.0}, 2.0);
    CHECK(e.e_josephson == 2.0);
    CHECK(e.e_charging == 10.0);
    CHECK(e.e_em == 0.5);

    for (double beta : {0.1, 0.2, 0.5}) {
        for (double gamma : preset_gammas) {
            for (double scale : {1e-3, 1.0, 7.5}) {
                const auto back = dimensionless_from_energies(
                    energies_from_dimensionless(DimensionlessParamsd{beta, gamma}, scale));
                CHECK(rel(back.beta, beta) < 1e-15);
                CHECK(rel(back.gamma, gamma) < 1e-15);
            }
        }
    }
    CHECK_THROWS_AS(energies_from_dimensionless(DimensionlessParamsd{1.0, 1.0}, 0.0), std::domain_error);
}

TEST_CASE("derived_from_energies at E_J = E_C = 1, E_em = 1/4") {
    const auto d = derived_from_energies(EnergyScalesd{1.0, 1.0, 0.25});
    CHECK(rel(d.qubit_eps, 1.414213562373095) < 1e-15);
    CHECK(rel(d.splitting, 2.0 * std::sqrt(2.0)) < 1e-15);
    CHECK(rel(d.photon_quantum, 0.92387953251128676) < 1e-15);
    CHECK(rel(d.hopping, 0.13529902503654925) < 1e-15);
    CHECK(rel(d.attractive, 0.19134171618254489) < 1e-15);
    CHECK(rel(d.repulsive, 0.095670858091272443) < 1e-15);

    const auto np = normalized_from_dimensionless(DimensionlessParamsd{0.5, 1.0});
    CHECK(rel(d.attractive / (2 * d.hopping), np.a) < 1e-14);

    // eps and Delta do not depend on E_em.
    for (double em : {1e-3, 0.25, 40.0}) {
        const auto dd = derived_from_energies(EnergyScalesd{1.0, 1.0, em});
        CHECK(dd.qubit_eps == d.qubit_eps);
        CHECK(dd.splitting == d.splitting);
    }
}

TEST_CASE("mixing angle branch: sin < 0, cos > 0, |tan| = E_J / E_C") {
    for (double ej : {0.3, 1.0, 4.0}) {
        for (double ec : {0.1, 1.0, 25.0}) {
            const auto d = derived_from_energies(EnergyScalesd{ej, ec, 1.0});
            const double s = std::sin(d.mixing_angle);
            const double c = std::cos(d.mixing_angle);
            CHECK(s > -1.0);
            CHECK(s < 0.0);
            CHECK(c > 0.0);
            CHECK(c < 1.0);
            CHECK(std::abs(s * s + c * c - 1.0) < 1e-15);
            CHECK(rel(std::abs(std::tan(d.mixing_angle)), ej / ec) < 1e-14);
            CHECK(rel(s, -ej / d.qubit_eps) < 1e-15);
            CHECK(rel(c, ec / d.qubit_eps) < 1e-15);
        }
    }
}

TEST_CASE("physical_to_energies scaling laws") {
    const PhysicalParamsd base{3.0e3, 1.0e-3, 1.0e-2, 5.0e-3};
    const auto e0 = physical_to_energies(base);
    CHECK(e0.e_josephson > 0);
    CHECK(e0.e_charging > 0);
    CHECK(e0.e_em > 0);

    auto p = base;
    p.junction_capacitance *= 2;
    auto e = physical_to_energies(p);
    CHECK(rel(e.e_charging, e0.e_charging / 2) < 1e-15);
    CHECK(e.e_josephson == e0.e_josephson);
    CHECK(e.e_em == e0.e_em);

    p = base;
    p.critical_current *= 2;
    e = physical_to_energies(p);
    CHECK(rel(e.e_josephson, 2 * e0.e_josephson) < 1e-15);

    p = base;
    p.cell_period *= 2;
    p.stripe_separation *= 2;
    e = physical_to_energies(p);
    CHECK(rel(e.e_em, e0.e_em / 4) < 1e-15);

    // E_C = 2 e^2 / C_J in erg.
    CHECK(rel(e0.e_charging, 2 * cgs::elementary_charge * cgs::elementary_charge / 1.0e-3) < 1e-15);

    p = base;
    p.stripe_separation = 0;
    CHECK_THROWS_AS(physical_to_energies(p), std::domain_error);
}

TEST_CASE("cross_check residuals stay at machine precision") {
    for (auto [beta, gamma] : {std::pair{0.5, 1.0}, std::pair{0.1, 10.0}, std::pair{0.2, 0.2}}) {
        const auto r = cross_check(DimensionlessParamsd{beta, gamma});
        CHECK(r.max_residual() < 1e-12);
        CHECK(r.residual_a >= 0);
        CHECK(r.residual_homega < 1e-12);
    }
}

TEST_CASE("grid properties: identities, monotonicity of a, positivity") {
    const int n = 10;
    double prev_row[n];
    for (int i = 0; i < n; ++i) {
        const double beta = 0.05 + (1.0 - 0.05) * i / (n - 1);
        double prev = INFINITY;
        for (int j = 0; j < n; ++j) {
            const double gamma = 0.1 + (20.0 - 0.1) * j / (n - 1);
            CAPTURE(beta);
            CAPTURE(gamma);
            const DimensionlessParamsd p{beta, gamma};
            const auto np = normalized_from_dimensionless(p);
            CHECK(cross_check(p).max_residual() < 1e-12);
            CHECK(np.a < prev);  // decreasing in gamma
            if (i > 0) CHECK(np.a < prev_row[j]);  // decreasing in beta
            prev = np.a;
            prev_row[j] = np.a;
        }
    }
}

TEST_CASE("preset combos: finite positive outputs and delta > 2") {
    for (double beta : preset_betas) {
        for (double gamma : preset_gammas) {
            const auto np = normalized_from_dimensionless(DimensionlessParamsd{beta, gamma});
            const auto d = derived_from_energies(energies_from_dimensionless(DimensionlessParamsd{beta, gamma}, 1.0));
            for (double v : {np.a, np.b, np.delta, np.homega_over_2J, d.photon_quantum, d.hopping, d.attractive,
                             d.repulsive, d.splitting, d.qubit_eps}) {
                CHECK(std::isfinite(v));
                CHECK(v > 0);
            }
            CHECK(np.delta > 2.0);
        }
    }
}

TEST_CASE("long double instantiation agrees with double") {
    const auto ld = normalized_from_dimensionless(DimensionlessParams<long double>{0.1L, 1.0L});
    const auto d = normalized_from_dimensionless(DimensionlessParamsd{0.1, 1.0});
    CHECK(rel(static_cast<double>(ld.delta), d.delta) < 1e-15);
    CHECK(static_cast<double>(cross_check(DimensionlessParams<long double>{0.1L, 1.0L}).max_residual()) < 1e-15);
}
