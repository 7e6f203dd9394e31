// Finite-ring exact diagonalization: construction, free spectra, block/full equivalence,
// secular identity and agreement with the transcendental solver.

#include <doctest.h>

#include "qpband/ring_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace qpband;

namespace {

constexpr double pi = std::numbers::pi;

NormalizedParamsd preset(double beta, double gamma) {
    return normalized_from_dimensionless(DimensionlessParamsd{beta, gamma});
}

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> to_vector(const VectorX<double>& v) { return {v.data(), v.data() + v.size()}; }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("ring momenta are folded into (-pi, pi]") {
    CHECK(ring_momentum<double>(8, 0) == 0.0);
    CHECK(ring_momentum<double>(8, 4) == pi);
    CHECK(ring_momentum<double>(8, 5) == doctest::Approx(-3 * pi / 4));
    CHECK(ring_momentum<double>(8, 1) == doctest::Approx(pi / 4));
    CHECK_THROWS_AS(ring_momentum<double>(8, 8), std::domain_error);
}

TEST_CASE("full Hamiltonian: dimension, symmetry, preconditions") {
    const auto np = preset(0.5, 1.0);
    const auto h = build_full_hamiltonian(RingModel<double>::full(4, np));
    CHECK(h.rows() == 20);
    CHECK(h.cols() == 20);
    CHECK(h == h.transpose());
    CHECK(h.allFinite());
    CHECK_THROWS_AS(build_full_hamiltonian(RingModel<double>::full(2, np)), std::domain_error);
    CHECK_THROWS_AS(build_full_hamiltonian(RingModel<double>::full(7, np)), std::domain_error);
    CHECK_THROWS_AS(build_full_hamiltonian(RingModel<double>::block(8, np, 0)), std::domain_error);

    // Gershgorin bound.
    const auto spec = eigensolve(h);
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        bool inside = false;
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            const double radius = h.row(r).cwiseAbs().sum() - std::abs(h(r, r));
            inside = inside || std::abs(spec.eigenvalues(i) - h(r, r)) <= radius + 1e-12;
        }
        CHECK(inside);
    }
}

TEST_CASE("free full spectrum is the analytic tensor continuum plus the photon band") {
    auto np = preset(0.5, 1.0);
    np.a = 0;
    np.b = 0;
    const std::size_t n = 8;
    std::vector<double> expected;
    for (std::size_t j = 0; j < n; ++j) expected.push_back(-std::cos(2 * pi * j / n));
    for (std::size_t j1 = 0; j1 < n; ++j1) {
        for (std::size_t j2 = 0; j2 < n; ++j2) {
            // Photon and qubit excitation each hop with amplitude 1/4.
            expected.push_back(np.delta - 0.5 * (std::cos(2 * pi * j1 / n) + std::cos(2 * pi * j2 / n)));
        }
    }
    const auto spec = eigensolve(build_full_hamiltonian(RingModel<double>::full(n, np)));
    CHECK(max_abs_diff(to_vector(spec.eigenvalues), sorted(expected)) < 1e-12);
}

TEST_CASE("k block: dimension, symmetry, free spectrum") {
    auto np = preset(0.5, 1.0);
    CHECK(build_k_block(RingModel<double>::block(4, np, 0)).rows() == 5);
    CHECK_THROWS_AS(build_k_block(RingModel<double>::block(8, np, 9)), std::domain_error);
    CHECK_THROWS_AS(build_k_block(RingModel<double>::full(8, np)), std::domain_error);

    np.a = 0;
    np.b = 0;
    const std::size_t n = 16;
    for (std::size_t j = 0; j < n; ++j) {
        CAPTURE(j);
        const auto model = RingModel<double>::block(n, np, j);
        const auto h = build_k_block(model);
        CHECK(h == h.transpose());
        const double k = ring_momentum<double>(n, j);
        std::vector<double> expected{photon_line(k)};
        for (std::size_t m = 0; m < n; ++m) {
            const double q = (2 * pi * m + (j % 2 ? pi : 0.0)) / n;
            expected.push_back(np.delta - std::cos(k / 2) * std::cos(q));
        }
        const auto spec = eigensolve(model);
        CHECK(max_abs_diff(to_vector(spec.eigenvalues), sorted(expected)) < 1e-12);
        // Nothing sits above the continuum beyond round-off of the top free level.
        CHECK(spec.eigenvalues.maxCoeff() <= continuum_edges(k, np).hi + 1e-12);
        const auto bound = extract_bound_states(spec, k, np, n);
        CHECK_FALSE(bound.band1);
        CHECK_FALSE(bound.band2);
    }
}

TEST_CASE("eigensolve basics and errors") {
    MatrixX<double> one(1, 1);
    one << 3.5;
    CHECK(eigensolve(one).eigenvalues(0) == 3.5);

    MatrixX<double> two(2, 2);
    two << 0, 0.7, 0.7, 0;
    const auto s = eigensolve(two);
    CHECK(s.eigenvalues(0) == doctest::Approx(-0.7));
    CHECK(s.eigenvalues(1) == doctest::Approx(0.7));

    MatrixX<double> bad(2, 2);
    bad << 0, NAN, NAN, 0;
    CHECK_THROWS_AS(eigensolve(bad), std::domain_error);
    MatrixX<double> asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS(eigensolve(asym), std::domain_error);
    CHECK_THROWS_AS(eigensolve(MatrixX<double>(2, 3)), std::domain_error);
}

TEST_CASE("block union equals the full real-space spectrum") {
    for (std::size_t n : {8u, 16u, 32u}) {
        for (auto [beta, gamma] : {std::pair{0.5, 1.0}, std::pair{0.1, 10.0}}) {
            CAPTURE(n);
            const auto np = preset(beta, gamma);
            std::vector<double> blocks;
            for (std::size_t j = 0; j < n; ++j) {
                const auto s = eigensolve(RingModel<double>::block(n, np, j));
                for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) blocks.push_back(s.eigenvalues(i));
            }
            const auto full = eigensolve(RingModel<double>::full(n, np));
            CHECK(max_abs_diff(to_vector(full.eigenvalues), sorted(blocks)) < 1e-9);
        }
    }
}

TEST_CASE("Schur complement of u_K adds b^2 / (eps + cos K) to the l = 0 defect") {
    const auto np = preset(0.2, 5.0);
    const std::size_t n = 12;
    for (std::size_t j : {0u, 3u, 6u, 7u}) {
        const auto h = build_k_block(RingModel<double>::block(n, np, j));
        const auto ni = static_cast<Eigen::Index>(n);
        const double k = ring_momentum<double>(n, j);
        for (double eps : {-4.0, 0.37, 50.0}) {
            MatrixX<double> reduced = h.topLeftCorner(ni, ni);
            const double schur = h(0, ni) * h(ni, 0) / (eps - h(ni, ni));
            reduced(0, 0) += schur;
            const double expected = np.delta + effective_coupling(eps, k, np);
            CHECK(reduced(0, 0) == doctest::Approx(expected).epsilon(1e-15));
        }
    }
}

TEST_CASE("secular identity holds for every block eigenvalue outside the continuum") {
    for (auto [beta, gamma] : {std::pair{0.1, 1.0}, std::pair{0.5, 0.2}, std::pair{0.2, 10.0}}) {
        const auto np = preset(beta, gamma);
        const std::size_t n = 32;
        for (std::size_t j = 0; j < n; ++j) {
            const auto model = RingModel<double>::block(n, np, j);
            const auto s = eigensolve(model, true);
            const auto w = classification_window(model);
            const double margin = 1e-12 * np.delta;
            int outside = 0;
            for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
                const double e = s.eigenvalues(i);
                if (e >= w.lo - margin && e <= w.hi + margin) continue;
                // At K = pi the continuum collapses onto delta; those states never touch l = 0.
                if (std::abs((*s.eigenvectors)(0, i)) < 1e-8) continue;
                ++outside;
                CHECK(std::abs(secular_residual(e, n, j, np)) < 1e-9);
            }
            CHECK(outside >= 2);
        }
    }
}

TEST_CASE("bound states from the oracle match the solver at K = pi") {
    const auto np = preset(0.1, 1.0);
    const std::size_t n = 64;
    const auto model = RingModel<double>::block(n, np, n / 2);
    const auto s = eigensolve(model);
    const auto b = extract_bound_states(s, pi, np, n);
    REQUIRE(b.band1);
    REQUIRE(b.band2);
    CHECK(b.band1->resolvable);
    CHECK(b.band2->resolvable);
    CHECK(std::abs(b.band1->eps - 155.69802442856427) < 1e-6);
    CHECK(std::abs(b.band2->eps - 0.49498385458648065) < 1e-6);
}

TEST_CASE("weak binding next to the photon line is flagged unresolvable") {
    const auto np = preset(0.5, 0.2);
    const std::size_t n = 64;
    const auto s = eigensolve(RingModel<double>::block(n, np, 0));
    const auto b = extract_bound_states(s, 0.0, np, n);
    REQUIRE(b.band2);
    CHECK_FALSE(b.band2->resolvable);
    CHECK(b.band2->separation < b.band2->threshold);
    REQUIRE(b.band1);
    CHECK(b.band1->resolvable);
}

TEST_CASE("bound-state eigenvectors are localized and exchange symmetric") {
    const auto np = preset(0.2, 1.0);
    const std::size_t n = 32;
    for (std::size_t j : {0u, 5u, 16u, 27u}) {
        CAPTURE(j);
        const auto model = RingModel<double>::block(n, np, j);
        const auto s = eigensolve(model, true);
        const double k = ring_momentum<double>(n, j);
        const auto b = extract_bound_states(s, k, np, n);
        REQUIRE(b.band1);
        const auto vec = s.eigenvectors->col(*b.band1->index);
        const double c = std::abs(std::cos(k / 2));
        const double phi0 = std::abs(vec(0));
        // Lattice Green's function decay: |Phi_l| <= |Phi_0| (rho^l + rho^(N-l)) / (1 - rho^N).
        const double rho = c > 0 ? std::exp(-std::acosh((np.delta - b.band1->eps) / c)) : 0.0;
        for (Eigen::Index l = 1; l < static_cast<Eigen::Index>(n); ++l) {
            const double env = (std::pow(rho, l) + std::pow(rho, static_cast<double>(n) - l)) /
                               (1 - std::pow(rho, static_cast<double>(n)));
            CHECK(std::abs(vec(l)) <= phi0 * (1 + 1e-9));
            CHECK(std::abs(vec(l)) <= phi0 * env + 1e-12);
        }
        CHECK(exchange_asymmetry<double>(vec, j) < 1e-10);
    }
}

TEST_CASE("finite-size error of band 1 shrinks as the ring grows") {
    const auto np = preset(0.5, 10.0);  // weakest binding among the presets
    const double exact = solve_band1(0.0, np)->eps;
    double prev = INFINITY;
    for (std::size_t n : {16u, 32u, 64u}) {
        const auto s = eigensolve(RingModel<double>::block(n, np, 0));
        const auto b = extract_bound_states(s, 0.0, np, n);
        REQUIRE(b.band1);
        const double err = std::abs(b.band1->eps - exact);
        CHECK(err <= prev + 1e-12);
        prev = err;
    }
}

TEST_CASE("compare_with_solver: oracle equivalence at N = 32") {
    const auto r = compare_with_solver(preset(0.1, 1.0), 32, 1e-12, true);
    CHECK(r.points.size() == 32);
    CHECK(r.max_delta_band1 < 1e-6);
    CHECK(r.max_delta_band2 < 1e-4);
    CHECK(r.multiset_max_diff < 1e-9);
    CHECK(r.secular_max_residual < 1e-9);
    CHECK(r.max_exchange_asymmetry < 1e-9);
    for (const auto& p : r.points) {
        if (p.delta_band1) CHECK(*p.delta_band1 >= 0);
    }
    CHECK_THROWS_AS(compare_with_solver(preset(0.1, 1.0), 8), std::domain_error);
    CHECK_THROWS_AS(compare_with_solver(preset(0.1, 1.0), 15), std::domain_error);
}

TEST_CASE("compare_with_solver without interaction is vacuous but consistent") {
    auto np = preset(0.5, 1.0);
    np.a = 0;
    np.b = 0;
    const auto r = compare_with_solver(np, 16, 1e-12, true);
    for (const auto& p : r.points) {
        CHECK_FALSE(p.delta_band1);
        CHECK_FALSE(p.delta_band2);
    }
    CHECK(r.multiset_max_diff < 1e-9);
}
