// spectrum.hpp — Free continuum, effective coupling and the two qubit-photon bound-state bands
//
// Energies are eps = (E - hbar omega) / 2J, momenta are in radians per cell.
// A bound state at total momentum K solves
//
//     sqrt((delta - eps)^2 - cos^2(K/2)) = -sgn(delta - eps) a'(K, eps),
//     a'(K, eps) = -a + b^2 / (eps + cos K),
//
// and only the attractive branch eps < delta is solved numerically. Below the free
// continuum there are exactly two roots: Band 1 between the zero of a' and the continuum
// edge, and Band 2 just below the pole eps = -cos K. The residual is strictly decreasing
// on both brackets, so plain bisection is used.

#pragma once

#include "qpband/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpband {

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Band { band1, band2 };

inline const char* to_string(Band b) { return b == Band::band1 ? "band1" : "band2"; }

enum class Branch { attractive, repulsive };

template <typename Scalar>
struct ContinuumSlice {
    Scalar k;
    Scalar lo;
    Scalar hi;
};

template <typename Scalar>
struct BandPoint {
    Scalar k;
    Scalar eps;
    Band band;
    Scalar residual;
    Scalar a_prime;
};

template <typename Scalar>
struct KGrid {
    std::size_t count;
    Scalar lo;
    Scalar hi;
};

template <typename Scalar>
struct BandCurve {
    Band band;
    NormalizedParams<Scalar> params;
    KGrid<Scalar> grid;
    std::vector<Scalar> k;
    std::vector<std::optional<BandPoint<Scalar>>> points;  // nullopt marks a gap
    std::vector<std::string> errors;                       // per point, empty when none
};

template <typename Scalar>
struct BandScan {
    BandCurve<Scalar> band1;
    BandCurve<Scalar> band2;
    std::vector<ContinuumSlice<Scalar>> continuum;
    std::vector<Scalar> photon_line;
};

template <typename Scalar>
struct EdgeRoots {
    bool real;          // false when the square root argument is negative
    Scalar plus;        // eps_+(pi)
    Scalar minus;       // eps_-(pi)
    Scalar expansion;   // a gamma / (1 - delta -+ a), the small parameter of the asymptotics
    bool expansion_valid = true;
};

template <typename Scalar>
struct RepulsiveExistence {
    bool exists;
    Scalar margin;  // 1 + a (gamma/2)^2 - delta - a
};

template <typename Scalar>
struct Flatness {
    Scalar bandwidth;
    Scalar relative;
};

template <typename Scalar>
inline constexpr Scalar default_tolerance = Scalar(1e-12);

namespace detail {

template <typename Scalar>
void require_momentum(Scalar k, const char* what) {
    using std::abs;
    // Grid points are built as ratio * pi, so allow a few ulps past pi.
    if (!(abs(k) <= std::numbers::pi_v<Scalar> * (Scalar(1) + 8 * std::numeric_limits<Scalar>::epsilon()))) {
        throw std::domain_error(std::string(what) + " must lie in [-pi, pi]");
    }
}

template <typename Scalar>
void require_tolerance(Scalar tol) {
    if (!(tol > Scalar(0))) throw std::domain_error("tolerance must be > 0");
}

template <typename Scalar>
Scalar half_cos(Scalar k) {
    using std::abs;
    using std::cos;
    return abs(cos(k / Scalar(2)));
}

// Residual without the domain checks; the continuum square root is clamped at zero.
template <typename Scalar>
Scalar residual_unchecked(Scalar eps, Scalar k, const NormalizedParams<Scalar>& np) {
    using std::cos;
    using std::max;
    using std::sqrt;
    const Scalar c = half_cos(k);
    const Scalar gap = np.delta - eps;
    const Scalar root = sqrt(max(Scalar(0), (gap - c) * (gap + c)));
    const Scalar a_prime = -np.a + np.b * np.b / (eps + cos(k));
    // gap == 0 takes the limit from below, where the bound states live.
    return gap >= Scalar(0) ? root + a_prime : root - a_prime;
}

template <typename Scalar, typename F>
Scalar bisect_decreasing(F&& g, Scalar lo, Scalar hi, Scalar tol) {
    using std::abs;
    constexpr int max_iterations = 200;
    // Keep going past the width tolerance until |G| is small: near the photon line the
    // slope of G is large and a width-converged midpoint can still miss by 1e-9 in G.
    constexpr Scalar residual_target = Scalar(1e-11);
    Scalar best = lo + (hi - lo) / Scalar(2);
    Scalar best_value = std::numeric_limits<Scalar>::infinity();
    for (int it = 0; it < max_iterations; ++it) {
        const Scalar mid = lo + (hi - lo) / Scalar(2);
        if (mid <= lo || mid >= hi) break;
        const Scalar value = g(mid);
        if (abs(value) < best_value) {
            best = mid;
            best_value = abs(value);
        }
        if (value == Scalar(0)) break;
        if (value > Scalar(0)) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= tol && best_value <= residual_target) break;
    }
    return best;
}

}  // namespace detail

template <typename Scalar>
Scalar continuum_dispersion(Scalar q, Scalar k, const NormalizedParams<Scalar>& np) {
    using std::cos;
    detail::require_momentum(q, "q");
    detail::require_momentum(k, "K");
    return np.delta - cos(q) * cos(k / Scalar(2));
}

template <typename Scalar>
ContinuumSlice<Scalar> continuum_edges(Scalar k, const NormalizedParams<Scalar>& np) {
    detail::require_momentum(k, "K");
    const Scalar c = detail::half_cos(k);
    return {k, np.delta - c, np.delta + c};
}

// Bare photon dispersion, -cos K in units of 2J.
template <typename Scalar>
Scalar photon_line(Scalar k) {
    using std::cos;
    detail::require_momentum(k, "K");
    return -cos(k);
}

// Band 1 in the absence of the repulsive channel (b = 0): delta - sqrt(a^2 + cos^2(K/2)).
template <typename Scalar>
Scalar pure_attractive_band(Scalar k, const NormalizedParams<Scalar>& np) {
    using std::sqrt;
    detail::require_momentum(k, "K");
    const Scalar c = detail::half_cos(k);
    return np.delta - sqrt(np.a * np.a + c * c);
}

template <typename Scalar>
Scalar effective_coupling(Scalar eps, Scalar k, const NormalizedParams<Scalar>& np) {
    using std::abs;
    using std::cos;
    using std::max;
    const Scalar denom = eps + cos(k);
    if (np.b != Scalar(0) &&
        abs(denom) <= std::numeric_limits<Scalar>::epsilon() * max(Scalar(1), abs(eps))) {
        throw PoleError("effective coupling evaluated at the photon line eps = -cos K");
    }
    if (np.b == Scalar(0)) return -np.a;
    return -np.a + np.b * np.b / denom;
}

// G(eps) = sqrt((delta - eps)^2 - cos^2(K/2)) + sgn(delta - eps) a'(K, eps); zero at a bound state.
template <typename Scalar>
Scalar residual(Scalar eps, Scalar k, const NormalizedParams<Scalar>& np) {
    using std::abs;
    using std::sqrt;
    detail::require_momentum(k, "K");
    const Scalar c = detail::half_cos(k);
    const Scalar gap = np.delta - eps;
    // Points on the edge itself are accepted up to the round-off of delta - eps.
    const Scalar slack = Scalar(8) * std::numeric_limits<Scalar>::epsilon() *
                         std::max({Scalar(1), abs(np.delta), abs(eps)});
    if (abs(gap) < c - slack) {
        throw std::domain_error("residual evaluated inside the free continuum");
    }
    const Scalar radicand = std::max(Scalar(0), (gap - c) * (gap + c));
    const Scalar a_prime = effective_coupling(eps, k, np);
    return gap >= Scalar(0) ? sqrt(radicand) + a_prime : sqrt(radicand) - a_prime;
}

template <typename Scalar>
std::optional<BandPoint<Scalar>> solve_band1(Scalar k, const NormalizedParams<Scalar>& np,
                                             Scalar tol = default_tolerance<Scalar>) {
    using std::cos;
    detail::require_tolerance(tol);
    detail::require_momentum(k, "K");
    const Scalar c = detail::half_cos(k);
    const Scalar hi = np.delta - c;
    auto g = [&](Scalar e) { return detail::residual_unchecked(e, k, np); };

    Scalar lo;
    if (np.b > Scalar(0)) {
        if (!(np.a > Scalar(0))) return std::nullopt;
        // a' vanishes here and is negative above it.
        lo = -cos(k) + np.b * np.b / np.a;
    } else {
        lo = hi - np.a - Scalar(1);
    }
    if (!(lo < hi)) return std::nullopt;
    if (!(g(lo) > Scalar(0)) || !(g(hi) < Scalar(0))) return std::nullopt;

    const Scalar eps = detail::bisect_decreasing(g, lo, hi, tol);
    return BandPoint<Scalar>{k, eps, Band::band1, g(eps), effective_coupling(eps, k, np)};
}

template <typename Scalar>
std::optional<BandPoint<Scalar>> solve_band2(Scalar k, const NormalizedParams<Scalar>& np,
                                             Scalar tol = default_tolerance<Scalar>) {
    using std::cos;
    detail::require_tolerance(tol);
    detail::require_momentum(k, "K");
    if (!(np.b > Scalar(0))) return std::nullopt;
    const Scalar pole = -cos(k);
    if (!(pole < np.delta - detail::half_cos(k))) return std::nullopt;
    auto g = [&](Scalar e) { return detail::residual_unchecked(e, k, np); };

    // G -> -inf just below the pole and -> +inf far below; find a positive left end.
    Scalar step = np.b * np.b / (np.delta + np.a);
    Scalar lo = pole - step;
    for (int it = 0; !(g(lo) > Scalar(0)); ++it) {
        if (it > 2000 || !std::isfinite(static_cast<double>(lo))) {
            throw std::runtime_error("solve_band2: failed to bracket the root");
        }
        step *= Scalar(2);
        lo = pole - step;
    }
    const Scalar eps = detail::bisect_decreasing(g, lo, pole, tol);
    if (!(eps < pole)) return std::nullopt;
    return BandPoint<Scalar>{k, eps, Band::band2, g(eps), effective_coupling(eps, k, np)};
}

// Band edges at K = pi from the quadratic (eps - delta)(eps - 1) = -+a (eps - 1) + b^2.
// a gamma is written as 2b, which is exact for parameters built from (beta, gamma).
template <typename Scalar>
EdgeRoots<Scalar> band_edge_closed_form(const NormalizedParams<Scalar>& np, Branch branch) {
    using std::abs;
    using std::sqrt;
    const Scalar two_b = Scalar(2) * np.b;
    EdgeRoots<Scalar> out{};
    if (branch == Branch::attractive) {
        const Scalar half_sum = (Scalar(1) + np.delta - np.a) / Scalar(2);
        const Scalar split = Scalar(1) - np.delta + np.a;
        const Scalar sgn = split < Scalar(0) ? Scalar(-1) : Scalar(1);
        const Scalar half_width = sgn * sqrt(split * split + two_b * two_b) / Scalar(2);
        out.real = true;
        out.plus = half_sum + half_width;
        out.minus = half_sum - half_width;
        out.expansion = split != Scalar(0) ? two_b / split : std::numeric_limits<Scalar>::infinity();
    } else {
        const Scalar half_sum = (Scalar(1) + np.delta + np.a) / Scalar(2);
        const Scalar split = Scalar(1) - np.delta - np.a;
        const Scalar disc = split * split - two_b * two_b;
        out.expansion = split != Scalar(0) ? two_b / split : std::numeric_limits<Scalar>::infinity();
        if (disc < Scalar(0)) {
            out.real = false;
            out.plus = out.minus = std::numeric_limits<Scalar>::quiet_NaN();
        } else {
            const Scalar sgn = split < Scalar(0) ? Scalar(-1) : Scalar(1);
            const Scalar half_width = sgn * sqrt(disc) / Scalar(2);
            out.real = true;
            out.plus = half_sum + half_width;
            out.minus = half_sum - half_width;
        }
    }
    out.expansion_valid = abs(out.expansion) < Scalar(1);
    return out;
}

// Second-order expansion of band_edge_closed_form in the small parameter a gamma / (1 - delta -+ a).
template <typename Scalar>
EdgeRoots<Scalar> band_edge_asymptotic(const NormalizedParams<Scalar>& np, Branch branch) {
    using std::abs;
    const Scalar b2 = np.b * np.b;
    EdgeRoots<Scalar> out{};
    out.real = true;
    if (branch == Branch::attractive) {
        const Scalar split = Scalar(1) - np.delta + np.a;
        out.minus = np.delta - np.a - b2 / split;
        out.plus = Scalar(1) + b2 / split;
        out.expansion = Scalar(2) * np.b / split;
    } else {
        const Scalar split = Scalar(1) - np.delta - np.a;
        out.minus = np.delta + np.a + b2 / split;
        out.plus = Scalar(1) - b2 / split;
        out.expansion = Scalar(2) * np.b / split;
    }
    out.expansion_valid = abs(out.expansion) < Scalar(1);
    return out;
}

// delta + a < 1 + a (gamma/2)^2, with a (gamma/2)^2 = b^2 / a.
template <typename Scalar>
RepulsiveExistence<Scalar> repulsive_existence(const NormalizedParams<Scalar>& np) {
    const Scalar interaction = np.b == Scalar(0) ? Scalar(0) : np.b * np.b / np.a;
    const Scalar margin = Scalar(1) + interaction - np.delta - np.a;
    return {margin > Scalar(0), margin};
}

// Uniform grid over [-pi, pi]; an odd count puts K = 0 and K = +-pi on the grid, and
// the grid is exactly symmetric under K -> -K.
template <typename Scalar>
std::vector<Scalar> make_k_grid(std::size_t count) {
    if (count < 3 || count % 2 == 0) {
        throw std::domain_error("k grid needs an odd number of points >= 3");
    }
    std::vector<Scalar> k(count);
    const auto span = static_cast<long long>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const auto numer = 2 * static_cast<long long>(i) - span;
        k[i] = (Scalar(numer) / Scalar(span)) * std::numbers::pi_v<Scalar>;
    }
    return k;
}

template <typename Scalar>
BandScan<Scalar> scan_bands(const NormalizedParams<Scalar>& np, const std::vector<Scalar>& k_grid,
                            Scalar tol = default_tolerance<Scalar>) {
    detail::require_tolerance(tol);
    for (Scalar k : k_grid) detail::require_momentum(k, "K");
    if (!std::is_sorted(k_grid.begin(), k_grid.end())) {
        throw std::domain_error("k grid must be sorted");
    }
    const KGrid<Scalar> grid{k_grid.size(), k_grid.empty() ? Scalar(0) : k_grid.front(),
                             k_grid.empty() ? Scalar(0) : k_grid.back()};
    BandScan<Scalar> scan{{Band::band1, np, grid, k_grid, {}, {}},
                          {Band::band2, np, grid, k_grid, {}, {}},
                          {},
                          {}};
    for (Scalar k : k_grid) {
        scan.continuum.push_back(continuum_edges(k, np));
        scan.photon_line.push_back(photon_line(k));
        auto solve_into = [&](BandCurve<Scalar>& curve, auto&& solver) {
            try {
                curve.points.push_back(solver(k, np, tol));
                curve.errors.emplace_back();
            } catch (const std::exception& e) {
                curve.points.push_back(std::nullopt);
                curve.errors.emplace_back(e.what());
            }
        };
        solve_into(scan.band1, [](Scalar kk, const auto& p, Scalar t) { return solve_band1(kk, p, t); });
        solve_into(scan.band2, [](Scalar kk, const auto& p, Scalar t) { return solve_band2(kk, p, t); });
    }
    return scan;
}

template <typename Scalar>
Flatness<Scalar> flatness(const BandCurve<Scalar>& curve) {
    Scalar lo = std::numeric_limits<Scalar>::infinity();
    Scalar hi = -std::numeric_limits<Scalar>::infinity();
    bool any = false;
    for (const auto& p : curve.points) {
        if (!p) continue;
        any = true;
        lo = std::min(lo, p->eps);
        hi = std::max(hi, p->eps);
    }
    if (!any) throw std::domain_error("flatness of an empty band");
    const Scalar width = hi - lo;
    return {width, width / curve.params.delta};
}

}  // namespace qpband
