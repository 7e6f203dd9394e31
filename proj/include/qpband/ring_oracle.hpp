// ring_oracle.hpp — Exact diagonalization of the one-photon sector on a finite ring
//
// Basis: one photon with every qubit in its ground state (amplitudes u_m), or one photon
// at site m together with one excited qubit at site n (amplitudes Psi_{m,n}). Energies
// are in units of 2J with hbar omega per photon removed:
//
//   u sector   : photon hopping -1/2 between neighbouring sites (periodic)
//   Psi sector : diagonal delta, -a when m == n, -1/4 for every nearest-neighbour move
//                of the photon and of the qubit excitation
//   coupling   : b between u_m and Psi_{m,m}
//
// At fixed total momentum K = 2 pi j / N the Psi sector reduces to a chain in the relative
// coordinate l = m - n with hopping -(1/2) cos(K/2). The wrap bond carries the phase
// e^{i K N / 2} = (-1)^j, so every block is real symmetric. The block keeps one extra
// state u_K with energy -cos K that couples to l = 0 with strength b.

#pragma once

#include "qpband/params.hpp"
#include "qpband/spectrum.hpp"

#include <Eigen/Dense>

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

enum class Representation { full_real_space, k_block };

enum class SpectralClass { bound_below, continuum, bound_above };

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct RingModel {
    std::size_t n_cells;
    NormalizedParams<Scalar> params;
    Representation representation = Representation::full_real_space;
    std::size_t k_index = 0;

    static RingModel full(std::size_t n, const NormalizedParams<Scalar>& np) {
        return {n, np, Representation::full_real_space, 0};
    }
    static RingModel block(std::size_t n, const NormalizedParams<Scalar>& np, std::size_t j) {
        return {n, np, Representation::k_block, j};
    }
};

template <typename Scalar>
struct SpectralResult {
    VectorX<Scalar> eigenvalues;                // ascending
    std::optional<MatrixX<Scalar>> eigenvectors;
    std::vector<SpectralClass> classification;
};

template <typename Scalar>
struct EnergyWindow {
    Scalar lo;
    Scalar hi;
};

template <typename Scalar>
struct BoundCandidate {
    Scalar eps;
    Scalar separation;  // distance from the reference edge
    Scalar threshold;   // resolvability threshold at this K
    bool resolvable;
    std::optional<Eigen::Index> index;  // column in SpectralResult, when known
};

template <typename Scalar>
struct BoundStates {
    std::optional<BoundCandidate<Scalar>> band1;
    std::optional<BoundCandidate<Scalar>> band2;
};

template <typename Scalar>
struct ComparisonPoint {
    std::size_t k_index;
    Scalar k;
    std::optional<Scalar> solver_band1;
    std::optional<Scalar> solver_band2;
    std::optional<BoundCandidate<Scalar>> oracle_band1;
    std::optional<BoundCandidate<Scalar>> oracle_band2;
    std::optional<Scalar> delta_band1;
    std::optional<Scalar> delta_band2;
    Scalar finite_size_estimate_band1 = 0;  // exp(-kappa N) for the Band 1 decay length
    bool finite_size_caveat = false;
    Scalar exchange_asymmetry = 0;         // max |Phi_l - (-1)^j Phi_{N-l}| over bound states
    Scalar secular_max_residual = 0;
};

template <typename Scalar>
struct ComparisonReport {
    std::size_t n_cells;
    NormalizedParams<Scalar> params;
    std::vector<ComparisonPoint<Scalar>> points;
    Scalar max_delta_band1 = 0;  // over resolvable points
    Scalar max_delta_band2 = 0;
    std::size_t unresolvable_band1 = 0;
    std::size_t unresolvable_band2 = 0;
    bool multiset_checked = false;
    Scalar multiset_max_diff = 0;  // full real-space spectrum vs union of K blocks
    Scalar secular_max_residual = 0;
    Scalar max_exchange_asymmetry = 0;
};

// Resolvability: a bound eigenvalue must sit more than this many free level spacings
// away from the edge it separates from.
inline constexpr double resolvability_factor = 5.0;
inline constexpr double multiset_tolerance = 1e-9;
inline constexpr double secular_tolerance = 1e-9;

namespace detail {

inline void require_ring_size(std::size_t n) {
    if (n < 4) throw std::domain_error("ring needs at least 4 cells");
    if (n % 2 != 0) throw std::domain_error("ring size must be even (odd N is unsupported)");
}

template <typename Scalar>
Scalar twist_sign(std::size_t j) {
    return j % 2 == 0 ? Scalar(1) : Scalar(-1);
}

template <typename Scalar>
Scalar edge_margin(const NormalizedParams<Scalar>& np) {
    using std::abs;
    const Scalar scale = std::max({Scalar(1), abs(np.delta) + abs(np.a), abs(np.b)});
    return Scalar(256) * std::numeric_limits<Scalar>::epsilon() * scale;
}

}  // namespace detail

// K = 2 pi j / N folded into (-pi, pi].
template <typename Scalar>
Scalar ring_momentum(std::size_t n, std::size_t j) {
    if (j >= n) throw std::domain_error("K index out of range");
    const auto jj = static_cast<long long>(j);
    const auto nn = static_cast<long long>(n);
    const long long folded = 2 * jj > nn ? jj - nn : jj;
    return (Scalar(2 * folded) / Scalar(nn)) * std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
MatrixX<Scalar> build_full_hamiltonian(const RingModel<Scalar>& m) {
    if (m.representation != Representation::full_real_space) {
        throw std::domain_error("build_full_hamiltonian needs a full_real_space model");
    }
    detail::require_ring_size(m.n_cells);
    const auto n = static_cast<Eigen::Index>(m.n_cells);
    const auto& np = m.params;
    const Eigen::Index dim = n + n * n;
    MatrixX<Scalar> h = MatrixX<Scalar>::Zero(dim, dim);
    auto wrap = [n](Eigen::Index i) { return (i + n) % n; };
    auto psi = [n](Eigen::Index photon, Eigen::Index qubit) { return n + photon * n + qubit; };

    const Scalar photon_hop = Scalar(-0.5);
    const Scalar pair_hop = Scalar(-0.25);
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, wrap(i + 1)) = photon_hop;
        h(wrap(i + 1), i) = photon_hop;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
            const Eigen::Index s = psi(p, q);
            h(s, s) = np.delta - (p == q ? np.a : Scalar(0));
            // Each bond is written once from its left end.
            h(s, psi(wrap(p + 1), q)) += pair_hop;
            h(psi(wrap(p + 1), q), s) += pair_hop;
            h(s, psi(p, wrap(q + 1))) += pair_hop;
            h(psi(p, wrap(q + 1)), s) += pair_hop;
        }
        h(p, psi(p, p)) = np.b;
        h(psi(p, p), p) = np.b;
    }
    return h;
}

template <typename Scalar>
MatrixX<Scalar> build_k_block(const RingModel<Scalar>& m) {
    using std::cos;
    if (m.representation != Representation::k_block) {
        throw std::domain_error("build_k_block needs a k_block model");
    }
    detail::require_ring_size(m.n_cells);
    const Scalar k = ring_momentum<Scalar>(m.n_cells, m.k_index);
    const auto n = static_cast<Eigen::Index>(m.n_cells);
    const auto& np = m.params;
    MatrixX<Scalar> h = MatrixX<Scalar>::Zero(n + 1, n + 1);
    const Scalar hop = Scalar(-0.5) * cos(k / Scalar(2));
    for (Eigen::Index l = 0; l < n; ++l) {
        h(l, l) = np.delta;
        if (l + 1 < n) {
            h(l, l + 1) = hop;
            h(l + 1, l) = hop;
        }
    }
    const Scalar wrap_hop = hop * detail::twist_sign<Scalar>(m.k_index);
    h(n - 1, 0) += wrap_hop;
    h(0, n - 1) += wrap_hop;
    h(0, 0) -= np.a;
    h(n, n) = -cos(k);
    h(0, n) = np.b;
    h(n, 0) = np.b;
    return h;
}

// Continuum window used for classification: the relative-motion band at the block's K,
// or [delta - 1, delta + 1] for the real-space Hamiltonian.
template <typename Scalar>
EnergyWindow<Scalar> classification_window(const RingModel<Scalar>& m) {
    if (m.representation == Representation::full_real_space) {
        return {m.params.delta - Scalar(1), m.params.delta + Scalar(1)};
    }
    const auto slice = continuum_edges(ring_momentum<Scalar>(m.n_cells, m.k_index), m.params);
    return {slice.lo, slice.hi};
}

template <typename Scalar>
SpectralResult<Scalar> eigensolve(const MatrixX<Scalar>& h,
                                  std::optional<EnergyWindow<Scalar>> window = std::nullopt,
                                  bool with_vectors = false) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw std::domain_error("eigensolve: matrix must be square and non-empty");
    }
    if (!h.allFinite()) throw std::domain_error("eigensolve: non-finite matrix entry");
    if (!(h - h.transpose()).isZero(Scalar(0))) {
        throw std::domain_error("eigensolve: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(
        h, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigensolve: eigen decomposition failed");
    }
    SpectralResult<Scalar> out;
    out.eigenvalues = solver.eigenvalues();
    if (with_vectors) out.eigenvectors = solver.eigenvectors();
    out.classification.reserve(static_cast<std::size_t>(h.rows()));
    for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
        const Scalar e = out.eigenvalues(i);
        if (window && e < window->lo) {
            out.classification.push_back(SpectralClass::bound_below);
        } else if (window && e > window->hi) {
            out.classification.push_back(SpectralClass::bound_above);
        } else {
            out.classification.push_back(SpectralClass::continuum);
        }
    }
    return out;
}

template <typename Scalar>
SpectralResult<Scalar> eigensolve(const RingModel<Scalar>& m, bool with_vectors = false) {
    const auto h = m.representation == Representation::full_real_space ? build_full_hamiltonian(m)
                                                                       : build_k_block(m);
    return eigensolve(h, std::optional<EnergyWindow<Scalar>>(classification_window(m)), with_vectors);
}

// Free level spacing next to the relative-motion edge and next to the photon line.
template <typename Scalar>
Scalar continuum_edge_spacing(std::size_t n, Scalar k) {
    using std::abs;
    using std::cos;
    const Scalar dq = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n);
    return abs(cos(k / Scalar(2))) * (Scalar(1) - cos(dq));
}

template <typename Scalar>
Scalar photon_line_spacing(std::size_t n, Scalar k) {
    using std::abs;
    using std::cos;
    const Scalar dq = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n);
    return std::max(abs(cos(k) - cos(k + dq)), abs(cos(k) - cos(k - dq)));
}

// Band 1 is the eigenvalue in (-cos K, delta - |cos(K/2)|), Band 2 the eigenvalue below -cos K.
template <typename Scalar>
BoundStates<Scalar> extract_bound_states(const SpectralResult<Scalar>& r, Scalar k,
                                         const NormalizedParams<Scalar>& np, std::size_t n_cells) {
    using std::cos;
    const Scalar margin = detail::edge_margin(np);
    const Scalar pole = -cos(k);
    const Scalar edge = continuum_edges(k, np).lo;
    const Scalar thr1 = Scalar(resolvability_factor) * continuum_edge_spacing(n_cells, k);
    const Scalar thr2 = Scalar(resolvability_factor) * photon_line_spacing(n_cells, k);

    BoundStates<Scalar> out;
    for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
        const Scalar e = r.eigenvalues(i);
        if (e > pole + margin && e < edge - margin) {
            if (out.band1) throw std::runtime_error("extract_bound_states: ambiguous Band 1 window");
            const Scalar sep = edge - e;
            out.band1 = BoundCandidate<Scalar>{e, sep, thr1, sep > thr1, i};
        } else if (e < pole - margin) {
            if (out.band2) throw std::runtime_error("extract_bound_states: ambiguous Band 2 window");
            const Scalar sep = pole - e;
            out.band2 = BoundCandidate<Scalar>{e, sep, thr2, sep > thr2, i};
        }
    }
    return out;
}

// 1 - (1/N) sum_q a'(K, eps) / (eps - delta + cos(K/2) cos q) over the twisted ring momenta
// q = (2 pi m + pi (j mod 2)) / N. Zero at every block eigenvalue with weight on l = 0.
template <typename Scalar>
Scalar secular_residual(Scalar eps, std::size_t n_cells, std::size_t k_index,
                        const NormalizedParams<Scalar>& np) {
    using std::cos;
    const Scalar k = ring_momentum<Scalar>(n_cells, k_index);
    const Scalar c = cos(k / Scalar(2));
    const Scalar a_prime = effective_coupling(eps, k, np);
    const Scalar shift = k_index % 2 == 0 ? Scalar(0) : std::numbers::pi_v<Scalar>;
    Scalar sum = 0;
    for (std::size_t m = 0; m < n_cells; ++m) {
        const Scalar q = (Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(m) + shift) / Scalar(n_cells);
        sum += Scalar(1) / (eps - np.delta + c * cos(q));
    }
    return Scalar(1) - a_prime * sum / Scalar(n_cells);
}

// Largest |Phi_l - (-1)^j Phi_{N-l}| / |Phi_0|; zero when Psi_{m,n} = Psi_{n,m}.
template <typename Scalar>
Scalar exchange_asymmetry(const VectorX<Scalar>& block_vector, std::size_t k_index) {
    using std::abs;
    const auto n = block_vector.size() - 1;
    const Scalar tw = detail::twist_sign<Scalar>(k_index);
    const Scalar phi0 = abs(block_vector(0));
    if (phi0 == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    Scalar worst = 0;
    for (Eigen::Index l = 1; l < n; ++l) {
        worst = std::max(worst, abs(block_vector(l) - tw * block_vector(n - l)) / phi0);
    }
    return worst;
}

template <typename Scalar>
ComparisonReport<Scalar> compare_with_solver(const NormalizedParams<Scalar>& np, std::size_t n_cells,
                                             Scalar tol = default_tolerance<Scalar>,
                                             bool check_full_spectrum = true) {
    using std::abs;
    using std::acosh;
    using std::cos;
    using std::exp;
    detail::require_ring_size(n_cells);
    if (n_cells < 16) throw std::domain_error("compare_with_solver needs N >= 16");

    ComparisonReport<Scalar> report{n_cells, np, {}, 0, 0, 0, 0, false, 0, 0, 0};
    std::vector<Scalar> block_union;
    block_union.reserve(n_cells * (n_cells + 1));
    const Scalar margin = detail::edge_margin(np);

    for (std::size_t j = 0; j < n_cells; ++j) {
        const auto model = RingModel<Scalar>::block(n_cells, np, j);
        const auto spec = eigensolve(model, true);
        for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) block_union.push_back(spec.eigenvalues(i));

        ComparisonPoint<Scalar> pt;
        pt.k_index = j;
        pt.k = ring_momentum<Scalar>(n_cells, j);
        if (auto s = solve_band1(pt.k, np, tol)) pt.solver_band1 = s->eps;
        if (auto s = solve_band2(pt.k, np, tol)) pt.solver_band2 = s->eps;
        const auto bound = extract_bound_states(spec, pt.k, np, n_cells);
        pt.oracle_band1 = bound.band1;
        pt.oracle_band2 = bound.band2;
        if (pt.oracle_band1 && pt.solver_band1) pt.delta_band1 = abs(pt.oracle_band1->eps - *pt.solver_band1);
        if (pt.oracle_band2 && pt.solver_band2) pt.delta_band2 = abs(pt.oracle_band2->eps - *pt.solver_band2);

        const Scalar c = abs(cos(pt.k / Scalar(2)));
        if (pt.solver_band1 && c > Scalar(0)) {
            const Scalar ratio = (np.delta - *pt.solver_band1) / c;
            pt.finite_size_estimate_band1 = exp(-Scalar(n_cells) * acosh(ratio));
        }
        pt.finite_size_caveat = pt.finite_size_estimate_band1 > Scalar(secular_tolerance) ||
                                (pt.oracle_band1 && !pt.oracle_band1->resolvable) ||
                                (pt.oracle_band2 && !pt.oracle_band2->resolvable);

        // Secular identity and exchange symmetry for every eigenvalue outside the continuum.
        const auto& vecs = *spec.eigenvectors;
        const auto window = classification_window(model);
        for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
            const Scalar e = spec.eigenvalues(i);
            if (e > window.lo - margin && e < window.hi + margin) continue;
            if (abs(vecs(0, i)) < Scalar(1e-8)) continue;  // decoupled from l = 0
            pt.secular_max_residual =
                std::max(pt.secular_max_residual, abs(secular_residual(e, n_cells, j, np)));
            pt.exchange_asymmetry =
                std::max(pt.exchange_asymmetry, exchange_asymmetry<Scalar>(vecs.col(i), j));
        }

        if (pt.delta_band1) {
            if (pt.oracle_band1->resolvable) {
                report.max_delta_band1 = std::max(report.max_delta_band1, *pt.delta_band1);
            } else {
                ++report.unresolvable_band1;
            }
        }
        if (pt.delta_band2) {
            if (pt.oracle_band2->resolvable) {
                report.max_delta_band2 = std::max(report.max_delta_band2, *pt.delta_band2);
            } else {
                ++report.unresolvable_band2;
            }
        }
        report.secular_max_residual = std::max(report.secular_max_residual, pt.secular_max_residual);
        report.max_exchange_asymmetry = std::max(report.max_exchange_asymmetry, pt.exchange_asymmetry);
        report.points.push_back(pt);
    }

    if (check_full_spectrum) {
        report.multiset_checked = true;
        const auto full = eigensolve(RingModel<Scalar>::full(n_cells, np));
        std::sort(block_union.begin(), block_union.end());
        for (std::size_t i = 0; i < block_union.size(); ++i) {
            report.multiset_max_diff = std::max(
                report.multiset_max_diff, abs(full.eigenvalues(static_cast<Eigen::Index>(i)) - block_union[i]));
        }
    }
    return report;
}

}  // namespace qpband
