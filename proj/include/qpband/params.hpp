// params.hpp — Energy scales, couplings and normalized parameters of the qubit chain
//
// Three equivalent parameterizations are provided:
//   PhysicalParams  (I_c, C_J, l, d) -> EnergyScales (E_J, E_C, E_em)
//   EnergyScales    -> DerivedParams (hw, J, A, B, Delta, eps, eta)
//   DimensionlessParams (beta, gamma) -> NormalizedParams (a, b, delta, hw/2J)
// Everything in NormalizedParams is measured in units of 2J.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qpband {

// Gaussian-CGS constants (CODATA 2018 exact/recommended values).
namespace cgs {
inline constexpr double elementary_charge = 4.803204712570263e-10;  // statC
inline constexpr double planck = 6.62607015e-27;                     // erg s
inline constexpr double speed_of_light = 2.99792458e10;              // cm / s
inline constexpr double flux_quantum = planck * speed_of_light / (2.0 * elementary_charge);
inline constexpr double pi = 3.14159265358979323846;
}  // namespace cgs

template <typename Scalar>
struct PhysicalParams {
    Scalar critical_current;     // statampere
    Scalar junction_capacitance; // cm
    Scalar cell_period;          // cm
    Scalar stripe_separation;    // cm
};

template <typename Scalar>
struct EnergyScales {
    Scalar e_josephson;
    Scalar e_charging;
    Scalar e_em;
};

template <typename Scalar>
struct DimensionlessParams {
    Scalar beta;   // sqrt(E_em / E_J), dimensionless speed of light
    Scalar gamma;  // E_C / E_J
};

template <typename Scalar>
struct DerivedParams {
    Scalar photon_quantum;  // hbar * omega
    Scalar hopping;         // J
    Scalar attractive;      // A
    Scalar repulsive;       // B
    Scalar splitting;       // Delta = 2 eps
    Scalar qubit_eps;       // sqrt(E_J^2 + E_C^2)
    Scalar mixing_angle;    // eta, sin(eta) <= 0, cos(eta) > 0
};

template <typename Scalar>
struct NormalizedParams {
    Scalar a;               // A / 2J
    Scalar b;               // B / 2J
    Scalar delta;           // Delta / 2J
    Scalar homega_over_2J;  // hbar omega / 2J
};

using PhysicalParamsd = PhysicalParams<double>;
using EnergyScalesd = EnergyScales<double>;
using DimensionlessParamsd = DimensionlessParams<double>;
using DerivedParamsd = DerivedParams<double>;
using NormalizedParamsd = NormalizedParams<double>;

namespace detail {
template <typename Scalar>
void require_positive(Scalar value, const char* what) {
    if (!(value > Scalar(0)) || !std::isfinite(static_cast<double>(value))) {
        throw std::domain_error(std::string(what) + " must be finite and > 0");
    }
}
}  // namespace detail

template <typename Scalar>
void validate(const DimensionlessParams<Scalar>& p) {
    detail::require_positive(p.beta, "beta");
    detail::require_positive(p.gamma, "gamma");
}

template <typename Scalar>
void validate(const EnergyScales<Scalar>& e) {
    detail::require_positive(e.e_josephson, "E_J");
    detail::require_positive(e.e_charging, "E_C");
    detail::require_positive(e.e_em, "E_em");
}

template <typename Scalar>
NormalizedParams<Scalar> normalized_from_dimensionless(const DimensionlessParams<Scalar>& p) {
    using std::sqrt;
    validate(p);
    const Scalar beta2 = p.beta * p.beta;
    const Scalar root = sqrt(Scalar(1) + p.gamma * p.gamma);
    NormalizedParams<Scalar> np;
    np.a = Scalar(1) / (Scalar(4) * beta2 * root);
    np.b = p.gamma * np.a / Scalar(2);
    np.homega_over_2J = Scalar(2) + Scalar(1) / (Scalar(2) * beta2 * root);
    np.delta = Scalar(2) * sqrt(Scalar(2) * root * root / (p.gamma * beta2) +
                                root / (Scalar(2) * p.gamma * beta2 * beta2));
    return np;
}

template <typename Scalar>
EnergyScales<Scalar> energies_from_dimensionless(const DimensionlessParams<Scalar>& p,
                                                 Scalar e_josephson_scale) {
    validate(p);
    detail::require_positive(e_josephson_scale, "energy scale");
    return {e_josephson_scale, p.gamma * e_josephson_scale, p.beta * p.beta * e_josephson_scale};
}

template <typename Scalar>
DimensionlessParams<Scalar> dimensionless_from_energies(const EnergyScales<Scalar>& e) {
    using std::sqrt;
    validate(e);
    return {sqrt(e.e_em / e.e_josephson), e.e_charging / e.e_josephson};
}

// The "2E" denominator of the photon frequency is read as 2*eps, eps = sqrt(E_J^2 + E_C^2).
template <typename Scalar>
DerivedParams<Scalar> derived_from_energies(const EnergyScales<Scalar>& e) {
    using std::atan2;
    using std::sqrt;
    validate(e);
    const Scalar ej = e.e_josephson;
    const Scalar ec = e.e_charging;
    DerivedParams<Scalar> d;
    d.qubit_eps = sqrt(ej * ej + ec * ec);
    d.splitting = Scalar(2) * d.qubit_eps;
    d.photon_quantum = sqrt(Scalar(2) * e.e_em * ec + ec * ej * ej / (Scalar(2) * d.qubit_eps));
    d.hopping = e.e_em * ec / (Scalar(2) * d.photon_quantum);
    d.attractive = ej * ej * ec / (Scalar(4) * d.photon_quantum * d.qubit_eps);
    d.repulsive = ej * ec * ec / (Scalar(8) * d.photon_quantum * d.qubit_eps);
    d.mixing_angle = atan2(-ej, ec);
    return d;
}

// Normalizes the energy-route couplings by 2J.
template <typename Scalar>
NormalizedParams<Scalar> normalized_from_derived(const DerivedParams<Scalar>& d) {
    const Scalar two_j = Scalar(2) * d.hopping;
    return {d.attractive / two_j, d.repulsive / two_j, d.splitting / two_j, d.photon_quantum / two_j};
}

// Gaussian-CGS: E_C = 2e^2/C_J, E_J = Phi_0 I_c / (2 pi c), E_em = (Phi_0/2pi)^2 / (8 pi l d).
// Energies are returned in erg.
template <typename Scalar>
EnergyScales<Scalar> physical_to_energies(const PhysicalParams<Scalar>& p) {
    detail::require_positive(p.critical_current, "critical current");
    detail::require_positive(p.junction_capacitance, "junction capacitance");
    detail::require_positive(p.cell_period, "cell period");
    detail::require_positive(p.stripe_separation, "stripe separation");
    const Scalar e = cgs::elementary_charge;
    const Scalar phi0 = cgs::flux_quantum;
    const Scalar two_pi = Scalar(2) * Scalar(cgs::pi);
    EnergyScales<Scalar> out;
    out.e_charging = Scalar(2) * e * e / p.junction_capacitance;
    out.e_josephson = phi0 * p.critical_current / (two_pi * Scalar(cgs::speed_of_light));
    out.e_em = (phi0 / two_pi) * (phi0 / two_pi) /
               (Scalar(8) * Scalar(cgs::pi) * p.cell_period * p.stripe_separation);
    return out;
}

template <typename Scalar>
struct ConsistencyReport {
    // Relative residuals between the (beta, gamma) closed forms and the energy-scale route.
    Scalar residual_a;
    Scalar residual_b;
    Scalar residual_delta;
    Scalar residual_homega;

    Scalar max_residual() const {
        return std::max({residual_a, residual_b, residual_delta, residual_homega});
    }
};

template <typename Scalar>
ConsistencyReport<Scalar> cross_check(const DimensionlessParams<Scalar>& p) {
    using std::abs;
    const auto direct = normalized_from_dimensionless(p);
    const auto via_energies =
        normalized_from_derived(derived_from_energies(energies_from_dimensionless(p, Scalar(1))));
    auto rel = [](Scalar x, Scalar ref) { return abs(x - ref) / abs(ref); };
    return {rel(direct.a, via_energies.a), rel(direct.b, via_energies.b),
            rel(direct.delta, via_energies.delta),
            rel(direct.homega_over_2J, via_energies.homega_over_2J)};
}

// (beta, gamma) values used for the band diagrams: three beta rows by four gamma panels.
inline constexpr std::array<double, 3> preset_betas{0.1, 0.2, 0.5};
inline constexpr std::array<double, 4> preset_gammas{0.2, 1.0, 5.0, 10.0};

}  // namespace qpband
