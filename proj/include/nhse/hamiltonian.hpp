#pragma once
// Dense effective 1D Hamiltonians of the strip geometry.
//
// Sites are numbered n = 1..L; row n-1 of the matrix is the equation for phi_n,
// so H(n-1, n-1+l) = tau_l(n). Under OBC shifts leaving [1, L] are dropped;
// under PBC they wrap modulo L, picking up exp(i twist) for every forward
// crossing of the boundary.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nhse/common.hpp"
#include "nhse/lattice.hpp"

namespace nhse {

enum class Boundary { open, periodic };

struct BoundaryCondition {
    Boundary kind = Boundary::open;
    double twist = 0.0; ///< inserted gauge phase on the boundary link (PBC only)

    static BoundaryCondition obc() { return {Boundary::open, 0.0}; }
    static BoundaryCondition pbc(double twist = 0.0) { return {Boundary::periodic, twist}; }
};

inline std::string to_string(Boundary b) { return b == Boundary::open ? "obc" : "pbc"; }

struct EffectiveHamiltonian {
    CMatrix matrix;
    BoundaryCondition bc;
    double k_x = 0.0;
    double flux = 0.0;
    std::string builder;
    std::vector<int> shifts; ///< the declared shift set l

    long size() const { return matrix.rows(); }
};

namespace detail {

inline void require_size(long L, int max_shift) {
    if (L < 2L * max_shift + 1)
        throw Error("assemble: L = " + std::to_string(L) + " is too small for hopping range " +
                    std::to_string(max_shift) + " (need L >= " + std::to_string(2 * max_shift + 1) + ")");
}

/// Add amplitude for the coupling of site n (1-based) to site n + l.
inline void place(CMatrix& H, long n, int l, cplx amplitude, const BoundaryCondition& bc) {
    const long L = H.rows();
    long m = n + l;
    if (bc.kind == Boundary::open) {
        if (m < 1 || m > L)
            return;
        H(n - 1, m - 1) += amplitude;
        return;
    }
    // floor((m - 1) / L) counts boundary crossings in the forward direction
    const long wraps = (m - 1 >= 0) ? (m - 1) / L : -((L - m) / L);
    m -= wraps * L;
    if (wraps != 0 && bc.twist != 0.0)
        amplitude *= std::polar(1.0, bc.twist * static_cast<double>(wraps));
    H(n - 1, m - 1) += amplitude;
}

} // namespace detail

/// Generic strip reduction of an arbitrary lattice model. `flux` is the field B.
inline EffectiveHamiltonian assemble(const LatticeModel& model, const StripCut& cut, const FluxSpec& flux,
                                     double k_x, long L, BoundaryCondition bc) {
    const StripReduction reduction(model, cut, flux);
    detail::require_size(L, reduction.max_shift());

    EffectiveHamiltonian out;
    out.matrix = CMatrix::Zero(L, L);
    out.bc = bc;
    out.k_x = k_x;
    out.flux = flux.value;
    out.builder = "generic";
    for (const auto& e : reduction.entries())
        if (std::find(out.shifts.begin(), out.shifts.end(), e.l) == out.shifts.end())
            out.shifts.push_back(e.l);
    std::sort(out.shifts.begin(), out.shifts.end());

    for (long n = 1; n <= L; ++n)
        for (const auto& [l, tau] : reduction.table(k_x, n))
            detail::place(out.matrix, n, l, tau, bc);
    return out;
}

// ---------------------------------------------------------------------------
// Nonreciprocal Harper-Hofstadter model on a rectangular lattice

/// kappa^(L) = J exp(h), kappa^(R) = J exp(-h) on each axis.
struct HofstadterParams {
    double J_X = 1.0;
    double J_Y = 1.0;
    double h_X = 0.0;
    double h_Y = 0.0;

    double kappa_XL() const { return J_X * std::exp(h_X); }
    double kappa_XR() const { return J_X * std::exp(-h_X); }
    double kappa_YL() const { return J_Y * std::exp(h_Y); }
    double kappa_YR() const { return J_Y * std::exp(-h_Y); }

    void validate() const {
        if (!(J_X > 0) || !(J_Y > 0))
            throw Error("HofstadterParams: J_X and J_Y must be positive");
    }

    /// Nearest-neighbour hopping set: t(+a_X) = kappa_XL, t(-a_X) = kappa_XR, same for Y.
    LatticeModel model(const BravaisSpec& b) const {
        return LatticeModel(b, {{1, 0, kappa_XL()}, {-1, 0, kappa_XR()}, {0, 1, kappa_YL()}, {0, -1, kappa_YR()}});
    }

    bool operator==(const HofstadterParams&) const = default;
};

/// Four-shift chain with shifts +-p, +-q, built from the closed-form amplitudes.
/// `plaquette_flux` is Phi = B a_X a_Y; the lattice must be rectangular.
inline EffectiveHamiltonian hofstadter_nonreciprocal(const HofstadterParams& params, const BravaisSpec& b,
                                                     const StripCut& cut, double plaquette_flux, double k_x,
                                                     long L, BoundaryCondition bc) {
    params.validate();
    if (std::abs(b.alpha - pi / 2) > 1e-14)
        throw Error("hofstadter_nonreciprocal: requires a rectangular lattice (alpha = pi/2)");
    const int p = cut.p, q = cut.q;
    detail::require_size(L, std::max(p, q));

    const double B = plaquette_flux / (b.a_X * b.a_Y);
    const double a = cut.a;
    const double ct = std::cos(cut.theta), st = std::sin(cut.theta);
    const double alpha_x = B * a * b.a_X * ct;
    const double alpha_y = B * a * b.a_Y * st;
    const double sigma_p = -k_x * b.a_X * ct - pi * B * b.a_X * a * p * ct;
    const double sigma_mp = k_x * b.a_X * ct - pi * B * b.a_X * a * p * ct;
    const double sigma_q = k_x * b.a_Y * st + pi * B * b.a_Y * a * q * st;
    const double sigma_mq = -k_x * b.a_Y * st + pi * B * b.a_Y * a * q * st;

    EffectiveHamiltonian out;
    out.matrix = CMatrix::Zero(L, L);
    out.bc = bc;
    out.k_x = k_x;
    out.flux = plaquette_flux;
    out.builder = "hofstadter";
    out.shifts = {-q, -p, p, q};
    std::sort(out.shifts.begin(), out.shifts.end());
    out.shifts.erase(std::unique(out.shifts.begin(), out.shifts.end()), out.shifts.end());

    for (long n = 1; n <= L; ++n) {
        const double dn = static_cast<double>(n);
        detail::place(out.matrix, n, p, params.kappa_XR() * std::polar(1.0, -2 * pi * alpha_x * dn + sigma_p), bc);
        detail::place(out.matrix, n, -p, params.kappa_XL() * std::polar(1.0, 2 * pi * alpha_x * dn + sigma_mp), bc);
        detail::place(out.matrix, n, q, params.kappa_YL() * std::polar(1.0, 2 * pi * alpha_y * dn + sigma_q), bc);
        detail::place(out.matrix, n, -q, params.kappa_YR() * std::polar(1.0, -2 * pi * alpha_y * dn + sigma_mq), bc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reciprocal model on the main-diagonal cut (p = q = 1)

/// kappa_X^(L) = kappa_X^(R) = kappa_X and likewise for Y. The lattice
/// constants default to a_X = a_Y = sqrt(2), which puts the reduced lattice
/// constant at a = 1.
struct ReciprocalDiagonalParams {
    cplx kappa_X{1.0, 0.0};
    cplx kappa_Y{0.0, 1.0};
    double a_X = std::numbers::sqrt2;
    double a_Y = std::numbers::sqrt2;

    void validate() const {
        if (kappa_X == cplx{} || kappa_Y == cplx{})
            throw Error("ReciprocalDiagonalParams: kappa_X and kappa_Y must be nonzero");
        if (!(a_X > 0) || !(a_Y > 0))
            throw Error("ReciprocalDiagonalParams: lattice constants must be positive");
    }

    /// Phase of kappa_X conj(kappa_Y).
    double rho() const { return std::arg(kappa_X * std::conj(kappa_Y)); }
    double theta() const { return std::atan2(a_Y, a_X); }
    double a() const { return a_X * std::sin(theta()); }
    BravaisSpec bravais() const { return {a_X, a_Y, pi / 2}; }

    LatticeModel model() const {
        return LatticeModel(bravais(), {{1, 0, kappa_X}, {-1, 0, kappa_X}, {0, 1, kappa_Y}, {0, -1, kappa_Y}});
    }

    /// Gauge-invariant phase omega_n entering |W_n^(L,R)|.
    double omega(double plaquette_flux, double k_x, long n) const {
        const double th = theta();
        return pi * plaquette_flux * (2.0 * static_cast<double>(n) + 1.0) + k_x * a() / (std::sin(th) * std::cos(th));
    }

    bool operator==(const ReciprocalDiagonalParams&) const = default;
};

struct DiagonalAmplitudes {
    cplx left;  ///< W_n^(L), couples phi_n to phi_{n+1}
    cplx right; ///< W_n^(R), couples phi_{n+1} to phi_n
};

inline DiagonalAmplitudes diagonal_amplitudes(const ReciprocalDiagonalParams& params, double plaquette_flux,
                                              double k_x, long n) {
    const double th = params.theta();
    const double c2 = std::cos(th) * std::cos(th), s2 = std::sin(th) * std::sin(th);
    const double ax = plaquette_flux * c2, ay = plaquette_flux * s2;
    const double dn = static_cast<double>(n);
    const double px = 2 * pi * ax * dn + k_x * params.a_X * std::cos(th) + pi * plaquette_flux * c2;
    const double py = 2 * pi * ay * dn + k_x * params.a_Y * std::sin(th) + pi * plaquette_flux * s2;
    return {params.kappa_X * std::polar(1.0, -px) + params.kappa_Y * std::polar(1.0, py),
            params.kappa_X * std::polar(1.0, px) + params.kappa_Y * std::polar(1.0, -py)};
}

/// E phi_n = W_n^(L) phi_{n+1} + W_{n-1}^(R) phi_{n-1}; `plaquette_flux` is Phi = B a_X a_Y.
inline EffectiveHamiltonian reciprocal_diagonal(const ReciprocalDiagonalParams& params, double plaquette_flux,
                                                double k_x, long L, BoundaryCondition bc) {
    params.validate();
    detail::require_size(L, 1);
    EffectiveHamiltonian out;
    out.matrix = CMatrix::Zero(L, L);
    out.bc = bc;
    out.k_x = k_x;
    out.flux = plaquette_flux;
    out.builder = "reciprocal_diagonal";
    out.shifts = {-1, 1};
    for (long n = 1; n <= L; ++n) {
        detail::place(out.matrix, n, 1, diagonal_amplitudes(params, plaquette_flux, k_x, n).left, bc);
        detail::place(out.matrix, n, -1, diagonal_amplitudes(params, plaquette_flux, k_x, n - 1).right, bc);
    }
    return out;
}

/// |W_n^(R)|^2 / |W_n^(L)|^2 from the closed form in |kappa_X|, |kappa_Y|, rho and omega_n.
/// Throws PoleError when |W_n^(L)| vanishes.
inline double local_ratio(const ReciprocalDiagonalParams& params, double plaquette_flux, double k_x, long n) {
    params.validate();
    const double kx = std::abs(params.kappa_X), ky = std::abs(params.kappa_Y);
    const double w = params.omega(plaquette_flux, k_x, n);
    const double rho = params.rho();
    const double num = kx * kx + ky * ky + 2 * kx * ky * std::cos(w + rho);
    const double den = kx * kx + ky * ky + 2 * kx * ky * std::cos(w - rho);
    if (std::abs(den) <= 1e-14 * (kx * kx + ky * ky))
        throw PoleError("local_ratio: |W_n^(L)| vanishes at n = " + std::to_string(n), n);
    return num / den;
}

} // namespace nhse
