#pragma once
// Point-gap winding numbers: Bloch contour winding, real-space winding from
// the polar decomposition, and winding under an inserted boundary flux.
//
// All contour windings accumulate wrapped phase increments between consecutive
// samples and refine the sampling whenever one increment exceeds pi/2.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "nhse/common.hpp"
#include "nhse/hamiltonian.hpp"
#include "nhse/lattice.hpp"
#include "nhse/linalg.hpp"
#include "nhse/parallel.hpp"

namespace nhse {

/// E_B lies on the spectral curve (or in the spectrum) and the winding is undefined.
class IllDefinedWinding : public Error {
public:
    using Error::Error;
};

struct WindingResult {
    cplx base_energy{};
    double value = 0.0;         ///< raw winding
    long quantized = 0;         ///< nearest integer
    double residual = 0.0;      ///< |value - quantized|
    double imag_residue = 0.0;  ///< imaginary part of the raw trace (real-space winding only)
    long samples = 0;           ///< contour samples actually used
};

namespace detail {

inline double wrap_phase(double x) {
    x = std::remainder(x, 2 * pi);
    return x;
}

inline WindingResult finish(cplx base, double value, long samples) {
    WindingResult r;
    r.base_energy = base;
    r.value = value;
    r.quantized = std::lround(value);
    r.residual = std::abs(value - static_cast<double>(r.quantized));
    r.samples = samples;
    return r;
}

constexpr int max_refinements = 10;

} // namespace detail

/// Winding of H_y(k) - E_B, H_y(k) = sum_l tau_l exp(i k l), as k a runs over [0, 2 pi).
inline WindingResult winding_bloch(const HoppingTable& table, cplx base_energy, long samples = 4096,
                                   double curve_tol = 1e-9) {
    if (samples < 8)
        throw Error("winding_bloch: need at least 8 samples");
    double scale = 0.0;
    for (const auto& [l, t] : table)
        scale += std::abs(t);
    auto curve = [&](double k) {
        cplx v{0.0, 0.0};
        for (const auto& [l, t] : table)
            v += t * std::polar(1.0, k * l);
        return v - base_energy;
    };

    for (int pass = 0; pass <= detail::max_refinements; ++pass, samples *= 2) {
        std::vector<cplx> v(static_cast<std::size_t>(samples));
        double closest = INFINITY;
        for (long j = 0; j < samples; ++j) {
            v[static_cast<std::size_t>(j)] = curve(2 * pi * static_cast<double>(j) / static_cast<double>(samples));
            closest = std::min(closest, std::abs(v[static_cast<std::size_t>(j)]));
        }
        if (closest <= curve_tol * std::max(scale, 1.0))
            throw IllDefinedWinding("winding_bloch: base energy lies on the Bloch curve");
        double total = 0.0, worst = 0.0;
        for (long j = 0; j < samples; ++j) {
            const cplx a = v[static_cast<std::size_t>(j)];
            const cplx b = v[static_cast<std::size_t>((j + 1) % samples)];
            const double step = std::arg(b / a);
            worst = std::max(worst, std::abs(step));
            total += step;
        }
        if (worst <= pi / 2)
            return detail::finish(base_energy, total / (2 * pi), samples);
    }
    throw IllDefinedWinding("winding_bloch: phase increments did not resolve; base energy too close to the curve");
}

/// Bloch winding of a translationally invariant strip reduction. Requires zero field.
inline WindingResult winding_bloch(const LatticeModel& model, const StripCut& cut, const FluxSpec& flux, double k_x,
                                   cplx base_energy, long samples = 4096) {
    if (flux.value != 0.0)
        throw Error("winding_bloch: hopping table depends on n for nonzero field; use winding_realspace or winding_flux");
    return winding_bloch(effective_hopping_table(model, cut, flux, k_x, 0), base_energy, samples);
}

/// Real-space winding (1/|W|) sum_{n in W} [Q^dag [Q, X]]_nn, with Q the
/// unitary polar factor of H - E_B and X = diag(1..L).
///
/// The trace runs over the bulk window W = [margin + 1, L - margin]; the
/// trace over all L sites vanishes identically for a finite unitary Q.
/// A negative margin selects L / 4. Invertibility is judged from the distance
/// of E_B to the eigenvalues, not from the smallest singular value, which is
/// exponentially small inside the point gap of a skin-effect chain.
inline WindingResult winding_realspace(const CMatrix& H, cplx base_energy, long margin = -1,
                                       double spectrum_tol = 1e-10) {
    const long L = H.rows();
    if (H.cols() != L || L == 0)
        throw Error("winding_realspace: matrix must be square and nonempty");
    if (margin < 0)
        margin = L / 4;
    if (2 * margin >= L)
        throw Error("winding_realspace: bulk window is empty");

    const CVector spectrum = linalg::eigenvalues_general(H);
    if ((spectrum.array() - base_energy).abs().minCoeff() <= spectrum_tol * std::max(linalg::norm_bound(H), 1.0))
        throw IllDefinedWinding("winding_realspace: E_B lies in the spectrum of H");

    const CMatrix shifted = H - base_energy * CMatrix::Identity(L, L);
    Eigen::BDCSVD<CMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix Q = svd.matrixU() * svd.matrixV().adjoint();

    cplx trace{0.0, 0.0};
    for (long n = margin; n < L - margin; ++n) {
        const double xn = static_cast<double>(n + 1);
        cplx qq{0.0, 0.0}, qxq{0.0, 0.0};
        for (long m = 0; m < L; ++m) {
            const cplx qmn = Q(m, n);
            qq += std::conj(qmn) * qmn;
            qxq += std::conj(qmn) * static_cast<double>(m + 1) * qmn;
        }
        trace += qq * xn - qxq;
    }
    trace /= static_cast<double>(L - 2 * margin);
    auto r = detail::finish(base_energy, trace.real(), L);
    r.imag_residue = trace.imag();
    return r;
}

inline WindingResult winding_realspace(const EffectiveHamiltonian& H, cplx base_energy, long margin = -1) {
    if (H.bc.kind != Boundary::open)
        throw Error("winding_realspace: requires an open-boundary Hamiltonian");
    return winding_realspace(H.matrix, base_energy, margin);
}

/// log det(A) with the branch of the imaginary part left unspecified.
inline cplx log_determinant(const CMatrix& A, double singular_tol = 1e-13) {
    Eigen::PartialPivLU<CMatrix> lu(A);
    const CMatrix& U = lu.matrixLU();
    double umax = 0.0, umin = INFINITY;
    cplx acc{0.0, 0.0};
    for (long i = 0; i < U.rows(); ++i) {
        const double m = std::abs(U(i, i));
        umax = std::max(umax, m);
        umin = std::min(umin, m);
        acc += std::log(U(i, i));
    }
    if (!(umin > singular_tol * umax))
        throw IllDefinedWinding("log_determinant: matrix is singular to working precision");
    if (lu.permutationP().determinant() < 0)
        acc += cplx{0.0, pi};
    return acc;
}

/// Family of matrices H(phi) parameterized by the inserted boundary phase.
using FluxFamily = std::function<CMatrix(double)>;

/// Wraps a PBC builder so that the inserted phase becomes the boundary twist.
template <class Builder>
FluxFamily flux_family(Builder builder) {
    return [builder](double phi) { return builder(BoundaryCondition::pbc(phi)).matrix; };
}

/// Winding of det(H(phi) - E_B) as the inserted phase runs over [0, 2 pi).
inline WindingResult winding_flux(const FluxFamily& family, cplx base_energy, long samples = 720,
                                  unsigned workers = 1) {
    if (samples < 8)
        throw Error("winding_flux: need at least 8 samples");
    for (int pass = 0; pass <= detail::max_refinements; ++pass, samples *= 2) {
        const auto logdets = parallel_map<cplx>(static_cast<std::size_t>(samples), workers, [&](std::size_t j) {
            const double phi = 2 * pi * static_cast<double>(j) / static_cast<double>(samples);
            const CMatrix H = family(phi);
            return log_determinant(H - base_energy * CMatrix::Identity(H.rows(), H.cols()));
        });
        double total = 0.0, worst = 0.0;
        for (long j = 0; j < samples; ++j) {
            const cplx a = logdets[static_cast<std::size_t>(j)];
            const cplx b = logdets[static_cast<std::size_t>((j + 1) % samples)];
            const double step = detail::wrap_phase(b.imag() - a.imag());
            worst = std::max(worst, std::abs(step));
            total += step;
        }
        if (worst <= pi / 2)
            return detail::finish(base_energy, total / (2 * pi), samples);
    }
    throw IllDefinedWinding("winding_flux: phase increments did not resolve; base energy too close to the spectrum");
}

} // namespace nhse
