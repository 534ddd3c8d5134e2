#pragma once
// Transfer matrices of nearest-neighbour chains, the gauge-transformed
// reciprocal diagonal chain, global-reciprocity determinants and Lyapunov
// exponents.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "nhse/common.hpp"
#include "nhse/hamiltonian.hpp"

namespace nhse {

/// Coefficients of E phi_n = forward phi_{n+1} + onsite phi_n + backward phi_{n-1}.
struct ChainSite {
    cplx forward{1.0, 0.0};
    cplx onsite{0.0, 0.0};
    cplx backward{1.0, 0.0};
};

using ChainFunction = std::function<ChainSite(long)>;

/// Chain of the reciprocal diagonal cut after the gauge transformation
/// phi_n = xi_n exp(i pi alpha_x n^2 + i sigma_x n - i pi alpha_x n).
/// Its amplitudes depend on n only through omega_n:
///   w_left(n)  = kappa_X + kappa_Y exp(+i omega_n)
///   w_right(n) = kappa_X + kappa_Y exp(-i omega_n)
class GaugeTransformedChain {
public:
    GaugeTransformedChain(ReciprocalDiagonalParams params, double plaquette_flux, double k_x)
        : params_(params), flux_(plaquette_flux), k_x_(k_x) {
        params_.validate();
    }

    double omega(long n) const { return params_.omega(flux_, k_x_, n); }
    cplx w_left(long n) const { return params_.kappa_X + params_.kappa_Y * std::polar(1.0, omega(n)); }
    cplx w_right(long n) const { return params_.kappa_X + params_.kappa_Y * std::polar(1.0, -omega(n)); }

    double alpha_x() const {
        const double c = std::cos(params_.theta());
        return flux_ * c * c;
    }
    double sigma_x() const {
        const double c = std::cos(params_.theta());
        return k_x_ * params_.a_X * c + pi * flux_ * c * c;
    }
    /// phi_n / xi_n
    cplx gauge_factor(long n) const {
        const double dn = static_cast<double>(n);
        return std::polar(1.0, pi * alpha_x() * dn * dn + sigma_x() * dn - pi * alpha_x() * dn);
    }

    /// Open chain of L sites: xi_0 = xi_{L+1} = 0.
    CMatrix matrix(long L) const {
        CMatrix H = CMatrix::Zero(L, L);
        for (long n = 1; n < L; ++n) {
            H(n - 1, n) = w_left(n);
            H(n, n - 1) = w_right(n);
        }
        return H;
    }

    ChainFunction as_chain() const {
        return [chain = *this](long n) { return ChainSite{chain.w_left(n), {0.0, 0.0}, chain.w_right(n - 1)}; };
    }

    const ReciprocalDiagonalParams& params() const { return params_; }
    double flux() const { return flux_; }
    double k_x() const { return k_x_; }

private:
    ReciprocalDiagonalParams params_;
    double flux_;
    double k_x_;
};

inline GaugeTransformedChain gauge_transform(const ReciprocalDiagonalParams& params, double plaquette_flux,
                                             double k_x) {
    return GaugeTransformedChain(params, plaquette_flux, k_x);
}

/// Harper chain of the strip cut theta = 0 with a_X = 1:
///   E phi_n = J_Y e^{h_Y} phi_{n+1} + J_Y e^{-h_Y} phi_{n-1} + 2 J_X cos(2 pi Phi n + k_x - i h_X) phi_n
inline ChainFunction harper_chain(const HofstadterParams& p, double plaquette_flux, double k_x) {
    p.validate();
    return [p, plaquette_flux, k_x](long n) {
        const cplx arg{2 * pi * plaquette_flux * static_cast<double>(n) + k_x, -p.h_X};
        return ChainSite{p.kappa_YL(), 2.0 * p.J_X * std::cos(arg), p.kappa_YR()};
    };
}

/// M_n(E) = [[(E - onsite_n) / forward_n, -backward_n / forward_n], [1, 0]].
inline Eigen::Matrix2cd transfer_matrix(const ChainSite& s, cplx energy, long n) {
    if (std::abs(s.forward) <= 1e-14 * (std::abs(s.backward) + std::abs(s.onsite) + 1.0))
        throw PoleError("transfer_matrix: forward amplitude vanishes at n = " + std::to_string(n), n);
    Eigen::Matrix2cd M;
    M << (energy - s.onsite) / s.forward, -s.backward / s.forward, 1.0, 0.0;
    return M;
}

/// S(E) = M_q ... M_1, stored as exp(log_scale) * S with S normalized.
struct TransferProduct {
    Eigen::Matrix2cd S;
    double log_scale = 0.0;
    long q = 0;
    cplx energy{};
    double log_det_magnitude = 0.0; ///< sum_n ln|det M_n|
    std::array<cplx, 2> eigenvalues{}; ///< eigenvalues of the normalized S
    std::array<double, 2> log_abs_eigenvalues{}; ///< ln|lambda_i| of the true product

    double det_magnitude() const { return std::exp(log_det_magnitude); }
    /// |det| recomputed from the stored matrix rather than from the factors.
    double log_det_from_matrix() const { return std::log(std::abs(S.determinant())) + 2 * log_scale; }
};

namespace detail {

inline double renormalize(Eigen::Matrix2cd& M) {
    const double m = M.cwiseAbs().maxCoeff();
    if (m == 0.0 || !std::isfinite(m))
        throw Error("transfer product degenerated (zero or non-finite entries)");
    M /= m;
    return std::log(m);
}

inline std::array<cplx, 2> eigenvalues2(const Eigen::Matrix2cd& S) {
    const cplx tr = S.trace(), det = S.determinant();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    // avoid cancellation in the smaller root
    if (std::abs(l1) < std::abs(l2))
        std::swap(l1, l2);
    if (std::abs(l1) > 0)
        l2 = det / l1;
    return {l1, l2};
}

} // namespace detail

inline TransferProduct transfer_product(const ChainFunction& chain, cplx energy, long q, long first = 1) {
    if (q < 1)
        throw Error("transfer_product: q must be positive");
    TransferProduct out;
    out.S = Eigen::Matrix2cd::Identity();
    out.q = q;
    out.energy = energy;
    for (long n = first; n < first + q; ++n) {
        const auto site = chain(n);
        const Eigen::Matrix2cd M = transfer_matrix(site, energy, n);
        out.log_det_magnitude += std::log(std::abs(site.backward)) - std::log(std::abs(site.forward));
        out.S = M * out.S;
        out.log_scale += detail::renormalize(out.S);
    }
    out.eigenvalues = detail::eigenvalues2(out.S);
    for (int i = 0; i < 2; ++i)
        out.log_abs_eigenvalues[static_cast<std::size_t>(i)] =
            std::log(std::abs(out.eigenvalues[static_cast<std::size_t>(i)])) + out.log_scale;
    return out;
}

inline TransferProduct transfer_product(const GaugeTransformedChain& chain, cplx energy, long q) {
    return transfer_product(chain.as_chain(), energy, q);
}

/// S^N as exp(log_scale) * matrix.
struct ScaledMatrix {
    Eigen::Matrix2cd matrix;
    double log_scale = 0.0;
};

inline ScaledMatrix transfer_power(const TransferProduct& tp, long N) {
    ScaledMatrix out{Eigen::Matrix2cd::Identity(), 0.0};
    for (long i = 0; i < N; ++i) {
        out.matrix = tp.S * out.matrix;
        out.log_scale += tp.log_scale + detail::renormalize(out.matrix);
    }
    return out;
}

/// prod_{n=1..q} |w_right(n)| / |w_left(n)|, accumulated in log space. Equals
/// |det S(E)| (whose factors are w_right(n - 1) / w_left(n)) when Phi q is an
/// integer. det M_n carries no E dependence, so neither does the result.
inline double det_magnitude(const GaugeTransformedChain& chain, cplx /*energy*/, long q) {
    if (q < 1)
        throw Error("det_magnitude: q must be positive");
    const double scale = std::norm(chain.params().kappa_X) + std::norm(chain.params().kappa_Y);
    double acc = 0.0;
    for (long n = 1; n <= q; ++n) {
        const double l = std::norm(chain.w_left(n));
        if (l <= 1e-28 * scale)
            throw PoleError("det_magnitude: w_left vanishes at n = " + std::to_string(n), n);
        acc += std::log(std::norm(chain.w_right(n))) - std::log(l);
    }
    return std::exp(0.5 * acc);
}

struct IdentityGap {
    double riemann_plus = 0.0;  ///< sum_{n=1..q} f(omega_n + rho)
    double riemann_minus = 0.0; ///< sum_{n=1..q} f(omega_n - rho)
    double integral_plus = 0.0; ///< int_0^{2 pi} f(w + rho) dw
    double integral_minus = 0.0;
    long q = 0;

    double gap_plus() const { return riemann_plus - static_cast<double>(q) / (2 * pi) * integral_plus; }
    double gap_minus() const { return riemann_minus - static_cast<double>(q) / (2 * pi) * integral_minus; }
    double gap() const { return std::max(std::abs(gap_plus()), std::abs(gap_minus())); }
};

/// Periodic trapezoid rule on a grid offset by half a step, which keeps the
/// nodes off a logarithmic singularity at w = 0.
inline double periodic_quadrature(const std::function<double(double)>& f, long points = 10000) {
    const double h = 2 * pi / static_cast<double>(points);
    double s = 0.0;
    for (long j = 0; j < points; ++j)
        s += f((static_cast<double>(j) + 0.5) * h);
    return s * h;
}

/// Riemann sums of f(w) = ln(|kX|^2 + |kY|^2 + 2|kX||kY| cos w) sampled at
/// omega_n +- rho against q / (2 pi) times the integral over a period.
inline IdentityGap integral_identity_gap(const ReciprocalDiagonalParams& params, double plaquette_flux, double k_x,
                                         long q, long quad_points = 10000) {
    if (q < 2)
        throw Error("integral_identity_gap: q must be at least 2");
    params.validate();
    const double kx = std::abs(params.kappa_X), ky = std::abs(params.kappa_Y);
    const double rho = params.rho();
    auto f = [&](double w) -> double {
        const double v = kx * kx + ky * ky + 2 * kx * ky * std::cos(w);
        if (v <= 0)
            return -INFINITY;
        return std::log(v);
    };
    IdentityGap g;
    g.q = q;
    for (long n = 1; n <= q; ++n) {
        const double w = params.omega(plaquette_flux, k_x, n);
        g.riemann_plus += f(w + rho);
        g.riemann_minus += f(w - rho);
    }
    if (!std::isfinite(g.riemann_plus) || !std::isfinite(g.riemann_minus))
        throw PoleError("integral_identity_gap: a sample hits the zero of the hopping amplitude", 0);
    g.integral_plus = periodic_quadrature([&](double w) { return f(w + rho); }, quad_points);
    g.integral_minus = periodic_quadrature([&](double w) { return f(w - rho); }, quad_points);
    return g;
}

struct LyapunovResult {
    double value = 0.0;     ///< (1/L) ln ||M_L ... M_1||
    double std_error = 0.0; ///< from the spread of per-segment growth rates
    bool converged = false;
};

/// Largest Lyapunov exponent of the chain at energy E from a renormalized
/// product over `length` sites split into `segments` equal pieces.
inline LyapunovResult lyapunov_exponent(const ChainFunction& chain, cplx energy, long length, int segments = 20,
                                        double max_std_error = 0.01) {
    if (length < 10 * segments || segments < 2)
        throw Error("lyapunov_exponent: length too short for the requested segments");
    const long seg_len = length / segments;
    Eigen::Matrix2cd P = Eigen::Matrix2cd::Identity();
    double log_norm = 0.0;
    std::vector<double> rates;
    rates.reserve(static_cast<std::size_t>(segments));
    long n = 1;
    for (int s = 0; s < segments; ++s) {
        const double start = log_norm;
        for (long i = 0; i < seg_len; ++i, ++n) {
            P = transfer_matrix(chain(n), energy, n) * P;
            log_norm += detail::renormalize(P);
        }
        rates.push_back((log_norm - start) / static_cast<double>(seg_len));
    }
    LyapunovResult r;
    double mean = 0.0;
    for (double v : rates)
        mean += v;
    mean /= segments;
    double var = 0.0;
    for (double v : rates)
        var += (v - mean) * (v - mean);
    var /= (segments - 1);
    r.value = (log_norm + std::log(P.norm())) / static_cast<double>(seg_len * segments);
    r.std_error = std::sqrt(var / segments);
    r.converged = r.std_error <= max_std_error;
    return r;
}

} // namespace nhse
