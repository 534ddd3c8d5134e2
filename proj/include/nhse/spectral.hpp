#pragma once
// Diagonalization of effective Hamiltonians and the skin-effect diagnostics
// built on the resulting spectra and eigenvectors.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nhse/common.hpp"
#include "nhse/hamiltonian.hpp"
#include "nhse/linalg.hpp"

namespace nhse {

struct SpectralResult {
    std::vector<cplx> eigenvalues; ///< sorted by (Re, Im)
    CMatrix eigenvectors;          ///< unit-norm right eigenvectors as columns, same order
    std::vector<double> residuals; ///< ||H v - E v|| per state
    std::vector<double> ipr;
    std::vector<double> mean_distribution; ///< I_n, n = 1..L

    long size() const { return static_cast<long>(eigenvalues.size()); }
};

/// I_n = (1/L) sum_l |phi_n^(l)|^2 over the columns of `vectors`.
inline std::vector<double> mean_distribution(const CMatrix& vectors) {
    const long L = vectors.rows();
    std::vector<double> out(static_cast<std::size_t>(L), 0.0);
    if (vectors.cols() == 0)
        return out;
    for (long l = 0; l < vectors.cols(); ++l)
        for (long n = 0; n < L; ++n)
            out[static_cast<std::size_t>(n)] += std::norm(vectors(n, l));
    for (auto& v : out)
        v /= static_cast<double>(vectors.cols());
    return out;
}

inline std::vector<double> mean_distribution(const SpectralResult& r) { return mean_distribution(r.eigenvectors); }

/// IPR_l = sum_n |phi_n^(l)|^4.
inline std::vector<double> ipr(const CMatrix& vectors) {
    std::vector<double> out(static_cast<std::size_t>(vectors.cols()), 0.0);
    for (long l = 0; l < vectors.cols(); ++l) {
        double s = 0.0;
        for (long n = 0; n < vectors.rows(); ++n) {
            const double p = std::norm(vectors(n, l));
            s += p * p;
        }
        out[static_cast<std::size_t>(l)] = s;
    }
    return out;
}

inline std::vector<double> ipr(const SpectralResult& r) { return ipr(r.eigenvectors); }

/// Full eigendecomposition. Hermitian input (to round-off) goes through the
/// hermitian solver so that degenerate eigenvectors stay orthonormal.
/// Throws when any eigenpair residual exceeds residual_tol * ||H||.
inline SpectralResult diagonalize(const CMatrix& H, double residual_tol = 1e-9) {
    if (H.rows() != H.cols() || H.rows() == 0)
        throw Error("diagonalize: matrix must be square and nonempty");
    if (!H.allFinite())
        throw Error("diagonalize: non-finite matrix entries in " + linalg::fingerprint(H));

    const double norm = linalg::norm_bound(H);
    linalg::Eigensystem es = linalg::is_hermitian(H, 1e-14 * norm)
                                 ? linalg::eig_hermitian(0.5 * (H + H.adjoint()))
                                 : linalg::eig_general(H);

    const long L = H.rows();
    std::vector<long> order(static_cast<std::size_t>(L));
    std::iota(order.begin(), order.end(), 0L);
    std::stable_sort(order.begin(), order.end(), [&](long i, long j) {
        const cplx a = es.values(i), b = es.values(j);
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    SpectralResult out;
    out.eigenvalues.reserve(static_cast<std::size_t>(L));
    out.eigenvectors.resize(L, L);
    out.residuals.reserve(static_cast<std::size_t>(L));
    for (long k = 0; k < L; ++k) {
        const long src = order[static_cast<std::size_t>(k)];
        const cplx e = es.values(src);
        CVector v = es.vectors.col(src);
        v.normalize();
        const double res = (H * v - e * v).norm();
        if (!(res <= residual_tol * std::max(norm, 1e-300)))
            throw Error("diagonalize: eigenpair residual " + std::to_string(res) + " exceeds tolerance for " +
                        linalg::fingerprint(H));
        out.eigenvalues.push_back(e);
        out.eigenvectors.col(k) = v;
        out.residuals.push_back(res);
    }
    out.ipr = ipr(out.eigenvectors);
    out.mean_distribution = mean_distribution(out.eigenvectors);
    return out;
}

inline SpectralResult diagonalize(const EffectiveHamiltonian& H, double residual_tol = 1e-9) {
    return diagonalize(H.matrix, residual_tol);
}

// ---------------------------------------------------------------------------

enum class SkinVerdict { nhse, no_nhse };

struct SpectraComparison {
    SkinVerdict verdict = SkinVerdict::no_nhse;
    double distance = 0.0; ///< trimmed Hausdorff distance in units of the spectral diameter
    double diameter = 0.0;
    int discarded = 0; ///< points dropped from each direction
};

namespace detail {

/// Distance from every point of `from` to its nearest neighbour in `to`.
inline std::vector<double> directed_distances(const std::vector<cplx>& from, const std::vector<cplx>& to) {
    std::vector<double> out;
    out.reserve(from.size());
    for (const auto& a : from) {
        double best = INFINITY;
        for (const auto& b : to)
            best = std::min(best, std::abs(a - b));
        out.push_back(best);
    }
    return out;
}

inline double trimmed_max(std::vector<double> d, int drop) {
    std::sort(d.begin(), d.end());
    const auto keep = static_cast<long>(d.size()) - drop;
    return keep > 0 ? d[static_cast<std::size_t>(keep - 1)] : 0.0;
}

} // namespace detail

/// Compare two spectra of the same chain (OBC vs PBC). Up to `edge_budget`
/// worst-matched points are discarded in each direction, then the symmetric
/// Hausdorff distance is measured relative to the diameter of the union.
/// The verdict is symmetric in the two arguments.
inline SpectraComparison compare_spectra(const std::vector<cplx>& first, const std::vector<cplx>& second,
                                         int edge_budget, double threshold = 0.005) {
    if (first.size() != second.size())
        throw Error("compare_spectra: spectra have different sizes (" + std::to_string(first.size()) + " vs " +
                    std::to_string(second.size()) + ")");
    if (edge_budget < 0)
        throw Error("compare_spectra: edge_budget must be non-negative");

    std::vector<cplx> all(first);
    all.insert(all.end(), second.begin(), second.end());
    double diameter = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            diameter = std::max(diameter, std::abs(all[i] - all[j]));

    const double d12 = detail::trimmed_max(detail::directed_distances(first, second), edge_budget);
    const double d21 = detail::trimmed_max(detail::directed_distances(second, first), edge_budget);

    SpectraComparison out;
    out.diameter = diameter;
    out.discarded = edge_budget;
    out.distance = diameter > 0 ? std::max(d12, d21) / diameter : 0.0;
    out.verdict = out.distance > threshold ? SkinVerdict::nhse : SkinVerdict::no_nhse;
    return out;
}

inline SpectraComparison compare_spectra(const SpectralResult& obc, const SpectralResult& pbc, int edge_budget,
                                         double threshold = 0.005) {
    return compare_spectra(obc.eigenvalues, pbc.eigenvalues, edge_budget, threshold);
}

// ---------------------------------------------------------------------------

enum class CriterionVerdict { skin_or_extended, bulk_localized, near_critical };

struct CriterionResult {
    double margin = 0.0; ///< |h_Y| + ln|J_Y / J_X| - |h_X|
    CriterionVerdict verdict = CriterionVerdict::skin_or_extended;
};

/// Localization criterion of the non-Hermitian Aubry-Andre-Harper chain at
/// irrational flux. Negative margin means bulk (Anderson) localization.
/// |margin| < critical_band is reported as near-critical.
inline CriterionResult localization_criterion(const HofstadterParams& params, double critical_band = 0.05) {
    params.validate();
    CriterionResult r;
    r.margin = std::abs(params.h_Y) + std::log(std::abs(params.J_Y / params.J_X)) - std::abs(params.h_X);
    if (std::abs(r.margin) < critical_band)
        r.verdict = CriterionVerdict::near_critical;
    else
        r.verdict = r.margin < 0 ? CriterionVerdict::bulk_localized : CriterionVerdict::skin_or_extended;
    return r;
}

inline double median(std::vector<double> v) {
    if (v.empty())
        throw Error("median of an empty sequence");
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<long>(mid)));
    }
    return m;
}

/// max_n I_n / median_n I_n; large values mean boundary pile-up.
inline double pileup_ratio(const std::vector<double>& distribution) {
    const double med = median(distribution);
    const double mx = *std::max_element(distribution.begin(), distribution.end());
    return med > 0 ? mx / med : INFINITY;
}

enum class StateVerdict { edge_skin, bulk_localized, extended };

struct ScalingDiagnosis {
    double ipr_ratio = 0.0; ///< median IPR(large) / median IPR(small)
    double pileup = 0.0;    ///< pileup_ratio of the large system
    StateVerdict verdict = StateVerdict::extended;
};

/// Classify OBC eigenstates from two system sizes: edge pile-up of I_n marks
/// skin modes; otherwise a size-independent median IPR marks bulk localization.
inline ScalingDiagnosis diagnose_scaling(const SpectralResult& small, const SpectralResult& large,
                                         double pileup_threshold = 10.0, double ipr_low = 0.7,
                                         double ipr_high = 1.4) {
    ScalingDiagnosis d;
    d.ipr_ratio = median(large.ipr) / median(small.ipr);
    d.pileup = pileup_ratio(large.mean_distribution);
    if (d.pileup >= pileup_threshold)
        d.verdict = StateVerdict::edge_skin;
    else if (d.ipr_ratio >= ipr_low && d.ipr_ratio <= ipr_high)
        d.verdict = StateVerdict::bulk_localized;
    else
        d.verdict = StateVerdict::extended;
    return d;
}

} // namespace nhse
