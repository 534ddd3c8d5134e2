// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Tolerances and runtime budgets are fixed here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nhse/hamiltonian.hpp"
#include "nhse/lattice.hpp"
#include "nhse/lattice2d.hpp"
#include "nhse/spectral.hpp"
#include "nhse/transfer.hpp"
#include "nhse/winding.hpp"

using namespace nhse;

namespace {

const BravaisSpec square{1.0, 1.0, pi / 2};
constexpr double golden_approx = 377.0 / 610.0;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void check(const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass)
        ++failures;
    std::printf("%s %s: %s [%.1f s of %.0f s]%s\n", pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs,
                budget_seconds, in_time ? "" : " over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// J_X = 0: only the Y hops survive, E phi_n = e^{h} phi_{n+1} + e^{-h} phi_{n-1}.
EffectiveHamiltonian hatano_nelson(double h, long L, BoundaryCondition bc) {
    const LatticeModel m(square, {{0, 1, std::exp(h)}, {0, -1, std::exp(-h)}});
    return assemble(m, strip_parameters(square, 0, 1), FluxSpec::real(0), 0.0, L, bc);
}

EffectiveHamiltonian harper(const HofstadterParams& p, double Phi, long L, BoundaryCondition bc) {
    return hofstadter_nonreciprocal(p, square, strip_parameters(square, 0, 1), Phi, 0.0, L, bc);
}

double edge_ratio(const ReciprocalDiagonalParams& rp, double Phi, int L, int band) {
    const auto mask = GeometryMask::lower_triangle(L);
    const auto w = edge_weight_fraction(distribution_map(build_masked_hamiltonian(rp, Phi, mask), mask), band);
    return w.fraction / w.uniform;
}

const char* criterion_name(CriterionVerdict v) {
    switch (v) {
    case CriterionVerdict::skin_or_extended:
        return "skin-or-extended";
    case CriterionVerdict::bulk_localized:
        return "bulk-localized";
    case CriterionVerdict::near_critical:
        return "near-critical";
    }
    return "?";
}

Outcome hatano_nelson_oracle() {
    const double h = 0.2;
    const long L = 50;
    const auto H = hatano_nelson(h, L, BoundaryCondition::obc());
    const auto r = diagonalize(H);

    double eig_err = 0.0;
    for (long m = 1; m <= L; ++m) {
        const double expected = 2 * std::cos(pi * static_cast<double>(m) / (L + 1));
        // eigenvalues are sorted by real part, ascending
        eig_err = std::max(eig_err, std::abs(r.eigenvalues[static_cast<std::size_t>(L - m)] - expected));
    }

    // |phi_n / phi_{L+1-n}| = exp(-h (2n - L - 1)); least squares over n = 1..L/2.
    // Nodes of the eigenfunction (round-off level entries) carry no rate information.
    double worst_rate = 0.0;
    for (long l = 0; l < L; ++l) {
        const double floor = 1e-10 * r.eigenvectors.col(l).cwiseAbs().maxCoeff();
        double sxy = 0.0, sxx = 0.0;
        for (long n = 1; n <= L / 2; ++n) {
            const double a = std::abs(r.eigenvectors(n - 1, l)), b = std::abs(r.eigenvectors(L - n, l));
            if (a < floor || b < floor)
                continue;
            const double x = static_cast<double>(2 * n - L - 1);
            sxy += x * std::log(a / b);
            sxx += x * x;
        }
        const double rate = -sxy / sxx;
        worst_rate = std::max(worst_rate, std::abs(rate - h) / h);
    }

    const auto cut = strip_parameters(square, 0, 1);
    const LatticeModel m(square, {{0, 1, std::exp(h)}, {0, -1, std::exp(-h)}});
    const auto wb = winding_bloch(m, cut, FluxSpec::real(0), 0.0, 0.0);
    const auto wf = winding_flux(flux_family([&](BoundaryCondition bc) { return hatano_nelson(h, L, bc); }), 0.0);
    const auto wr = winding_realspace(hatano_nelson(h, 200, BoundaryCondition::obc()), 0.0);

    const bool pass = eig_err < 1e-8 && worst_rate < 0.05 && wb.quantized == 1 && wb.residual < 1e-6 &&
                      wf.quantized == 1 && wf.residual < 1e-6 && std::abs(wr.value - 1.0) < 0.05;
    return {pass, fmt("max |E - 2cos(m pi/51)| = %.2e", eig_err) + fmt(", worst decay-rate error %.2e", worst_rate) +
                      fmt(", W_bloch = %.12f", wb.value) + fmt(", W_flux = %.12f", wf.value) +
                      fmt(", W_realspace(L=200) = %.6f", wr.value)};
}

Outcome fig4_suppression() {
    const HofstadterParams p{2.0, 1.0, 0.0, 0.2};
    const auto obc = diagonalize(harper(p, golden_approx, 610, BoundaryCondition::obc()));
    const auto pbc = diagonalize(harper(p, golden_approx, 610, BoundaryCondition::pbc()));
    const auto half = diagonalize(harper(p, golden_approx, 305, BoundaryCondition::obc()));
    const auto cmp = compare_spectra(obc, pbc, 4);
    const double m610 = median(obc.ipr), m305 = median(half.ipr);
    const double rel = std::abs(m610 - m305) / std::max(m610, m305);
    const double pile = pileup_ratio(obc.mean_distribution);
    const bool pass = cmp.verdict == SkinVerdict::no_nhse && rel < 0.4 && pile < 10;
    return {pass, std::string("verdict ") + (cmp.verdict == SkinVerdict::nhse ? "NHSE" : "no-NHSE") +
                      fmt(" (distance %.2e)", cmp.distance) + fmt(", median IPR 305: %.4f", m305) +
                      fmt(" 610: %.4f", m610) + fmt(" (diff %.1f%%)", 100 * rel) + fmt(", I_n max/median %.2f", pile)};
}

Outcome fig2_persistence() {
    const HofstadterParams p{1.0, 1.0, 0.0, 0.2};
    const double Phi = pi / 2; // caption value used literally
    const auto obc = diagonalize(harper(p, Phi, 500, BoundaryCondition::obc()));
    const auto pbc = diagonalize(harper(p, Phi, 500, BoundaryCondition::pbc()));
    const auto cmp = compare_spectra(obc, pbc, 4);
    const auto& I = obc.mean_distribution;
    const bool max_at_1 = std::max_element(I.begin(), I.end()) == I.begin();
    // least-squares slope of ln I_n over n = 1..20
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n = 1; n <= 20; ++n) {
        const double y = std::log(I[static_cast<std::size_t>(n - 1)]);
        sx += n, sy += y, sxx += n * n, sxy += n * y;
    }
    const double slope = (20 * sxy - sx * sy) / (20 * sxx - sx * sx);
    const bool pass = cmp.verdict == SkinVerdict::nhse && max_at_1 && slope < 0 && I[0] > I[19];
    return {pass, std::string("verdict ") + (cmp.verdict == SkinVerdict::nhse ? "NHSE" : "no-NHSE") +
                      fmt(" (distance %.4f)", cmp.distance) + ", argmax I_n = " +
                      std::to_string(std::max_element(I.begin(), I.end()) - I.begin() + 1) +
                      fmt(", slope of ln I_n over n<=20: %.3f", slope)};
}

Outcome fig5_criterion() {
    std::string detail;
    bool pass = true;
    for (double hX : {0.0, 0.2, 0.3}) {
        const HofstadterParams p{1.0, 1.0, hX, 0.2};
        const auto cr = localization_criterion(p);
        const auto small = diagonalize(harper(p, golden_approx, 305, BoundaryCondition::obc()));
        const auto large = diagonalize(harper(p, golden_approx, 610, BoundaryCondition::obc()));
        const auto d = diagnose_scaling(small, large);
        const char* scaling = d.verdict == StateVerdict::edge_skin        ? "edge-skin"
                              : d.verdict == StateVerdict::bulk_localized ? "bulk-localized"
                                                                          : "extended";
        bool ok = false;
        if (cr.verdict == CriterionVerdict::near_critical)
            ok = std::abs(hX - 0.2) < 1e-12;
        else if (cr.verdict == CriterionVerdict::bulk_localized)
            ok = d.verdict == StateVerdict::bulk_localized;
        else
            ok = d.verdict == StateVerdict::edge_skin;
        pass = pass && ok;
        detail += fmt("h_X=%.1f: ", hX) + fmt("margin %+.3f -> ", cr.margin) + criterion_name(cr.verdict) +
                  ", scaling " + scaling + fmt(" (IPR ratio %.2f", d.ipr_ratio) + fmt(", pile-up %.3g); ", d.pileup);
    }
    return {pass, detail};
}

Outcome appendix_a() {
    const ReciprocalDiagonalParams rp; // kappa_X = 1, kappa_Y = i
    const double kx = 0.1;             // k_x = 0 puts a zero of w_left on the lattice
    std::mt19937 rng(2024);
    std::normal_distribution<double> g;
    const auto half = gauge_transform(rp, 0.5, kx);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const cplx E{g(rng), g(rng)};
        const auto tp = transfer_product(half, E, 2);
        worst = std::max({worst, std::abs(tp.det_magnitude() - 1.0),
                          std::abs(std::exp(tp.log_det_from_matrix()) - 1.0)});
    }
    const auto golden = gauge_transform(rp, golden_approx, kx);
    const double lnq = std::abs(std::log(det_magnitude(golden, 0.0, 610))) / 610;
    const double g305 = integral_identity_gap(rp, golden_approx, kx, 305).gap();
    const double g610 = integral_identity_gap(rp, golden_approx, kx, 610).gap();
    const bool pass = worst < 1e-12 && lnq < 1e-3 && g610 < g305;
    return {pass, fmt("max ||det S| - 1| at Phi=1/2 over 10 E: %.2e", worst) +
                      fmt(", |ln|det S||/q at 377/610: %.2e", lnq) + fmt(", gap q=305: %.4f", g305) +
                      fmt(" q=610: %.4f", g610)};
}

Outcome lyapunov() {
    const auto chain = harper_chain({2.0, 1.0, 0.0, 0.0}, (std::sqrt(5.0) - 1) / 2, 0.0);
    const auto r = lyapunov_exponent(chain, 0.0, 100000);
    const double rel = std::abs(r.value - std::log(2.0)) / std::log(2.0);
    return {rel < 0.05, fmt("lambda = %.6f", r.value) + fmt(" (ln 2 = %.6f", std::log(2.0)) +
                            fmt(", rel. error %.2e", rel) + fmt(", std error %.1e)", r.std_error)};
}

Outcome fig8_triangle() {
    const int L = 60, band = 3;
    const ReciprocalDiagonalParams nh{{1.0, 0.0}, {0.0, 1.0}, 1.0, 1.0};
    const ReciprocalDiagonalParams herm{{1.0, 0.0}, {1.0, 0.0}, 1.0, 1.0};
    const double r0 = edge_ratio(nh, 0.0, L, band);
    const double rh = edge_ratio(herm, 0.0, L, band);
    const double literal = edge_ratio(nh, pi / 2, L, band);
    const double per_plaquette = edge_ratio(nh, 0.25, L, band);
    std::string reading = "none";
    if (literal < 1.5)
        reading = "literal";
    else if (per_plaquette < 1.5)
        reading = "per-plaquette phase (0.25)";
    const bool pass = r0 > 3 && rh < 1.2 && (literal < 1.5 || per_plaquette < 1.5);
    return {pass, fmt("ratio to baseline: Phi=0 %.2f", r0) + fmt(", hermitian %.3f", rh) +
                      fmt(", Phi=pi/2 literal %.2f", literal) + fmt(", Phi=0.25 %.2f", per_plaquette) +
                      "; passing reading: " + reading};
}

Outcome property_suites() {
    std::mt19937 rng(77);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // winding quantization on gapped inputs
    double wres = 0.0;
    for (double h : {0.3, -0.5, 0.8}) {
        const LatticeModel m(square, {{0, 1, std::exp(h)}, {0, -1, std::exp(-h)}});
        wres = std::max(wres, winding_bloch(m, strip_parameters(square, 0, 1), FluxSpec::real(0), 0.0, 0.0).residual);
        wres = std::max(wres, winding_flux(flux_family([&](BoundaryCondition bc) { return hatano_nelson(h, 30, bc); }),
                                           {0.1, 0.05})
                                  .residual);
    }
    wres = std::max(wres, winding_realspace(hatano_nelson(0.8, 100, BoundaryCondition::obc()), 0.0).residual);

    // distribution normalization and eigen-residuals
    double norm_err = 0.0, res_rel = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        const ReciprocalDiagonalParams rp{{g(rng), g(rng)}, {g(rng), g(rng)}, std::sqrt(2.0), std::sqrt(2.0)};
        const auto H = reciprocal_diagonal(rp, u(rng), u(rng), 80, BoundaryCondition::obc());
        const auto r = diagonalize(H);
        double s = 0.0;
        for (double v : r.mean_distribution)
            s += v;
        norm_err = std::max(norm_err, std::abs(s - 1.0));
        for (double v : r.residuals)
            res_rel = std::max(res_rel, v / linalg::norm_bound(H.matrix));
    }

    // gauge transformation leaves the OBC spectrum unchanged
    double gauge_err = 0.0;
    for (double Phi : {0.2, 0.5, golden_approx}) {
        const ReciprocalDiagonalParams rp;
        const auto a = diagonalize(gauge_transform(rp, Phi, 0.3).matrix(60));
        const auto b = diagonalize(reciprocal_diagonal(rp, Phi, 0.3, 60, BoundaryCondition::obc()));
        for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
            gauge_err = std::max(gauge_err, std::abs(a.eigenvalues[i] - b.eigenvalues[i]));
    }

    // plaquette flux on every interior plaquette
    double plaq_err = 0.0;
    const auto mask = GeometryMask::lower_triangle(12);
    const SquareHops hops = SquareHops::from(ReciprocalDiagonalParams{{1.0, 0.0}, {0.0, 1.0}, 1.0, 1.0});
    for (double Phi : {0.1, 1.0 / 3, pi / 2}) {
        const CMatrix H = build_masked_hamiltonian(hops, Phi, mask);
        for (const auto& s : mask.sites())
            if (mask.index(s[0] + 1, s[1]) && mask.index(s[0], s[1] + 1) && mask.index(s[0] + 1, s[1] + 1))
                plaq_err = std::max(plaq_err, std::abs(plaquette_factor(H, hops, mask, s[0], s[1]) -
                                                       std::polar(1.0, 2 * pi * Phi)));
    }

    // closed-form Hofstadter builder against the generic strip reduction
    double cross_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const BravaisSpec b{0.5 + u(rng), 0.5 + u(rng), pi / 2};
        const HofstadterParams hp{0.5 + u(rng), 0.5 + u(rng), 0.3 * g(rng), 0.3 * g(rng)};
        const int p = trial % 3, q = 1 + (trial / 3) % 2;
        if (std::gcd(p, q) != 1)
            continue;
        const auto cut = strip_parameters(b, p, q);
        const double Phi = u(rng), kx = 2 * pi * u(rng);
        const auto a = hofstadter_nonreciprocal(hp, b, cut, Phi, kx, 20, BoundaryCondition::obc());
        const auto c = assemble(hp.model(b), cut, FluxSpec::from_plaquette(Phi, b), kx, 20, BoundaryCondition::obc());
        cross_err = std::max(cross_err, (a.matrix - c.matrix).cwiseAbs().maxCoeff());
    }

    const bool pass = wres < 1e-6 && norm_err < 1e-12 && res_rel < 1e-9 && gauge_err < 1e-10 && plaq_err < 1e-12 &&
                      cross_err < 1e-12;
    return {pass, fmt("winding residual %.1e", wres) + fmt(", |sum I_n - 1| %.1e", norm_err) +
                      fmt(", residual/||H|| %.1e", res_rel) + fmt(", gauge spectrum %.1e", gauge_err) +
                      fmt(", plaquette %.1e", plaq_err) + fmt(", cross-builder %.1e", cross_err)};
}

} // namespace

int main() {
    check("hatano-nelson oracle", 10, hatano_nelson_oracle);
    check("fig4 suppression at 377/610", 600, fig4_suppression);
    check("fig2 persistence at literal pi/2", 600, fig2_persistence);
    check("fig5 criterion sweep", 600, fig5_criterion);
    check("appendix-a exactness", 30, appendix_a);
    check("lyapunov aubry-andre", 30, lyapunov);
    check("fig8 triangle edge weight", 900, fig8_triangle);
    check("property suites", 120, property_suites);
    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
