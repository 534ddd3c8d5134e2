#pragma once
// Single-band Bravais lattices under a uniform magnetic field and their
// reduction to effective 1D chains on a strip cut.
//
// Conventions: h = e = 1 (unit flux quantum). Landau gauge A = (B sin(alpha) y, 0)
// in the oblique (x, y) frame, x along the strip, y rotated from x by alpha.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "nhse/common.hpp"

namespace nhse {

struct BravaisSpec {
    double a_X = 1.0;
    double a_Y = 1.0;
    double alpha = pi / 2; ///< angle between the primitive vectors

    void validate() const {
        if (!(a_X > 0) || !(a_Y > 0))
            throw Error("BravaisSpec: lattice constants must be positive");
        if (!(alpha > 0) || !(alpha < pi))
            throw Error("BravaisSpec: alpha must lie in (0, pi)");
    }

    double cell_area() const { return a_X * a_Y * std::sin(alpha); }

    /// Cartesian position of n_X a_X u_X + n_Y a_Y u_Y, with u_X along the first axis.
    std::array<double, 2> cartesian(double n_X, double n_Y) const {
        return {n_X * a_X + n_Y * a_Y * std::cos(alpha), n_Y * a_Y * std::sin(alpha)};
    }

    bool operator==(const BravaisSpec&) const = default;
};

/// Hop by the lattice vector n_X a_X u_X + n_Y a_Y u_Y with amplitude t(delta).
/// The amplitude multiplies psi(R + delta) in the equation for psi(R).
struct HoppingTerm {
    int n_X = 0;
    int n_Y = 0;
    cplx amplitude{0.0, 0.0};

    bool operator==(const HoppingTerm&) const = default;
};

class LatticeModel {
public:
    LatticeModel(BravaisSpec bravais, std::vector<HoppingTerm> hops)
        : bravais_(bravais), hops_(std::move(hops)) {
        bravais_.validate();
        if (hops_.empty())
            throw Error("LatticeModel: hopping set is empty");
        std::set<std::pair<int, int>> seen;
        for (const auto& h : hops_) {
            if (h.n_X == 0 && h.n_Y == 0)
                throw Error("LatticeModel: zero displacement in hopping set");
            if (h.amplitude == cplx{0.0, 0.0})
                throw Error("LatticeModel: zero hopping amplitude");
            if (!seen.emplace(h.n_X, h.n_Y).second)
                throw Error("LatticeModel: duplicate hop (" + std::to_string(h.n_X) + ", " +
                            std::to_string(h.n_Y) + ")");
        }
    }

    const BravaisSpec& bravais() const { return bravais_; }
    const std::vector<HoppingTerm>& hops() const { return hops_; }

    /// Amplitude of the hop (n_X, n_Y), or nullopt when it is not in the set.
    std::optional<cplx> amplitude(int n_X, int n_Y) const {
        for (const auto& h : hops_)
            if (h.n_X == n_X && h.n_Y == n_Y)
                return h.amplitude;
        return std::nullopt;
    }

private:
    BravaisSpec bravais_;
    std::vector<HoppingTerm> hops_;
};

/// Strip direction x along the lattice vector q a_X u_X + p a_Y u_Y.
struct StripCut {
    int p = 0;
    int q = 1;
    double theta = 0.0; ///< angle between x and the principal axis X
    double a = 1.0;     ///< reduced lattice constant along y
};

/// Magnetic field B (flux quanta per unit area). A rational tag records
/// fluxes declared as numerator/denominator.
struct FluxSpec {
    double value = 0.0;
    std::optional<std::pair<long, long>> rational;

    static FluxSpec real(double b) { return FluxSpec{b, std::nullopt}; }
    static FluxSpec ratio(long numerator, long denominator) {
        if (denominator <= 0)
            throw Error("FluxSpec: denominator must be positive");
        return FluxSpec{static_cast<double>(numerator) / static_cast<double>(denominator),
                        std::make_pair(numerator, denominator)};
    }
    /// Field giving `plaquette_flux` flux quanta through one unit cell.
    static FluxSpec from_plaquette(double plaquette_flux, const BravaisSpec& b) {
        return real(plaquette_flux / b.cell_area());
    }

    bool operator==(const FluxSpec&) const = default;
};

inline StripCut strip_parameters(const BravaisSpec& bravais, int p, int q) {
    bravais.validate();
    if (p == 0 && q == 0)
        throw Error("strip_parameters: p = q = 0 does not define a direction");
    if (q < 1 || p < 0)
        throw Error("strip_parameters: require q >= 1 and p >= 0 (got p=" + std::to_string(p) +
                    ", q=" + std::to_string(q) + ")");
    if (std::gcd(p, q) != 1)
        throw Error("strip_parameters: p=" + std::to_string(p) + " and q=" + std::to_string(q) +
                    " are not coprime");

    const double sa = std::sin(bravais.alpha);
    const double ca = std::cos(bravais.alpha);
    // q a_X sin(theta) = p a_Y sin(alpha - theta)
    const double theta = std::atan2(p * bravais.a_Y * sa, q * bravais.a_X + p * bravais.a_Y * ca);

    StripCut cut;
    cut.p = p;
    cut.q = q;
    cut.theta = theta;
    if (p == 0)
        cut.a = bravais.a_Y * std::sin(bravais.alpha - theta) / (q * sa);
    else
        cut.a = bravais.a_X * std::sin(theta) / (p * sa);
    return cut;
}

struct ProjectedDelta {
    double delta_x = 0.0;
    double delta_y = 0.0;
    int l = 0; ///< delta_y = l * a
};

inline ProjectedDelta project_delta(const StripCut& cut, const BravaisSpec& b, const HoppingTerm& t) {
    const double sa = std::sin(b.alpha);
    ProjectedDelta d;
    d.delta_x = (t.n_X * b.a_X * std::sin(b.alpha + cut.theta) + t.n_Y * b.a_Y * std::sin(cut.theta)) / sa;
    d.delta_y = (-t.n_X * b.a_X * std::sin(cut.theta) + t.n_Y * b.a_Y * std::sin(b.alpha - cut.theta)) / sa;
    d.l = -t.n_X * cut.p + t.n_Y * cut.q;
    return d;
}

/// Position-independent part of the Peierls phase of a hop.
inline double peierls_static_phase(const BravaisSpec& b, const FluxSpec& flux, double delta_x, double delta_y) {
    return pi * flux.value * delta_y * std::sin(b.alpha) * (delta_x + delta_y * std::cos(b.alpha));
}

using HoppingTable = std::map<int, cplx>;

/// Per-hop data of the strip reduction, precomputed once per (model, cut, flux).
/// tau_l(n) = sum over hops with shift l of t exp(i (n * site_phase + k_x delta_x + static_phase)).
class StripReduction {
public:
    struct Entry {
        int l;
        cplx amplitude;
        double delta_x;
        double site_phase;   ///< 2 pi B a sin(alpha) (delta_x + l a cos(alpha))
        double static_phase; ///< theta_delta
    };

    StripReduction(const LatticeModel& model, const StripCut& cut, const FluxSpec& flux) {
        const auto& b = model.bravais();
        for (const auto& h : model.hops()) {
            const auto d = project_delta(cut, b, h);
            Entry e;
            e.l = d.l;
            e.amplitude = h.amplitude;
            e.delta_x = d.delta_x;
            e.site_phase = 2 * pi * flux.value * cut.a * std::sin(b.alpha) *
                           (d.delta_x + d.l * cut.a * std::cos(b.alpha));
            e.static_phase = peierls_static_phase(b, flux, d.delta_x, d.delta_y);
            entries_.push_back(e);
            max_shift_ = std::max(max_shift_, std::abs(d.l));
        }
    }

    HoppingTable table(double k_x, long n) const {
        HoppingTable out;
        for (const auto& e : entries_) {
            const double phase = static_cast<double>(n) * e.site_phase + k_x * e.delta_x + e.static_phase;
            out[e.l] += e.amplitude * std::polar(1.0, phase);
        }
        return out;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    int max_shift() const { return max_shift_; }

private:
    std::vector<Entry> entries_;
    int max_shift_ = 0;
};

/// Effective hopping rates tau_l(n) between sites n and n + l of the reduced chain.
inline HoppingTable effective_hopping_table(const LatticeModel& model, const StripCut& cut,
                                            const FluxSpec& flux, double k_x, long n) {
    return StripReduction(model, cut, flux).table(k_x, n);
}

struct ReciprocityClass {
    bool reciprocal = false;
    bool hermitian = false;
    bool operator==(const ReciprocityClass&) const = default;
};

inline ReciprocityClass classify_reciprocity(const LatticeModel& model, double rel_tol = 1e-12) {
    ReciprocityClass c{true, true};
    for (const auto& h : model.hops()) {
        const auto back = model.amplitude(-h.n_X, -h.n_Y);
        if (!back) {
            return {false, false};
        }
        const double scale = std::max(std::abs(h.amplitude), std::abs(*back));
        if (std::abs(std::abs(*back) - std::abs(h.amplitude)) > rel_tol * scale)
            c.reciprocal = false;
        if (std::abs(*back - std::conj(h.amplitude)) > rel_tol * scale)
            c.hermitian = false;
    }
    if (!c.reciprocal)
        c.hermitian = false;
    return c;
}

/// Bloch band E(k) = sum_delta t(delta) exp(i k . delta), k Cartesian.
inline cplx bloch_energy(const LatticeModel& model, std::array<double, 2> k) {
    cplx e{0.0, 0.0};
    for (const auto& h : model.hops()) {
        const auto r = model.bravais().cartesian(h.n_X, h.n_Y);
        e += h.amplitude * std::polar(1.0, k[0] * r[0] + k[1] * r[1]);
    }
    return e;
}

/// Same band parameterized by the phases (k . a_X u_X, k . a_Y u_Y) on the torus.
inline cplx bloch_energy_reduced(const LatticeModel& model, double phase_X, double phase_Y) {
    cplx e{0.0, 0.0};
    for (const auto& h : model.hops())
        e += h.amplitude * std::polar(1.0, h.n_X * phase_X + h.n_Y * phase_Y);
    return e;
}

/// Area of the image of the Brillouin zone under E(k) in the complex plane.
///
/// The band is sampled on a (4 * resolution)^2 grid of the torus and rasterized
/// onto square pixels of side (spectral diameter) / resolution; the area is the
/// number of occupied pixels times the pixel area. A real band occupies a
/// single pixel row. The estimate decreases towards the true area as the
/// resolution grows.
inline double spectral_area(const LatticeModel& model, int resolution) {
    if (resolution < 64)
        throw Error("spectral_area: resolution must be at least 64");
    const int samples = 4 * resolution;
    std::vector<cplx> values;
    values.reserve(static_cast<std::size_t>(samples) * samples);
    double re_min = INFINITY, re_max = -INFINITY, im_min = INFINITY, im_max = -INFINITY;
    for (int i = 0; i < samples; ++i) {
        for (int j = 0; j < samples; ++j) {
            const cplx e = bloch_energy_reduced(model, 2 * pi * i / samples, 2 * pi * j / samples);
            values.push_back(e);
            re_min = std::min(re_min, e.real());
            re_max = std::max(re_max, e.real());
            im_min = std::min(im_min, e.imag());
            im_max = std::max(im_max, e.imag());
        }
    }
    const double diameter = std::max(re_max - re_min, im_max - im_min);
    if (diameter <= 0)
        return 0.0;
    const double side = diameter / resolution;
    const long nx = static_cast<long>(std::floor((re_max - re_min) / side)) + 1;
    const long ny = static_cast<long>(std::floor((im_max - im_min) / side)) + 1;
    std::vector<char> occupied(static_cast<std::size_t>(nx * ny), 0);
    for (const auto& e : values) {
        const long ix = std::min(nx - 1, static_cast<long>(std::floor((e.real() - re_min) / side)));
        const long iy = std::min(ny - 1, static_cast<long>(std::floor((e.imag() - im_min) / side)));
        occupied[static_cast<std::size_t>(iy * nx + ix)] = 1;
    }
    const auto count = std::count(occupied.begin(), occupied.end(), 1);
    return static_cast<double>(count) * side * side;
}

} // namespace nhse
