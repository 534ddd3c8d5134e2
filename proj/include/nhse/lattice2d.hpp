#pragma once
// Finite square lattices with polygonal open boundaries under a uniform field.
//
// Sites are integer points (X, Y) with a_X = a_Y = 1, ordered row-major by Y
// then X. In the Landau gauge A = (B Y, 0) the matrix element coupling site R
// to R + delta is t(delta) exp(i phi_{R,R+delta}) with phi = +-2 pi Phi Y for
// delta = +-u_X and phi = 0 for delta = +-u_Y.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nhse/common.hpp"
#include "nhse/hamiltonian.hpp"
#include "nhse/spectral.hpp"

namespace nhse {

enum class MaskShape { rectangle, lower_triangle, polygon };

inline std::string to_string(MaskShape s) {
    switch (s) {
    case MaskShape::rectangle:
        return "rectangle";
    case MaskShape::lower_triangle:
        return "triangle";
    case MaskShape::polygon:
        return "polygon";
    }
    return "?";
}

class GeometryMask {
public:
    using Site = std::array<int, 2>;

    /// L x L square.
    static GeometryMask rectangle(int L) {
        require_size(L);
        std::vector<Site> s;
        for (int Y = 0; Y < L; ++Y)
            for (int X = 0; X < L; ++X)
                s.push_back({X, Y});
        return GeometryMask(MaskShape::rectangle, L, std::move(s), {});
    }

    /// 0 <= Y <= X <= L - 1; N = L (L + 1) / 2 sites, hypotenuse X = Y.
    static GeometryMask lower_triangle(int L) {
        require_size(L);
        std::vector<Site> s;
        for (int Y = 0; Y < L; ++Y)
            for (int X = Y; X < L; ++X)
                s.push_back({X, Y});
        return GeometryMask(MaskShape::lower_triangle, L, std::move(s), {});
    }

    /// Lattice points inside or on a simple polygon given by its vertices.
    static GeometryMask polygon(std::vector<std::array<double, 2>> vertices) {
        if (vertices.size() < 3)
            throw Error("GeometryMask: polygon needs at least 3 vertices");
        double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
        for (const auto& v : vertices) {
            xmin = std::min(xmin, v[0]);
            xmax = std::max(xmax, v[0]);
            ymin = std::min(ymin, v[1]);
            ymax = std::max(ymax, v[1]);
        }
        std::vector<Site> s;
        for (int Y = static_cast<int>(std::ceil(ymin - 1e-9)); Y <= static_cast<int>(std::floor(ymax + 1e-9)); ++Y)
            for (int X = static_cast<int>(std::ceil(xmin - 1e-9)); X <= static_cast<int>(std::floor(xmax + 1e-9)); ++X)
                if (boundary_distance_poly(vertices, X, Y) < 1e-9 || inside_poly(vertices, X, Y))
                    s.push_back({X, Y});
        if (s.empty())
            throw Error("GeometryMask: polygon contains no lattice sites");
        const int extent = static_cast<int>(std::ceil(std::max(xmax - xmin, ymax - ymin))) + 1;
        return GeometryMask(MaskShape::polygon, extent, std::move(s), std::move(vertices));
    }

    /// Arbitrary site list; it is re-sorted into canonical order.
    static GeometryMask custom(std::vector<Site> sites, MaskShape shape, int L,
                               std::vector<std::array<double, 2>> vertices = {}) {
        return GeometryMask(shape, L, std::move(sites), std::move(vertices));
    }

    MaskShape shape() const { return shape_; }
    int linear_size() const { return L_; }
    long size() const { return static_cast<long>(sites_.size()); }
    const std::vector<Site>& sites() const { return sites_; }
    const std::vector<std::array<double, 2>>& vertices() const { return vertices_; }

    std::optional<long> index(int X, int Y) const {
        const auto it = index_.find({X, Y});
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    /// Copy without the given site.
    GeometryMask without(int X, int Y) const {
        std::vector<Site> s;
        for (const auto& site : sites_)
            if (site != Site{X, Y})
                s.push_back(site);
        if (s.size() == sites_.size())
            throw Error("GeometryMask::without: site not in mask");
        return GeometryMask(shape_, L_, std::move(s), vertices_);
    }

    /// Distance of a site to the edge set: the hypotenuse for the triangle
    /// (lattice steps X - Y), the nearest side for the rectangle and the
    /// Euclidean distance to the nearest polygon edge otherwise.
    double edge_distance(const Site& s) const {
        switch (shape_) {
        case MaskShape::lower_triangle:
            return static_cast<double>(s[0] - s[1]);
        case MaskShape::rectangle:
            return static_cast<double>(std::min({s[0], s[1], L_ - 1 - s[0], L_ - 1 - s[1]}));
        case MaskShape::polygon:
            return boundary_distance_poly(vertices_, s[0], s[1]);
        }
        return 0.0;
    }

private:
    GeometryMask(MaskShape shape, int L, std::vector<Site> sites, std::vector<std::array<double, 2>> vertices)
        : shape_(shape), L_(L), sites_(std::move(sites)), vertices_(std::move(vertices)) {
        if (sites_.empty())
            throw Error("GeometryMask: empty mask");
        std::sort(sites_.begin(), sites_.end(), [](const Site& a, const Site& b) {
            return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
        });
        for (std::size_t i = 0; i < sites_.size(); ++i)
            if (!index_.emplace(std::make_pair(sites_[i][0], sites_[i][1]), static_cast<long>(i)).second)
                throw Error("GeometryMask: duplicate site (" + std::to_string(sites_[i][0]) + ", " +
                            std::to_string(sites_[i][1]) + ")");
    }

    static void require_size(int L) {
        if (L < 1)
            throw Error("GeometryMask: linear size must be positive");
    }

    static bool inside_poly(const std::vector<std::array<double, 2>>& v, double x, double y) {
        bool in = false;
        for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
            if ((v[i][1] > y) != (v[j][1] > y) &&
                x < (v[j][0] - v[i][0]) * (y - v[i][1]) / (v[j][1] - v[i][1]) + v[i][0])
                in = !in;
        }
        return in;
    }

    static double boundary_distance_poly(const std::vector<std::array<double, 2>>& v, double x, double y) {
        double best = INFINITY;
        for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
            const double ex = v[i][0] - v[j][0], ey = v[i][1] - v[j][1];
            const double len2 = ex * ex + ey * ey;
            double t = len2 > 0 ? ((x - v[j][0]) * ex + (y - v[j][1]) * ey) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            best = std::min(best, std::hypot(x - v[j][0] - t * ex, y - v[j][1] - t * ey));
        }
        return best;
    }

    MaskShape shape_;
    int L_;
    std::vector<Site> sites_;
    std::vector<std::array<double, 2>> vertices_;
    std::map<std::pair<int, int>, long> index_;
};

/// Nearest-neighbour amplitudes t(+u_X), t(-u_X), t(+u_Y), t(-u_Y).
struct SquareHops {
    cplx plus_x{1.0, 0.0};
    cplx minus_x{1.0, 0.0};
    cplx plus_y{1.0, 0.0};
    cplx minus_y{1.0, 0.0};

    static SquareHops from(const ReciprocalDiagonalParams& p) { return {p.kappa_X, p.kappa_X, p.kappa_Y, p.kappa_Y}; }
    static SquareHops from(const HofstadterParams& p) {
        return {p.kappa_XL(), p.kappa_XR(), p.kappa_YL(), p.kappa_YR()};
    }
};

/// Dense N x N Hamiltonian on the masked sites; hops leaving the mask are dropped.
/// `plaquette_flux` is Phi = B a_X a_Y with a_X = a_Y = 1.
inline CMatrix build_masked_hamiltonian(const SquareHops& hops, double plaquette_flux, const GeometryMask& mask) {
    const long N = mask.size();
    CMatrix H = CMatrix::Zero(N, N);
    for (long i = 0; i < N; ++i) {
        const auto [X, Y] = mask.sites()[static_cast<std::size_t>(i)];
        const double phase_x = 2 * pi * plaquette_flux * static_cast<double>(Y);
        if (auto j = mask.index(X + 1, Y))
            H(i, *j) += hops.plus_x * std::polar(1.0, phase_x);
        if (auto j = mask.index(X - 1, Y))
            H(i, *j) += hops.minus_x * std::polar(1.0, -phase_x);
        if (auto j = mask.index(X, Y + 1))
            H(i, *j) += hops.plus_y;
        if (auto j = mask.index(X, Y - 1))
            H(i, *j) += hops.minus_y;
    }
    return H;
}

template <class Params>
CMatrix build_masked_hamiltonian(const Params& params, double plaquette_flux, const GeometryMask& mask) {
    return build_masked_hamiltonian(SquareHops::from(params), plaquette_flux, mask);
}

/// Gauge-invariant flux factor of the plaquette with lower-left corner (X, Y):
/// the product of hopping amplitudes along the counterclockwise loop divided by
/// the bare amplitudes. Equals exp(2 pi i Phi). Requires all four corners in the mask.
inline cplx plaquette_factor(const CMatrix& H, const SquareHops& hops, const GeometryMask& mask, int X, int Y) {
    const auto a = mask.index(X, Y), b = mask.index(X + 1, Y), c = mask.index(X + 1, Y + 1), d = mask.index(X, Y + 1);
    if (!a || !b || !c || !d)
        throw Error("plaquette_factor: plaquette not fully inside the mask");
    // amplitude for a move j -> i is H(i, j)
    const cplx loop = H(*b, *a) * H(*c, *b) * H(*d, *c) * H(*a, *d);
    return loop / (hops.minus_x * hops.minus_y * hops.plus_x * hops.plus_y);
}

struct Distribution2D {
    std::vector<double> values; ///< I_{X,Y} in mask order
    GeometryMask mask;
};

inline Distribution2D distribution_map(const SpectralResult& result, const GeometryMask& mask) {
    if (result.eigenvectors.rows() != mask.size())
        throw Error("distribution_map: eigenvector length does not match the mask");
    return {result.mean_distribution, mask};
}

/// I_{X,Y} = (1/N) sum_l |psi^(l)(X, Y)|^2 over all N normalized right eigenvectors.
inline Distribution2D distribution_map(const CMatrix& H, const GeometryMask& mask) {
    if (H.rows() != mask.size())
        throw Error("distribution_map: matrix size does not match the mask");
    return distribution_map(diagonalize(H), mask);
}

struct EdgeWeight {
    double fraction = 0.0;     ///< weight within the band
    double uniform = 0.0;      ///< fraction of sites within the band
    bool band_exceeds = false; ///< every site is inside the band
};

/// Weight of the distribution within `band_width` lattice spacings of the edge set.
inline EdgeWeight edge_weight_fraction(const Distribution2D& dist, int band_width) {
    if (band_width < 1)
        throw Error("edge_weight_fraction: band_width must be at least 1");
    const auto& sites = dist.mask.sites();
    EdgeWeight w;
    double total = 0.0;
    long in_band = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        total += dist.values[i];
        if (dist.mask.edge_distance(sites[i]) < band_width) {
            w.fraction += dist.values[i];
            ++in_band;
        }
    }
    w.uniform = static_cast<double>(in_band) / static_cast<double>(sites.size());
    if (in_band == static_cast<long>(sites.size())) {
        w.band_exceeds = true;
        w.fraction = 1.0;
        return w;
    }
    if (total > 0)
        w.fraction /= total;
    return w;
}

} // namespace nhse
