#pragma once
// Orchestration of single runs and sweeps: builds Hamiltonians from a
// RunConfig, evaluates the requested diagnostics and writes CSV files.
//
// Every file starts with the same '#' metadata block (code version, config
// hash, builder parameters), so outputs are byte-identical for identical
// configs. Worker count never changes the output.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nhse/hamiltonian.hpp"
#include "nhse/lattice.hpp"
#include "nhse/lattice2d.hpp"
#include "nhse/parallel.hpp"
#include "nhse/spectral.hpp"
#include "nhse/transfer.hpp"
#include "nhse/winding.hpp"
#include "nhse/io/config.hpp"
#include "nhse/io/csv.hpp"

namespace nhse::io {

enum class Command { spectrum, sweep, winding, transfer, geometry2d };

inline std::string to_string(Command c) {
    switch (c) {
    case Command::spectrum:
        return "spectrum";
    case Command::sweep:
        return "sweep";
    case Command::winding:
        return "winding";
    case Command::transfer:
        return "transfer";
    case Command::geometry2d:
        return "geometry2d";
    }
    return "?";
}

struct RunOptions {
    std::filesystem::path out = ".";
    unsigned workers = 1;
    long seed = 0; ///< reserved; nothing is stochastic yet
};

struct RunReport {
    std::vector<std::filesystem::path> files;
    long points = 0;
    long failures = 0; ///< grid points with a non-empty error column
};

/// One point of the parameter grid.
struct GridPoint {
    double k_x = 0.0;
    double flux = 0.0;
    bool flux_swept = false;
    HofstadterParams hofstadter;
};

/// Cartesian product of the sweep axes, first axis outermost. A config
/// without axes gives a single point.
inline std::vector<GridPoint> sweep_grid(const RunConfig& c) {
    std::vector<GridPoint> grid{GridPoint{c.k_x, c.flux, false, c.hofstadter}};
    for (const auto& ax : c.sweep) {
        std::vector<GridPoint> next;
        for (const auto& base : grid) {
            for (double v : ax.values()) {
                GridPoint p = base;
                if (ax.name == "k_x")
                    p.k_x = v;
                else if (ax.name == "flux")
                    p.flux = v, p.flux_swept = true;
                else if (ax.name == "h_X")
                    p.hofstadter.h_X = v;
                else if (ax.name == "h_Y")
                    p.hofstadter.h_Y = v;
                else
                    throw Error("sweep: unknown axis '" + ax.name + "'");
                next.push_back(p);
            }
        }
        grid = std::move(next);
    }
    return grid;
}

/// Flux values only: the sweep's flux axis if present, the [flux] value otherwise.
inline std::vector<double> flux_values(const RunConfig& c) {
    for (const auto& ax : c.sweep)
        if (ax.name == "flux")
            return ax.values();
    return {c.flux};
}

inline EffectiveHamiltonian build_strip(const RunConfig& c, const GridPoint& pt, BoundaryCondition bc) {
    switch (c.builder) {
    case BuilderKind::hofstadter:
        return hofstadter_nonreciprocal(pt.hofstadter, c.bravais, strip_parameters(c.bravais, c.p, c.q), pt.flux,
                                        pt.k_x, c.L, bc);
    case BuilderKind::reciprocal:
        return reciprocal_diagonal(c.reciprocal, pt.flux, pt.k_x, c.L, bc);
    case BuilderKind::generic: {
        FluxSpec flux = FluxSpec::from_plaquette(pt.flux, c.bravais);
        if (c.flux_ratio && !pt.flux_swept && c.bravais.cell_area() == 1.0)
            flux = FluxSpec::ratio(c.flux_ratio->first, c.flux_ratio->second);
        return assemble(c.generic_model(), strip_parameters(c.bravais, c.p, c.q), flux, pt.k_x, c.L, bc);
    }
    }
    throw Error("unknown builder");
}

inline GridPoint base_point(const RunConfig& c) { return GridPoint{c.k_x, c.flux, false, c.hofstadter}; }

namespace detail {

inline std::vector<std::string> metadata(const RunConfig& c, Command cmd) {
    std::vector<std::string> m;
    m.push_back(std::string("nhse ") + version);
    m.push_back("config " + config_hash(c));
    m.push_back("run " + c.name + " command=" + to_string(cmd) + " builder=" + to_string(c.builder));
    std::string params;
    switch (c.builder) {
    case BuilderKind::hofstadter:
        params = "J_X=" + format_double(c.hofstadter.J_X) + " J_Y=" + format_double(c.hofstadter.J_Y) +
                 " h_X=" + format_double(c.hofstadter.h_X) + " h_Y=" + format_double(c.hofstadter.h_Y) +
                 " p=" + std::to_string(c.p) + " q=" + std::to_string(c.q);
        break;
    case BuilderKind::reciprocal:
        params = "kappa_X=" + format_double(c.reciprocal.kappa_X.real()) + "," +
                 format_double(c.reciprocal.kappa_X.imag()) + " kappa_Y=" + format_double(c.reciprocal.kappa_Y.real()) +
                 "," + format_double(c.reciprocal.kappa_Y.imag());
        break;
    case BuilderKind::generic:
        params = "hops=" + std::to_string(c.hops.size()) + " p=" + std::to_string(c.p) + " q=" + std::to_string(c.q);
        break;
    }
    m.push_back(params);
    std::string geo = "L=" + std::to_string(c.L) + " k_x=" + format_double(c.k_x) + " flux=" + format_double(c.flux);
    if (c.flux_ratio)
        geo += " flux_ratio=" + std::to_string(c.flux_ratio->first) + "/" + std::to_string(c.flux_ratio->second);
    if (c.flux_alternate)
        geo += " flux_alternate=" + format_double(*c.flux_alternate);
    if (cmd == Command::geometry2d)
        geo = "shape=" + to_string(c.geometry.shape) + " L=" + std::to_string(c.geometry.L) +
              " band=" + std::to_string(c.geometry.band) + " flux=" + format_double(c.flux);
    m.push_back(geo);
    for (const auto& [k, v] : c.meta)
        m.push_back("meta " + k + " = " + v);
    return m;
}

class Writer {
public:
    Writer(const RunConfig& c, Command cmd, const RunOptions& opt, RunReport& report)
        : meta_(metadata(c, cmd)), dir_(opt.out), report_(report) {
        std::filesystem::create_directories(dir_);
    }

    CsvTable table(std::vector<std::string> columns, const std::string& extra = "") const {
        auto m = meta_;
        if (!extra.empty())
            m.push_back(extra);
        return CsvTable(std::move(m), std::move(columns));
    }

    void save(const CsvTable& t, const std::string& file) {
        const auto path = dir_ / file;
        t.write(path);
        report_.files.push_back(path);
    }

private:
    std::vector<std::string> meta_;
    std::filesystem::path dir_;
    RunReport& report_;
};

inline void write_spectrum_set(Writer& w, const SpectralResult& r, const std::string& suffix, const std::string& bc) {
    auto spec = w.table({"index", "re", "im", "ipr"}, "bc=" + bc);
    for (long i = 0; i < r.size(); ++i)
        spec.row({i + 1, r.eigenvalues[static_cast<std::size_t>(i)].real(),
                  r.eigenvalues[static_cast<std::size_t>(i)].imag(), r.ipr[static_cast<std::size_t>(i)]});
    w.save(spec, "spectrum" + suffix + ".csv");
}

inline void write_distribution(Writer& w, const SpectralResult& r, const std::string& suffix, const std::string& bc) {
    auto dist = w.table({"n", "I_n"}, "bc=" + bc);
    for (std::size_t n = 0; n < r.mean_distribution.size(); ++n)
        dist.row({n + 1, r.mean_distribution[n]});
    w.save(dist, "distribution" + suffix + ".csv");
}

inline void write_ipr(Writer& w, const SpectralResult& r, const std::string& suffix, const std::string& bc) {
    auto t = w.table({"index", "ipr"}, "bc=" + bc);
    for (std::size_t i = 0; i < r.ipr.size(); ++i)
        t.row({i + 1, r.ipr[i]});
    w.save(t, "ipr" + suffix + ".csv");
}

inline void write_matrix(Writer& w, const CMatrix& H, const std::string& file, const std::string& extra) {
    auto t = w.table({"row", "col", "re", "im"}, extra);
    for (long i = 0; i < H.rows(); ++i)
        for (long j = 0; j < H.cols(); ++j)
            if (H(i, j) != cplx{})
                t.row({i + 1, j + 1, H(i, j).real(), H(i, j).imag()});
    w.save(t, file);
}

inline std::string verdict_name(SkinVerdict v) { return v == SkinVerdict::nhse ? "NHSE" : "no-NHSE"; }

inline std::string verdict_name(CriterionVerdict v) {
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

inline Cell optional_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

} // namespace detail

inline std::string verdict_name(SkinVerdict v) { return detail::verdict_name(v); }
inline std::string verdict_name(CriterionVerdict v) { return detail::verdict_name(v); }

// ---------------------------------------------------------------------------

inline void run_spectrum(const RunConfig& c, detail::Writer& w) {
    static const std::vector<std::string> defaults = {"spectrum", "distribution", "ipr"};
    const bool any_obc = c.wants("spectrum", defaults) || c.wants("distribution", defaults) ||
                         c.wants("ipr", defaults) || c.wants("compare", defaults) || c.wants("matrix", defaults) ||
                         c.wants("criterion", defaults);
    if (!any_obc && !c.wants("pbc", defaults))
        return;
    const auto pt = base_point(c);
    const auto H = build_strip(c, pt, BoundaryCondition::obc());
    const auto obc = diagonalize(H, c.residual_tol);
    if (c.wants("spectrum", defaults))
        detail::write_spectrum_set(w, obc, "", "obc");
    if (c.wants("distribution", defaults))
        detail::write_distribution(w, obc, "", "obc");
    if (c.wants("ipr", defaults))
        detail::write_ipr(w, obc, "", "obc");
    if (c.wants("matrix", defaults))
        detail::write_matrix(w, H.matrix, "matrix.csv", "bc=obc");

    if (c.wants("pbc", defaults) || c.wants("compare", defaults)) {
        const auto Hp = build_strip(c, pt, BoundaryCondition::pbc());
        const auto pbc = diagonalize(Hp, c.residual_tol);
        if (c.wants("pbc", defaults)) {
            detail::write_spectrum_set(w, pbc, "_pbc", "pbc");
            detail::write_distribution(w, pbc, "_pbc", "pbc");
            detail::write_ipr(w, pbc, "_pbc", "pbc");
            if (c.wants("matrix", defaults))
                detail::write_matrix(w, Hp.matrix, "matrix_pbc.csv", "bc=pbc");
        }
        if (c.wants("compare", defaults)) {
            const auto cmp = compare_spectra(obc, pbc, c.edge_budget, c.threshold);
            auto t = w.table({"verdict", "distance", "diameter", "edge_budget", "threshold"});
            t.row({detail::verdict_name(cmp.verdict), cmp.distance, cmp.diameter, cmp.discarded, c.threshold});
            w.save(t, "compare.csv");
        }
    }
    if (c.wants("criterion", defaults)) {
        auto t = w.table({"margin", "verdict", "pileup", "median_ipr"});
        if (c.builder == BuilderKind::hofstadter) {
            const auto cr = localization_criterion(c.hofstadter);
            t.row({cr.margin, detail::verdict_name(cr.verdict), pileup_ratio(obc.mean_distribution), median(obc.ipr)});
        } else {
            t.row({Cell(), Cell("n/a"), pileup_ratio(obc.mean_distribution), median(obc.ipr)});
        }
        w.save(t, "criterion.csv");
    }
}

struct SweepPoint {
    std::optional<SpectralResult> spectrum;
    std::optional<double> mean_log_ratio;
    std::string error;
};

inline void run_sweep(const RunConfig& c, detail::Writer& w, const RunOptions& opt, RunReport& report) {
    static const std::vector<std::string> defaults = {"spectrum", "distribution"};
    const auto grid = sweep_grid(c);
    for (const auto& ax : c.sweep)
        if ((ax.name == "h_X" || ax.name == "h_Y") && c.builder != BuilderKind::hofstadter)
            throw Error("sweep: axis " + ax.name + " requires the hofstadter builder");
    report.points = static_cast<long>(grid.size());
    const BoundaryCondition bc =
        c.boundary == Boundary::open ? BoundaryCondition::obc() : BoundaryCondition::pbc();

    const auto results = parallel_map<SweepPoint>(grid.size(), opt.workers, [&](std::size_t i) {
        SweepPoint out;
        const auto& pt = grid[i];
        try {
            auto cfg = c;
            cfg.hofstadter = pt.hofstadter;
            out.spectrum = diagonalize(build_strip(cfg, pt, bc), c.residual_tol);
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        if (c.builder == BuilderKind::reciprocal) {
            try {
                double acc = 0.0;
                for (long n = 1; n <= c.L; ++n)
                    acc += std::log(local_ratio(c.reciprocal, pt.flux, pt.k_x, n));
                out.mean_log_ratio = acc / static_cast<double>(c.L);
            } catch (const std::exception& e) {
                out.error += (out.error.empty() ? "" : "; ") + std::string(e.what());
            }
        }
        return out;
    });

    const std::string bc_tag = "bc=" + to_string(c.boundary);
    auto points = w.table({"point", "k_x", "flux", "h_X", "h_Y", "pileup", "median_ipr", "mean_log_ratio", "error"},
                          bc_tag);
    auto spec = w.table({"point", "k_x", "flux", "h_X", "h_Y", "index", "re", "im", "ipr"}, bc_tag);
    auto dist = w.table({"point", "n", "I_n"}, bc_tag);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& pt = grid[i];
        const auto& r = results[i];
        if (!r.error.empty())
            ++report.failures;
        std::optional<double> pile, mipr;
        if (r.spectrum) {
            pile = pileup_ratio(r.spectrum->mean_distribution);
            mipr = median(r.spectrum->ipr);
            for (long k = 0; k < r.spectrum->size(); ++k) {
                const auto e = r.spectrum->eigenvalues[static_cast<std::size_t>(k)];
                spec.row({i, pt.k_x, pt.flux, pt.hofstadter.h_X, pt.hofstadter.h_Y, k + 1, e.real(), e.imag(),
                          r.spectrum->ipr[static_cast<std::size_t>(k)]});
            }
            for (std::size_t n = 0; n < r.spectrum->mean_distribution.size(); ++n)
                dist.row({i, n + 1, r.spectrum->mean_distribution[n]});
        }
        points.row({i, pt.k_x, pt.flux, pt.hofstadter.h_X, pt.hofstadter.h_Y, detail::optional_cell(pile),
                    detail::optional_cell(mipr), detail::optional_cell(r.mean_log_ratio), r.error});
    }
    w.save(points, "sweep_points.csv");
    if (c.wants("spectrum", defaults))
        w.save(spec, "sweep_spectrum.csv");
    if (c.wants("distribution", defaults))
        w.save(dist, "sweep_distribution.csv");
}

/// Lattice model and cut behind the configured builder, for the Bloch winding.
inline std::pair<LatticeModel, StripCut> strip_model(const RunConfig& c) {
    switch (c.builder) {
    case BuilderKind::hofstadter:
        return {c.hofstadter.model(c.bravais), strip_parameters(c.bravais, c.p, c.q)};
    case BuilderKind::reciprocal:
        return {c.reciprocal.model(), strip_parameters(c.reciprocal.bravais(), 1, 1)};
    case BuilderKind::generic:
        return {c.generic_model(), strip_parameters(c.bravais, c.p, c.q)};
    }
    throw Error("unknown builder");
}

inline void run_winding(const RunConfig& c, detail::Writer& w, const RunOptions& opt, RunReport& report) {
    static const std::vector<std::string> defaults = {"winding_bloch", "winding_realspace", "winding_flux"};
    const auto pt = base_point(c);
    const std::vector<std::string> cols = {"E_B_re", "E_B_im", "raw", "quantized", "residual", "error"};
    auto emit = [&](CsvTable& t, cplx E, const std::function<WindingResult()>& f) {
        try {
            const auto r = f();
            t.row({E.real(), E.imag(), r.value, r.quantized, r.residual, ""});
        } catch (const std::exception& e) {
            ++report.failures;
            t.row({E.real(), E.imag(), Cell(), Cell(), Cell(), e.what()});
        }
    };
    if (c.wants("winding_bloch", defaults)) {
        auto t = w.table(cols);
        const auto [model, cut] = strip_model(c);
        const auto flux = FluxSpec::from_plaquette(c.flux, model.bravais());
        for (const auto& E : c.winding.base_energies)
            emit(t, E, [&] { return winding_bloch(model, cut, flux, c.k_x, E); });
        w.save(t, "winding_bloch.csv");
    }
    if (c.wants("winding_realspace", defaults)) {
        auto t = w.table({"E_B_re", "E_B_im", "raw", "quantized", "residual", "imag_residue", "error"});
        const auto H = build_strip(c, pt, BoundaryCondition::obc());
        for (const auto& E : c.winding.base_energies) {
            try {
                const auto r = winding_realspace(H, E, c.winding.margin);
                t.row({E.real(), E.imag(), r.value, r.quantized, r.residual, r.imag_residue, ""});
            } catch (const std::exception& e) {
                ++report.failures;
                t.row({E.real(), E.imag(), Cell(), Cell(), Cell(), Cell(), e.what()});
            }
        }
        w.save(t, "winding_realspace.csv");
    }
    if (c.wants("winding_flux", defaults)) {
        auto t = w.table(cols);
        const auto family = flux_family([&](BoundaryCondition bc) { return build_strip(c, pt, bc); });
        for (const auto& E : c.winding.base_energies)
            emit(t, E, [&] { return winding_flux(family, E, c.winding.samples, opt.workers); });
        w.save(t, "winding_flux.csv");
    }
}

inline void run_transfer(const RunConfig& c, detail::Writer& w, RunReport& report) {
    const std::vector<std::string> defaults =
        c.builder == BuilderKind::reciprocal ? std::vector<std::string>{"det", "gap"}
                                             : std::vector<std::string>{"lyapunov"};
    const auto fluxes = flux_values(c);
    const std::vector<long> qs = c.transfer.q_values.empty() ? std::vector<long>{c.L} : c.transfer.q_values;
    const cplx probe = c.transfer.energies.empty() ? cplx{} : c.transfer.energies.front();

    if (c.wants("det", defaults) || c.wants("gap", defaults)) {
        if (c.builder != BuilderKind::reciprocal)
            throw Error("transfer: det and gap need the reciprocal builder");
        auto t = w.table({"q", "flux", "det_magnitude", "gap", "error"});
        for (double phi : fluxes) {
            const auto chain = gauge_transform(c.reciprocal, phi, c.k_x);
            for (long q : qs) {
                std::optional<double> det, gap;
                std::string err;
                try {
                    if (c.wants("det", defaults))
                        det = det_magnitude(chain, probe, q);
                } catch (const std::exception& e) {
                    err = e.what();
                }
                try {
                    if (c.wants("gap", defaults))
                        gap = integral_identity_gap(c.reciprocal, phi, c.k_x, q).gap();
                } catch (const std::exception& e) {
                    err += (err.empty() ? "" : "; ") + std::string(e.what());
                }
                if (!err.empty())
                    ++report.failures;
                t.row({q, phi, detail::optional_cell(det), detail::optional_cell(gap), err});
            }
        }
        w.save(t, "transfer.csv");
    }
    if (c.wants("lyapunov", defaults)) {
        auto t = w.table({"flux", "E_re", "E_im", "length", "value", "std_error", "converged", "error"});
        for (double phi : fluxes) {
            ChainFunction chain;
            if (c.builder == BuilderKind::hofstadter) {
                if (c.p != 0 || c.q != 1)
                    throw Error("transfer: the Harper chain needs the p = 0, q = 1 cut");
                chain = harper_chain(c.hofstadter, phi, c.k_x);
            } else if (c.builder == BuilderKind::reciprocal) {
                chain = gauge_transform(c.reciprocal, phi, c.k_x).as_chain();
            } else {
                throw Error("transfer: lyapunov needs the hofstadter or reciprocal builder");
            }
            for (const auto& E : c.transfer.energies) {
                try {
                    const auto r = lyapunov_exponent(chain, E, c.transfer.lyapunov_length, c.transfer.segments);
                    t.row({phi, E.real(), E.imag(), c.transfer.lyapunov_length, r.value, r.std_error, r.converged, ""});
                } catch (const std::exception& e) {
                    ++report.failures;
                    t.row({phi, E.real(), E.imag(), c.transfer.lyapunov_length, Cell(), Cell(), Cell(), e.what()});
                }
            }
        }
        w.save(t, "lyapunov.csv");
    }
}

struct GeometryPoint {
    std::optional<SpectralResult> spectrum;
    CMatrix matrix;
    std::string error;
};

inline GeometryMask make_mask(const GeometrySection& g) {
    return g.shape == MaskShape::rectangle ? GeometryMask::rectangle(g.L) : GeometryMask::lower_triangle(g.L);
}

inline CMatrix build_2d(const RunConfig& c, double phi, const GeometryMask& mask) {
    switch (c.builder) {
    case BuilderKind::hofstadter:
        return build_masked_hamiltonian(c.hofstadter, phi, mask);
    case BuilderKind::reciprocal:
        return build_masked_hamiltonian(c.reciprocal, phi, mask);
    case BuilderKind::generic:
        break;
    }
    throw Error("geometry2d: needs the hofstadter or reciprocal builder");
}

inline void run_geometry2d(const RunConfig& c, detail::Writer& w, const RunOptions& opt, RunReport& report) {
    static const std::vector<std::string> defaults = {"distribution2d", "spectrum2d", "edge_weight"};
    const auto mask = make_mask(c.geometry);
    const auto fluxes = flux_values(c);
    report.points = static_cast<long>(fluxes.size());

    const auto results = parallel_map<GeometryPoint>(fluxes.size(), opt.workers, [&](std::size_t i) {
        GeometryPoint out;
        try {
            out.matrix = build_2d(c, fluxes[i], mask);
            out.spectrum = diagonalize(out.matrix, c.residual_tol);
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        return out;
    });

    const int L = c.geometry.L;
    std::vector<std::string> grid_cols = {"point", "flux", "Y"};
    for (int X = 0; X < L; ++X)
        grid_cols.push_back("X" + std::to_string(X));
    auto dist = w.table({"point", "flux", "X", "Y", "I"});
    auto grid = w.table(grid_cols, "empty cells lie outside the mask");
    auto spec = w.table({"point", "flux", "index", "re", "im"});
    auto edge = w.table({"point", "flux", "band", "fraction", "uniform", "ratio", "band_exceeds", "error"});
    auto mat = w.table({"point", "row", "col", "re", "im"});
    for (std::size_t i = 0; i < fluxes.size(); ++i) {
        const auto& r = results[i];
        if (!r.spectrum) {
            ++report.failures;
            edge.row({i, fluxes[i], c.geometry.band, Cell(), Cell(), Cell(), Cell(), r.error});
            continue;
        }
        const auto d = distribution_map(*r.spectrum, mask);
        for (std::size_t s = 0; s < mask.sites().size(); ++s)
            dist.row({i, fluxes[i], mask.sites()[s][0], mask.sites()[s][1], d.values[s]});
        for (int Y = 0; Y < L; ++Y) {
            std::vector<Cell> row = {i, fluxes[i], Y};
            for (int X = 0; X < L; ++X) {
                const auto idx = mask.index(X, Y);
                row.push_back(idx ? Cell(d.values[static_cast<std::size_t>(*idx)]) : Cell());
            }
            grid.row(row);
        }
        for (long k = 0; k < r.spectrum->size(); ++k)
            spec.row({i, fluxes[i], k + 1, r.spectrum->eigenvalues[static_cast<std::size_t>(k)].real(),
                      r.spectrum->eigenvalues[static_cast<std::size_t>(k)].imag()});
        std::string err;
        try {
            const auto ew = edge_weight_fraction(d, c.geometry.band);
            edge.row({i, fluxes[i], c.geometry.band, ew.fraction, ew.uniform, ew.fraction / ew.uniform,
                      ew.band_exceeds, ew.band_exceeds ? "band covers the whole mask" : ""});
        } catch (const std::exception& e) {
            ++report.failures;
            edge.row({i, fluxes[i], c.geometry.band, Cell(), Cell(), Cell(), Cell(), e.what()});
        }
        for (long a = 0; a < r.matrix.rows(); ++a)
            for (long b = 0; b < r.matrix.cols(); ++b)
                if (r.matrix(a, b) != cplx{})
                    mat.row({i, a + 1, b + 1, r.matrix(a, b).real(), r.matrix(a, b).imag()});
    }
    if (c.wants("distribution2d", defaults)) {
        w.save(dist, "distribution2d.csv");
        w.save(grid, "distribution2d_matrix.csv");
    }
    if (c.wants("spectrum2d", defaults))
        w.save(spec, "spectrum2d.csv");
    if (c.wants("edge_weight", defaults))
        w.save(edge, "edge_weight.csv");
    if (c.wants("matrix", defaults))
        w.save(mat, "matrix2d.csv");
}

/// Runs one subcommand. Solver and builder errors outside sweeps propagate.
inline RunReport run(Command cmd, const RunConfig& c, const RunOptions& opt = {}) {
    RunReport report;
    report.points = 1;
    detail::Writer w(c, cmd, opt, report);
    const bool metadata_only = c.diagnostics && c.diagnostics->empty();
    if (!metadata_only) {
        switch (cmd) {
        case Command::spectrum:
            run_spectrum(c, w);
            break;
        case Command::sweep:
            run_sweep(c, w, opt, report);
            break;
        case Command::winding:
            run_winding(c, w, opt, report);
            break;
        case Command::transfer:
            run_transfer(c, w, report);
            break;
        case Command::geometry2d:
            run_geometry2d(c, w, opt, report);
            break;
        }
    }
    auto info = w.table({"key", "value"});
    info.row({"command", to_string(cmd)});
    info.row({"name", c.name});
    info.row({"builder", to_string(c.builder)});
    info.row({"version", version});
    info.row({"config_hash", config_hash(c)});
    info.row({"seed", opt.seed});
    std::string diags;
    if (c.diagnostics)
        for (const auto& d : *c.diagnostics)
            diags += (diags.empty() ? "" : " ") + d;
    else
        diags = "(defaults)";
    info.row({"diagnostics", diags});
    info.row({"points", report.points});
    info.row({"failures", report.failures});
    w.save(info, "run_info.csv");
    return report;
}

} // namespace nhse::io
