#pragma once
// Checked-in run configurations for the figure reproductions.
//
// Caption fluxes written as multiples of pi are used literally; the reading
// in which the caption value is a phase per plaquette (Phi / 2 pi) is kept
// in [flux] alternate or in [meta].

#include <map>
#include <string>
#include <vector>

#include "nhse/io/config.hpp"

namespace nhse::io {

namespace detail {

inline const std::map<std::string, std::string>& recipe_texts() {
    static const std::map<std::string, std::string> texts = {
        {"fig2", R"([run]
name = fig2
builder = hofstadter
k_x = 0
diagnostics = spectrum, distribution, ipr, pbc, compare, criterion, winding_realspace, winding_flux
edge_budget = 4

[strip]
p = 0
q = 1
L = 500

[flux]
value = pi/2
alternate = 0.25

[hofstadter]
J_X = 1
J_Y = 1
h_X = 0
h_Y = 0.2

[winding]
base_energies = 0 0

[sweep]
k_x = range 0 2*pi 128

[meta]
caption_flux = pi/2
flux_readings = literal pi/2; per-plaquette phase 0.25
)"},
        {"fig3", R"([run]
name = fig3
builder = hofstadter
k_x = 0
diagnostics = spectrum, distribution, ipr, pbc, compare, criterion, winding_realspace, winding_flux
edge_budget = 4

[strip]
p = 0
q = 1
L = 500

[flux]
value = pi/50
alternate = 0.01

[hofstadter]
J_X = 1
J_Y = 1
h_X = 0
h_Y = 0.2

[sweep]
k_x = range 0 2*pi 128

[meta]
caption_flux = pi/50
flux_readings = literal pi/50; per-plaquette phase 0.01
)"},
        {"fig4", R"([run]
name = fig4
builder = hofstadter
k_x = 0
diagnostics = spectrum, distribution, ipr, pbc, compare, criterion, winding_realspace, winding_flux, lyapunov
edge_budget = 4

[strip]
p = 0
q = 1
L = 610

[flux]
numerator = 377
denominator = 610

[hofstadter]
J_X = 2
J_Y = 1
h_X = 0
h_Y = 0.2

[winding]
base_energies = 0 0.05

[transfer]
energies = 0 0
lyapunov_length = 100000

[sweep]
k_x = range 0 2*pi 128

[meta]
caption_flux = (sqrt(5)-1)/2 approximated by 377/610
)"},
        {"fig5", R"([run]
name = fig5
builder = hofstadter
k_x = 0
diagnostics = distribution, ipr, criterion

[strip]
p = 0
q = 1
L = 610

[flux]
numerator = 377
denominator = 610

[hofstadter]
J_X = 1
J_Y = 1
h_X = 0
h_Y = 0.2

[sweep]
h_X = values 0 0.2 0.3

[meta]
caption_flux = (sqrt(5)-1)/2 approximated by 377/610
)"},
        {"fig6", R"([run]
name = fig6
builder = reciprocal
k_x = 2*pi/5
diagnostics = spectrum, distribution, ipr, pbc, compare, winding_bloch, winding_realspace, winding_flux

[strip]
p = 1
q = 1
L = 100

[flux]
value = 0

[reciprocal]
kappa_X = 1, 0
kappa_Y = 0, 1

[sweep]
k_x = range 0 2*pi 128

[meta]
caption_flux = 0
)"},
        {"fig7", R"([run]
name = fig7
builder = reciprocal
k_x = 2*pi/5
diagnostics = spectrum, distribution, ipr, pbc, compare, winding_realspace, winding_flux, det, gap

[strip]
p = 1
q = 1
L = 100

[flux]
numerator = 1
denominator = 5

[reciprocal]
kappa_X = 1, 0
kappa_Y = 0, 1

[transfer]
q_values = 5, 10
energies = 0.3 0.1

[sweep]
k_x = range 0 2*pi 128

[meta]
caption_flux = 1/5
)"},
        {"fig8", R"([run]
name = fig8
builder = reciprocal
diagnostics = distribution2d, spectrum2d, edge_weight

[flux]
value = 0

[reciprocal]
kappa_X = 1, 0
kappa_Y = 0, 1
a_X = 1
a_Y = 1

[geometry]
shape = triangle
L = 60
band = 3

[sweep]
flux = values 0 pi/20 pi/4 pi/3 pi/2

[meta]
caption_flux = 0; pi/20; pi/4; pi/3; pi/2
flux_alternate = 0 0.025 0.125 0.16666666666666666 0.25
)"},
    };
    return texts;
}

} // namespace detail

inline std::vector<std::string> recipe_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : detail::recipe_texts())
        out.push_back(name);
    return out;
}

inline const std::string& recipe_text(const std::string& name) {
    const auto& texts = detail::recipe_texts();
    const auto it = texts.find(name);
    if (it == texts.end()) {
        std::string avail;
        for (const auto& n : recipe_names())
            avail += (avail.empty() ? "" : ", ") + n;
        throw Error("unknown recipe '" + name + "'; available: " + avail);
    }
    return it->second;
}

inline RunConfig figure_recipe(const std::string& name) { return parse_config(recipe_text(name)); }

} // namespace nhse::io
