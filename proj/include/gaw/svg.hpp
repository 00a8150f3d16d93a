#pragma once

#include <string>

#include "gaw/model.hpp"

namespace gaw {

/// Black filled discs for nodes, black quadratic-Bezier strokes for edges on a
/// white background. Numbers are printed with three decimals, so the output
/// is byte-stable for a given drawing.
std::string render_svg(const Drawing& d);

}  // namespace gaw
