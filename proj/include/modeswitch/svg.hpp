#pragma once

#include "modeswitch/interpret.hpp"

#include <string>
#include <vector>

namespace modeswitch {

// Line chart: one grey polyline per exported curve plus the highlighted
// average. x axis is the grid feature, y axis the switching probability
// (its change from the anchor when centered, with a tick at 0). Throws
// std::invalid_argument for an empty family.
std::string render_svg(const CurveFamily& family, const CurveExportOptions& options = {});

// Horizontal bar chart, one bar per row with a value.
std::string render_svg(const std::vector<EffectRow>& rows);

} // namespace modeswitch
