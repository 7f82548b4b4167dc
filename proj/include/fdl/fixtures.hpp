#pragma once

#include <string>

namespace fdl::fixtures {

// Wire-cut (WEDM) job shop: 12 machines in three size classes, 20 parts
// with per-part cut counts, attribute-style compatibleDevices costs and the
// twelve-entry sequence-dependent setup list.
std::string discreteWedm();

// Paint plant: nine production lines over silos/mixers/tanks, four paints
// with per-line-group batch sizes and recipe times, three operating modes.
std::string processPaint();

} // namespace fdl::fixtures
