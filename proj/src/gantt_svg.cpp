#include "fdl/gantt_svg.hpp"

#include "fdl/xml.hpp"

#include <algorithm>
#include <sstream>

namespace fdl {

namespace {

    constexpr double kLaneHeight = 34.0;
    constexpr double kLaneGap = 8.0;
    constexpr double kBarHeight = 24.0;
    constexpr double kLabelWidth = 140.0;
    constexpr double kAxisHeight = 28.0;

    const char* kPalette[] = { "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948",
        "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac" };

    std::string color(std::int32_t subprocess)
    {
        return kPalette[static_cast<std::size_t>(subprocess) % (sizeof(kPalette) / sizeof(kPalette[0]))];
    }

} // namespace

std::string renderGanttSvg(const Schedule& schedule, const FactoryModel& model)
{
    std::int64_t horizon = schedule.makespan().tenths();
    for (const auto& lane : schedule.perDevice)
        for (const auto& seg : lane)
            horizon = std::max(horizon, seg.end.tenths());
    double minutes = static_cast<double>(horizon) / 10.0;
    double scale = minutes > 0 ? std::max(0.5, 900.0 / minutes) : 1.0;

    double width = kLabelWidth + minutes * scale + 20.0;
    double height = kAxisHeight + static_cast<double>(model.devices.size()) * (kLaneHeight + kLaneGap);

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << ' ' << height << "'>\n";
    out << "<defs><pattern id='setupHatch' width='6' height='6' patternUnits='userSpaceOnUse' "
           "patternTransform='rotate(45)'>"
           "<rect width='6' height='6' fill='#ffd166'/>"
           "<line x1='0' y1='0' x2='0' y2='6' stroke='#7a5c00' stroke-width='2'/>"
           "</pattern></defs>\n";
    out << "<style>text{font:11px sans-serif;}</style>\n";

    // Time axis in minutes.
    double tickStep = 1.0;
    while (minutes / tickStep > 12.0)
        tickStep *= (tickStep < 4.9 ? 5.0 : 2.0);
    for (double tick = 0.0; tick <= minutes + 1e-9; tick += tickStep) {
        double x = kLabelWidth + tick * scale;
        out << "<line x1='" << x << "' y1='" << kAxisHeight - 6 << "' x2='" << x << "' y2='" << height
            << "' stroke='#ddd'/>\n";
        out << "<text x='" << x << "' y='" << kAxisHeight - 10 << "' text-anchor='middle'>" << tick
            << "</text>\n";
    }

    for (std::size_t d = 0; d < model.devices.size(); ++d) {
        double laneTop = kAxisHeight + static_cast<double>(d) * (kLaneHeight + kLaneGap);
        double barTop = laneTop + (kLaneHeight - kBarHeight) / 2.0;
        out << "<text x='4' y='" << laneTop + kLaneHeight / 2.0 + 4.0 << "'>"
            << xml::escapeText(model.devices[d].name) << "</text>\n";
        out << "<line x1='" << kLabelWidth << "' y1='" << laneTop + kLaneHeight << "' x2='" << width - 10
            << "' y2='" << laneTop + kLaneHeight << "' stroke='#999'/>\n";
        for (const auto& seg : schedule.perDevice[d]) {
            double x = kLabelWidth + static_cast<double>(seg.start.tenths()) / 10.0 * scale;
            double w = static_cast<double>(seg.end.tenths() - seg.start.tenths()) / 10.0 * scale;
            std::string fill;
            switch (seg.kind) {
            case SegmentKind::Execution: fill = color(seg.subprocess.value); break;
            case SegmentKind::Setup: fill = "url(#setupHatch)"; break;
            case SegmentKind::Suspension: fill = "#c0c0c0"; break;
            }
            out << "<rect x='" << x << "' y='" << barTop << "' width='" << w << "' height='" << kBarHeight
                << "' fill='" << fill << "' stroke='#333' stroke-width='0.5'>";
            out << "<title>" << xml::escapeText(model.subprocesses[seg.subprocess.value].name) << " ["
                << seg.start.str() << ", " << seg.end.str() << ")</title></rect>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace fdl
