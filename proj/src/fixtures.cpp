#include "fdl/fixtures.hpp"

#include "fdl/fixed.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fdl::fixtures {

namespace {

    std::string tenthsStr(std::int64_t tenths) { return Time::fromTenths(tenths).str(); }

    // -------------------------------------------------------------- discrete

    struct PartRow {
        std::int64_t time;  // tenths of a minute
        std::int64_t money; // tenths: wire + machine cost per part
    };

    constexpr int kSizes = 3; // 0 Small, 1 Medium, 2 Large
    const char* kSizeNames[kSizes] = { "Small", "Medium", "Large" };

    // Published measurements for parts 1 and 20; the remaining parts carry
    // deterministic synthetic values in the same ranges.
    const std::map<std::tuple<int, int, int>, PartRow>& publishedRows()
    {
        static const std::map<std::tuple<int, int, int>, PartRow> rows = {
            { { 1, 0, 1 }, { 28335, 281 + 1640 } },   // 2833.5 min, 28.1 + 164.0
            { { 1, 0, 2 }, { 29562, 281 + 1403 } },   // 2956.2, 28.1 + 140.3
            { { 1, 0, 3 }, { 30421, 281 + 1478 } },   // 3042.1, 28.1 + 147.8
            { { 1, 0, 4 }, { 31741, 302 + 1368 } },   // 3174.1, 30.2 + 136.8
            { { 1, 1, 1 }, { 20335, 302 + 2429 } },   // 2033.5, 30.2 + 242.9
            { { 1, 2, 4 }, { 19741, 537 + 4084 } },   // 1974.1, 53.7 + 408.4
            { { 20, 2, 1 }, { 53413, 3352 + 58667 } }, // 5341.3, 335.2 + 5866.7
            { { 20, 2, 2 }, { 55051, 3831 + 83810 } }, // 5505.1, 383.1 + 8381.0
            { { 20, 2, 3 }, { 51917, 4821 + 56738 } }, // 5191.7, 482.1 + 5673.8
            { { 20, 2, 4 }, { 41066, 6483 + 47549 } }, // 4106.6, 648.3 + 4754.9
        };
        return rows;
    }

    PartRow rowFor(int part, int size, int machine)
    {
        if (auto it = publishedRows().find({ part, size, machine }); it != publishedRows().end())
            return it->second;
        std::int64_t p = part, s = size, k = machine;
        PartRow row;
        row.time = 15000 + p * 800 + s * 2500 + k * 320 + ((p * 37 + k * 11 + s * 5) % 97) * 10;
        std::int64_t wire = 200 + p * 12 + s * 40 + k * 7;
        std::int64_t machineCost = 900 + p * 45 + s * 350 + k * 23 + ((p * 13 + k * 29) % 53) * 10;
        row.money = wire + machineCost;
        return row;
    }

    std::vector<int> sizesFor(int part)
    {
        if (part == 1)
            return { 0, 1, 2 };
        if (part == 20)
            return { 2 };
        switch (part % 3) {
        case 2: return { 0, 1 };
        case 0: return { 1, 2 };
        default: return { 0, 1, 2 };
        }
    }

    int cutsFor(int part)
    {
        if (part == 15)
            return 10;
        return (part - 1) % 10 + 1;
    }

} // namespace

std::string discreteWedm()
{
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<!-- Wire-cut discrete manufacturing model: 12 machines, 20 parts. -->\n";
    out << "<factory>\n";
    out << "  <objectives>\n";
    out << "    <objective name=\"makespan\" />\n";
    out << "    <objective name=\"monetary\" />\n";
    out << "  </objectives>\n";

    out << "  <processingDevices>\n";
    for (int size = 0; size < kSizes; ++size) {
        for (int machine = 1; machine <= 4; ++machine) {
            std::string name = std::string(kSizeNames[size]) + " " + std::to_string(machine);
            if (name == "Small 1") {
                out << "    <processingDevice name=\"Small 1\" availability=\"1\">\n"
                    << "      <unavailableTimes>\n"
                    << "        <unavailableTime>50,100</unavailableTime>\n"
                    << "        <unavailableTime>250,300</unavailableTime>\n"
                    << "      </unavailableTimes>\n"
                    << "    </processingDevice>\n";
            } else if (name == "Small 2") {
                out << "    <processingDevice name=\"Small 2\" availability=\"1\">\n"
                    << "      <unavailableTimes>\n"
                    << "        <unavailableTime>0,20</unavailableTime>\n"
                    << "      </unavailableTimes>\n"
                    << "    </processingDevice>\n";
            } else if (name == "Small 3") {
                out << "    <processingDevice name=\"Small 3\" availability=\"0\">\n"
                    << "      <unavailableTimes>\n"
                    << "        <unavailableTime>25,30</unavailableTime>\n"
                    << "      </unavailableTimes>\n"
                    << "    </processingDevice>\n";
            } else {
                out << "    <processingDevice name=\"" << name << "\" availability=\"1\" />\n";
            }
        }
    }
    out << "  </processingDevices>\n";

    out << "  <productionProcesses>\n";
    for (int part = 1; part <= 20; ++part) {
        out << "    <productionProcess name=\"P" << part << "\" priority=\"" << part << "\" cuts=\""
            << cutsFor(part) << "\">\n";
        out << "      <compatibleDevices>\n";
        for (int size : sizesFor(part)) {
            for (int machine = 1; machine <= 4; ++machine) {
                PartRow row = rowFor(part, size, machine);
                out << "        <compatibleDevice name=\"" << kSizeNames[size] << ' ' << machine
                    << "\" processingTime=\"" << tenthsStr(row.time) << "\" energy=\"120\" monetary=\""
                    << tenthsStr(row.money) << "\" />\n";
            }
        }
        out << "      </compatibleDevices>\n";
        out << "    </productionProcess>\n";
    }
    out << "  </productionProcesses>\n";

    out << "  <sequenceDependentSetups>\n";
    for (int size = 0; size < kSizes; ++size)
        for (int machine = 1; machine <= 4; ++machine)
            out << "    <sequenceDependentSetup source=\"P1\" destination=\"P2\" processingDevice=\""
                << kSizeNames[size] << ' ' << machine
                << "\" extraProcessingTime=\"10\" extraEnergyConsumption=\"10\" "
                   "extraMonetaryCost=\"1000\" />\n";
    out << "  </sequenceDependentSetups>\n";
    out << "</factory>\n";
    return out.str();
}

// ------------------------------------------------------------------ process

namespace {

    struct PaintGroup {
        std::int64_t batchTenths;  // tonnes
        std::int64_t recipeTenths; // minutes at Standard
        int firstLine;
        int lastLine;
    };

    struct Paint {
        const char* name;
        int priority;
        std::array<PaintGroup, 3> groups;
    };

    const std::array<Paint, 4>& paints()
    {
        static const std::array<Paint, 4> table = { {
            { "Std Weiss", 1, { { { 50, 600, 1, 5 }, { 100, 450, 6, 7 }, { 100, 300, 8, 9 } } } },
            { "Super White", 2, { { { 60, 900, 1, 5 }, { 120, 600, 6, 7 }, { 120, 450, 8, 9 } } } },
            { "Std Blue", 3, { { { 40, 1000, 1, 5 }, { 80, 800, 6, 7 }, { 80, 600, 8, 9 } } } },
            { "Std Green", 4, { { { 40, 1200, 1, 5 }, { 80, 900, 6, 7 }, { 80, 600, 8, 9 } } } },
        } };
        return table;
    }

    const char* kModes[3] = { "Economy", "Standard", "Power" };

    std::int64_t modeTime(std::int64_t standardTenths, int mode)
    {
        switch (mode) {
        case 0: return standardTenths * 3 / 2;
        case 2: return standardTenths / 2;
        default: return standardTenths;
        }
    }

    std::int64_t modeEnergy(std::int64_t timeTenths, int mode)
    {
        static const std::int64_t mult[3] = { 1, 2, 5 };
        return timeTenths * mult[mode];
    }

    std::int64_t modeMoney(std::int64_t timeTenths, int mode)
    {
        static const std::int64_t mult[3] = { 1, 2, 5 };
        return timeTenths * mult[mode];
    }

    int siloOf(int line) { return (line - 1) / 3 + 1; }
    int tankOf(int line) { return (line - 1) / 3 + 1; }

} // namespace

std::string processPaint()
{
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<!-- Paint plant: 9 production lines over silos, mixers and tanks. -->\n";
    out << "<factory>\n";
    out << "  <objectives>\n";
    out << "    <objective name=\"makespan\" />\n";
    out << "    <objective name=\"energy\" />\n";
    out << "    <objective name=\"monetary\" />\n";
    out << "  </objectives>\n";

    out << "  <processingDevices>\n";
    auto device = [&](const std::string& name) {
        out << "    <processingDevice name=\"" << name << "\" availability=\"1\">\n"
            << "      <modes>\n";
        for (const char* mode : kModes)
            out << "        <mode name=\"" << mode << "\" />\n";
        out << "      </modes>\n"
            << "    </processingDevice>\n";
    };
    for (int i = 1; i <= 3; ++i)
        device("Silo " + std::to_string(i));
    for (int i = 1; i <= 9; ++i)
        device("Mixer " + std::to_string(i));
    for (int i = 1; i <= 3; ++i)
        device("Tank " + std::to_string(i));
    out << "  </processingDevices>\n";

    out << "  <productionLines>\n";
    for (int line = 1; line <= 9; ++line) {
        out << "    <productionLine name=\"P" << line << "\">\n"
            << "      <productionLineProcessingDevices>\n"
            << "        <productionLineProcessingDevice order=\"0\" name=\"Silo " << siloOf(line)
            << "\" />\n"
            << "        <productionLineProcessingDevice order=\"1\" name=\"Mixer " << line << "\" />\n"
            << "        <productionLineProcessingDevice order=\"2\" name=\"Tank " << tankOf(line)
            << "\" />\n"
            << "      </productionLineProcessingDevices>\n"
            << "    </productionLine>\n";
    }
    out << "  </productionLines>\n";

    out << "  <productionProcesses>\n";
    const char* groupTag[3] = { "A", "B", "C" };
    for (const auto& paint : paints()) {
        // Order size named like the source scenario ("Std Weiss 45t").
        std::int64_t orderTonnes = paint.groups[0].batchTenths * 9 / 10; // informative only
        out << "    <productionProcess name=\"" << paint.name << ' ' << orderTonnes
            << "t\" priority=\"" << paint.priority << "\">\n";
        for (int g = 0; g < 3; ++g) {
            const PaintGroup& group = paint.groups[g];
            std::string typeName = std::string(paint.name) + " " + groupTag[g];
            out << "      <processType name=\"" << typeName << "\" amountProduced=\""
                << tenthsStr(group.batchTenths) << "t\">\n";
            out << "        <compatibleProductionLines>\n";
            for (int line = group.firstLine; line <= group.lastLine; ++line)
                out << "          <compatibleProductionLine>P" << line << "</compatibleProductionLine>\n";
            out << "        </compatibleProductionLines>\n";
            out << "        <subprocesses>\n";
            for (int task = 1; task <= 3; ++task) {
                out << "          <subprocess name=\"" << typeName << " Task " << task << "\">\n";
                for (int line = group.firstLine; line <= group.lastLine; ++line) {
                    for (int mode = 0; mode < 3; ++mode) {
                        std::int64_t total = modeTime(group.recipeTenths, mode);
                        std::int64_t quarter = total / 4;
                        std::int64_t taskTime = task == 2 ? total - 2 * quarter : quarter;
                        out << "            <subprocessProcessingDevicesGroup processingTime=\""
                            << tenthsStr(taskTime) << "\" energyConsumption=\""
                            << tenthsStr(modeEnergy(taskTime, mode)) << "\" monetaryCost=\""
                            << tenthsStr(modeMoney(taskTime, mode)) << "\">\n";
                        if (task == 1)
                            out << "              <subprocessProcessingDevice name=\"Silo "
                                << siloOf(line) << "\" mode=\"" << kModes[mode] << "\" />\n";
                        out << "              <subprocessProcessingDevice name=\"Mixer " << line
                            << "\" mode=\"" << kModes[mode] << "\" />\n";
                        if (task == 3)
                            out << "              <subprocessProcessingDevice name=\"Tank " << tankOf(line)
                                << "\" mode=\"" << kModes[mode] << "\" />\n";
                        out << "            </subprocessProcessingDevicesGroup>\n";
                    }
                }
                out << "          </subprocess>\n";
            }
            out << "        </subprocesses>\n";
            out << "      </processType>\n";
        }
        out << "      <subprocessRelations>\n";
        for (int g = 0; g < 3; ++g) {
            std::string typeName = std::string(paint.name) + " " + groupTag[g];
            for (int task = 1; task <= 2; ++task)
                out << "        <subprocessRelation source=\"" << typeName << " Task " << task
                    << "\" destination=\"" << typeName << " Task " << task + 1
                    << "\" allensOperator=\"M\" />\n";
        }
        out << "      </subprocessRelations>\n";
        out << "    </productionProcess>\n";
    }
    out << "  </productionProcesses>\n";
    out << "</factory>\n";
    return out.str();
}

} // namespace fdl::fixtures
