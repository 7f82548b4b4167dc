#include "fdl/parser.hpp"

#include "fdl/xml.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace fdl {

using xml::Element;
using xml::nameEquals;

std::string_view dialectName(DialectProfile profile)
{
    switch (profile) {
    case DialectProfile::Canonical: return "canonical";
    case DialectProfile::Discrete: return "discrete";
    case DialectProfile::Process: return "process";
    case DialectProfile::Mixed: return "mixed";
    }
    return "?";
}

namespace {

    std::string trimmed(std::string_view s)
    {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
            ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
            --e;
        return std::string(s.substr(b, e - b));
    }

    // The published listings misspell a few tags and attributes
    // (comptiableDevice, montary); both spellings are accepted.
    bool isCompatibleDevicesTag(std::string_view n)
    {
        return nameEquals(n, "compatibleDevices") || nameEquals(n, "comptiableDevices");
    }
    bool isCompatibleDeviceTag(std::string_view n)
    {
        return nameEquals(n, "compatibleDevice") || nameEquals(n, "comptiableDevice");
    }
    bool isCompatibleLinesTag(std::string_view n)
    {
        return nameEquals(n, "compatibleProductionLines") || nameEquals(n, "comptiableProductionLines");
    }
    bool isCompatibleLineTag(std::string_view n)
    {
        return nameEquals(n, "compatibleProductionLine") || nameEquals(n, "comptiableProductionLine");
    }

    class DocumentReader {
    public:
        raw::Factory factory;
        std::vector<Diagnostic> diags;
        bool sawCanonical = false;
        bool sawDiscrete = false;
        bool sawProcess = false;

        void error(std::string code, std::string message, SourceLoc loc)
        {
            diags.push_back(Diagnostic::error(std::move(code), std::move(message), loc));
        }
        void warning(std::string code, std::string message, SourceLoc loc)
        {
            diags.push_back(Diagnostic::warning(std::move(code), std::move(message), loc));
        }

        void unknownElement(const Element& e)
        {
            warning("UnknownElement", "unknown element '" + e.name + "' ignored", e.location);
        }

        std::optional<std::string> requireAttribute(const Element& e, std::string_view attr)
        {
            if (auto v = e.attributeValue(attr))
                return trimmed(*v);
            error("MissingAttribute",
                "element '" + e.name + "' is missing the mandatory '" + std::string(attr) + "' attribute",
                e.location);
            return std::nullopt;
        }

        template <class Tag>
        std::optional<Fixed1<Tag>> parseNumber(std::string_view text, SourceLoc loc)
        {
            if (auto v = Fixed1<Tag>::parse(text))
                return v;
            error("BadNumber", "'" + std::string(text) + "' is not a non-negative number with at most one decimal",
                loc);
            return std::nullopt;
        }

        std::optional<int> parseInt(std::string_view text, SourceLoc loc)
        {
            std::string t = trimmed(text);
            int value = 0;
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
            if (ec != std::errc() || ptr != t.data() + t.size() || value < 0) {
                error("BadNumber", "'" + t + "' is not a non-negative integer", loc);
                return std::nullopt;
            }
            return value;
        }

        // Quantities accept an optional 't' (tonnes) suffix: "5t", "4.5 t".
        std::optional<Quantity> parseQuantity(std::string_view text, SourceLoc loc)
        {
            std::string t = trimmed(text);
            if (!t.empty() && (t.back() == 't' || t.back() == 'T'))
                t = trimmed(std::string_view(t).substr(0, t.size() - 1));
            return parseNumber<struct QuantityTag>(t, loc);
        }

        void checkAttributes(const Element& e, std::initializer_list<std::string_view> known)
        {
            for (const auto& a : e.attributes) {
                bool ok = false;
                for (auto k : known)
                    if (nameEquals(a.name, k)) {
                        ok = true;
                        break;
                    }
                if (!ok)
                    warning("UnknownAttribute",
                        "unknown attribute '" + a.name + "' on '" + e.name + "' ignored", a.location);
            }
        }

        // -------------------------------------------------------------- objectives

        void readObjectives(const Element& e)
        {
            for (const auto& child : e.children) {
                if (!nameEquals(child->name, "objective")) {
                    unknownElement(*child);
                    continue;
                }
                checkAttributes(*child, { "name" });
                auto name = requireAttribute(*child, "name");
                if (!name)
                    continue;
                auto kind = objectiveKindFromName(*name);
                if (!kind) {
                    error("UnknownObjective",
                        "objective '" + *name + "' is not one of makespan/energy/monetary", child->location);
                    continue;
                }
                factory.objectives.push_back(*kind);
            }
        }

        // ----------------------------------------------------------------- devices

        void readDevices(const Element& e)
        {
            for (const auto& child : e.children) {
                if (!nameEquals(child->name, "processingDevice")) {
                    unknownElement(*child);
                    continue;
                }
                checkAttributes(*child, { "name", "availability" });
                raw::Device device;
                device.location = child->location;
                auto name = requireAttribute(*child, "name");
                if (!name)
                    continue;
                device.name = *name;
                if (auto avail = child->attributeValue("availability")) {
                    std::string a = trimmed(*avail);
                    if (a == "0" || nameEquals(a, "false"))
                        device.available = false;
                    else if (a == "1" || nameEquals(a, "true"))
                        device.available = true;
                    else
                        error("BadNumber", "availability must be 0 or 1, got '" + a + "'", child->location);
                }
                for (const auto& section : child->children) {
                    if (nameEquals(section->name, "unavailableTimes"))
                        readWindows(*section, device);
                    else if (nameEquals(section->name, "modes"))
                        readModes(*section, device);
                    else
                        unknownElement(*section);
                }
                factory.devices.push_back(std::move(device));
            }
        }

        void readWindows(const Element& e, raw::Device& device)
        {
            for (const auto& w : e.children) {
                if (!nameEquals(w->name, "unavailableTime")) {
                    unknownElement(*w);
                    continue;
                }
                std::string startText, endText;
                if (w->findAttribute("start") || w->findAttribute("end")) {
                    auto s = requireAttribute(*w, "start");
                    auto t = requireAttribute(*w, "end");
                    if (!s || !t)
                        continue;
                    startText = *s;
                    endText = *t;
                } else {
                    // "50,100": minutes from the start of manufacturing.
                    auto comma = w->text.find(',');
                    if (comma == std::string::npos) {
                        error("BadNumber",
                            "unavailableTime expects 'start,end' minutes, got '" + w->text + "'", w->location);
                        continue;
                    }
                    startText = trimmed(std::string_view(w->text).substr(0, comma));
                    endText = trimmed(std::string_view(w->text).substr(comma + 1));
                }
                auto start = parseNumber<struct TimeTag>(startText, w->location);
                auto end = parseNumber<struct TimeTag>(endText, w->location);
                if (start && end)
                    device.unavailableWindows.push_back({ *start, *end, w->location });
            }
        }

        void readModes(const Element& e, raw::Device& device)
        {
            int declared = 0;
            for (const auto& m : e.children) {
                if (!nameEquals(m->name, "mode")) {
                    unknownElement(*m);
                    continue;
                }
                checkAttributes(*m, { "name" });
                auto name = requireAttribute(*m, "name");
                if (!name)
                    continue;
                device.modes.push_back({ *name, m->location });
                ++declared;
            }
            if (declared == 0)
                error("EmptyModes", "device '" + device.name + "' declares a modes element with no mode",
                    e.location);
        }

        // ------------------------------------------------------------------- lines

        void readLines(const Element& e)
        {
            for (const auto& child : e.children) {
                if (!nameEquals(child->name, "productionLine")) {
                    unknownElement(*child);
                    continue;
                }
                checkAttributes(*child, { "name" });
                raw::Line line;
                line.location = child->location;
                auto name = requireAttribute(*child, "name");
                if (!name)
                    continue;
                line.name = *name;
                for (const auto& wrapper : child->children) {
                    if (!nameEquals(wrapper->name, "productionLineProcessingDevices")) {
                        unknownElement(*wrapper);
                        continue;
                    }
                    for (const auto& st : wrapper->children) {
                        if (!nameEquals(st->name, "productionLineProcessingDevice")) {
                            unknownElement(*st);
                            continue;
                        }
                        checkAttributes(*st, { "order", "name" });
                        auto order = requireAttribute(*st, "order");
                        auto device = requireAttribute(*st, "name");
                        if (!order || !device)
                            continue;
                        auto orderValue = parseInt(*order, st->location);
                        if (!orderValue)
                            continue;
                        line.stations.push_back({ *orderValue, *device, st->location });
                    }
                }
                factory.lines.push_back(std::move(line));
            }
        }

        // --------------------------------------------------------------- processes

        std::optional<raw::Option> readCanonicalModeOption(
            const Element& deviceEl, const std::string& deviceName, const Element& modeEl)
        {
            sawCanonical = true;
            checkAttributes(modeEl, { "modeName", "mode", "name" });
            std::string modeName;
            if (auto m = modeEl.attributeValue("modeName"))
                modeName = trimmed(*m);
            else if (auto m2 = modeEl.attributeValue("mode"))
                modeName = trimmed(*m2);
            else if (auto m3 = modeEl.attributeValue("name"))
                modeName = trimmed(*m3);

            raw::Option option;
            option.location = modeEl.location;
            option.allocations.push_back({ deviceName, modeName, deviceEl.location });
            for (const auto& cost : modeEl.children) {
                if (nameEquals(cost->name, "processingTime"))
                    option.processingTime = parseNumber<struct TimeTag>(cost->text, cost->location);
                else if (nameEquals(cost->name, "energyConsumption") || nameEquals(cost->name, "energy"))
                    option.energyConsumption = parseNumber<struct EnergyTag>(cost->text, cost->location);
                else if (nameEquals(cost->name, "monetaryCost") || nameEquals(cost->name, "monetary")
                    || nameEquals(cost->name, "montary"))
                    option.monetaryCost = parseNumber<struct MoneyTag>(cost->text, cost->location);
                else
                    unknownElement(*cost);
            }
            return option;
        }

        // <subProcessProcessingDevice name=".." processingTime=".." energy=".." montary=".."/>
        std::optional<raw::Option> readAttributeOption(const Element& e)
        {
            sawDiscrete = true;
            checkAttributes(e,
                { "name", "processingDeviceName", "mode", "modeName", "processingTime", "energy",
                    "energyConsumption", "montary", "monetary", "monetaryCost" });
            std::string deviceName;
            if (auto n = e.attributeValue("processingDeviceName"))
                deviceName = trimmed(*n);
            else if (auto n2 = e.attributeValue("name"))
                deviceName = trimmed(*n2);
            else {
                error("MissingAttribute",
                    "subprocessProcessingDevice needs a name/processingDeviceName attribute", e.location);
                return std::nullopt;
            }
            std::string modeName;
            if (auto m = e.attributeValue("modeName"))
                modeName = trimmed(*m);
            else if (auto m2 = e.attributeValue("mode"))
                modeName = trimmed(*m2);

            raw::Option option;
            option.location = e.location;
            option.allocations.push_back({ deviceName, modeName, e.location });
            if (auto t = e.attributeValue("processingTime"))
                option.processingTime = parseNumber<struct TimeTag>(*t, e.location);
            if (auto en = e.attributeValue("energyConsumption"))
                option.energyConsumption = parseNumber<struct EnergyTag>(*en, e.location);
            else if (auto en2 = e.attributeValue("energy"))
                option.energyConsumption = parseNumber<struct EnergyTag>(*en2, e.location);
            if (auto m = e.attributeValue("monetaryCost"))
                option.monetaryCost = parseNumber<struct MoneyTag>(*m, e.location);
            else if (auto m2 = e.attributeValue("monetary"))
                option.monetaryCost = parseNumber<struct MoneyTag>(*m2, e.location);
            else if (auto m3 = e.attributeValue("montary"))
                option.monetaryCost = parseNumber<struct MoneyTag>(*m3, e.location);
            return option;
        }

        // <subprocessProcessingDevicesGroup processingTime=".."> with one
        // child per simultaneously allocated device.
        std::optional<raw::Option> readGroupOption(const Element& e)
        {
            sawProcess = true;
            checkAttributes(e,
                { "processingTime", "energy", "energyConsumption", "montary", "monetary", "monetaryCost" });
            raw::Option option;
            option.location = e.location;
            if (auto t = e.attributeValue("processingTime"))
                option.processingTime = parseNumber<struct TimeTag>(*t, e.location);
            if (auto en = e.attributeValue("energyConsumption"))
                option.energyConsumption = parseNumber<struct EnergyTag>(*en, e.location);
            else if (auto en2 = e.attributeValue("energy"))
                option.energyConsumption = parseNumber<struct EnergyTag>(*en2, e.location);
            if (auto m = e.attributeValue("monetaryCost"))
                option.monetaryCost = parseNumber<struct MoneyTag>(*m, e.location);
            else if (auto m2 = e.attributeValue("monetary"))
                option.monetaryCost = parseNumber<struct MoneyTag>(*m2, e.location);
            else if (auto m3 = e.attributeValue("montary"))
                option.monetaryCost = parseNumber<struct MoneyTag>(*m3, e.location);

            for (const auto& child : e.children) {
                if (nameEquals(child->name, "subprocessProcessingDevice")) {
                    checkAttributes(*child, { "name", "processingDeviceName", "mode", "modeName" });
                    std::string deviceName;
                    if (auto n = child->attributeValue("processingDeviceName"))
                        deviceName = trimmed(*n);
                    else if (auto n2 = child->attributeValue("name"))
                        deviceName = trimmed(*n2);
                    else {
                        error("MissingAttribute",
                            "subprocessProcessingDevice needs a name/processingDeviceName attribute",
                            child->location);
                        continue;
                    }
                    std::string modeName;
                    if (auto m = child->attributeValue("modeName"))
                        modeName = trimmed(*m);
                    else if (auto m2 = child->attributeValue("mode"))
                        modeName = trimmed(*m2);
                    // Cost elements may also appear as children of the group.
                    option.allocations.push_back({ deviceName, modeName, child->location });
                } else if (nameEquals(child->name, "processingTime")) {
                    option.processingTime = parseNumber<struct TimeTag>(child->text, child->location);
                } else if (nameEquals(child->name, "energyConsumption") || nameEquals(child->name, "energy")) {
                    option.energyConsumption = parseNumber<struct EnergyTag>(child->text, child->location);
                } else if (nameEquals(child->name, "monetaryCost") || nameEquals(child->name, "monetary")
                    || nameEquals(child->name, "montary")) {
                    option.monetaryCost = parseNumber<struct MoneyTag>(child->text, child->location);
                } else {
                    unknownElement(*child);
                }
            }
            if (option.allocations.empty()) {
                error("MissingAttribute", "subprocessProcessingDevicesGroup allocates no device", e.location);
                return std::nullopt;
            }
            return option;
        }

        void readOptionContainer(const Element& e, raw::Subprocess& subprocess)
        {
            if (nameEquals(e.name, "subprocessProcessingDevicesGroup")) {
                if (auto opt = readGroupOption(e))
                    subprocess.options.push_back(std::move(*opt));
                return;
            }
            if (nameEquals(e.name, "subprocessProcessingDevice")) {
                // Canonical form nests mode elements; the attribute form is flat.
                auto modeChildren = e.childrenNamed("subprocessProcessingDeviceMode");
                if (modeChildren.empty()) {
                    auto alt = e.childrenNamed("subprocessProcessingDevicesMode");
                    modeChildren.insert(modeChildren.end(), alt.begin(), alt.end());
                }
                if (!modeChildren.empty()) {
                    std::string deviceName;
                    if (auto n = e.attributeValue("processingDeviceName"))
                        deviceName = trimmed(*n);
                    else if (auto n2 = e.attributeValue("name"))
                        deviceName = trimmed(*n2);
                    else {
                        error("MissingAttribute",
                            "subprocessProcessingDevice needs a processingDeviceName attribute", e.location);
                        return;
                    }
                    for (const Element* modeEl : modeChildren)
                        if (auto opt = readCanonicalModeOption(e, deviceName, *modeEl))
                            subprocess.options.push_back(std::move(*opt));
                } else {
                    if (auto opt = readAttributeOption(e))
                        subprocess.options.push_back(std::move(*opt));
                }
                return;
            }
            if (nameEquals(e.name, "subprocessProcessingDevices")) {
                for (const auto& child : e.children)
                    readOptionContainer(*child, subprocess);
                return;
            }
            unknownElement(e);
        }

        std::optional<raw::Subprocess> readSubprocess(const Element& e)
        {
            checkAttributes(e, { "name" });
            raw::Subprocess subprocess;
            subprocess.location = e.location;
            auto name = requireAttribute(e, "name");
            if (!name)
                return std::nullopt;
            subprocess.name = *name;
            for (const auto& child : e.children)
                readOptionContainer(*child, subprocess);
            return subprocess;
        }

        void readSubprocessList(const Element& container, std::vector<raw::Subprocess>& out)
        {
            for (const auto& child : container.children) {
                if (nameEquals(child->name, "subprocess")) {
                    if (auto sp = readSubprocess(*child))
                        out.push_back(std::move(*sp));
                } else {
                    unknownElement(*child);
                }
            }
        }

        void readRelations(const Element& e)
        {
            for (const auto& child : e.children) {
                if (!nameEquals(child->name, "subprocessRelation")) {
                    unknownElement(*child);
                    continue;
                }
                checkAttributes(*child, { "source", "destination", "allensOperator" });
                auto source = requireAttribute(*child, "source");
                auto destination = requireAttribute(*child, "destination");
                auto opName = requireAttribute(*child, "allensOperator");
                if (!source || !destination || !opName)
                    continue;
                auto op = allenOperatorFromName(*opName);
                if (!op) {
                    error("BadNumber", "'" + *opName + "' is not an Allen operator (LT,S,F,EQ,O,M,D)",
                        child->location);
                    continue;
                }
                factory.relations.push_back({ *source, *destination, *op, child->location });
            }
        }

        void readProcessType(const Element& e, raw::Process& process)
        {
            sawProcess = true;
            checkAttributes(e, { "name", "amountProduced" });
            raw::ProcessType type;
            type.location = e.location;
            auto name = requireAttribute(e, "name");
            if (!name)
                return;
            type.name = *name;
            auto amount = requireAttribute(e, "amountProduced");
            if (!amount)
                return;
            if (auto q = parseQuantity(*amount, e.location))
                type.amountProduced = *q;
            for (const auto& child : e.children) {
                if (isCompatibleLinesTag(child->name)) {
                    for (const auto& lineEl : child->children) {
                        if (isCompatibleLineTag(lineEl->name))
                            type.compatibleLines.push_back(trimmed(lineEl->text));
                        else
                            unknownElement(*lineEl);
                    }
                } else if (nameEquals(child->name, "subprocesses")) {
                    readSubprocessList(*child, type.subprocesses);
                } else if (nameEquals(child->name, "subprocess")) {
                    if (auto sp = readSubprocess(*child))
                        type.subprocesses.push_back(std::move(*sp));
                } else if (nameEquals(child->name, "subprocessRelations")) {
                    readRelations(*child);
                } else {
                    unknownElement(*child);
                }
            }
            process.processTypes.push_back(std::move(type));
        }

        void readCompatibleDevices(const Element& e, raw::Process& process)
        {
            sawDiscrete = true;
            for (const auto& child : e.children) {
                if (!isCompatibleDeviceTag(child->name)) {
                    unknownElement(*child);
                    continue;
                }
                checkAttributes(*child,
                    { "name", "processingTime", "energy", "energyConsumption", "montary", "monetary",
                        "monetaryCost" });
                raw::CompatibleDevice device;
                device.location = child->location;
                auto name = requireAttribute(*child, "name");
                if (!name)
                    continue;
                device.deviceName = *name;
                auto time = requireAttribute(*child, "processingTime");
                if (!time)
                    continue;
                if (auto t = parseNumber<struct TimeTag>(*time, child->location))
                    device.processingTime = *t;
                if (auto en = child->attributeValue("energyConsumption"))
                    device.energyConsumption = parseNumber<struct EnergyTag>(*en, child->location);
                else if (auto en2 = child->attributeValue("energy"))
                    device.energyConsumption = parseNumber<struct EnergyTag>(*en2, child->location);
                if (auto m = child->attributeValue("monetaryCost"))
                    device.monetaryCost = parseNumber<struct MoneyTag>(*m, child->location);
                else if (auto m2 = child->attributeValue("monetary"))
                    device.monetaryCost = parseNumber<struct MoneyTag>(*m2, child->location);
                else if (auto m3 = child->attributeValue("montary"))
                    device.monetaryCost = parseNumber<struct MoneyTag>(*m3, child->location);
                process.compatibleDevices.push_back(std::move(device));
            }
        }

        void readProcess(const Element& e)
        {
            checkAttributes(e, { "name", "priority", "cuts" });
            raw::Process process;
            process.location = e.location;
            auto name = requireAttribute(e, "name");
            if (!name)
                return;
            process.name = *name;
            if (auto p = e.attributeValue("priority"))
                process.urgencyPriority = parseInt(*p, e.location);
            if (auto c = e.attributeValue("cuts"))
                process.cuts = parseInt(*c, e.location);
            for (const auto& child : e.children) {
                if (isCompatibleDevicesTag(child->name))
                    readCompatibleDevices(*child, process);
                else if (nameEquals(child->name, "subprocesses"))
                    readSubprocessList(*child, process.subprocesses);
                else if (nameEquals(child->name, "subprocess")) {
                    if (auto sp = readSubprocess(*child))
                        process.subprocesses.push_back(std::move(*sp));
                } else if (nameEquals(child->name, "processType"))
                    readProcessType(*child, process);
                else if (nameEquals(child->name, "subprocessRelations"))
                    readRelations(*child);
                else
                    unknownElement(*child);
            }
            factory.processes.push_back(std::move(process));
        }

        void readSetups(const Element& e)
        {
            for (const auto& child : e.children) {
                if (!nameEquals(child->name, "sequenceDependentSetup")) {
                    unknownElement(*child);
                    continue;
                }
                checkAttributes(*child,
                    { "source", "destination", "processingDevice", "extraProcessingTime",
                        "extraEnergyConsumption", "extraMonetaryCost" });
                raw::Setup setup;
                setup.location = child->location;
                auto source = requireAttribute(*child, "source");
                auto destination = requireAttribute(*child, "destination");
                auto device = requireAttribute(*child, "processingDevice");
                if (!source || !destination || !device)
                    continue;
                setup.source = *source;
                setup.destination = *destination;
                setup.deviceName = *device;
                auto readExtra = [&](std::string_view attrName, std::string_view elementName) {
                    if (auto v = child->attributeValue(attrName))
                        return std::optional<std::string>(trimmed(*v));
                    if (const Element* el = child->firstChild(elementName))
                        return std::optional<std::string>(trimmed(el->text));
                    return std::optional<std::string>();
                };
                if (auto v = readExtra("extraProcessingTime", "extraProcessingTime"))
                    setup.extraProcessingTime
                        = parseNumber<struct TimeTag>(*v, child->location).value_or(Duration {});
                if (auto v = readExtra("extraEnergyConsumption", "extraEnergyConsumption"))
                    setup.extraEnergyConsumption
                        = parseNumber<struct EnergyTag>(*v, child->location).value_or(Energy {});
                if (auto v = readExtra("extraMonetaryCost", "extraMonetaryCost"))
                    setup.extraMonetaryCost
                        = parseNumber<struct MoneyTag>(*v, child->location).value_or(Money {});
                factory.setups.push_back(std::move(setup));
            }
        }

        bool readSection(const Element& e)
        {
            if (nameEquals(e.name, "objectives"))
                readObjectives(e);
            else if (nameEquals(e.name, "processingDevices"))
                readDevices(e);
            else if (nameEquals(e.name, "productionLines"))
                readLines(e);
            else if (nameEquals(e.name, "productionProcesses")) {
                for (const auto& child : e.children) {
                    if (nameEquals(child->name, "productionProcess"))
                        readProcess(*child);
                    else
                        unknownElement(*child);
                }
            } else if (nameEquals(e.name, "productionProcess"))
                readProcess(e);
            else if (nameEquals(e.name, "subprocessRelations"))
                readRelations(e);
            else if (nameEquals(e.name, "sequenceDependentSetups"))
                readSetups(e);
            else
                return false;
            return true;
        }

        void readDocument(const Element& root)
        {
            if (readSection(root))
                return; // bare section fragment
            for (const auto& child : root.children)
                if (!readSection(*child))
                    unknownElement(*child);
        }

        DialectProfile dialect() const
        {
            int kinds = (sawCanonical ? 1 : 0) + (sawDiscrete ? 1 : 0) + (sawProcess ? 1 : 0);
            if (kinds > 1)
                return DialectProfile::Mixed;
            if (sawDiscrete)
                return DialectProfile::Discrete;
            if (sawProcess)
                return DialectProfile::Process;
            return DialectProfile::Canonical;
        }
    };

} // namespace

bool expandCuts(raw::Process& process, std::vector<raw::Relation>& relations,
    std::vector<Diagnostic>& diagnostics)
{
    if (!process.cuts || *process.cuts <= 0)
        return false;
    if (!process.subprocesses.empty() || !process.processTypes.empty()) {
        diagnostics.push_back(Diagnostic::error("AlreadyExpanded",
            "process '" + process.name + "' already declares subprocesses; cuts cannot be expanded",
            process.location));
        return false;
    }
    if (process.compatibleDevices.empty()) {
        diagnostics.push_back(Diagnostic::error("NoCompatibleDevices",
            "process '" + process.name + "' has cuts but no compatibleDevices to derive them from",
            process.location));
        return false;
    }

    int cuts = *process.cuts;
    for (int i = 1; i <= cuts; ++i) {
        raw::Subprocess sp;
        sp.location = process.location;
        sp.name = process.name + " cut " + std::to_string(i);
        for (const auto& device : process.compatibleDevices) {
            raw::Option option;
            option.location = device.location;
            option.allocations.push_back({ device.deviceName, "", device.location });
            // Integer-tenths division; the remainder goes to the last cut so
            // the per-device totals stay exact.
            auto split = [&](std::int64_t total) {
                std::int64_t per = total / cuts;
                return i == cuts ? per + total % cuts : per;
            };
            option.processingTime = Duration::fromTenths(split(device.processingTime.tenths()));
            if (device.energyConsumption)
                option.energyConsumption = Energy::fromTenths(split(device.energyConsumption->tenths()));
            if (device.monetaryCost)
                option.monetaryCost = Money::fromTenths(split(device.monetaryCost->tenths()));
            sp.options.push_back(std::move(option));
        }
        process.subprocesses.push_back(std::move(sp));
        if (i > 1)
            relations.push_back({ process.name + " cut " + std::to_string(i - 1),
                process.name + " cut " + std::to_string(i), AllenOperator::M, process.location });
    }
    return true;
}

ParseOutcome parseFdl(std::string_view text)
{
    ParseOutcome outcome;
    auto doc = xml::parseDocument(text);
    outcome.diagnostics = std::move(doc.diagnostics);
    if (!doc.root)
        return outcome;

    DocumentReader reader;
    reader.readDocument(*doc.root);

    for (auto& process : reader.factory.processes)
        if (process.cuts && *process.cuts > 0 && process.subprocesses.empty() && process.processTypes.empty())
            expandCuts(process, reader.factory.relations, reader.diags);

    auto resolved = resolve(reader.factory);
    outcome.diagnostics.insert(outcome.diagnostics.end(), reader.diags.begin(), reader.diags.end());
    outcome.diagnostics.insert(
        outcome.diagnostics.end(), resolved.diagnostics.begin(), resolved.diagnostics.end());
    outcome.dialect = reader.dialect();
    if (!hasErrors(outcome.diagnostics))
        outcome.model = std::move(resolved.model);
    return outcome;
}

std::vector<SubOrder> expandOrder(
    const FactoryModel& model, ProcessId process, Quantity orderAmount, LineId line)
{
    const auto& proc = model.processes[process.value];
    const ProcessType* type = nullptr;
    for (const auto& t : proc.processTypes)
        if (std::find(t.compatibleLines.begin(), t.compatibleLines.end(), line) != t.compatibleLines.end()) {
            type = &t;
            break;
        }
    if (!type) {
        bool known = line.value >= 0 && static_cast<std::size_t>(line.value) < model.lines.size();
        throw IncompatibleLine("process '" + proc.name + "' has no processType compatible with line '"
            + (known ? model.lines[line.value].name : "#" + std::to_string(line.value)) + "'");
    }

    std::int64_t batch = type->amountProduced.tenths();
    std::int64_t amount = orderAmount.tenths();
    std::int64_t count = (amount + batch - 1) / batch;

    const std::vector<SubprocessId>& chain = type->subprocesses.empty() ? proc.subprocesses
                                                                        : type->subprocesses;
    raw::Factory asRaw = toRaw(model);

    std::vector<SubOrder> orders;
    for (std::int64_t k = 1; k <= count; ++k) {
        SubOrder sub;
        sub.name = proc.name + "#" + std::to_string(k);
        sub.partialBatch = (k == count) && (amount % batch != 0);
        std::string suffix = "#" + std::to_string(k);
        for (SubprocessId id : chain) {
            // Clone via the raw form so option allocations stay name-based.
            const auto& rawProc = asRaw.processes[process.value];
            const std::string& wanted = model.subprocesses[id.value].name;
            auto findIn = [&](const std::vector<raw::Subprocess>& list) -> const raw::Subprocess* {
                for (const auto& rs : list)
                    if (rs.name == wanted)
                        return &rs;
                return nullptr;
            };
            const raw::Subprocess* found = findIn(rawProc.subprocesses);
            for (const auto& rt : rawProc.processTypes)
                if (!found)
                    found = findIn(rt.subprocesses);
            if (!found)
                continue;
            raw::Subprocess clone = *found;
            clone.name += suffix;
            sub.subprocesses.push_back(std::move(clone));
        }
        for (const auto& rel : model.relations) {
            auto inChain = [&](SubprocessId id) {
                return std::find(chain.begin(), chain.end(), id) != chain.end();
            };
            if (inChain(rel.source) && inChain(rel.destination))
                sub.relations.push_back({ model.subprocesses[rel.source.value].name + suffix,
                    model.subprocesses[rel.destination.value].name + suffix, rel.op, {} });
        }
        orders.push_back(std::move(sub));
    }
    return orders;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

    class Writer {
    public:
        explicit Writer(const FactoryModel& model)
            : m_(model)
        {
        }

        std::string run()
        {
            out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
            open("factory");
            writeObjectives();
            writeDevices();
            writeLines();
            writeProcesses();
            writeRelations();
            writeSetups();
            close("factory");
            return out_.str();
        }

    private:
        const FactoryModel& m_;
        std::ostringstream out_;
        int depth_ = 0;

        void indent()
        {
            for (int i = 0; i < depth_; ++i)
                out_ << "  ";
        }
        void open(std::string_view tag)
        {
            indent();
            out_ << '<' << tag << ">\n";
            ++depth_;
        }
        void close(std::string_view tag)
        {
            --depth_;
            indent();
            out_ << "</" << tag << ">\n";
        }
        std::string attr(std::string_view name, std::string_view value)
        {
            return std::string(" ") + std::string(name) + "=\"" + xml::escapeAttribute(value) + "\"";
        }

        void writeObjectives()
        {
            open("objectives");
            for (auto kind : m_.objectives) {
                indent();
                out_ << "<objective" << attr("name", objectiveName(kind)) << " />\n";
            }
            close("objectives");
        }

        void writeDevices()
        {
            if (m_.devices.empty())
                return;
            open("processingDevices");
            for (const auto& d : m_.devices) {
                indent();
                out_ << "<processingDevice" << attr("name", d.name)
                     << attr("availability", d.available ? "1" : "0");
                if (d.unavailableWindows.empty() && d.modes.empty()) {
                    out_ << " />\n";
                    continue;
                }
                out_ << ">\n";
                ++depth_;
                if (!d.unavailableWindows.empty()) {
                    open("unavailableTimes");
                    for (const auto& w : d.unavailableWindows) {
                        indent();
                        out_ << "<unavailableTime>" << w.start.str() << ',' << w.end.str()
                             << "</unavailableTime>\n";
                    }
                    close("unavailableTimes");
                }
                open("modes");
                for (const auto& mode : d.modes) {
                    indent();
                    out_ << "<mode" << attr("name", mode.name) << " />\n";
                }
                close("modes");
                --depth_;
                indent();
                out_ << "</processingDevice>\n";
            }
            close("processingDevices");
        }

        void writeLines()
        {
            if (m_.lines.empty())
                return;
            open("productionLines");
            for (const auto& line : m_.lines) {
                indent();
                out_ << "<productionLine" << attr("name", line.name) << ">\n";
                ++depth_;
                open("productionLineProcessingDevices");
                for (std::size_t i = 0; i < line.stations.size(); ++i) {
                    indent();
                    out_ << "<productionLineProcessingDevice" << attr("order", std::to_string(i))
                         << attr("name", m_.devices[line.stations[i].value].name) << " />\n";
                }
                close("productionLineProcessingDevices");
                --depth_;
                indent();
                out_ << "</productionLine>\n";
            }
            close("productionLines");
        }

        void writeSubprocess(SubprocessId id)
        {
            const auto& sp = m_.subprocesses[id.value];
            indent();
            out_ << "<subprocess" << attr("name", sp.name) << ">\n";
            ++depth_;
            for (const auto& opt : sp.options) {
                indent();
                out_ << "<subprocessProcessingDevicesGroup";
                out_ << attr("processingTime", opt.processingTime.str());
                if (opt.energyConsumption)
                    out_ << attr("energyConsumption", opt.energyConsumption->str());
                if (opt.monetaryCost)
                    out_ << attr("monetaryCost", opt.monetaryCost->str());
                out_ << ">\n";
                ++depth_;
                for (const auto& alloc : opt.allocations) {
                    const auto& dev = m_.devices[alloc.device.value];
                    indent();
                    out_ << "<subprocessProcessingDevice" << attr("processingDeviceName", dev.name)
                         << attr("modeName", dev.modes[alloc.mode.value].name) << " />\n";
                }
                --depth_;
                indent();
                out_ << "</subprocessProcessingDevicesGroup>\n";
            }
            --depth_;
            indent();
            out_ << "</subprocess>\n";
        }

        void writeProcesses()
        {
            if (m_.processes.empty())
                return;
            open("productionProcesses");
            for (const auto& p : m_.processes) {
                indent();
                out_ << "<productionProcess" << attr("name", p.name);
                if (p.urgencyPriority)
                    out_ << attr("priority", std::to_string(*p.urgencyPriority));
                if (p.cuts)
                    out_ << attr("cuts", std::to_string(*p.cuts));
                out_ << ">\n";
                ++depth_;
                if (!p.compatibleDevices.empty()) {
                    open("compatibleDevices");
                    for (const auto& cd : p.compatibleDevices) {
                        indent();
                        out_ << "<compatibleDevice" << attr("name", m_.devices[cd.device.value].name)
                             << attr("processingTime", cd.processingTime.str());
                        if (cd.energyConsumption)
                            out_ << attr("energyConsumption", cd.energyConsumption->str());
                        if (cd.monetaryCost)
                            out_ << attr("monetaryCost", cd.monetaryCost->str());
                        out_ << " />\n";
                    }
                    close("compatibleDevices");
                }

                std::vector<bool> typeOwned(m_.subprocesses.size(), false);
                for (const auto& t : p.processTypes)
                    for (SubprocessId id : t.subprocesses)
                        typeOwned[id.value] = true;
                std::vector<SubprocessId> direct;
                for (SubprocessId id : p.subprocesses)
                    if (!typeOwned[id.value])
                        direct.push_back(id);
                if (!direct.empty()) {
                    open("subprocesses");
                    for (SubprocessId id : direct)
                        writeSubprocess(id);
                    close("subprocesses");
                }
                for (const auto& t : p.processTypes) {
                    indent();
                    out_ << "<processType" << attr("name", t.name)
                         << attr("amountProduced", t.amountProduced.str() + "t") << ">\n";
                    ++depth_;
                    if (!t.compatibleLines.empty()) {
                        open("compatibleProductionLines");
                        for (LineId lid : t.compatibleLines) {
                            indent();
                            out_ << "<compatibleProductionLine>"
                                 << xml::escapeText(m_.lines[lid.value].name)
                                 << "</compatibleProductionLine>\n";
                        }
                        close("compatibleProductionLines");
                    }
                    if (!t.subprocesses.empty()) {
                        open("subprocesses");
                        for (SubprocessId id : t.subprocesses)
                            writeSubprocess(id);
                        close("subprocesses");
                    }
                    --depth_;
                    indent();
                    out_ << "</processType>\n";
                }
                --depth_;
                indent();
                out_ << "</productionProcess>\n";
            }
            close("productionProcesses");
        }

        void writeRelations()
        {
            if (m_.relations.empty())
                return;
            open("subprocessRelations");
            for (const auto& r : m_.relations) {
                indent();
                out_ << "<subprocessRelation" << attr("source", m_.subprocesses[r.source.value].name)
                     << attr("destination", m_.subprocesses[r.destination.value].name)
                     << attr("allensOperator", allenOperatorName(r.op)) << " />\n";
            }
            close("subprocessRelations");
        }

        void writeSetups()
        {
            if (m_.setups.empty())
                return;
            open("sequenceDependentSetups");
            for (const auto& s : m_.setups) {
                auto endpointName = [&](const SetupEndpoint& e) {
                    return e.kind == SetupEndpointKind::Process ? m_.processes[e.index].name
                                                                : m_.subprocesses[e.index].name;
                };
                indent();
                out_ << "<sequenceDependentSetup" << attr("source", endpointName(s.source))
                     << attr("destination", endpointName(s.destination))
                     << attr("processingDevice", m_.devices[s.device.value].name)
                     << attr("extraProcessingTime", s.extraProcessingTime.str())
                     << attr("extraEnergyConsumption", s.extraEnergyConsumption.str())
                     << attr("extraMonetaryCost", s.extraMonetaryCost.str()) << " />\n";
            }
            close("sequenceDependentSetups");
        }
    };

} // namespace

std::string serializeFdl(const FactoryModel& model)
{
    if (model.objectives.empty())
        throw std::invalid_argument("a factory model without objectives cannot be serialized");
    return Writer(model).run();
}

} // namespace fdl
