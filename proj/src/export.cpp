#include "fdl/export.hpp"

#include <json.hpp>

#include <sstream>

namespace fdl {

namespace {

    using ordered_json = nlohmann::ordered_json;

    std::string fixed(std::int64_t tenths) { return Time::fromTenths(tenths).str(); }

    const char* kindName(SegmentKind kind)
    {
        switch (kind) {
        case SegmentKind::Execution: return "execution";
        case SegmentKind::Setup: return "setup";
        case SegmentKind::Suspension: return "suspension";
        }
        return "?";
    }

    std::string segmentLabel(const Segment& seg, const FactoryModel& model)
    {
        if (seg.kind == SegmentKind::Setup)
            return model.subprocesses[seg.setupSource.value].name + " -> "
                + model.subprocesses[seg.subprocess.value].name;
        return model.subprocesses[seg.subprocess.value].name;
    }

    // Minimal CSV quoting; names may carry spaces but fixtures avoid commas.
    std::string csvField(const std::string& value)
    {
        if (value.find_first_of(",\"\n") == std::string::npos)
            return value;
        std::string out = "\"";
        for (char c : value) {
            if (c == '"')
                out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    ordered_json objectivesJson(const ObjectiveVector& vec, const FactoryModel& model)
    {
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < model.objectives.size(); ++i) {
            ordered_json obj;
            obj["name"] = std::string(objectiveName(model.objectives[i]));
            obj["value"] = fixed(vec.tenths[i]);
            arr.push_back(obj);
        }
        return arr;
    }

    ordered_json genomeJson(const Genome& genome)
    {
        ordered_json obj;
        obj["optionChoice"] = genome.optionChoice;
        obj["taskPriority"] = genome.taskPriority;
        return obj;
    }

} // namespace

std::string scheduleToJson(const Schedule& schedule, const FactoryModel& model)
{
    ordered_json doc;
    doc["feasible"] = schedule.feasible;
    doc["objectives"] = objectivesJson(schedule.objectives, model);
    doc["makespan"] = schedule.makespan().str();

    ordered_json devices = ordered_json::array();
    for (std::size_t d = 0; d < schedule.perDevice.size(); ++d) {
        ordered_json lane;
        lane["device"] = model.devices[d].name;
        ordered_json segments = ordered_json::array();
        for (const auto& seg : schedule.perDevice[d]) {
            ordered_json s;
            s["kind"] = kindName(seg.kind);
            s["name"] = segmentLabel(seg, model);
            s["start"] = seg.start.str();
            s["end"] = seg.end.str();
            segments.push_back(s);
        }
        lane["segments"] = segments;
        devices.push_back(lane);
    }
    doc["devices"] = devices;

    ordered_json subprocesses = ordered_json::array();
    for (std::size_t i = 0; i < schedule.perSubprocess.size(); ++i) {
        const auto& p = schedule.perSubprocess[i];
        ordered_json s;
        s["name"] = model.subprocesses[i].name;
        s["scheduled"] = p.scheduled;
        if (p.scheduled) {
            s["start"] = p.start.str();
            s["end"] = p.end.str();
        }
        subprocesses.push_back(s);
    }
    doc["subprocesses"] = subprocesses;

    ordered_json violations = ordered_json::array();
    for (const auto& v : schedule.violations)
        violations.push_back(v.explanation);
    doc["violations"] = violations;
    return doc.dump(2) + "\n";
}

std::string scheduleToCsv(const Schedule& schedule, const FactoryModel& model)
{
    std::ostringstream out;
    out << "device,kind,name,start,end\n";
    for (std::size_t d = 0; d < schedule.perDevice.size(); ++d)
        for (const auto& seg : schedule.perDevice[d])
            out << csvField(model.devices[d].name) << ',' << kindName(seg.kind) << ','
                << csvField(segmentLabel(seg, model)) << ',' << seg.start.str() << ',' << seg.end.str()
                << '\n';
    return out.str();
}

std::string frontToCsv(const ParetoFront& front, const FactoryModel& model)
{
    std::ostringstream out;
    for (auto kind : model.objectives)
        out << objectiveName(kind) << ',';
    out << "feasible,optionChoice,taskPriority\n";
    for (const auto& entry : front.entries) {
        for (auto value : entry.evaluation.objectives.tenths)
            out << fixed(value) << ',';
        out << (entry.evaluation.feasible ? "1" : "0") << ',';
        for (std::size_t i = 0; i < entry.genome.optionChoice.size(); ++i)
            out << (i ? ";" : "") << entry.genome.optionChoice[i];
        out << ',';
        for (std::size_t i = 0; i < entry.genome.taskPriority.size(); ++i)
            out << (i ? ";" : "") << entry.genome.taskPriority[i];
        out << '\n';
    }
    return out.str();
}

std::string frontToJson(const ParetoFront& front, const FactoryModel& model)
{
    ordered_json doc = ordered_json::array();
    for (const auto& entry : front.entries) {
        ordered_json e;
        e["objectives"] = objectivesJson(entry.evaluation.objectives, model);
        e["feasible"] = entry.evaluation.feasible;
        e["violations"] = entry.evaluation.violationCount;
        e["genome"] = genomeJson(entry.genome);
        doc.push_back(e);
    }
    return doc.dump(2) + "\n";
}

std::string genomeToJson(const Genome& genome)
{
    return genomeJson(genome).dump(2) + "\n";
}

Genome genomeFromJson(const std::string& text)
{
    auto doc = nlohmann::json::parse(text); // throws nlohmann::json::parse_error
    Genome genome;
    genome.optionChoice = doc.at("optionChoice").get<std::vector<std::int32_t>>();
    genome.taskPriority = doc.at("taskPriority").get<std::vector<std::int32_t>>();
    return genome;
}

} // namespace fdl
