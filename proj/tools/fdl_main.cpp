#include "fdl/export.hpp"
#include "fdl/fixtures.hpp"
#include "fdl/gantt_svg.hpp"
#include "fdl/optimizer.hpp"
#include "fdl/parser.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

std::optional<std::string> readFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool writeFile(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        return false;
    out << content;
    return static_cast<bool>(out);
}

void printDiagnostics(const std::vector<fdl::Diagnostic>& diags, const std::string& file)
{
    for (const auto& d : diags)
        std::cerr << fdl::renderDiagnostic(d, file) << '\n';
}

// Returns the model or prints diagnostics and leaves it empty.
std::optional<fdl::FactoryModel> loadModel(const std::string& path, int& exitCode)
{
    auto text = readFile(path);
    if (!text) {
        std::cerr << "error: cannot read '" << path << "'\n";
        exitCode = kExitIo;
        return std::nullopt;
    }
    auto outcome = fdl::parseFdl(*text);
    printDiagnostics(outcome.diagnostics, path);
    if (!outcome.model) {
        exitCode = kExitDomain;
        return std::nullopt;
    }
    exitCode = kExitOk;
    return std::move(outcome.model);
}

int threadsFromEnv()
{
    const char* env = std::getenv("FDL_THREADS");
    if (!env || !*env)
        return 0;
    return std::atoi(env);
}

std::string objectiveLine(const fdl::ObjectiveVector& vec, const fdl::FactoryModel& model)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < model.objectives.size(); ++i) {
        if (i)
            out << ' ';
        out << fdl::objectiveName(model.objectives[i]) << '='
            << fdl::Time::fromTenths(vec.tenths[i]).str();
    }
    return out.str();
}

int cmdValidate(const std::string& path)
{
    int exitCode = kExitOk;
    auto model = loadModel(path, exitCode);
    if (!model)
        return exitCode;
    std::cout << "ok: " << model->devices.size() << " devices, " << model->lines.size() << " lines, "
              << model->processes.size() << " processes, " << model->subprocesses.size()
              << " subprocesses, " << model->setups.size() << " setups\n";
    return kExitOk;
}

int cmdSchedule(const std::string& path, const std::string& genomePath, const std::string& outDir,
    bool withSvg)
{
    int exitCode = kExitOk;
    auto model = loadModel(path, exitCode);
    if (!model)
        return exitCode;

    fdl::Genome genome;
    if (!genomePath.empty()) {
        auto text = readFile(genomePath);
        if (!text) {
            std::cerr << "error: cannot read '" << genomePath << "'\n";
            return kExitIo;
        }
        try {
            genome = fdl::genomeFromJson(*text);
        } catch (const std::exception& e) {
            std::cerr << "error: bad genome file: " << e.what() << '\n';
            return kExitDomain;
        }
    } else {
        // Default: first option everywhere, priorities in document order.
        genome.optionChoice.assign(model->subprocesses.size(), 0);
        genome.taskPriority.resize(model->subprocesses.size());
        for (std::size_t i = 0; i < genome.taskPriority.size(); ++i)
            genome.taskPriority[i] = static_cast<std::int32_t>(i);
    }

    fdl::Schedule schedule;
    try {
        schedule = fdl::simulate(*model, genome);
    } catch (const fdl::InvalidGenome& e) {
        std::cerr << "error: invalid genome: " << e.what() << '\n';
        return kExitDomain;
    }

    std::filesystem::path dir(outDir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!writeFile(dir / "schedule.json", fdl::scheduleToJson(schedule, *model))
        || !writeFile(dir / "schedule.csv", fdl::scheduleToCsv(schedule, *model))) {
        std::cerr << "error: cannot write schedule files under '" << outDir << "'\n";
        return kExitIo;
    }
    if (withSvg && !writeFile(dir / "schedule.svg", fdl::renderGanttSvg(schedule, *model))) {
        std::cerr << "error: cannot write SVG under '" << outDir << "'\n";
        return kExitIo;
    }

    std::cout << objectiveLine(schedule.objectives, *model) << '\n';
    std::cout << "makespan " << schedule.makespan().str() << '\n';
    if (!schedule.feasible) {
        std::cout << "infeasible (" << schedule.violations.size() << " violations)\n";
        for (const auto& v : schedule.violations)
            std::cerr << "violation: " << v.explanation << '\n';
    }
    return kExitOk;
}

int cmdOptimize(const std::string& path, fdl::GaParams params, const std::string& outDir, bool withSvg)
{
    int exitCode = kExitOk;
    auto model = loadModel(path, exitCode);
    if (!model)
        return exitCode;

    fdl::ParetoFront front;
    try {
        front = fdl::optimize(*model, params);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }

    std::filesystem::path dir(outDir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!writeFile(dir / "front.csv", fdl::frontToCsv(front, *model))
        || !writeFile(dir / "front.json", fdl::frontToJson(front, *model))) {
        std::cerr << "error: cannot write front files under '" << outDir << "'\n";
        return kExitIo;
    }

    for (std::size_t i = 0; i < front.entries.size(); ++i) {
        fdl::Schedule schedule = fdl::simulate(*model, front.entries[i].genome);
        std::ostringstream stem;
        stem << "schedule_" << i;
        if (!writeFile(dir / (stem.str() + ".json"), fdl::scheduleToJson(schedule, *model))
            || !writeFile(dir / (stem.str() + ".csv"), fdl::scheduleToCsv(schedule, *model))) {
            std::cerr << "error: cannot write schedule files under '" << outDir << "'\n";
            return kExitIo;
        }
        if (withSvg && !writeFile(dir / (stem.str() + ".svg"), fdl::renderGanttSvg(schedule, *model)))
            return kExitIo;
    }

    std::cout << "front size " << front.entries.size() << '\n';
    for (const auto& entry : front.entries)
        std::cout << objectiveLine(entry.evaluation.objectives, *model) << '\n';
    return kExitOk;
}

int cmdFixtures(const std::string& kind, const std::string& outDir)
{
    std::filesystem::path dir(outDir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::string content;
    std::string file;
    if (kind == "discrete") {
        content = fdl::fixtures::discreteWedm();
        file = "wedm.fdl";
    } else if (kind == "process") {
        content = fdl::fixtures::processPaint();
        file = "paint.fdl";
    } else {
        std::cerr << "error: --kind must be 'discrete' or 'process'\n";
        return kExitIo;
    }
    if (!writeFile(dir / file, content)) {
        std::cerr << "error: cannot write '" << (dir / file).string() << "'\n";
        return kExitIo;
    }
    std::cout << (dir / file).string() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "Factory description toolkit: validate, schedule and optimize production plans" };
    app.require_subcommand(1);

    std::string input;
    std::string genomePath;
    std::string outDir = ".";
    bool withSvg = false;
    std::string kind;
    fdl::GaParams params;
    params.threads = threadsFromEnv();

    auto* validate = app.add_subcommand("validate", "Parse and validate a factory document");
    validate->add_option("file", input, "FDL document")->required();

    auto* schedule = app.add_subcommand("schedule", "Simulate one plan and export its timeline");
    schedule->add_option("file", input, "FDL document")->required();
    schedule->add_option("--genome", genomePath, "genome JSON (defaults to first-option/document order)");
    schedule->add_option("--out", outDir, "output directory");
    schedule->add_flag("--svg", withSvg, "also write a Gantt SVG");

    auto* optimize = app.add_subcommand("optimize", "Search for Pareto-optimal plans");
    optimize->add_option("file", input, "FDL document")->required();
    optimize->add_option("--pop", params.populationSize, "population size");
    optimize->add_option("--gen", params.generations, "generations");
    optimize->add_option("--seed", params.seed, "random seed");
    optimize->add_option("--cross", params.crossoverRate, "crossover rate");
    double mutationRate = -1.0;
    optimize->add_option("--mut", mutationRate, "mutation rate (default 1/N)");
    optimize->add_option("--out", outDir, "output directory");
    optimize->add_flag("--svg", withSvg, "also write Gantt SVGs");

    auto* fixtures = app.add_subcommand("fixtures", "Generate the bundled factory models");
    fixtures->add_option("--kind", kind, "discrete|process")->required();
    fixtures->add_option("--out", outDir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitIo;
    }

    if (mutationRate >= 0.0)
        params.mutationRate = mutationRate;

    if (validate->parsed())
        return cmdValidate(input);
    if (schedule->parsed())
        return cmdSchedule(input, genomePath, outDir, withSvg);
    if (optimize->parsed())
        return cmdOptimize(input, params, outDir, withSvg);
    if (fixtures->parsed())
        return cmdFixtures(kind, outDir);
    return kExitIo;
}
