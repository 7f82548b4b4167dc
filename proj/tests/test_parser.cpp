#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdl/parser.hpp"
#include "support/generators.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace fdl;

namespace {

std::string readFixture(const std::string& name)
{
    std::ifstream in(std::string(FDL_FIXTURES_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

FactoryModel parseOk(const std::string& text)
{
    auto outcome = parseFdl(text);
    for (const auto& d : outcome.diagnostics)
        if (d.severity == Severity::Error)
            FAIL("unexpected error: ", d.code, ": ", d.message, " @", d.location.line);
    REQUIRE(outcome.model);
    return std::move(*outcome.model);
}

} // namespace

TEST_CASE("canonical template parses with three objectives")
{
    auto model = parseOk(readFixture("canonical_template.fdl"));
    CHECK(model.objectives.size() == 3);
    CHECK(model.devices.size() == 3);
    CHECK(model.lines.size() == 1);
    REQUIRE(model.subprocesses.size() == 2);
    CHECK(model.subprocesses[0].options.size() == 2); // mode1 and mode2 alternatives
    CHECK(model.subprocesses[0].options[0].processingTime.str() == "10.0");
    CHECK(model.relations.size() == 1);
    CHECK(model.setups.size() == 1);
    CHECK(model.setups[0].extraMonetaryCost.str() == "3.0");
}

TEST_CASE("device listing: windows and exclusion")
{
    auto model = parseOk(readFixture("paper_s41_devices.fdl"));
    REQUIRE(model.devices.size() == 3);
    const auto& small1 = model.devices[0];
    REQUIRE(small1.unavailableWindows.size() == 2);
    CHECK(small1.unavailableWindows[0].start.tenths() == 500);
    CHECK(small1.unavailableWindows[0].end.tenths() == 1000);
    CHECK(small1.unavailableWindows[1].start.tenths() == 2500);
    CHECK(small1.unavailableWindows[1].end.tenths() == 3000);
    CHECK(model.devices[1].available);
    CHECK(!model.devices[2].available);
}

TEST_CASE("attribute dialect: P15 with explicit cuts")
{
    auto outcome = parseFdl(readFixture("paper_s41_p15.fdl"));
    REQUIRE(outcome.model);
    CHECK(outcome.dialect == DialectProfile::Discrete);
    const auto& model = *outcome.model;
    REQUIRE(model.processes.size() == 1);
    const auto& p15 = model.processes[0];
    CHECK(p15.cuts == 10);
    CHECK(p15.urgencyPriority == 15);
    CHECK(p15.compatibleDevices.size() == 4);
    // explicit subprocesses suppress cut expansion
    REQUIRE(p15.subprocesses.size() == 3);
    for (SubprocessId id : p15.subprocesses) {
        const auto& sp = model.subprocess(id);
        REQUIRE(sp.options.size() == 4);
        CHECK(sp.options[0].processingTime.str() == "550.0");
        CHECK(sp.options[0].monetaryCost->str() == "465.0");
        CHECK(sp.options[0].energyConsumption->str() == "12.0");
    }
}

TEST_CASE("group dialect: reconstructed paint extract")
{
    auto outcome = parseFdl(readFixture("paper_s42_stdweiss.fdl"));
    REQUIRE(outcome.model);
    CHECK(outcome.dialect == DialectProfile::Process);
    const auto& model = *outcome.model;
    CHECK(model.lines.size() == 3);
    REQUIRE(model.processes.size() == 1);
    const auto& weiss = model.processes[0];
    REQUIRE(weiss.processTypes.size() == 1);
    CHECK(weiss.processTypes[0].amountProduced.tenths() == 50);
    CHECK(weiss.processTypes[0].compatibleLines.size() == 3);
    REQUIRE(weiss.subprocesses.size() == 3);
    // Task 1 allocates silo and mixer simultaneously
    const auto& task1 = model.subprocess(weiss.subprocesses[0]);
    REQUIRE(task1.options.size() == 3);
    CHECK(task1.options[0].allocations.size() == 2);
    // trailing space in mode="Power " resolves after trimming
    const auto& task3 = model.subprocess(weiss.subprocesses[2]);
    CHECK(task3.options.size() == 3);
    CHECK(model.relations.size() == 2);
}

TEST_CASE("cut expansion divides costs exactly")
{
    raw::Process p;
    p.name = "P";
    p.cuts = 3;
    p.compatibleDevices.push_back(
        { "d", Duration::parse("10.0").value(), Energy::parse("2.0").value(), Money::parse("5.0").value(), {} });
    std::vector<raw::Relation> relations;
    std::vector<Diagnostic> diags;
    REQUIRE(expandCuts(p, relations, diags));
    REQUIRE(p.subprocesses.size() == 3);
    CHECK(p.subprocesses[0].name == "P cut 1");
    CHECK(p.subprocesses[0].options[0].processingTime->str() == "3.3");
    CHECK(p.subprocesses[1].options[0].processingTime->str() == "3.3");
    CHECK(p.subprocesses[2].options[0].processingTime->str() == "3.4");
    std::int64_t total = 0;
    for (const auto& sp : p.subprocesses)
        total += sp.options[0].processingTime->tenths();
    CHECK(total == 100);
    REQUIRE(relations.size() == 2);
    CHECK(relations[0].source == "P cut 1");
    CHECK(relations[0].destination == "P cut 2");
    CHECK(relations[0].op == AllenOperator::M);
}

TEST_CASE("cut expansion: single cut and error paths")
{
    raw::Process p;
    p.name = "Q";
    p.cuts = 1;
    p.compatibleDevices.push_back({ "d", Duration::parse("5505.0").value(), std::nullopt,
        Money::parse("4651.0").value(), {} });
    std::vector<raw::Relation> relations;
    std::vector<Diagnostic> diags;
    REQUIRE(expandCuts(p, relations, diags));
    REQUIRE(p.subprocesses.size() == 1);
    CHECK(p.subprocesses[0].options[0].processingTime->str() == "5505.0");
    CHECK(relations.empty());

    // already expanded
    std::vector<Diagnostic> diags2;
    CHECK(!expandCuts(p, relations, diags2));
    CHECK(diags2.front().code == "AlreadyExpanded");

    raw::Process r;
    r.name = "R";
    r.cuts = 2;
    std::vector<Diagnostic> diags3;
    CHECK(!expandCuts(r, relations, diags3));
    CHECK(diags3.front().code == "NoCompatibleDevices");
}

TEST_CASE("ten cuts of the P15 totals give 550.5 each")
{
    std::string doc = R"(<factory>
      <objectives><objective name="makespan"/></objectives>
      <processingDevices><processingDevice name="Large 1"/></processingDevices>
      <productionProcesses>
        <productionProcess name="P15" cuts="10">
          <compatibleDevices>
            <compatibleDevice name="Large 1" processingTime="5505" energy="120" monetary="4651"/>
          </compatibleDevices>
        </productionProcess>
      </productionProcesses>
    </factory>)";
    auto model = parseOk(doc);
    REQUIRE(model.subprocesses.size() == 10);
    for (const auto& sp : model.subprocesses)
        CHECK(sp.options[0].processingTime.str() == "550.5");
    CHECK(model.relations.size() == 9);
}

TEST_CASE("order decomposition into sub-orders")
{
    auto model = parseOk(readFixture("paper_s42_stdweiss.fdl"));
    ProcessId weiss { 0 };
    LineId line1 { 0 };
    auto orders = expandOrder(model, weiss, Quantity::parse("45").value(), line1);
    REQUIRE(orders.size() == 9);
    CHECK(orders[0].name == "Std Weiss 45t#1");
    CHECK(orders[0].subprocesses.size() == 3);
    CHECK(orders[0].subprocesses[0].name == "Std Weiss A Task 1#1");
    CHECK(orders[0].relations.size() == 2);
    CHECK(!orders.back().partialBatch);

    // 45 t with a 10 t batch: 5 sub-orders, last one partial
    auto model2 = parseOk(readFixture("paper_s42_stdweiss.fdl"));
    model2.processes[0].processTypes[0].amountProduced = Quantity::parse("10").value();
    auto orders2 = expandOrder(model2, weiss, Quantity::parse("45").value(), line1);
    REQUIRE(orders2.size() == 5);
    CHECK(orders2.back().partialBatch);
    // full-batch processing times are kept on the partial batch
    CHECK(orders2.back().subprocesses[0].options[0].processingTime
        == orders2.front().subprocesses[0].options[0].processingTime);

    // exact single batch
    auto orders3 = expandOrder(model, weiss, Quantity::parse("5").value(), line1);
    CHECK(orders3.size() == 1);

    CHECK_THROWS_AS(expandOrder(model, weiss, Quantity::parse("5").value(), LineId { 99 }),
        std::exception);
}

TEST_CASE("incompatible line raises")
{
    auto model = parseOk(readFixture("paper_s42_stdweiss.fdl"));
    FactoryModel extended = model;
    // a line outside the compatible set
    extended.lines.push_back({ "Elsewhere", {} });
    CHECK_THROWS_AS(
        expandOrder(extended, ProcessId { 0 }, Quantity::parse("5").value(),
            LineId { static_cast<std::int32_t>(extended.lines.size()) - 1 }),
        IncompatibleLine);
}

TEST_CASE("serialization round-trips the fixtures")
{
    for (const char* name : { "canonical_template.fdl", "paper_s41_p15.fdl", "paper_s42_stdweiss.fdl",
             "paper_s41_devices.fdl", "paper_s41_setups.fdl" }) {
        CAPTURE(name);
        auto model = parseOk(readFixture(name));
        auto text = serializeFdl(model);
        auto again = parseOk(text);
        CHECK(structurallyEqual(model, again));
    }
}

TEST_CASE("serialization round-trips random models")
{
    std::mt19937_64 rng(2024);
    fdltest::GenOptions opts;
    opts.withLinesAndTypes = true;
    for (int i = 0; i < 100; ++i) {
        auto model = fdltest::randomModel(rng, opts);
        auto again = parseOk(serializeFdl(model));
        CHECK(structurallyEqual(model, again));
    }
}

TEST_CASE("serializer rejects a model without objectives")
{
    FactoryModel empty;
    CHECK_THROWS_AS(serializeFdl(empty), std::invalid_argument);
}

TEST_CASE("deleting a referenced name always yields an error diagnostic")
{
    // Removing the device declaration leaves dangling references.
    std::string doc = readFixture("canonical_template.fdl");
    auto pos = doc.find("<processingDevice name=\"device2\">");
    REQUIRE(pos != std::string::npos);
    auto end = doc.find("</processingDevice>", pos);
    REQUIRE(end != std::string::npos);
    doc.erase(pos, end + 19 - pos);
    auto outcome = parseFdl(doc);
    CHECK(!outcome.model);
    CHECK(hasErrors(outcome.diagnostics));
}

TEST_CASE("unknown elements warn and are skipped")
{
    std::string doc = R"(<factory>
      <objectives><objective name="makespan"/></objectives>
      <futureExtension foo="1"><nested/></futureExtension>
    </factory>)";
    auto outcome = parseFdl(doc);
    REQUIRE(outcome.model);
    bool warned = false;
    for (const auto& d : outcome.diagnostics)
        if (d.severity == Severity::Warning && d.code == "UnknownElement")
            warned = true;
    CHECK(warned);
}

TEST_CASE("missing mandatory attributes are errors with locations")
{
    std::string doc = R"(<factory>
      <objectives><objective name="makespan"/></objectives>
      <productionLines><productionLine>
        <productionLineProcessingDevices/>
      </productionLine></productionLines>
    </factory>)";
    auto outcome = parseFdl(doc);
    CHECK(!outcome.model);
    bool found = false;
    for (const auto& d : outcome.diagnostics)
        if (d.code == "MissingAttribute" && d.location.line == 3)
            found = true;
    CHECK(found);
}

TEST_CASE("bad numbers are rejected with BadNumber")
{
    std::string doc = R"(<factory>
      <objectives><objective name="makespan"/></objectives>
      <processingDevices><processingDevice name="d">
        <unavailableTimes><unavailableTime>abc,10</unavailableTime></unavailableTimes>
      </processingDevice></processingDevices>
    </factory>)";
    auto outcome = parseFdl(doc);
    CHECK(!outcome.model);
    bool found = false;
    for (const auto& d : outcome.diagnostics)
        if (d.code == "BadNumber")
            found = true;
    CHECK(found);
}

TEST_CASE("an explicitly empty modes element is an error")
{
    std::string doc = R"(<factory>
      <objectives><objective name="makespan"/></objectives>
      <processingDevices><processingDevice name="d"><modes></modes></processingDevice></processingDevices>
    </factory>)";
    auto outcome = parseFdl(doc);
    CHECK(!outcome.model);
    bool found = false;
    for (const auto& d : outcome.diagnostics)
        if (d.code == "EmptyModes")
            found = true;
    CHECK(found);
}

TEST_CASE("line stations must be consecutive without branching")
{
    std::string doc = R"(<factory>
      <objectives><objective name="makespan"/></objectives>
      <processingDevices><processingDevice name="d"/><processingDevice name="e"/></processingDevices>
      <productionLines><productionLine name="L">
        <productionLineProcessingDevices>
          <productionLineProcessingDevice order="0" name="d"/>
          <productionLineProcessingDevice order="0" name="e"/>
        </productionLineProcessingDevices>
      </productionLine></productionLines>
    </factory>)";
    auto outcome = parseFdl(doc);
    CHECK(!outcome.model);
    bool found = false;
    for (const auto& d : outcome.diagnostics)
        if (d.code == "BadOrder")
            found = true;
    CHECK(found);
}

TEST_CASE("cut expansion totals are exact for arbitrary splits")
{
    std::mt19937_64 rng(808);
    for (int round = 0; round < 200; ++round) {
        raw::Process p;
        p.name = "P";
        int cuts = 1 + static_cast<int>(rng() % 12);
        p.cuts = cuts;
        std::int64_t time = static_cast<std::int64_t>(rng() % 100000);
        std::int64_t energy = static_cast<std::int64_t>(rng() % 5000);
        std::int64_t money = static_cast<std::int64_t>(rng() % 90000);
        p.compatibleDevices.push_back({ "d", Duration::fromTenths(time), Energy::fromTenths(energy),
            Money::fromTenths(money), {} });
        std::vector<raw::Relation> relations;
        std::vector<Diagnostic> diags;
        REQUIRE(expandCuts(p, relations, diags));
        REQUIRE(p.subprocesses.size() == static_cast<std::size_t>(cuts));
        std::int64_t timeSum = 0, energySum = 0, moneySum = 0;
        for (const auto& sp : p.subprocesses) {
            timeSum += sp.options[0].processingTime->tenths();
            energySum += sp.options[0].energyConsumption->tenths();
            moneySum += sp.options[0].monetaryCost->tenths();
        }
        CHECK(timeSum == time);
        CHECK(energySum == energy);
        CHECK(moneySum == money);
        CHECK(relations.size() == static_cast<std::size_t>(cuts) - 1);
    }
}

TEST_CASE("deleting a referenced subprocess is caught at resolution")
{
    std::string doc = readFixture("canonical_template.fdl");
    auto pos = doc.find("<subprocess name=\"production1Task2\">");
    REQUIRE(pos != std::string::npos);
    auto end = doc.find("</subprocess>", pos);
    REQUIRE(end != std::string::npos);
    doc.erase(pos, end + 13 - pos);
    auto outcome = parseFdl(doc);
    CHECK(!outcome.model);
    CHECK(hasErrors(outcome.diagnostics));
}

TEST_CASE("mixed dialects are detected")
{
    std::string doc = R"(<factory>
      <objectives><objective name="makespan"/></objectives>
      <processingDevices><processingDevice name="d"/></processingDevices>
      <productionProcesses>
        <productionProcess name="A">
          <subprocesses>
            <subprocess name="a1">
              <subProcessProcessingDevice name="d" processingTime="5"/>
            </subprocess>
            <subprocess name="a2">
              <subprocessProcessingDevicesGroup processingTime="5">
                <subprocessProcessingDevice name="d"/>
              </subprocessProcessingDevicesGroup>
            </subprocess>
          </subprocesses>
        </productionProcess>
      </productionProcesses>
    </factory>)";
    auto outcome = parseFdl(doc);
    REQUIRE(outcome.model);
    CHECK(outcome.dialect == DialectProfile::Mixed);
}
