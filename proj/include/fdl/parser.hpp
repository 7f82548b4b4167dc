#pragma once

#include "fdl/diagnostics.hpp"
#include "fdl/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fdl {

// The three structural styles a factory document may use.  Detection is
// per element; a document mixing styles reports Mixed.
enum class DialectProfile { Canonical, Discrete, Process, Mixed };

std::string_view dialectName(DialectProfile profile);

struct ParseOutcome {
    std::optional<FactoryModel> model; // set iff diagnostics carry no Error
    std::vector<Diagnostic> diagnostics;
    DialectProfile dialect = DialectProfile::Canonical;
};

// Parses UTF-8 FDL, normalizes every dialect to the canonical model
// (synthetic modes, cut expansion, merged windows) and resolves references.
ParseOutcome parseFdl(std::string_view text);

// Generates "<process> cut <i>" subprocesses (i = 1..cuts) from the
// process-level compatibleDevices costs, dividing each cost by the cut count
// in integer tenths with the remainder folded into the last cut, and chains
// the cuts with M relations.  Returns false (with a diagnostic) when the
// process is not expandable.
bool expandCuts(raw::Process& process, std::vector<raw::Relation>& relations,
    std::vector<Diagnostic>& diagnostics);

class IncompatibleLine : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One full-batch (or trailing partial-batch) repetition of a recipe chain.
struct SubOrder {
    std::string name; // "<process>#<k>"
    std::vector<raw::Subprocess> subprocesses;
    std::vector<raw::Relation> relations; // relations internal to the clone
    bool partialBatch = false;
};

// Splits a bulk order into ceil(orderAmount / batch) sub-orders for the
// process type compatible with `line`.  The final sub-order may be a partial
// batch; it still carries full-batch processing times.
std::vector<SubOrder> expandOrder(
    const FactoryModel& model, ProcessId process, Quantity orderAmount, LineId line);

// Canonical document emission; parseFdl(serializeFdl(m)) is structurally
// equal to m.  Throws std::invalid_argument for models with no objectives.
std::string serializeFdl(const FactoryModel& model);

} // namespace fdl
