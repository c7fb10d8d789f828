#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "nrp/backbone.hpp"
#include "nrp/bma.hpp"
#include "nrp/model.hpp"

namespace nrp {

/// JSON codecs for the core value types. Keys are emitted in a fixed order
/// so that equal values serialize to identical bytes.
using Json = nlohmann::ordered_json;

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

Json solution_to_json(const Solution& x);
Solution solution_from_json(const Json& j);

Json backbone_to_json(const Backbone& bb);
Backbone backbone_from_json(const Json& j);

Json level_trace_to_json(const LevelTrace& tr);
LevelTrace level_trace_from_json(const Json& j);

/// One multilevel run as JSON lines: a header line, one line per level,
/// and a footer with the residual run and the assembled solution.
void write_trace(const MultilevelResult& result, std::ostream& out);

struct TraceFile {
  Money profit = 0;
  Money cost = 0;
  int effective_levels = 0;
  std::vector<LevelTrace> levels;
  Solution solution;
  Solution final_solution;  // solution of the residual solve
};

TraceFile read_trace(std::istream& in);

}  // namespace nrp
