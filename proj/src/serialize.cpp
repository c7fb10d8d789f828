#include "nrp/serialize.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "nrp/errors.hpp"

namespace nrp {
namespace {

const char* kind_name(BackboneKind k) {
  switch (k) {
    case BackboneKind::Exact: return "exact";
    case BackboneKind::Approximate: return "approx";
    case BackboneKind::Soft: return "soft";
    case BackboneKind::Combined: return "combined";
  }
  return "?";
}

BackboneKind kind_from_name(const std::string& s) {
  if (s == "exact") return BackboneKind::Exact;
  if (s == "approx") return BackboneKind::Approximate;
  if (s == "soft") return BackboneKind::Soft;
  if (s == "combined") return BackboneKind::Combined;
  throw ModelError("unknown backbone kind '" + s + "'");
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json j;
  j["bound"] = inst.bound();
  Json customers = Json::array();
  for (const auto& c : inst.customers()) customers.push_back({c.id, c.profit});
  j["customers"] = std::move(customers);
  Json requirements = Json::array();
  for (const auto& r : inst.requirements()) requirements.push_back({r.id, r.cost});
  j["requirements"] = std::move(requirements);
  Json rows = Json::array();
  for (int i = 0; i < inst.customer_count(); ++i) {
    Json row = Json::array();
    for (Id r : inst.row(i)) row.push_back(r);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (!inst.note().empty()) j["note"] = inst.note();
  return j;
}

Instance instance_from_json(const Json& j) {
  std::vector<Customer> customers;
  for (const auto& c : j.at("customers"))
    customers.push_back({c.at(0).get<Id>(), c.at(1).get<Money>()});
  std::vector<Requirement> requirements;
  for (const auto& r : j.at("requirements"))
    requirements.push_back({r.at(0).get<Id>(), r.at(1).get<Money>()});
  std::vector<std::vector<Id>> rows;
  for (const auto& row : j.at("rows")) rows.push_back(row.get<std::vector<Id>>());
  std::string note = j.value("note", std::string());
  return Instance(std::move(customers), std::move(requirements), std::move(rows),
                  j.at("bound").get<Money>(), std::move(note));
}

Json solution_to_json(const Solution& x) {
  Json pairs = Json::array();
  for (const auto& [id, on] : x.pairs()) pairs.push_back({id, on ? 1 : 0});
  return Json{{"pairs", std::move(pairs)}};
}

Solution solution_from_json(const Json& j) {
  std::vector<std::pair<Id, bool>> pairs;
  for (const auto& p : j.at("pairs"))
    pairs.emplace_back(p.at(0).get<Id>(), p.at(1).get<int>() != 0);
  return Solution::from_pairs(std::move(pairs));
}

Json backbone_to_json(const Backbone& bb) {
  Json pairs = Json::array();
  for (const auto& [id, on] : bb.pairs()) pairs.push_back({id, on ? 1 : 0});
  return Json{{"kind", kind_name(bb.kind())}, {"pairs", std::move(pairs)}};
}

Backbone backbone_from_json(const Json& j) {
  std::vector<std::pair<Id, bool>> pairs;
  for (const auto& p : j.at("pairs"))
    pairs.emplace_back(p.at(0).get<Id>(), p.at(1).get<int>() != 0);
  return Backbone(std::move(pairs), kind_from_name(j.at("kind").get<std::string>()));
}

Json level_trace_to_json(const LevelTrace& tr) {
  Json j;
  j["level"] = tr.level;
  j["progressed"] = tr.progressed;
  j["before"] = instance_to_json(tr.before);
  Json optima = Json::array();
  for (const Solution& s : tr.optima) optima.push_back(solution_to_json(s));
  j["optima"] = std::move(optima);
  j["approx"] = backbone_to_json(tr.approx);
  j["mid"] = instance_to_json(tr.mid);
  j["soft"] = backbone_to_json(tr.soft);
  j["after"] = instance_to_json(tr.after);
  return j;
}

LevelTrace level_trace_from_json(const Json& j) {
  LevelTrace tr;
  tr.level = j.at("level").get<int>();
  tr.progressed = j.at("progressed").get<bool>();
  tr.before = instance_from_json(j.at("before"));
  for (const auto& s : j.at("optima")) tr.optima.push_back(solution_from_json(s));
  tr.approx = backbone_from_json(j.at("approx"));
  tr.mid = instance_from_json(j.at("mid"));
  tr.soft = backbone_from_json(j.at("soft"));
  tr.after = instance_from_json(j.at("after"));
  return tr;
}

void write_trace(const MultilevelResult& result, std::ostream& out) {
  Json header;
  header["record"] = "header";
  header["profit"] = result.profit;
  header["cost"] = result.cost;
  header["levels"] = result.levels.size();
  header["effective_levels"] = result.effective_levels;
  out << header.dump() << '\n';
  for (const LevelTrace& tr : result.levels) {
    Json line = level_trace_to_json(tr);
    line["record"] = "level";
    out << line.dump() << '\n';
  }
  Json footer;
  footer["record"] = "final";
  footer["final_profit"] = result.final_run.profit;
  footer["final_solution"] = solution_to_json(result.final_run.solution);
  footer["solution"] = solution_to_json(result.solution);
  out << footer.dump() << '\n';
}

TraceFile read_trace(std::istream& in) {
  TraceFile tf;
  std::string line;
  int lineno = 0;
  bool saw_header = false, saw_final = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("trace", lineno, e.what());
    }
    const std::string record = j.value("record", std::string());
    if (record == "header") {
      tf.profit = j.at("profit").get<Money>();
      tf.cost = j.at("cost").get<Money>();
      tf.effective_levels = j.at("effective_levels").get<int>();
      saw_header = true;
    } else if (record == "level") {
      tf.levels.push_back(level_trace_from_json(j));
    } else if (record == "final") {
      tf.solution = solution_from_json(j.at("solution"));
      tf.final_solution = solution_from_json(j.at("final_solution"));
      saw_final = true;
    } else {
      throw ParseError("trace", lineno, "unknown record kind '" + record + "'");
    }
  }
  if (!saw_header || !saw_final) throw ModelError("trace is missing its header or final record");
  return tf;
}

}  // namespace nrp
