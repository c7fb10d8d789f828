#include "nrp/instances.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "nrp/errors.hpp"
#include "nrp/rng.hpp"
#include "nrp/search.hpp"

namespace nrp {
namespace {

/// Line reader that skips blanks and '#' comments and tracks line numbers
/// for error messages.
class LineReader {
public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  /// Next payload line, or false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t pos = line.find_first_not_of(" \t");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(name_, lineno_, std::string("expected ") + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(name_, lineno_, message);
  }

  int line() const { return lineno_; }
  const std::string& name() const { return name_; }

private:
  std::istream& in_;
  std::string name_;
  int lineno_ = 0;
};

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::int64_t parse_int(const LineReader& rd, const std::string& tok) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(rd.name(), rd.line(), "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size())
    throw ParseError(rd.name(), rd.line(), "expected an integer, got '" + tok + "'");
  return v;
}

std::vector<std::int64_t> parse_ints(LineReader& rd, const char* what, std::size_t count) {
  auto toks = split_ws(rd.require(what));
  if (toks.size() != count)
    rd.fail(std::string(what) + ": expected " + std::to_string(count) + " values, got " +
            std::to_string(toks.size()));
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (const auto& t : toks) out.push_back(parse_int(rd, t));
  return out;
}

std::string format_ratio(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", ratio);
  return buf;
}

void validate(const ClassicGenSpec& s) {
  if (s.levels.empty()) throw std::invalid_argument("generator spec needs at least one level");
  long long total_reqs = 0;
  for (const auto& lv : s.levels) {
    if (lv.count < 1) throw std::invalid_argument("every level needs at least one requirement");
    if (lv.cost_min < 1 || lv.cost_max < lv.cost_min)
      throw std::invalid_argument("level cost range must satisfy 1 <= min <= max");
    if (lv.max_parents < 0) throw std::invalid_argument("max parents must be >= 0");
    total_reqs += lv.count;
  }
  if (s.customer_count < 1) throw std::invalid_argument("customer count must be >= 1");
  if (s.profit_min < 1 || s.profit_max < s.profit_min)
    throw std::invalid_argument("profit range must satisfy 1 <= min <= max");
  if (s.requests_min < 1 || s.requests_max < s.requests_min)
    throw std::invalid_argument("request range must satisfy 1 <= min <= max");
  if (s.requests_max > total_reqs)
    throw std::invalid_argument("request range exceeds the requirement count");
  if (!(s.cost_ratio > 0.0 && s.cost_ratio <= 1.0))
    throw std::invalid_argument("cost ratio must lie in (0, 1]");
}

/// Moves a uniform k-sample without replacement to pool[0..k).
void partial_shuffle(std::vector<Id>& pool, int k, Rng& rng) {
  int n = static_cast<int>(pool.size());
  for (int t = 0; t < k; ++t)
    std::swap(pool[t], pool[t + static_cast<int>(rng.below(n - t))]);
}

}  // namespace

DependentInstance generate_classic_dependent(const ClassicGenSpec& spec) {
  validate(spec);
  Rng rng(spec.rng_seed);

  std::vector<Requirement> requirements;
  std::vector<std::pair<Id, Id>> arcs;
  std::vector<Id> earlier;  // requirement ids of strictly earlier levels
  Id next_id = 1;
  for (const LevelSpec& lv : spec.levels) {
    std::vector<Id> level_ids;
    level_ids.reserve(lv.count);
    for (int i = 0; i < lv.count; ++i) {
      requirements.push_back({next_id, rng.range(lv.cost_min, lv.cost_max)});
      level_ids.push_back(next_id);
      ++next_id;
    }
    if (!earlier.empty() && lv.max_parents > 0) {
      std::vector<Id> pool = earlier;
      for (Id rid : level_ids) {
        int k = std::min<int>(static_cast<int>(rng.below(lv.max_parents + 1)),
                              static_cast<int>(pool.size()));
        partial_shuffle(pool, k, rng);
        for (int t = 0; t < k; ++t) arcs.emplace_back(pool[t], rid);
      }
    }
    earlier.insert(earlier.end(), level_ids.begin(), level_ids.end());
  }

  std::vector<Id> all_ids = earlier;
  std::vector<Customer> customers;
  std::vector<std::vector<Id>> direct;
  customers.reserve(spec.customer_count);
  direct.reserve(spec.customer_count);
  std::vector<Id> pool = all_ids;
  for (int i = 1; i <= spec.customer_count; ++i) {
    customers.push_back({i, rng.range(spec.profit_min, spec.profit_max)});
    int k = static_cast<int>(rng.range(spec.requests_min, spec.requests_max));
    partial_shuffle(pool, k, rng);
    direct.emplace_back(pool.begin(), pool.begin() + k);
  }

  Money total = 0;
  for (const auto& r : requirements) total += r.cost;
  Money bound = static_cast<Money>(spec.cost_ratio * static_cast<double>(total));

  DependencyGraph graph(all_ids, std::move(arcs));
  return DependentInstance(std::move(requirements), std::move(customers), std::move(graph),
                           std::move(direct), bound);
}

Instance generate_classic(const ClassicGenSpec& spec) {
  Instance inst = generate_classic_dependent(spec).to_simplified();
  inst.set_note(instance_label(spec) + " seed=" + std::to_string(spec.rng_seed));
  return inst;
}

std::string instance_label(const ClassicGenSpec& spec) {
  std::string name = spec.name.empty() ? "instance" : spec.name;
  return name + "-" + format_ratio(spec.cost_ratio);
}

ClassicGenSpec load_gen_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open preset file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);  // allow comments
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError("preset " + path.string() + ": " + e.what());
  }
  ClassicGenSpec spec;
  try {
    spec.name = j.value("name", path.stem().string());
    for (const auto& lv : j.at("levels")) {
      LevelSpec level;
      level.count = lv.at("count").get<int>();
      level.cost_min = lv.at("cost").at(0).get<Money>();
      level.cost_max = lv.at("cost").at(1).get<Money>();
      level.max_parents = lv.value("max_parents", 0);
      spec.levels.push_back(level);
    }
    spec.customer_count = j.at("customers").get<int>();
    spec.profit_min = j.at("profit").at(0).get<Money>();
    spec.profit_max = j.at("profit").at(1).get<Money>();
    spec.requests_min = j.at("requests").at(0).get<int>();
    spec.requests_max = j.at("requests").at(1).get<int>();
    spec.cost_ratio = j.value("cost_ratio", 0.5);
    spec.rng_seed = j.value("seed", 0ULL);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("preset " + path.string() + ": " + e.what());
  }
  return spec;
}

std::vector<BugDumpRecord> read_bug_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open dump file " + path.string());
  return read_bug_dump(in, path.string());
}

std::vector<BugDumpRecord> read_bug_dump(std::istream& in, const std::string& display_name) {
  LineReader rd(in, display_name);
  std::vector<BugDumpRecord> out;
  std::string line;
  while (rd.next(line)) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4)
      rd.fail("expected 4 tab-separated columns, got " + std::to_string(cols.size()));
    BugDumpRecord rec;
    rec.report_id = parse_int(rd, cols[0]);
    rec.timestamp = parse_int(rd, cols[1]);
    rec.severity = parse_int(rd, cols[2]);
    std::istringstream users(cols[3]);
    std::string user;
    while (std::getline(users, user, ','))
      if (!user.empty()) rec.commenters.push_back(user);
    out.push_back(std::move(rec));
  }
  return out;
}

Instance mine_instance(std::vector<BugDumpRecord> dump, const MinerSpec& spec) {
  if (spec.window_size < 1) throw std::invalid_argument("window size must be >= 1");
  if (spec.window_start < 0) throw std::invalid_argument("window start must be >= 0");
  if (spec.min_requests < 1 || spec.max_requests < spec.min_requests)
    throw std::invalid_argument("request interval must satisfy 1 <= min <= max");
  if (spec.min_comments < 0) throw std::invalid_argument("comment interval must start at >= 0");
  if (!(spec.cost_ratio > 0.0 && spec.cost_ratio <= 1.0))
    throw std::invalid_argument("cost ratio must lie in (0, 1]");

  std::stable_sort(dump.begin(), dump.end(), [](const BugDumpRecord& a, const BugDumpRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.report_id < b.report_id;
  });
  for (std::size_t i = 1; i < dump.size(); ++i) {
    if (dump[i].report_id == dump[i - 1].report_id)
      throw ModelError("duplicate report id " + std::to_string(dump[i].report_id) + " in dump");
  }
  std::size_t start = static_cast<std::size_t>(spec.window_start);
  std::size_t size = static_cast<std::size_t>(spec.window_size);
  if (start + size > dump.size())
    throw ModelError("dump has " + std::to_string(dump.size()) + " reports, window [" +
                     std::to_string(start) + ", " + std::to_string(start + size) +
                     ") does not fit");

  // Index the window: one requirement slot per report, one customer slot per
  // distinct commenter.
  std::map<std::string, int> user_index;
  std::vector<std::vector<int>> report_users(size);
  for (std::size_t r = 0; r < size; ++r) {
    const auto& rec = dump[start + r];
    for (const std::string& u : rec.commenters) {
      auto [it, _] = user_index.try_emplace(u, static_cast<int>(user_index.size()));
      report_users[r].push_back(it->second);
    }
    std::sort(report_users[r].begin(), report_users[r].end());
    report_users[r].erase(std::unique(report_users[r].begin(), report_users[r].end()),
                          report_users[r].end());
  }
  int user_count = static_cast<int>(user_index.size());

  std::vector<int> comments(user_count, 0);
  for (const auto& users : report_users)
    for (int u : users) ++comments[u];
  std::vector<std::uint8_t> user_alive(user_count);
  for (int u = 0; u < user_count; ++u)
    user_alive[u] = comments[u] >= spec.min_comments && comments[u] <= spec.max_comments;
  std::vector<std::uint8_t> report_alive(size, 1);

  // Dropping a user can empty a report; dropping a report can push a user
  // below the request minimum. Iterate to the fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < size; ++r) {
      if (!report_alive[r]) continue;
      bool any = std::any_of(report_users[r].begin(), report_users[r].end(),
                             [&](int u) { return user_alive[u] != 0; });
      if (!any) {
        report_alive[r] = 0;
        changed = true;
      }
    }
    std::vector<int> requests(user_count, 0);
    for (std::size_t r = 0; r < size; ++r) {
      if (!report_alive[r]) continue;
      for (int u : report_users[r])
        if (user_alive[u]) ++requests[u];
    }
    for (int u = 0; u < user_count; ++u) {
      if (!user_alive[u]) continue;
      if (requests[u] < spec.min_requests || requests[u] > spec.max_requests) {
        user_alive[u] = 0;
        changed = true;
      }
    }
  }

  std::vector<Requirement> requirements;
  std::vector<int> requirement_of(size, -1);
  Id next_rid = 1;
  for (std::size_t r = 0; r < size; ++r) {
    if (!report_alive[r]) continue;
    std::int64_t sev = dump[start + r].severity;
    Money cost = 1 + static_cast<Money>(((sev % 9) + 9) % 9);
    requirement_of[r] = static_cast<int>(requirements.size());
    requirements.push_back({next_rid++, cost});
  }

  // Retained commenters become customers 1..n in lexicographic id order,
  // with a profit hashed from the commenter id so reruns agree.
  auto fnv1a = [](const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    return h;
  };
  std::vector<Customer> customers;
  std::vector<std::vector<Id>> rows;
  std::vector<int> customer_of(user_count, -1);
  Id next_cid = 1;
  for (const auto& [name, u] : user_index) {
    if (!user_alive[u]) continue;
    customer_of[u] = static_cast<int>(customers.size());
    customers.push_back({next_cid++, 1 + static_cast<Money>(fnv1a(name) % 50)});
    rows.emplace_back();
  }
  for (std::size_t r = 0; r < size; ++r) {
    if (!report_alive[r]) continue;
    for (int u : report_users[r]) {
      if (customer_of[u] < 0) continue;
      rows[customer_of[u]].push_back(requirements[requirement_of[r]].id);
    }
  }
  if (customers.empty() || requirements.empty())
    throw ModelError("degenerate instance: filtering removed every report or commenter");

  Money total = 0;
  for (const auto& r : requirements) total += r.cost;
  Money bound = static_cast<Money>(spec.cost_ratio * static_cast<double>(total));
  std::string note = "mined start=" + std::to_string(spec.window_start) +
                     " size=" + std::to_string(spec.window_size) +
                     " ratio=" + format_ratio(spec.cost_ratio);
  return Instance(std::move(customers), std::move(requirements), std::move(rows), bound,
                  std::move(note));
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open instance file " + path.string());
  return read_instance(in, path.string());
}

Instance read_instance(std::istream& in, const std::string& display_name) {
  LineReader rd(in, display_name);
  std::int64_t level_count = parse_ints(rd, "level count", 1)[0];
  if (level_count < 0) rd.fail("level count must be >= 0");

  std::vector<Requirement> requirements;
  Id next_rid = 1;
  int blocks = level_count == 0 ? 1 : static_cast<int>(level_count);
  for (int b = 0; b < blocks; ++b) {
    std::int64_t count = parse_ints(rd, "requirement count", 1)[0];
    if (count < 0) rd.fail("requirement count must be >= 0");
    if (count == 0) continue;  // no cost line follows an empty block
    auto costs = parse_ints(rd, "cost list", static_cast<std::size_t>(count));
    for (std::int64_t c : costs) requirements.push_back({next_rid++, static_cast<Money>(c)});
  }
  Id max_rid = next_rid - 1;

  std::int64_t arc_count = parse_ints(rd, "dependency count", 1)[0];
  if (arc_count < 0) rd.fail("dependency count must be >= 0");
  std::vector<std::pair<Id, Id>> arcs;
  for (std::int64_t a = 0; a < arc_count; ++a) {
    auto pc = parse_ints(rd, "dependency arc", 2);
    if (pc[0] < 1 || pc[0] > max_rid || pc[1] < 1 || pc[1] > max_rid)
      rd.fail("dependency arc references requirement outside 1.." + std::to_string(max_rid));
    arcs.emplace_back(static_cast<Id>(pc[0]), static_cast<Id>(pc[1]));
  }

  std::int64_t customer_count = parse_ints(rd, "customer count", 1)[0];
  if (customer_count < 0) rd.fail("customer count must be >= 0");
  std::vector<Customer> customers;
  std::vector<std::vector<Id>> direct;
  for (std::int64_t i = 1; i <= customer_count; ++i) {
    auto toks = split_ws(rd.require("customer line"));
    if (toks.size() < 2) rd.fail("customer line needs at least profit and request count");
    Money profit = parse_int(rd, toks[0]);
    std::int64_t k = parse_int(rd, toks[1]);
    if (k < 0 || toks.size() != static_cast<std::size_t>(k) + 2)
      rd.fail("customer line announces " + std::to_string(k) + " requests but carries " +
              std::to_string(toks.size() - 2));
    std::vector<Id> row;
    for (std::int64_t t = 0; t < k; ++t)
      row.push_back(static_cast<Id>(parse_int(rd, toks[static_cast<std::size_t>(t) + 2])));
    customers.push_back({static_cast<Id>(i), profit});
    direct.push_back(std::move(row));
  }

  std::optional<Money> bound;
  std::string note;
  std::string line;
  while (rd.next(line)) {
    auto toks = split_ws(line);
    if (toks[0] == "b" && toks.size() == 2) {
      bound = parse_int(rd, toks[1]);
    } else if (toks[0] == "note") {
      std::size_t pos = line.find("note");
      pos = line.find_first_not_of(" \t", pos + 4);
      note = pos == std::string::npos ? "" : line.substr(pos);
    } else {
      rd.fail("unexpected trailer line '" + line + "'");
    }
  }
  if (!bound)
    throw ModelError(display_name + ": missing 'b <bound>' line; third-party files need one added");

  DependencyGraph graph([&] {
    std::vector<Id> ids(requirements.size());
    std::iota(ids.begin(), ids.end(), 1);
    return ids;
  }(), std::move(arcs));
  DependentInstance dep(std::move(requirements), std::move(customers), std::move(graph),
                        std::move(direct), *bound);
  Instance inst = dep.to_simplified();
  inst.set_note(std::move(note));
  return inst;
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot open " + path.string() + " for writing");
  write_instance(inst, out);
  if (!out) throw ModelError("failed writing " + path.string());
}

void write_instance(const Instance& inst, std::ostream& out) {
  for (int j = 0; j < inst.requirement_count(); ++j) {
    if (inst.requirement(j).id != j + 1)
      throw ModelError("text format needs requirement ids 1..m; found id " +
                       std::to_string(inst.requirement(j).id) + " at position " +
                       std::to_string(j + 1));
  }
  for (int i = 0; i < inst.customer_count(); ++i) {
    if (inst.customer(i).id != i + 1)
      throw ModelError("text format needs customer ids 1..n; found id " +
                       std::to_string(inst.customer(i).id) + " at position " +
                       std::to_string(i + 1));
  }
  if (inst.note().find('\n') != std::string::npos)
    throw ModelError("instance note must be a single line for the text format");

  out << 0 << '\n' << inst.requirement_count() << '\n';
  if (inst.requirement_count() > 0) {
    for (int j = 0; j < inst.requirement_count(); ++j)
      out << (j ? " " : "") << inst.requirement(j).cost;
    out << '\n';
  }
  out << 0 << '\n' << inst.customer_count() << '\n';
  for (int i = 0; i < inst.customer_count(); ++i) {
    out << inst.customer(i).profit << ' ' << inst.row(i).size();
    for (Id r : inst.row(i)) out << ' ' << r;
    out << '\n';
  }
  out << "b " << inst.bound() << '\n';
  if (!inst.note().empty()) out << "note " << inst.note() << '\n';
}

}  // namespace nrp
