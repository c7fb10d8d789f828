#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "nrp/model.hpp"

namespace nrp {

/// One requirement level of the classic random generator. Requirements of a
/// level may only depend on requirements of strictly earlier levels.
struct LevelSpec {
  int count = 0;
  Money cost_min = 1;
  Money cost_max = 1;
  int max_parents = 0;  // per requirement, drawn uniformly in [0, max_parents]
};

struct ClassicGenSpec {
  std::string name;  // preset name, e.g. "nrp-1"; folded into the instance note
  std::vector<LevelSpec> levels;
  int customer_count = 0;
  Money profit_min = 1;
  Money profit_max = 1;
  int requests_min = 1;
  int requests_max = 1;
  /// The bound is cost_ratio times the total requirement cost, floored.
  /// Experiments conventionally use 0.3, 0.5, or 0.7; anything in (0, 1]
  /// is accepted (1.0 makes every selection feasible).
  double cost_ratio = 0.5;
  std::uint64_t rng_seed = 0;
};

/// Random layered instance: level costs and dependency fan-in per spec,
/// uniform customer profits and request counts. Deterministic under
/// (spec, rng_seed). Returned in simplified (prerequisite-free) form.
Instance generate_classic(const ClassicGenSpec& spec);
/// Same construction, stopping before the prerequisite closure.
DependentInstance generate_classic_dependent(const ClassicGenSpec& spec);

/// Loads a generator preset (JSON with name/levels/customers/profit/requests).
/// cost_ratio and rng_seed keep their defaults; callers override them.
ClassicGenSpec load_gen_spec(const std::filesystem::path& path);

/// Display name like "nrp-1-0.3": preset name plus the cost ratio.
std::string instance_label(const ClassicGenSpec& spec);

/// One bug report from a tracker dump.
struct BugDumpRecord {
  std::int64_t report_id = 0;
  std::int64_t timestamp = 0;
  std::int64_t severity = 0;  // cost proxy
  std::vector<std::string> commenters;
};

struct MinerSpec {
  int window_size = 10'000;  // continuous reports taken from the dump
  int window_start = 0;
  /// Raw activity filter, applied once over the window.
  int min_comments = 1;
  int max_comments = std::numeric_limits<int>::max();
  /// Request-count filter, re-checked after every removal pass.
  int min_requests = 1;
  int max_requests = std::numeric_limits<int>::max();
  double cost_ratio = 0.5;
  /// Reserved: mining is fully deterministic today.
  std::uint64_t rng_seed = 0;
};

/// Reads a tab-separated dump: report id, timestamp, severity proxy,
/// comma-joined commenter ids. '#' lines and blank lines are skipped.
std::vector<BugDumpRecord> read_bug_dump(const std::filesystem::path& path);
std::vector<BugDumpRecord> read_bug_dump(std::istream& in, const std::string& display_name);

/// Maps a window of bug reports to an instance: reports become requirements
/// (cost 1 + severity mod 9), commenters become customers (profit hashed
/// from the commenter id into [1, 50]), comments become requests. Users
/// outside the comment-count interval are dropped, then reports without
/// requesters and customers outside the request-count interval are removed
/// until stable.
Instance mine_instance(std::vector<BugDumpRecord> dump, const MinerSpec& spec);

/// Line-oriented text format shared with classic published instances:
///   levels L (0 = already prerequisite-free, one flat cost block)
///   per level: a count line, then a cost line
///   arc count, then one "parent child" line per arc
///   customer count, then one "profit k r_1 ... r_k" line per customer
///   trailing "b <bound>" and optional "note <text>" lines
/// Requirements and customers are numbered 1..m and 1..n in file order.
/// Files with prerequisites are closed into simplified form on read.
Instance read_instance(const std::filesystem::path& path);
Instance read_instance(std::istream& in, const std::string& display_name);

/// Writes the simplified form (L = 0). Ids must be contiguous from 1, which
/// holds for everything generated, mined, or read from a file; reduced
/// instances with id gaps are for traces, not this format.
void write_instance(const Instance& inst, const std::filesystem::path& path);
void write_instance(const Instance& inst, std::ostream& out);

}  // namespace nrp
