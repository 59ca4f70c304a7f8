#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsemd {

enum class Phase { Preliminary, Asymptotic };

inline const char* phase_name(Phase p) {
  return p == Phase::Preliminary ? "preliminary" : "asymptotic";
}

// Per-stage / per-checkpoint records of a run. Single writer; oracle call
// counts must be strictly increasing.
class RunTrace {
 public:
  struct Record {
    long oracle_calls = 0;
    int stage_id = 0;
    Phase phase = Phase::Preliminary;
    std::map<std::string, double> metrics;
  };

  void append(Record r) {
    if (!records_.empty() && r.oracle_calls <= records_.back().oracle_calls)
      throw std::invalid_argument("trace: oracle calls must be strictly increasing");
    records_.push_back(std::move(r));
  }

  const std::vector<Record>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  const Record& back() const { return records_.back(); }

 private:
  std::vector<Record> records_;
};

}  // namespace sparsemd
