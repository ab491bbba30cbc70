#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace wavebound {

struct ConditionEntry {
  std::string name;
  bool satisfied = false;
  double evidence = 0.0;   // quadrature value or sup estimate behind the verdict
  double tolerance = 0.0;
  std::string note;

  friend bool operator==(const ConditionEntry&, const ConditionEntry&) = default;
};

struct ConditionReport {
  std::string subject;
  std::vector<ConditionEntry> entries;
  // Caveats that do not fail a condition, e.g. "conditions unverifiable in tails".
  std::vector<std::string> flags;

  void add(std::string name, bool ok, double evidence, double tolerance, std::string note = {}) {
    entries.push_back({std::move(name), ok, evidence, tolerance, std::move(note)});
  }

  [[nodiscard]] bool all_satisfied() const {
    return std::all_of(entries.begin(), entries.end(), [](const ConditionEntry& e) { return e.satisfied; });
  }

  [[nodiscard]] const ConditionEntry* find(const std::string& name) const {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const ConditionEntry& e) { return e.name == name; });
    return it == entries.end() ? nullptr : &*it;
  }

  [[nodiscard]] std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
      if (!e.satisfied) out.push_back(e.name);
    return out;
  }

  friend bool operator==(const ConditionReport&, const ConditionReport&) = default;
};

}  // namespace wavebound
