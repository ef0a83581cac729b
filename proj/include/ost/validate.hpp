#pragma once

#include <string>
#include <vector>

#include "ost/tree.hpp"

namespace ost {

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::size_t violations = 0;
  std::string detail;  // first violation, when any
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
  const ValidationCheck& check(const std::string& name) const;
  std::string to_text() const;
};

/// Length bound of a path by kind: regular <= 2^{i+1}-1 (diameter at the
/// top level), pruned <= 2^i - 1, modified <= 3*2^i - 2.
Weight path_length_bound(PathKind kind, int level, int kappa, Weight diameter);

/// Runs every structural check on a built tree. Failures are report
/// entries, never exceptions.
ValidationReport validate_tree(const ObliviousTree& tree);

}  // namespace ost
