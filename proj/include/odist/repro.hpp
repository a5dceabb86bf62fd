#pragma once

// Regenerates every worked example and checks its documented number.

#include <string>
#include <vector>

namespace odist {

struct ReproCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<ReproCheck> run_repro();

}  // namespace odist
