#pragma once

// Randomized end-to-end check of the six construction pipelines. Each seed
// draws a finite monoid and act, runs every construction on presentations of
// the instance, and compares the output presentation against the
// independently materialized target act: the presented act must exist, be
// complete, and induce the same grid kernel (verify_presentation), with no
// tolerance for near-misses. The CLI's fuzz command and the integration
// checks share this driver.

#include <cstdint>
#include <string>
#include <vector>

namespace actpres::harness {

struct FuzzLine {
  std::string key;    // "seed-<n>.<construction>"
  std::string value;  // "ok ..." or "FAIL <reason>"
  bool ok = true;
};

struct FuzzReport {
  std::uint64_t base_seed = 0;
  int seeds = 0;
  int failures = 0;
  std::vector<FuzzLine> lines;
};

FuzzReport fuzz_constructions(std::uint64_t base_seed, int seeds, int max_monoid, int max_act);

}  // namespace actpres::harness
