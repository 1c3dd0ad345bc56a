#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hn/config.hpp"

namespace hn {

// Runs the experiment described by `cfg` (key "experiment" selects the kind)
// and writes its CSV artifacts plus manifest.txt into out_dir. Returns the
// artifact paths. Everything is a pure function of (config, seed, version).
std::vector<std::string> run_experiment(Config& cfg, const std::string& out_dir, int jobs);

// Desk-scale verification suites; prints one margin line per check.
// Known names: degree-bounds, height-tail, lambda-min, repair-oracle,
// routing-oracle, energy-conservation.
bool run_verify_suite(const std::string& name, std::ostream& out);

// Deterministic fan-out over [0, n): work items may run on `jobs` threads,
// but item index fully determines seeds and output slots.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

inline constexpr const char* kVersion = "hnsim 1.0.0";

}  // namespace hn
