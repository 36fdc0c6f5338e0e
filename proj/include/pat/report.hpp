#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pat {

/// One accepted solver step. stage = -1 is the quadratic initialization,
/// iteration = 0 rows are stage baselines (cost before any step).
/// inner_iters counts CG iterations (proposed/tikhonov) or TV-prox iterations
/// (FISTA).
struct IterationRecord {
    int stage = 0;
    double q = 0.0;
    int iteration = 0;
    double cost = 0.0;
    double beta = 0.0;
    int inner_iters = 0;
    double rel_change = 0.0;
    double seconds = 0.0; // wall time since solve start
};

struct SolveReport {
    std::string method;
    nlohmann::json params; // method parameters, for provenance
    std::vector<IterationRecord> iterations;
    bool step_limited = false; // a stage ended by line-search exhaustion
    bool degraded = false;     // a stage failed; an earlier iterate was returned
    double total_seconds = 0.0;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

} // namespace pat
