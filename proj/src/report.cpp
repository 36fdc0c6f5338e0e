#include "pat/report.hpp"

#include <sstream>

namespace pat {

std::string SolveReport::to_csv() const {
    std::ostringstream out;
    out.precision(12);
    out << "iteration,stage,q,cost,beta,inner_iters,rel_change,seconds\n";
    for (const auto& r : iterations)
        out << r.iteration << ',' << r.stage << ',' << r.q << ',' << r.cost << ',' << r.beta << ','
            << r.inner_iters << ',' << r.rel_change << ',' << r.seconds << '\n';
    return out.str();
}

nlohmann::json SolveReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : iterations)
        rows.push_back({{"iteration", r.iteration},
                        {"stage", r.stage},
                        {"q", r.q},
                        {"cost", r.cost},
                        {"beta", r.beta},
                        {"inner_iters", r.inner_iters},
                        {"rel_change", r.rel_change},
                        {"seconds", r.seconds}});
    return {{"method", method},
            {"params", params},
            {"iterations", rows},
            {"step_limited", step_limited},
            {"degraded", degraded},
            {"total_seconds", total_seconds}};
}

} // namespace pat
