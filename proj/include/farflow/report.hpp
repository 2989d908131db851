#ifndef FARFLOW_REPORT_HPP
#define FARFLOW_REPORT_HPP

#include <string>

#include "json.hpp"

#include "farflow/farfield.hpp"
#include "farflow/oracles.hpp"
#include "farflow/postproc.hpp"
#include "farflow/solver.hpp"

namespace farflow {

using Json = nlohmann::json;

Json rate_fit_to_json(const RateFit& fit);
Json barrier_report_to_json(const BarrierReport& report);
Json optimality_report_to_json(const OptimalityReport& report);
Json multipole_to_json(const MultipoleCoefficients& coeffs);
Json history_to_json(const PicardHistory& history);

// Columns r, sup_value, log_r, log_sup — plot-ready.
void write_rate_csv(const std::string& path, const RateFit& fit);

void write_json_file(const std::string& path, const Json& value);

}  // namespace farflow

#endif  // FARFLOW_REPORT_HPP
