#include "activelab/oracle.hpp"

#include <cmath>

#include "activelab/error.hpp"
#include "activelab/format.hpp"

namespace activelab {

void OracleConfig::validate() const {
  if (!(flops_per_query >= 0.0) || !std::isfinite(flops_per_query))
    throw ConfigError("flops_per_query must be a non-negative number");
  if (!(unit_cost_per_query >= 0.0) || !std::isfinite(unit_cost_per_query))
    throw ConfigError("unit_cost_per_query must be a non-negative number");
}

Oracle::Oracle(std::vector<ClassId> truth, OracleConfig config, std::size_t max_labels)
    : truth_(std::move(truth)),
      revealed_(truth_.size(), 0),
      config_(config),
      budget_(max_labels, config.flops_per_query, config.unit_cost_per_query) {
  config_.validate();
}

QueryReceipt Oracle::query(SampleId id, std::size_t iteration) {
  if (id >= truth_.size()) throw UnknownId(id);
  QueryReceipt r;
  r.id = id;
  r.label = truth_[id];
  if (revealed_[id]) {
    r.repeat = true;
  } else {
    budget_.charge();
    revealed_[id] = 1;
    log_.push_back({iteration, id, r.label, budget_.flops(), budget_.cost()});
  }
  r.cumulative_queries = budget_.used_labels();
  r.cumulative_flops = budget_.flops();
  r.cumulative_cost = budget_.cost();
  return r;
}

void write_query_log_csv(std::ostream& out, std::span<const QueryLogEntry> log) {
  out << "iteration,id,label,cumulative_flops,cumulative_cost\n";
  for (const auto& e : log) {
    out << e.iteration << ',' << e.id << ',' << e.label << ',' << format_double(e.cumulative_flops)
        << ',' << format_double(e.cumulative_cost) << '\n';
  }
}

}  // namespace activelab
