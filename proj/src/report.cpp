#include "locality/report.hpp"

namespace locality::report {

namespace {

Json page(PageId id, const io::TokenTable* tokens) {
  if (tokens) return tokens->token(id);
  return id;
}

}  // namespace

Json rational(const Rational& r) { return r.to_string(); }

Json to_json(const WorkingSetFunction& f) {
  Json j;
  j["description"] = f.describe();
  j["multiplicities"] = std::vector<std::uint64_t>(f.table().begin(), f.table().end());
  switch (f.tail()) {
    case TailRule::UnitGrowth: j["tail"] = "unit"; break;
    case TailRule::ConstantMultiplicity: j["tail"] = "constant"; break;
    case TailRule::Arithmetic: j["tail"] = "arithmetic " + std::to_string(f.tail_param()); break;
    case TailRule::Geometric: j["tail"] = "geometric " + std::to_string(f.tail_param()); break;
  }
  j["approximately_concave"] = f.approximately_concave();
  return j;
}

Json to_json(const SimulationResult& r, const io::TokenTable* tokens) {
  Json j;
  j["policy"] = r.policy_name;
  j["total_requests"] = r.total_requests;
  j["faults"] = r.faults;
  j["fault_rate"] = rational(r.fault_rate());
  j["fault_rate_float"] = r.fault_rate().to_double();
  if (r.fault_indices) j["fault_indices"] = *r.fault_indices;
  if (r.eviction_log) {
    Json log = Json::array();
    for (const Eviction& e : *r.eviction_log) log.push_back({{"index", e.index}, {"page", page(e.page, tokens)}});
    j["evictions"] = std::move(log);
  }
  if (r.steady) {
    j["steady_faults"] = r.steady->first;
    j["steady_requests"] = r.steady->second;
    if (auto rate = r.steady_rate()) j["steady_rate"] = rational(*rate);
  }
  return j;
}

Json to_json(const ConformanceReport& r) {
  Json j;
  j["conforms"] = r.conforms;
  if (r.first_violation) {
    const Violation& v = *r.first_violation;
    j["first_violation"] = {{"start", v.start},
                            {"length", v.length},
                            {"distinct", v.distinct},
                            {"allowed", v.allowed}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["f"] = r.f_description;
  j["k"] = r.k;
  j["bound_name"] = bound_name(r.bound);
  j["policy"] = r.policy;
  j["bound_value"] = rational(r.bound_value);
  j["bound_value_float"] = r.bound_value.to_double();
  j["trials"] = r.trials;
  j["length"] = r.length;
  j["max_faults"] = r.max_faults;
  j["max_observed_rate"] = rational(r.max_observed_rate);
  j["max_observed_rate_float"] = r.max_observed_rate.to_double();
  j["slack_allowed"] = rational(r.slack_allowed);
  j["violations"] = r.violations;
  if (r.conforms) j["conforms"] = *r.conforms;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const SeparationReport& r) {
  Json j;
  j["repetitions"] = r.repetitions;
  j["alpha"] = rational(r.alpha);
  j["fifo_steady_rate"] = rational(r.fifo_steady);
  j["transient_slack"] = rational(r.transient_slack);
  j["lru"] = to_json(r.lru);
  j["fifo"] = to_json(r.fifo);
  j["opt"] = to_json(r.opt);
  j["conforms"] = r.conforms;
  j["insufficient_length"] = r.insufficient_length;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const knapsack::Solution& s) {
  return {{"selected", s.selected}, {"total_value", s.total_value}, {"total_size", s.total_size}};
}

Json to_json(const perceptron::Trace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json step{{"norm_sq", s.norm_sq}};
    if (s.projection) step["projection"] = *s.projection;
    steps.push_back(std::move(step));
  }
  return {{"final_w", t.final_w}, {"updates", t.updates}, {"converged", t.converged},
          {"steps", std::move(steps)}};
}

Json document(const std::string& command, Json inputs, Json results) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"inputs", std::move(inputs)},
          {"results", std::move(results)}};
}

Json document(const std::string& command, Json inputs, Json results, bool pass) {
  Json doc = document(command, std::move(inputs), std::move(results));
  doc["pass"] = pass;
  return doc;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace locality::report
