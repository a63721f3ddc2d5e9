#pragma once

// JSON report documents. Objects serialize with sorted keys and rationals
// render as "p/q" strings, so identical inputs give byte-identical output.

#include <string>

#include "json.hpp"
#include "locality/adversary.hpp"
#include "locality/analysis.hpp"
#include "locality/io.hpp"
#include "locality/knapsack.hpp"
#include "locality/perceptron.hpp"
#include "locality/simulator.hpp"
#include "locality/working_set.hpp"

namespace locality::report {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

Json rational(const Rational& r);
Json to_json(const WorkingSetFunction& f);
// Page ids are rendered through `tokens` when given.
Json to_json(const SimulationResult& r, const io::TokenTable* tokens = nullptr);
Json to_json(const ConformanceReport& r);
Json to_json(const BoundReport& r);
Json to_json(const SeparationReport& r);
Json to_json(const knapsack::Solution& s);
Json to_json(const perceptron::Trace& t);

Json document(const std::string& command, Json inputs, Json results);
Json document(const std::string& command, Json inputs, Json results, bool pass);

std::string dump(const Json& doc);

}  // namespace locality::report
