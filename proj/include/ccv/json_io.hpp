#pragma once

#include <json.hpp>

#include "ccv/comparison.hpp"
#include "ccv/counterexample.hpp"
#include "ccv/transport.hpp"

namespace ccv {

using nlohmann::json;

// Doubles that may legitimately be infinite (inj, delta budgets) are
// stored as the string "inf"; JSON has no infinity literal.
json encode_number(double x);
double decode_number(const json& j);

json to_json(const Manifold& M);
Manifold manifold_from_json(const json& j);

json to_json(const Point& p);
Point point_from_json(const json& j);

json to_json(const ScalarField& f);
ScalarField field_from_json(const Manifold& M, const json& j);

json to_json(const ComparisonReport& r);
json to_json(const Certificate& c);
json to_json(const ViolationWitness& w);
json to_json(const CconcavityResult& r);
json to_json(const ThreeClaimsReport& r);
json to_json(const CounterexampleReport& r);
json to_json(const MonotonicityReport& r);
json to_json(const OptimalityReport& r);

// Point clouds as CSV with the manifold declared on a header line.
std::string cloud_to_csv(const PointCloud& cloud);
PointCloud cloud_from_csv(const std::string& text);

}  // namespace ccv
