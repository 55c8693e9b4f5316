#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "approach/convex_set.hpp"
#include "approach/rfe_linear.hpp"
#include "approach/rfe_tabular.hpp"
#include "approach/vmdp.hpp"
#include "approach/vmg.hpp"

namespace approach {

using Json = nlohmann::json;

// JSON schemas. Arrays are nested in index order; "s1" is 1-based.
//
// model:     {"S","A","H","d","s1","P":[h][s][a][s'],"r":[h][s][a][d],"noise":{"level"}}
// game:      {"S","A","B","H","d","s1","P":[h][s][a][b][s'],"r":[h][s][a][b][d],"noise"}
// linear:    {"S","A","H","d","d_lin","s1","phi":[s][a][k],"mu":[h][s'][k],"W":[h][i][k],"noise"}
// set:       {"type":"ball","center","radius"} | {"type":"box","lower","upper"}
//            | {"type":"hull","vertices"} | {"type":"cap","center","radius","normal","offset"}
// cost:      [h][s][a]
// empirical: {"S","A","H","d","s1","transition_counts":[h][s][a][s'],
//             "return_sums":[h][s][a][d],"snapshot":[h][s][a][s'] or null}
//
// Parse errors throw ConfigError whose field() is the JSON path of the offending entry.

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json model_to_json(const TabularVMDP& model);
TabularVMDP model_from_json(const Json& j);

Json game_to_json(const TabularVMG& game);
TabularVMG game_from_json(const Json& j);

Json linear_to_json(const LinearVMDP& model);
LinearVMDP linear_from_json(const Json& j);

Json set_to_json(const ConvexSet& set);
/// `path` prefixes the field names reported in errors.
ConvexSet set_from_json(const Json& j, const std::string& path = "set");

Json cost_to_json(const TabularVMDP& model, const std::vector<double>& cost);
std::vector<double> cost_from_json(const Json& j, const TabularVMDP& model,
                                   const std::string& path = "cost");

Json empirical_to_json(const EmpiricalModel& empirical);
EmpiricalModel empirical_from_json(const Json& j);

Json policy_to_json(const Policy& policy);
Json mixture_to_json(const MixturePolicy& mixture);

Json vector_to_json(const Eigen::VectorXd& v);

}  // namespace approach
