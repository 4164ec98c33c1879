#pragma once

#include <string>

#include "json.hpp"

#include "ergopress/markov.hpp"
#include "ergopress/sft.hpp"
#include "ergopress/variational.hpp"

namespace ergopress {

using Json = nlohmann::ordered_json;

// Tower description file:
//   {"x":{"alphabet":[...],"transitions":[[i,j],...]}, "y":{...}, "z":{...},
//    "pi":{"rule":{"sym":"sym",...}}, "phi":{...}, "potential":{"sym":v,...}}
// Full shifts may be written {"full": k}. Transition indices refer to the
// alphabet order; the potential defaults to zero where omitted.
Sft sft_from_json(const Json& j);
Tower tower_from_json(const Json& j);
Tower load_tower(const std::string& path);

Potential potential_from_json(const Json& j, const Sft& x);
Potential load_potential(const std::string& path, const Sft& x);

// Measure description: {"order":m,"kernel":[[...],...]} in lexicographic
// block order, or {"order":m,"maxent":true} for the Parry measure.
MarkovMeasure measure_from_json(const Json& j, const Sft& base);

OptimizerConfig config_from_json(const Json& j);
OptimizerConfig load_config(const std::string& path);

Json tower_to_json(const Tower& t, const Potential& f);

Json parse_file(const std::string& path);

} // namespace ergopress
