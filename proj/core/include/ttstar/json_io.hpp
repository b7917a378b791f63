#pragma once

#include <string>

#include "json.hpp"
#include "ttstar/datamaps.hpp"
#include "ttstar/tauconst.hpp"
#include "ttstar/todaflow.hpp"

namespace ttstar::io {

using Json = nlohmann::ordered_json;

Json to_json(const datamaps::AsymptoticData& a);
Json to_json(const datamaps::MonodromyData& m);
Json to_json(const todaflow::IntegratorStats& s);
Json to_json(const tauconst::ConstantReport& r);

datamaps::AsymptoticData asymptotic_from_json(const Json& j);
datamaps::MonodromyData monodromy_from_json(const Json& j);

// Like Json::dump but every floating-point number is written with %.17g.
std::string dump(const Json& j, int indent = 2);

}  // namespace ttstar::io
