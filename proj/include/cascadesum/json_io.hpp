#pragma once

#include <json.hpp>

#include <string>

namespace cascadesum {

using Json = nlohmann::json;

/// Compact UTF-8 JSON with lexicographically sorted keys (nlohmann::json
/// stores objects in a std::map, so key order is already canonical).
inline std::string canonical_dump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace cascadesum
