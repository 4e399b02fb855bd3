// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

namespace folio {

// Insertion-ordered JSON keeps serialised artifacts stable and lets schema
// property order survive a parse/serialise round trip.
using json = nlohmann::ordered_json;

}  // namespace folio
