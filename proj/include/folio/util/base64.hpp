// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace folio::util {

std::string base64_encode(std::span<const std::uint8_t> data);
std::string base64_encode(const std::string& data);

}  // namespace folio::util
