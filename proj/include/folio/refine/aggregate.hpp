// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "folio/core/document.hpp"
#include "folio/refine/continuation.hpp"

namespace folio::refine {

// Collapses continuation chains into single content units (text joined
// across pages, dehyphenated, typography-normalised) and wraps every other
// element as a singleton unit. Unit order follows (page, reading order);
// the original pages are carried along untouched.
DocumentRecord aggregate(std::vector<PageExtraction> pages, std::span<const MergeLink> links,
                         std::string title = {},
                         std::map<std::string, std::string> source_metadata = {});

}  // namespace folio::refine
