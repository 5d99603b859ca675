// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "geosquad/core/types.hpp"

namespace geosquad {

// Canonical form of a date range string: "YYYY-MM..YYYY-MM", a single
// "YYYY-MM", or a bare "YYYY". Accepts "..", " to ", "/" separators and
// unpadded months. Returns nullopt for anything unparseable.
std::optional<std::string> canonical_date_range(std::string_view text);

// Parses a canonical or loose range into its endpoints.
std::optional<DateRange> parse_date_range(std::string_view text);

// Key-sorted copy with lowercased, trimmed strings, numeric strings turned
// into numbers, and date ranges canonicalized. A bare year on a monthly
// product is expanded to its twelve months.
Json normalize_args(const Json& args);

// Equality of two normalized argument objects; numbers compare with
// relative tolerance 1e-6.
bool args_equal(const Json& a, const Json& b);

}  // namespace geosquad
