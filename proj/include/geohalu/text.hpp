#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geohalu {

// Trim, collapse internal whitespace runs to one space. Case is preserved.
std::string collapse_whitespace(std::string_view s);

// Equality key for names and addresses: collapse_whitespace + ASCII case-fold.
std::string normalize_name(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::vector<std::string> split_whitespace(std::string_view s);

// Hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace geohalu
