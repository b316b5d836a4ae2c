#pragma once

#include <stdexcept>
#include <string>

namespace mmvpr {

/// Thrown for every validation or format failure. The message always names
/// the offending field and, where applicable, the position inside it.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace mmvpr
