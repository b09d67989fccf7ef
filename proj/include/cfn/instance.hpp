#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cfn/model.hpp"

namespace cfn {

inline constexpr std::string_view kFormatTag = "cfnkit/1";

// Syntax errors carry a 1-based line and column; semantic errors use line 0.
class InstanceError : public std::runtime_error {
 public:
  InstanceError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? what + " at line " + std::to_string(line) + ", column " + std::to_string(column)
                                    : what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Cfn parse_instance(std::string_view text);
Cfn load_instance(const std::string& path);

// Canonical JSON text of the network as built (shifts and pruning are not
// written).
std::string emit_instance(const Cfn& cfn);
void save_instance(const Cfn& cfn, const std::string& path);

}  // namespace cfn
