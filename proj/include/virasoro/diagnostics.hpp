#pragma once

#include <string_view>

namespace vir {

/// Writes "warning: <msg>" to std::clog unless warnings are disabled.
void warn(std::string_view msg);

/// Process-wide switch; tests and batch runs turn warnings off.
void set_warnings_enabled(bool enabled);

}  // namespace vir
