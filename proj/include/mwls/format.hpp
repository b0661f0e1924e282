#pragma once

#include <string>

namespace mwls {

/// Round-trip representation with 17 significant digits ("%.17g").
std::string fmt_double(double v);

}  // namespace mwls
