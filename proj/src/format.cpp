#include "mwls/format.hpp"

#include <cstdio>

namespace mwls {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace mwls
