#include "radchemo/version.hpp"

#ifndef RADCHEMO_VERSION
#define RADCHEMO_VERSION "0.0.0"
#endif

namespace radchemo {

std::string version_string()
{
    return RADCHEMO_VERSION;
}

}  // namespace radchemo
