#pragma once

#include <string>

namespace radchemo {

std::string version_string();

}  // namespace radchemo
