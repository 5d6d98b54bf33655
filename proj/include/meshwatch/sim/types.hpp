#pragma once

#include <cstdint>

namespace meshwatch::sim {

using NodeId = std::uint32_t;
using Seconds = double;

} // namespace meshwatch::sim
