#pragma once

#include <string>

#include "dppsim/channel.hpp"
#include "dppsim/lp_oracle.hpp"
#include "dppsim/topology.hpp"

namespace dppsim {

// JSON fixtures so networks and oracle instances can be reused across runs.

std::string topology_to_json(const Topology& topology, const ChannelState& channel);
std::pair<Topology, ChannelState> topology_from_json(const std::string& text);

std::string schedule_lp_to_json(const ScheduleLP& lp);
ScheduleLP schedule_lp_from_json(const std::string& text);

}  // namespace dppsim
