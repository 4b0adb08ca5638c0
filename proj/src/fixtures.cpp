#include "dppsim/fixtures.hpp"

#include <json.hpp>

namespace dppsim {

using nlohmann::json;

std::string topology_to_json(const Topology& topology, const ChannelState& channel) {
  json doc;
  doc["nodes"] = topology.n;
  doc["radius"] = topology.radius;
  json positions = json::array();
  for (int i = 0; i < topology.n; ++i)
    positions.push_back({topology.positions(i, 0), topology.positions(i, 1)});
  doc["positions"] = positions;
  json links = json::array();
  for (const auto& [i, j] : topology.links) links.push_back({i, j});
  doc["links"] = links;
  doc["commodities"] = topology.commodities;
  json gains = json::array();
  for (const auto& [i, j] : topology.links) gains.push_back(channel.gains(i, j));
  doc["gains"] = gains;
  doc["noise"] = channel.noise;
  return doc.dump(2);
}

std::pair<Topology, ChannelState> topology_from_json(const std::string& text) {
  const json doc = json::parse(text);
  Topology topo;
  topo.n = doc.at("nodes").get<int>();
  topo.radius = doc.at("radius").get<double>();
  topo.positions.resize(topo.n, 2);
  const json& positions = doc.at("positions");
  for (int i = 0; i < topo.n; ++i) {
    topo.positions(i, 0) = positions.at(i).at(0).get<double>();
    topo.positions(i, 1) = positions.at(i).at(1).get<double>();
  }
  topo.rebuild_links();
  topo.commodities = doc.at("commodities").get<std::vector<int>>();

  ChannelState ch;
  ch.noise = doc.at("noise").get<double>();
  ch.gains = Matrix::Zero(topo.n, topo.n);
  const json& links = doc.at("links");
  const json& gains = doc.at("gains");
  for (std::size_t k = 0; k < links.size(); ++k)
    ch.gains(links.at(k).at(0).get<int>(), links.at(k).at(1).get<int>()) = gains.at(k).get<double>();
  return {std::move(topo), std::move(ch)};
}

std::string schedule_lp_to_json(const ScheduleLP& lp) {
  json doc;
  json weights = json::array();
  for (int r = 0; r < lp.weights.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < lp.weights.cols(); ++c) row.push_back(lp.weights(r, c));
    weights.push_back(row);
  }
  doc["weights"] = weights;
  doc["capacities"] = std::vector<double>(lp.capacities.data(), lp.capacities.data() + lp.capacities.size());
  doc["queues"] = std::vector<double>(lp.queues.data(), lp.queues.data() + lp.queues.size());
  return doc.dump(2);
}

ScheduleLP schedule_lp_from_json(const std::string& text) {
  const json doc = json::parse(text);
  ScheduleLP lp;
  const auto capacities = doc.at("capacities").get<std::vector<double>>();
  const auto queues = doc.at("queues").get<std::vector<double>>();
  lp.capacities = Eigen::Map<const Vector>(capacities.data(), static_cast<Eigen::Index>(capacities.size()));
  lp.queues = Eigen::Map<const Vector>(queues.data(), static_cast<Eigen::Index>(queues.size()));
  const json& weights = doc.at("weights");
  lp.weights.resize(static_cast<Eigen::Index>(capacities.size()), static_cast<Eigen::Index>(queues.size()));
  for (int r = 0; r < lp.weights.rows(); ++r)
    for (int c = 0; c < lp.weights.cols(); ++c)
      lp.weights(r, c) = weights.at(r).at(c).get<double>();
  return lp;
}

}  // namespace dppsim
