#include "covanet/vanet.hpp"

#include <algorithm>
#include <string>

namespace covanet {

VanetRegistry::VanetRegistry(VanetConfig cfg, DiagnosticSink diag)
    : cfg_(cfg), diag_(diag ? std::move(diag) : stderrDiagnostics()) {
  cfg_.validate();
}

void VanetRegistry::addParticipant(VehicleId id, double budgetUnits) {
  if (members_.contains(id)) {
    throw ContractViolation("participant " + std::to_string(id) +
                            " already registered");
  }
  VanetMembership m;
  m.id = id;
  members_[id] = m;
  budgets_[id] = budgetUnits;
  initialBudgets_[id] = budgetUnits;
}

bool VanetRegistry::isParticipant(VehicleId id) const {
  return members_.contains(id);
}

std::vector<VehicleId> VanetRegistry::participants() const {
  std::vector<VehicleId> out;
  for (const auto& [id, m] : members_) out.push_back(id);
  return out;
}

void VanetRegistry::reset() {
  for (auto& [id, m] : members_) {
    m = VanetMembership{};
    m.id = id;
  }
  budgets_ = initialBudgets_;
  pendingNewcomers_.clear();
}

const VanetMembership& VanetRegistry::membership(VehicleId id) const {
  const auto it = members_.find(id);
  if (it == members_.end()) {
    throw ContractViolation("unknown participant " + std::to_string(id));
  }
  return it->second;
}

VanetMembership& VanetRegistry::membershipMut(VehicleId id) {
  return const_cast<VanetMembership&>(membership(id));
}

void VanetRegistry::refreshLocalLists(const VisibilityProvider& visible) {
  for (auto& [id, m] : members_) {
    m.localVehicleList.clear();
    m.localVehicleList.insert(id);
    for (VehicleId other : visible(id)) {
      if (isParticipant(other)) m.localVehicleList.insert(other);
    }
  }
}

DiscoveryOutcome VanetRegistry::checkVanetRadius(VehicleId id,
                                                 const SensorFrame& frame,
                                                 const DistanceOracle& oracle) {
  const VanetMembership& m = membership(id);
  if (frame.minOpponent() >= cfg_.radius) return DiscoveryOutcome::None;
  if (!m.openedVanet && !m.insideVanet) {
    openVanet(id);
    identifyNeighbors(id, oracle);
    return DiscoveryOutcome::Opened;
  }
  identifyNeighbors(id, oracle);
  return DiscoveryOutcome::Identified;
}

bool VanetRegistry::identifyNeighbors(VehicleId scanner,
                                      const DistanceOracle& oracle) {
  const VanetMembership& scan = membership(scanner);
  const std::vector<VehicleId> list(scan.localVehicleList.begin(),
                                    scan.localVehicleList.end());
  bool identified = false;
  for (VehicleId x : list) {
    for (VehicleId a : list) {
      if (x == a) continue;
      if (membership(a).neighbors.contains(x)) continue;
      const auto d = oracle(a, x);
      if (d && *d < cfg_.radius) {
        addEdge(a, x, *d);
        identified = true;
      }
    }
  }
  return identified;
}

void VanetRegistry::addEdge(VehicleId a, VehicleId b, double distance) {
  membershipMut(a).neighbors[b] = {distance, Relation::Peer};
  membershipMut(b).neighbors[a] = {distance, Relation::Peer};
  membershipMut(a).insideVanet = true;
  membershipMut(b).insideVanet = true;
  pendingNewcomers_.insert(a);
  pendingNewcomers_.insert(b);
}

void VanetRegistry::removeEdge(VehicleId a, VehicleId b) {
  membershipMut(a).neighbors.erase(b);
  membershipMut(b).neighbors.erase(a);
}

bool VanetRegistry::openVanet(VehicleId id) {
  VanetMembership& m = membershipMut(id);
  if (m.openedVanet || m.insideVanet) {
    diag_("openVanet: vehicle " + std::to_string(id) +
          " is already in a network; ignored");
    return false;
  }
  m.openedVanet = true;
  return true;
}

bool VanetRegistry::leaveVanet(VehicleId id) {
  VanetMembership& m = membershipMut(id);
  if (!m.openedVanet && !m.insideVanet && m.neighbors.empty()) {
    diag_("leaveVanet: vehicle " + std::to_string(id) +
          " is not in any network; ignored");
    return false;
  }
  const std::vector<VehicleId> peers = [&] {
    std::vector<VehicleId> out;
    for (const auto& [nb, info] : m.neighbors) out.push_back(nb);
    return out;
  }();
  for (VehicleId nb : peers) {
    removeEdge(id, nb);
    // a departure that leaves a single member closes that network
    if (membership(nb).neighbors.empty()) closeVanet(nb);
  }
  m.neighbors.clear();
  m.openedVanet = false;
  m.insideVanet = false;
  return true;
}

void VanetRegistry::closeVanet(VehicleId id) {
  VanetMembership& m = membershipMut(id);
  m.openedVanet = false;
  m.insideVanet = false;
  m.neighbors.clear();
}

RoleOutcome VanetRegistry::assignRoles(VehicleId newcomer) {
  RoleOutcome out;
  VanetMembership& m = membershipMut(newcomer);
  for (auto& [nb, info] : m.neighbors) {
    if (info.relation != Relation::Peer) continue;
    const auto nbLeaders = leadersOf(nb);
    const double own = budgetOf(newcomer);
    const double theirs = budgetOf(nb);
    VehicleId leader;
    if (own != theirs) {
      leader = own > theirs ? newcomer : nb;
    } else {
      leader = std::min(newcomer, nb);
    }
    const VehicleId follower = leader == newcomer ? nb : newcomer;
    info.relation = leader == newcomer ? Relation::LeaderOf : Relation::FollowerOf;
    membershipMut(nb).neighbors[newcomer].relation =
        leader == nb ? Relation::LeaderOf : Relation::FollowerOf;
    out.pairs.push_back({leader, follower});
    if (!nbLeaders.empty()) out.upstreamLeaders[nb] = nbLeaders;
  }
  return out;
}

MaintenanceReport VanetRegistry::maintain(const DistanceOracle& oracle) {
  MaintenanceReport report;

  // re-validate every edge; drop those at or beyond the radius
  std::vector<std::pair<VehicleId, VehicleId>> stale;
  for (const auto& [id, m] : members_) {
    for (const auto& [nb, info] : m.neighbors) {
      if (id >= nb) continue;
      const auto d = oracle(id, nb);
      if (!d || *d >= cfg_.radius) stale.push_back({id, nb});
    }
  }
  for (const auto& [a, b] : stale) {
    removeEdge(a, b);
    ++report.prunedEdges;
  }
  // refresh stored distances on surviving edges
  for (auto& [id, m] : members_) {
    for (auto& [nb, info] : m.neighbors) {
      if (const auto d = oracle(id, nb)) info.distance = *d;
    }
  }

  for (VehicleId id : pendingNewcomers_) {
    if (!members_.contains(id)) continue;
    const RoleOutcome roles = assignRoles(id);
    report.rolesAssigned.insert(report.rolesAssigned.end(), roles.pairs.begin(),
                                roles.pairs.end());
  }
  pendingNewcomers_.clear();

  for (auto& [id, m] : members_) {
    if (m.neighbors.empty() && (m.insideVanet || m.openedVanet)) {
      closeVanet(id);
      ++report.closedMemberships;
    }
  }
  return report;
}

std::vector<VehicleId> VanetRegistry::leadersOf(VehicleId id) const {
  std::vector<VehicleId> out;
  for (const auto& [nb, info] : membership(id).neighbors) {
    if (info.relation == Relation::FollowerOf) out.push_back(nb);
  }
  return out;
}

std::vector<VehicleId> VanetRegistry::followersOf(VehicleId id) const {
  std::vector<VehicleId> out;
  for (const auto& [nb, info] : membership(id).neighbors) {
    if (info.relation == Relation::LeaderOf) out.push_back(nb);
  }
  return out;
}

bool VanetRegistry::followsAnyone(VehicleId id) const {
  return !leadersOf(id).empty();
}

double VanetRegistry::budgetOf(VehicleId id) const {
  const auto it = budgets_.find(id);
  return it == budgets_.end() ? 0.0 : it->second;
}

void VanetRegistry::setBudget(VehicleId id, double units) {
  budgets_[id] = units;
}

void VanetRegistry::consumeBudget(VehicleId id, double units) {
  auto it = budgets_.find(id);
  if (it == budgets_.end()) return;
  it->second = std::max(0.0, it->second - units);
}

std::vector<TopologyEdge> VanetRegistry::edges() const {
  std::vector<TopologyEdge> out;
  for (const auto& [id, m] : members_) {
    for (const auto& [nb, info] : m.neighbors) {
      if (id < nb) out.push_back({id, nb, info.distance, info.relation});
    }
  }
  return out;
}

}  // namespace covanet
