#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "covanet/common.hpp"
#include "covanet/sensor.hpp"

namespace covanet {

struct VanetConfig {
  double radius{200.0};  // m; cannot exceed the sensing range

  void validate() const {
    if (!(radius > 0.0 && radius <= kSensorRangeM)) {
      throw ConfigError("VANET radius must be in (0, 200]");
    }
  }
};

/// Per-pair role, stored from the owner's point of view: LeaderOf means the
/// owner leads that neighbor.
enum class Relation { Peer, LeaderOf, FollowerOf };

struct NeighborInfo {
  double distance{0.0};  // last-known relative distance, m
  Relation relation{Relation::Peer};
};

struct VanetMembership {
  VehicleId id{0};
  bool openedVanet{false};
  bool insideVanet{false};
  std::map<VehicleId, NeighborInfo> neighbors;
  std::set<VehicleId> localVehicleList;
};

enum class DiscoveryOutcome { None, Opened, Identified };

struct RoleAssignment {
  VehicleId leader{0};
  VehicleId follower{0};
};

struct RoleOutcome {
  std::vector<RoleAssignment> pairs;
  // A neighbor that already follows someone replies with its leader list.
  std::map<VehicleId, std::vector<VehicleId>> upstreamLeaders;
};

struct MaintenanceReport {
  int prunedEdges{0};
  int closedMemberships{0};
  std::vector<RoleAssignment> rolesAssigned;
};

struct TopologyEdge {
  VehicleId a{0};
  VehicleId b{0};
  double distance{0.0};
  Relation relationOfA{Relation::Peer};
};

/// Neighbor-graph lifecycle built from relative distances only. The public
/// interface never carries absolute coordinates: distances arrive through
/// the oracle, candidate peers through the visibility provider.
class VanetRegistry {
 public:
  using DistanceOracle =
      std::function<std::optional<double>(VehicleId, VehicleId)>;
  using VisibilityProvider = std::function<std::vector<VehicleId>(VehicleId)>;

  VanetRegistry(VanetConfig cfg, DiagnosticSink diag = {});

  void addParticipant(VehicleId id, double budgetUnits);
  bool isParticipant(VehicleId id) const;
  std::vector<VehicleId> participants() const;

  /// Clear all membership state and restore initial budgets (start of an
  /// episode).
  void reset();

  const VanetMembership& membership(VehicleId id) const;

  /// Refresh each participant's locally known vehicle list from the
  /// visibility provider (self plus visible participants).
  void refreshLocalLists(const VisibilityProvider& visible);

  /// Scan one vehicle's opponent readings. Anything inside the radius either
  /// opens a network (when the vehicle is in none) and identifies neighbors,
  /// or identifies neighbors directly.
  DiscoveryOutcome checkVanetRadius(VehicleId id, const SensorFrame& frame,
                                    const DistanceOracle& oracle);

  /// Symmetric neighbor adds over the scanner's local list for every pair
  /// closer than the radius. Returns whether any neighbor was identified.
  bool identifyNeighbors(VehicleId scanner, const DistanceOracle& oracle);

  /// Lifecycle. open requires the vehicle to be in no network; leave when
  /// not in any network is a no-op with a diagnostic.
  bool openVanet(VehicleId id);
  bool leaveVanet(VehicleId id);
  void closeVanet(VehicleId id);

  /// Resolve leader/follower roles for every still-unresolved pair of the
  /// newcomer: the higher budget leads, ties go to the lower id. Neighbors
  /// that already follow someone also reply with their leader list.
  RoleOutcome assignRoles(VehicleId newcomer);

  /// Re-validate all edges against the oracle (dropping any at or beyond the
  /// radius), resolve roles for pending newcomers, and close memberships
  /// left with fewer than two members.
  MaintenanceReport maintain(const DistanceOracle& oracle);

  /// Ids this vehicle follows / leads.
  std::vector<VehicleId> leadersOf(VehicleId id) const;
  std::vector<VehicleId> followersOf(VehicleId id) const;
  bool followsAnyone(VehicleId id) const;

  double budgetOf(VehicleId id) const;  // 0 when unknown
  void setBudget(VehicleId id, double units);
  void consumeBudget(VehicleId id, double units);

  /// Current edges (a < b) for topology dumps.
  std::vector<TopologyEdge> edges() const;

 private:
  VanetMembership& membershipMut(VehicleId id);
  void addEdge(VehicleId a, VehicleId b, double distance);
  void removeEdge(VehicleId a, VehicleId b);

  VanetConfig cfg_;
  DiagnosticSink diag_;
  std::map<VehicleId, VanetMembership> members_;
  std::map<VehicleId, double> budgets_;
  std::map<VehicleId, double> initialBudgets_;
  std::set<VehicleId> pendingNewcomers_;
};

}  // namespace covanet
