#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netdesign/ingest.hpp"
#include "netdesign/matrix.hpp"

namespace netdesign {

enum class Topology : int { FC = 0, SAHS, MAHS, RAHS, DSAHS, DMAHS, DRAHS };

constexpr int kTopologyCount = 7;
const char* topology_name(Topology t);
Topology topology_from_name(const std::string& name);

// D-prefixed classes (and FC) may serve selected OD pairs directly.
bool topology_allows_direct(Topology t);
// RAHS/DRAHS carry the allocation bound R.
bool topology_has_allocation_bound(Topology t);

struct Design {
    Topology topology = Topology::FC;
    std::vector<int> hubs;  // node indices, ordered as in candidate_hubs
    int allocation_bound = 0;            // R, RAHS/DRAHS only
    double capacity_multiplier = 1.0;
    double direct_fraction = 0.0;        // grid level label (D-variants, FC)
    std::vector<std::pair<int, int>> direct_links;  // ordered OD pairs, (i,j) sorted
    std::vector<double> hub_capacity;    // e_k, parcels/hour
    std::vector<double> congestion_gamma;
    std::string label;

    // Derived routing tables filled by finalize_design:
    std::vector<int> hub_candidate_index;     // position of each hub in candidate_hubs
    std::vector<std::vector<int>> allocation; // per node, admissible hub positions
    Matrix<char> direct_mask;                 // n x n, 1 where a direct link is open
};

struct DesignGrid {
    // Hub-subset enumeration rule: subset sizes for the single-allocation
    // family (SAHS/DSAHS) and for the multi/R-allocation family
    // (MAHS/RAHS and their D-variants); sizes clamp to the candidate count.
    int single_min_size = 1;
    int single_max_size = 64;
    int multi_min_size = 1;
    int multi_max_size = 64;
    std::vector<double> capacity_levels;
    std::vector<double> direct_levels;  // level labels (dirq)
    // Optional explicit label -> pair-count mapping; labels without an
    // entry resolve to ceil(label * P).
    std::map<double, int> direct_level_counts;
    std::vector<int> allocation_bounds;  // R values
    double reference_sorting_window = 8.0;  // d_ref hours, sizes e_k
    double congestion_gamma = 0.05;

    void validate() const;
    static DesignGrid sim_defaults();
    static DesignGrid cab_defaults();
};

// The ceil(fraction * P) ordered OD pairs with largest demand_rank,
// P = n(n-1); rank ties broken by (origin, destination).
std::vector<std::pair<int, int>> direct_link_set(const NetworkData& network,
                                                 const DMatrix& demand_rank,
                                                 double fraction);

// Top `count` pairs under the same ordering.
std::vector<std::pair<int, int>> top_demand_links(const NetworkData& network,
                                                  const DMatrix& demand_rank,
                                                  std::size_t count);

// Fill hub capacities and the derived routing tables (allocation lists,
// direct-link mask). Must be called on hand-built designs before
// evaluation; enumerate_designs does it for every design it emits.
void finalize_design(Design& design, const NetworkData& network,
                     double total_mean_demand, double reference_sorting_window = 8.0,
                     double congestion_gamma = 0.05);

// Cartesian candidate enumeration for one topology class.
std::vector<Design> enumerate_designs(const NetworkData& network, const DesignGrid& grid,
                                      Topology topology, const DMatrix& demand_rank,
                                      double total_mean_demand);

// Full invariant check; returns all violations instead of aborting.
std::vector<std::string> validate_design(const Design& design, const NetworkData& network);

std::string design_label(Topology topology, const std::vector<int>& hubs,
                         double capacity, double direct_level, int allocation_bound);

}  // namespace netdesign
