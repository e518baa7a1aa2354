#pragma once

#include <map>
#include <string>
#include <vector>

#include "dftsafe/dft.hpp"

namespace dftsafe {

/// Function-block template selection and overrides. The default template is an
/// OR over a hardware-fault dummy, an internal-fault BE, and a gate over the
/// input-fault dummies (OR, or VOT(inputVote) for voter blocks). The switch
/// template adds a PAND(switching, first input) branch and an AND over all
/// inputs instead of the plain input gate.
struct BlockSpec {
    std::string name;
    std::string blockTemplate = "default";  // default | voter | switch
    std::uint32_t inputVote = 1;
    RateExpr internRate;     // literal zero -> dummy internal-fault BE
    RateExpr switchingRate;  // switch template only
};

struct Channel {
    std::string from;
    std::string to;

    std::string key() const { return from + "->" + to; }
};

struct PathSpec {
    std::vector<std::string> blocks;
};

struct TaskSpec {
    std::string name;
    bool standby = false;  // false: AND over paths; true: SPARE with ordered paths
    std::vector<PathSpec> paths;
};

struct BusSpec {
    std::string name;
    std::vector<std::string> connects;  // platforms pairwise connected by this bus

    bool connectsPair(std::string const& a, std::string const& b) const;
};

/// Hardware fault-tree template: either a single permanent-failure BE (simple
/// form) or the coverage pattern OR(transient, permanent) where each class is
/// OR(uncovered, AND(safety mechanism, covered)) guarded by SEQ(sm, covered).
struct HardwareTemplate {
    bool simple = false;
    RateExpr simpleRate;
    RateExpr transientRate;
    RateExpr permanentRate;
    RateExpr safetyMechanismRate;
    double transientCoverage = 0.0;
    double permanentCoverage = 0.0;
    /// Scaling of rates while the hosted blocks are inactive. Simple platforms
    /// default to 1 (sensors keep ageing); coverage platforms default to 0 so
    /// that cold-standby platforms only start failing once activated.
    double dormancy = 1.0;
};

struct Scenario {
    std::map<std::string, double> parameters;
    std::vector<BlockSpec> blocks;
    std::vector<Channel> channels;
    std::vector<TaskSpec> tasks;
    std::vector<std::string> platforms;
    std::vector<BusSpec> buses;
    std::map<std::string, HardwareTemplate> hardwareTemplates;
    std::map<std::string, std::string> platformTemplate;  // platform -> template key; absent: infallible
    std::map<std::string, std::string> busTemplate;       // bus name -> template key; absent: infallible
    std::map<std::string, std::string> blockAssignment;   // block -> platform
    std::map<std::string, std::string> channelAssignment; // channel key -> bus name (optional, else derived)
    std::vector<std::pair<std::string, std::string>> labels;  // name, predicate over generated element names
};

/// Handles into one block's fault-tree fragment.
struct BlockFaultTree {
    ElementIndex root = kNoElement;
    std::map<std::string, ElementIndex> inputFaults;  // source block -> dummy input-fault BE
    ElementIndex hardwareFault = kNoElement;          // dummy BE the platform FDEP points at
};

/// Instantiates one block fault tree into `dft`; `inputSources` lists the source
/// blocks of incoming channels in channel-declaration order.
BlockFaultTree buildBlockFaultTree(Dft& dft, BlockSpec const& block, std::vector<std::string> const& inputSources);

/// Adds one FDEP per channel: trigger = source-block failure, dependent event =
/// the matching input-fault BE of the target block.
void connectBlocks(Dft& dft, std::vector<Channel> const& channels,
                   std::map<std::string, BlockFaultTree> const& blockFTs);

/// Adds the task gates and the top-level OR; returns the top element.
ElementIndex buildSystemLayer(Dft& dft, std::vector<TaskSpec> const& tasks,
                              std::map<std::string, BlockFaultTree> const& blockFTs);

/// Instantiates a hardware fault tree named after `id`; returns its root.
ElementIndex instantiateHardwareFt(Dft& dft, HardwareTemplate const& hardwareTemplate, std::string const& id);

/// Maps every channel to a bus: same-platform channels to the platform's internal
/// bus ("intern:<platform>"), cross-platform channels to the unique connecting bus.
/// Explicit entries of scenario.channelAssignment win.
std::map<std::string, std::string> deriveChannelAssignment(Scenario const& scenario);

/// Instantiates hardware fault trees (dummy ones for infallible platforms and
/// buses) and wires them in: per block one FDEP (platform FT top -> hardware-fault
/// dummy) and one ADEP (block failure element -> platform FT top); per channel one
/// FDEP (bus FT top -> input-fault dummy).
void assembleComplete(Dft& dft, Scenario const& scenario, std::map<std::string, BlockFaultTree> const& blockFTs,
                      std::map<std::string, std::string> const& channelAssignment);

/// Full pipeline: block FTs, channel FDEPs, system layer, hardware assembly,
/// labels, and validation.
Dft synthesizeScenario(Scenario const& scenario);

}  // namespace dftsafe
