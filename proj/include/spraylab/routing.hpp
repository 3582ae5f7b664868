#pragma once

#include <set>
#include <string>

namespace spraylab {

enum class SprayMode { Vanilla, Binary };

/// Replica budget a node holds for one message. copies == 1 means the node
/// is in the wait phase and only delivers directly to the destination.
struct CopyState {
    std::string message_id;
    int copies = 1;
};

struct RouterConfig {
    int initial_copies = 6;          // SprayAndWaitRouter.nrofCopies
    SprayMode mode = SprayMode::Binary;
    std::set<std::string> hq_set;    // rendered node names
    int hq_multiplier = 2;           // 1 disables the enhancement
    bool hq_at_creation = true;      // ablation flag: apply multiplier on create too

    bool is_high_quality(const std::string& node) const {
        return hq_multiplier > 1 && hq_set.count(node) > 0;
    }
};

struct CopySplit {
    int keep;
    int give;
};

/// Spray split for a custodian with `copies` > 1 meeting a fresh relay.
/// Binary hands out floor(copies/2) and keeps the ceil half; vanilla hands
/// out a single copy. keep + give == copies always.
CopySplit split_copies(int copies, SprayMode mode);

/// Budget assigned when `node` creates a message.
int copies_on_create(const RouterConfig& cfg, const std::string& node);

/// Budget assigned when `node` accepts `granted` copies from a custodian.
int copies_on_receive(const RouterConfig& cfg, const std::string& node, int granted);

} // namespace spraylab
