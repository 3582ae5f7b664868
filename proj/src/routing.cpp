#include "spraylab/routing.hpp"

#include <stdexcept>

namespace spraylab {

CopySplit split_copies(int copies, SprayMode mode) {
    if (copies < 2) throw std::logic_error("split_copies: custodian is in wait phase");
    if (mode == SprayMode::Binary) {
        int give = copies / 2;
        return {copies - give, give};
    }
    return {copies - 1, 1};
}

int copies_on_create(const RouterConfig& cfg, const std::string& node) {
    int copies = cfg.initial_copies;
    if (cfg.hq_at_creation && cfg.is_high_quality(node)) copies *= cfg.hq_multiplier;
    return copies;
}

int copies_on_receive(const RouterConfig& cfg, const std::string& node, int granted) {
    if (granted < 1) throw std::logic_error("copies_on_receive: granted < 1");
    int copies = granted;
    if (cfg.is_high_quality(node)) copies *= cfg.hq_multiplier;
    return copies;
}

} // namespace spraylab
