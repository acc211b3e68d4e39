#ifndef RICSIM_AUDIT_HPP
#define RICSIM_AUDIT_HPP

#include <string>
#include <vector>

#include "ricsim/types.hpp"

namespace ricsim {

struct AuditEntry {
    Tick tick = 0;
    XappId caller;
    std::string op;        // sdl_read, sdl_write, sdl_scan, rmr_send, route_update, ...
    std::string resource;  // namespace, msg type, node id, ...
    std::string verdict;   // allow, deny, drop:<reason>, ...
};

// Newline-delimited export: tick<TAB>caller<TAB>op<TAB>resource<TAB>verdict
std::string export_audit(const std::vector<AuditEntry>& trace);

}  // namespace ricsim

#endif
