#include "ricsim/audit.hpp"

#include <sstream>

namespace ricsim {

std::string export_audit(const std::vector<AuditEntry>& trace) {
    std::ostringstream out;
    for (const AuditEntry& e : trace)
        out << e.tick << '\t' << e.caller << '\t' << e.op << '\t' << e.resource << '\t' << e.verdict
            << '\n';
    return out.str();
}

}  // namespace ricsim
