#ifndef RICSIM_XAPP_HPP
#define RICSIM_XAPP_HPP

#include <string>
#include <vector>

#include "ricsim/types.hpp"

namespace ricsim {

// Message types carried by the RIC message router.
enum class MsgType {
    QoePrediction,
    AnomalyAlert,
    TsControl,
    A1Policy,
    E2Report,
    RouteUpdate,
    E2SubReq,
};

const char* to_string(MsgType t);

// Permission manifest declared at registration; the defences compile
// least-privilege grants directly from it.
struct XAppDescriptor {
    XappId xapp_id;
    std::vector<std::string> read_namespaces;
    std::vector<std::string> write_namespaces;
    std::vector<MsgType> send_msg_types;
    std::vector<MsgType> recv_msg_types;
    bool e2_subscribe = false;
    bool e2_control = false;
    bool route_update = false;
    std::string zone = "default";
};

}  // namespace ricsim

#endif
