#include "conn.hpp"

namespace net {

Connection::Connection(int fd, std::size_t limit) : fd_(fd), limit_(limit) {}

bool Connection::send_packet(const Packet &p) {
    if (!packet_validate(&p)) {
        return false;
    }
    if (pending_ + p.body_len > limit_) {
        return false;
    }
    pending_ += p.body_len;
    return true;
}

void Connection::reset() {
    while (pending_ > 0) {
        pending_ -= 1;
    }
}

}  // namespace net
