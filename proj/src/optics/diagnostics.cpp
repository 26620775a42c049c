#include <iostream>
#include <mutex>

#include "hdqfc/errors.hpp"

namespace hdqfc {
namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler() {
    static WarningHandler h = [](const std::string& message) { std::cerr << "warning: " << message << '\n'; };
    return h;
}

}  // namespace

void warn(const std::string& message) {
    std::lock_guard lock(handler_mutex());
    if (handler()) handler()(message);
}

WarningHandler set_warning_handler(WarningHandler h) {
    std::lock_guard lock(handler_mutex());
    auto previous = std::move(handler());
    handler() = std::move(h);
    return previous;
}

}  // namespace hdqfc
