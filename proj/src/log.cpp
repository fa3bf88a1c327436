#include "ids/log.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace ids::log {

namespace {

Level parse_env() {
    const char* v = std::getenv("IDS_LOG");
    if (v == nullptr) return Level::warn;
    if (std::strcmp(v, "error") == 0) return Level::error;
    if (std::strcmp(v, "warn") == 0) return Level::warn;
    if (std::strcmp(v, "info") == 0) return Level::info;
    if (std::strcmp(v, "debug") == 0) return Level::debug;
    return Level::warn;
}

std::atomic<Level> g_level{parse_env()};
std::mutex g_mutex;

const char* tag(Level lv) {
    switch (lv) {
        case Level::error: return "error";
        case Level::warn: return "warn";
        case Level::info: return "info";
        case Level::debug: return "debug";
    }
    return "?";
}

} // namespace

Level level() { return g_level.load(std::memory_order_relaxed); }
void set_level(Level lv) { g_level.store(lv, std::memory_order_relaxed); }

void write(Level lv, const std::string& msg) {
    if (static_cast<int>(lv) > static_cast<int>(level())) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[ids %s] %s\n", tag(lv), msg.c_str());
}

} // namespace ids::log
