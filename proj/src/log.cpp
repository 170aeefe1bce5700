#include "argstruct/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

#include "argstruct/text.hpp"

namespace argstruct::log {

namespace {

Level parse_level(const char* s) {
    if (!s) return Level::Warn;
    std::string v = text::lowercase(s);
    if (v == "debug") return Level::Debug;
    if (v == "info") return Level::Info;
    if (v == "warn" || v == "warning") return Level::Warn;
    if (v == "error") return Level::Error;
    if (v == "off" || v == "none") return Level::Off;
    return Level::Warn;
}

Level& level_ref() {
    static Level lvl = parse_level(std::getenv("ARGSTRUCT_LOG"));
    return lvl;
}

const char* level_name(Level l) {
    switch (l) {
        case Level::Debug: return "debug";
        case Level::Info: return "info";
        case Level::Warn: return "warn";
        case Level::Error: return "error";
        case Level::Off: return "off";
    }
    return "?";
}

}  // namespace

Level level() { return level_ref(); }

void set_level(Level l) { level_ref() = l; }

void write(Level l, const std::string& msg) {
    if (l < level_ref() || level_ref() == Level::Off) return;
    // One fully formed line per call, even when essays are processed in
    // parallel.
    static std::mutex mu;
    const std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[" << level_name(l) << "] " << msg << "\n";
}

}  // namespace argstruct::log
