#pragma once

#include <sstream>
#include <string>

namespace argstruct::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

/// Current log level. Initialized from the ARGSTRUCT_LOG environment
/// variable (debug|info|warn|error|off); defaults to warn.
Level level();
void set_level(Level lvl);

void write(Level lvl, const std::string& msg);

namespace detail {
template <typename... Args>
void emit(Level lvl, Args&&... args) {
    if (lvl < level()) return;
    std::ostringstream os;
    (os << ... << args);
    write(lvl, os.str());
}
}  // namespace detail

template <typename... Args>
void debug(Args&&... args) {
    detail::emit(Level::Debug, std::forward<Args>(args)...);
}
template <typename... Args>
void info(Args&&... args) {
    detail::emit(Level::Info, std::forward<Args>(args)...);
}
template <typename... Args>
void warn(Args&&... args) {
    detail::emit(Level::Warn, std::forward<Args>(args)...);
}
template <typename... Args>
void error(Args&&... args) {
    detail::emit(Level::Error, std::forward<Args>(args)...);
}

}  // namespace argstruct::log
