#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace splitlab {

using WarningSink = std::function<void(const std::string&)>;

namespace detail {
inline std::mutex& warning_mutex() {
    static std::mutex m;
    return m;
}
inline WarningSink& warning_sink_storage() {
    static WarningSink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}
}  // namespace detail

/// Replace the process-wide warning sink; returns the previous one.
inline WarningSink set_warning_sink(WarningSink sink) {
    std::lock_guard<std::mutex> lock(detail::warning_mutex());
    return std::exchange(detail::warning_sink_storage(), std::move(sink));
}

inline void warn(const std::string& msg) {
    std::lock_guard<std::mutex> lock(detail::warning_mutex());
    if (detail::warning_sink_storage()) detail::warning_sink_storage()(msg);
}

}  // namespace splitlab
