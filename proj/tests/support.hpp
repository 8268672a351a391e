#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "revguard/gateway.hpp"
#include "revguard/resources.hpp"

namespace revguard::testing {

inline const Resources& shared_resources() {
    static const Resources r = load_resources(default_data_dir());
    return r;
}

/// A fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("revguard-test-" + name + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline GatewayConfig mock_gateway_config() {
    GatewayConfig c;
    c.prompts_dir = default_data_dir() / "prompts";
    return c;
}


}  // namespace revguard::testing
