// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "geosquad/agents/prompts.hpp"
#include "geosquad/registry/tool_registry.hpp"
#include "geosquad/sandbox/domain_tools.hpp"
#include "geosquad/sandbox/sandbox.hpp"
#include "geosquad/taskgen/taskgen.hpp"
#include "geosquad/taskgen/templates.hpp"

namespace geosquad::testing {

// Built once per test binary; both are read-only.
inline const Sandbox& shared_sandbox() {
    static const Sandbox s = Sandbox::generate(SandboxConfig{});
    return s;
}

inline const ToolRegistry& shared_registry() {
    static const ToolRegistry r = build_registry(canonical_domains(), 521);
    return r;
}

inline const TaskDataset& shared_dataset() {
    static const TaskDataset d = generate_dataset(default_templates(), shared_sandbox(), 42, kDefaultPerAgent);
    return d;
}

// Fresh directory under the system temp dir, removed by the destructor.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("geosquad-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace geosquad::testing
