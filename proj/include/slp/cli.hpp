#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace slp::cli {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> cells;
};

/// Commands: solve, transform, oscillate, chebyshev, regularity, all.
/// Exit status: 0 all asserted properties pass, 1 a property failed,
/// 2 config/parse error, 3 numerical failure.
int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, const Overrides& overrides = {});

}  // namespace slp::cli
