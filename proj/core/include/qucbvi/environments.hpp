#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "qucbvi/mdp.hpp"

namespace qucbvi {

inline constexpr std::size_t kDefaultHorizon = 20;

/// A named, fully resolved environment.
struct EnvironmentSpec {
    std::string name;
    std::map<std::string, std::string> parameters;
    std::size_t horizon;
    TabularMDP mdp;
};

/**
 * RiverSwim chain with n_states >= 2. Action 0 swims left, action 1 right.
 *
 *   left:  deterministic move toward state 0 (stay at state 0)
 *   right: interior   -> right 0.3, stay 0.6, left 0.1
 *          leftmost   -> right 0.3, stay 0.7
 *          rightmost  -> stay 0.7, left 0.3
 *   rewards: 0.005 for (leftmost, left), 1.0 for (rightmost, right), else 0.
 *
 * Starts at the leftmost state. Dynamics are replicated across all stages.
 */
TabularMDP make_riverswim(std::size_t n_states, std::size_t horizon);

/// Wall mask of the grid world, row-major, '#' for walls, 'S' start, 'G' goal.
std::string_view gridworld_layout() noexcept;

/**
 * 7x7 maze with 20 free cells (see gridworld_layout()) and 4 actions
 * (0 up, 1 down, 2 left, 3 right). A move goes in the intended direction with
 * probability 0.9 and in each perpendicular direction with probability 0.05;
 * blocked moves stay put. The goal is absorbing and every action taken there
 * earns reward 1. States are numbered over free cells in row-major order.
 */
TabularMDP make_gridworld(std::size_t horizon);

/// Serializes to the JSON environment file format.
std::string serialize_environment(const TabularMDP& mdp, std::string_view name);

void save_environment(const TabularMDP& mdp, std::string_view name,
                      const std::filesystem::path& path);

/**
 * Loads a JSON environment file. Two forms are accepted:
 *
 *   {"name", "S", "A", "H", "start", "rewards": [h][s][a], "transitions": [h][s][a][s']}
 *   {"preset": "riverswim6" | "riverswim12" | "gridworld", "H": optional}
 *
 * Schema errors and invariant failures throw std::invalid_argument; the
 * message names the file and the offending coordinates.
 */
TabularMDP load_environment(const std::filesystem::path& path);

/// Resolves riverswim6, riverswim12, gridworld or file:<path>. A preset uses
/// `horizon` (default 20); a file must agree with `horizon` when one is given.
EnvironmentSpec make_environment(std::string_view selector,
                                 std::optional<std::size_t> horizon = std::nullopt);

}  // namespace qucbvi
