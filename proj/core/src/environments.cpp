#include "qucbvi/environments.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace qucbvi {

namespace {

using nlohmann::json;

constexpr std::size_t kGridSide = 7;

// clang-format off
constexpr std::string_view kGridLayout =
    "#######"
    "#S..#.#"
    "#.#...#"
    "#.#...#"
    "#...#.#"
    "##...G#"
    "#######";
// clang-format on

TabularMDP replicate_stage(std::size_t S, std::size_t A, std::size_t H, std::size_t start,
                           const std::vector<double>& stage_transitions,
                           const std::vector<double>& stage_rewards) {
    std::vector<double> transitions;
    std::vector<double> rewards;
    transitions.reserve(H * stage_transitions.size());
    rewards.reserve(H * stage_rewards.size());
    for (std::size_t h = 0; h < H; ++h) {
        transitions.insert(transitions.end(), stage_transitions.begin(), stage_transitions.end());
        rewards.insert(rewards.end(), stage_rewards.begin(), stage_rewards.end());
    }
    return TabularMDP(S, A, H, start, std::move(transitions), std::move(rewards));
}

[[noreturn]] void schema_error(const std::filesystem::path& path, const std::string& what) {
    throw std::invalid_argument(path.string() + ": " + what);
}

const json& require(const json& doc, const char* key, const std::filesystem::path& path) {
    auto it = doc.find(key);
    if (it == doc.end()) schema_error(path, std::string("missing field '") + key + "'");
    return *it;
}

std::size_t require_size(const json& doc, const char* key, const std::filesystem::path& path) {
    const json& v = require(doc, key, path);
    if (!v.is_number_unsigned()) {
        schema_error(path, std::string("field '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

void require_array(const json& v, std::size_t size, const std::string& where,
                   const std::filesystem::path& path) {
    if (!v.is_array() || v.size() != size) {
        schema_error(path, where + " must be an array of " + std::to_string(size) + " entries");
    }
}

double require_number(const json& v, const std::string& where,
                      const std::filesystem::path& path) {
    if (!v.is_number()) schema_error(path, where + " must be a number");
    return v.get<double>();
}

std::string index_path(const char* field, std::initializer_list<std::size_t> idx) {
    std::string out = field;
    for (auto i : idx) out += "[" + std::to_string(i) + "]";
    return out;
}

TabularMDP make_preset(std::string_view name, std::size_t horizon) {
    if (name == "riverswim6") return make_riverswim(6, horizon);
    if (name == "riverswim12") return make_riverswim(12, horizon);
    if (name == "gridworld") return make_gridworld(horizon);
    throw std::invalid_argument("unknown environment preset '" + std::string(name) + "'");
}

}  // namespace

TabularMDP make_riverswim(std::size_t n_states, std::size_t horizon) {
    if (n_states < 2) throw std::invalid_argument("RiverSwim needs at least 2 states");
    const std::size_t S = n_states;
    constexpr std::size_t A = 2;
    constexpr std::size_t kLeft = 0;
    constexpr std::size_t kRight = 1;
    const std::size_t last = S - 1;

    std::vector<double> P(S * A * S, 0.0);
    std::vector<double> r(S * A, 0.0);
    auto p = [&](std::size_t s, std::size_t a, std::size_t next) -> double& {
        return P[(s * A + a) * S + next];
    };

    for (std::size_t s = 0; s < S; ++s) {
        p(s, kLeft, s == 0 ? 0 : s - 1) = 1.0;
        if (s == 0) {
            p(s, kRight, 1) = 0.3;
            p(s, kRight, 0) = 0.7;
        } else if (s == last) {
            p(s, kRight, last) = 0.7;
            p(s, kRight, last - 1) = 0.3;
        } else {
            p(s, kRight, s + 1) = 0.3;
            p(s, kRight, s) = 0.6;
            p(s, kRight, s - 1) = 0.1;
        }
    }
    r[0 * A + kLeft] = 0.005;
    r[last * A + kRight] = 1.0;

    return replicate_stage(S, A, horizon, 0, P, r);
}

std::string_view gridworld_layout() noexcept { return kGridLayout; }

TabularMDP make_gridworld(std::size_t horizon) {
    constexpr std::size_t A = 4;
    constexpr std::array<int, A> kRowStep{-1, 1, 0, 0};
    constexpr std::array<int, A> kColStep{0, 0, -1, 1};
    // Perpendicular directions for up, down, left, right.
    constexpr std::array<std::array<std::size_t, 2>, A> kPerpendicular{
        {{2, 3}, {2, 3}, {0, 1}, {0, 1}}};

    std::vector<int> state_of(kGridSide * kGridSide, -1);
    std::size_t S = 0;
    std::size_t start = 0;
    std::size_t goal = 0;
    for (std::size_t cell = 0; cell < kGridLayout.size(); ++cell) {
        const char c = kGridLayout[cell];
        if (c == '#') continue;
        if (c == 'S') start = S;
        if (c == 'G') goal = S;
        state_of[cell] = static_cast<int>(S++);
    }

    auto move = [&](std::size_t cell, std::size_t dir) -> std::size_t {
        const int row = static_cast<int>(cell / kGridSide) + kRowStep[dir];
        const int col = static_cast<int>(cell % kGridSide) + kColStep[dir];
        if (row < 0 || col < 0 || row >= static_cast<int>(kGridSide) ||
            col >= static_cast<int>(kGridSide)) {
            return static_cast<std::size_t>(state_of[cell]);
        }
        const int target = state_of[static_cast<std::size_t>(row) * kGridSide +
                                    static_cast<std::size_t>(col)];
        return target < 0 ? static_cast<std::size_t>(state_of[cell])
                          : static_cast<std::size_t>(target);
    };

    std::vector<double> P(S * A * S, 0.0);
    std::vector<double> r(S * A, 0.0);
    for (std::size_t cell = 0; cell < kGridLayout.size(); ++cell) {
        if (state_of[cell] < 0) continue;
        const auto s = static_cast<std::size_t>(state_of[cell]);
        for (std::size_t a = 0; a < A; ++a) {
            double* row = P.data() + (s * A + a) * S;
            if (s == goal) {
                row[goal] = 1.0;
                r[s * A + a] = 1.0;
                continue;
            }
            row[move(cell, a)] += 0.9;
            row[move(cell, kPerpendicular[a][0])] += 0.05;
            row[move(cell, kPerpendicular[a][1])] += 0.05;
        }
    }
    return replicate_stage(S, A, horizon, start, P, r);
}

std::string serialize_environment(const TabularMDP& mdp, std::string_view name) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    const std::size_t H = mdp.horizon();

    json rewards = json::array();
    json transitions = json::array();
    for (std::size_t h = 0; h < H; ++h) {
        json rh = json::array();
        json th = json::array();
        for (std::size_t s = 0; s < S; ++s) {
            json rs = json::array();
            json ts = json::array();
            for (std::size_t a = 0; a < A; ++a) {
                rs.push_back(mdp.reward(h, s, a));
                const auto row = mdp.transition(h, s, a);
                ts.push_back(json(std::vector<double>(row.begin(), row.end())));
            }
            rh.push_back(std::move(rs));
            th.push_back(std::move(ts));
        }
        rewards.push_back(std::move(rh));
        transitions.push_back(std::move(th));
    }

    json doc = {{"name", std::string(name)},
                {"S", S},
                {"A", A},
                {"H", H},
                {"start", mdp.start_state()},
                {"rewards", std::move(rewards)},
                {"transitions", std::move(transitions)}};
    return doc.dump(1) + "\n";
}

void save_environment(const TabularMDP& mdp, std::string_view name,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << serialize_environment(mdp, name);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

TabularMDP load_environment(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open environment file " + path.string());

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        schema_error(path, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_error(path, "top level must be a JSON object");

    if (auto preset = doc.find("preset"); preset != doc.end()) {
        if (!preset->is_string()) schema_error(path, "field 'preset' must be a string");
        const std::size_t H = doc.contains("H") ? require_size(doc, "H", path) : kDefaultHorizon;
        try {
            return make_preset(preset->get<std::string>(), H);
        } catch (const std::invalid_argument& e) {
            schema_error(path, e.what());
        }
    }

    const std::size_t S = require_size(doc, "S", path);
    const std::size_t A = require_size(doc, "A", path);
    const std::size_t H = require_size(doc, "H", path);
    const std::size_t start = require_size(doc, "start", path);
    const json& rewards = require(doc, "rewards", path);
    const json& transitions = require(doc, "transitions", path);

    std::vector<double> r;
    std::vector<double> P;
    r.reserve(H * S * A);
    P.reserve(H * S * A * S);

    require_array(rewards, H, "rewards", path);
    require_array(transitions, H, "transitions", path);
    for (std::size_t h = 0; h < H; ++h) {
        require_array(rewards[h], S, index_path("rewards", {h}), path);
        require_array(transitions[h], S, index_path("transitions", {h}), path);
        for (std::size_t s = 0; s < S; ++s) {
            require_array(rewards[h][s], A, index_path("rewards", {h, s}), path);
            require_array(transitions[h][s], A, index_path("transitions", {h, s}), path);
            for (std::size_t a = 0; a < A; ++a) {
                r.push_back(
                    require_number(rewards[h][s][a], index_path("rewards", {h, s, a}), path));
                const json& row = transitions[h][s][a];
                require_array(row, S, index_path("transitions", {h, s, a}), path);
                for (std::size_t n = 0; n < S; ++n) {
                    P.push_back(
                        require_number(row[n], index_path("transitions", {h, s, a, n}), path));
                }
            }
        }
    }

    try {
        return TabularMDP(S, A, H, start, std::move(P), std::move(r));
    } catch (const std::invalid_argument& e) {
        schema_error(path, e.what());
    }
}

EnvironmentSpec make_environment(std::string_view selector, std::optional<std::size_t> horizon) {
    constexpr std::string_view kFilePrefix = "file:";
    if (selector.starts_with(kFilePrefix)) {
        const std::filesystem::path path(std::string(selector.substr(kFilePrefix.size())));
        TabularMDP mdp = load_environment(path);
        if (horizon && *horizon != mdp.horizon()) {
            throw std::invalid_argument("horizon " + std::to_string(*horizon) +
                                        " does not match H=" + std::to_string(mdp.horizon()) +
                                        " in " + path.string());
        }
        const std::size_t H = mdp.horizon();
        return {std::string(selector), {{"path", path.string()}}, H, std::move(mdp)};
    }

    const std::size_t H = horizon.value_or(kDefaultHorizon);
    EnvironmentSpec spec{std::string(selector), {}, H, make_preset(selector, H)};
    if (selector == "gridworld") {
        spec.parameters = {{"layout", std::string(gridworld_layout())},
                           {"slip", "0.1"},
                           {"rows", "7"},
                           {"cols", "7"}};
    } else {
        spec.parameters = {{"n_states", std::to_string(spec.mdp.num_states())},
                           {"p_right", "0.3"},
                           {"p_stay", "0.6"},
                           {"p_back", "0.1"}};
    }
    return spec;
}

}  // namespace qucbvi
