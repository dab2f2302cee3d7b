#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ncg/params.hpp"
#include "ncg/random.hpp"

namespace ncg {

using vertex_id = std::uint32_t;
using clique_id = std::uint32_t;

// Registry of same-size cliques keyed by their sorted member tuple. A clique's
// weight counts the interactions that selected or created that exact vertex
// set. sample_array holds one slot per unit of weight, so a weighted draw is a
// single uniform index pick.
class clique_registry {
public:
    explicit clique_registry(int members_per_clique);

    // Adds one unit of weight, registering the clique on first sight.
    clique_id add_or_increment(std::span<const vertex_id> sorted_members);

    // Weight-proportional draw. Throws std::logic_error on an empty registry.
    clique_id sample_weighted(rng_engine& rng) const;

    std::optional<clique_id> find(std::span<const vertex_id> sorted_members) const;
    std::span<const vertex_id> members(clique_id id) const;
    std::uint64_t weight(clique_id id) const { return weights_[id]; }
    std::uint64_t total_weight() const { return sample_array_.size(); }
    std::size_t size() const { return weights_.size(); }
    int members_per_clique() const { return k_; }
    const std::vector<clique_id>& sample_array() const { return sample_array_; }

private:
    int k_;
    std::vector<vertex_id> member_pool_;  // k_ ids per clique, registration order
    std::vector<std::uint64_t> weights_;
    std::vector<clique_id> sample_array_;
    std::unordered_map<std::string, clique_id> by_key_;
};

enum class step_branch { new_vertex_weighted, new_vertex_uniform, old_weighted, old_uniform };

const char* to_string(step_branch b);

struct interaction_record {
    std::uint64_t step = 0;
    std::optional<vertex_id> new_vertex;
    std::vector<vertex_id> participants;  // sorted, size N
    step_branch branch = step_branch::old_uniform;
    int edges_added = 0;
};

// Counting statistics after step n. xdw maps (d, w) to the number of vertices
// with degree d and weight w; xw and ud are its marginals.
struct snapshot {
    std::uint64_t n = 0;
    std::uint64_t vertex_count = 0;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> xdw;
    std::map<std::uint32_t, std::uint64_t> xw;
    std::map<std::uint32_t, std::uint64_t> ud;
};

struct graph_options {
    // Track every m-clique level 2..N-2 as well. Those weights never influence
    // the dynamics and cost O(2^N) per step, so this is for small runs only.
    bool track_all_cliques = false;
};

// The evolving graph. Starts as a complete graph on N vertices where every
// vertex, edge and clique has weight one. Each step() selects N interacting
// vertices, draws the missing edges among them, and increments the weight of
// every participant, of the participant N-clique and of its N sub-(N-1)-cliques.
//
// Randomness is consumed in a fixed documented order per step: one unit
// uniform for the p branch, one for the r (or q) sub-branch, then the
// selection draws (a single index pick for a weighted choice; k index picks
// plus duplicate rejections for a uniform subset).
class graph_state {
public:
    graph_state(const model_params& params, std::uint64_t seed, graph_options opts = {});

    // Executes one evolution step. Throws std::logic_error only on states that
    // cannot arise from a valid construction.
    interaction_record step();

    // Applies `steps` steps, collecting snapshots at the requested indices
    // (relative to this call; 0 means before any step). snapshot_at must be
    // sorted ascending and bounded by steps.
    std::vector<snapshot> run(std::uint64_t steps, std::span<const std::uint64_t> snapshot_at);

    snapshot make_snapshot() const;

    // Throws std::logic_error when a structural invariant fails: weight sums,
    // registry totals, degree bounds, or degrees disagreeing with an adjacency
    // rebuild from the edge list.
    void check_invariants() const;

    const model_params& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t steps_done() const { return n_; }
    std::uint64_t vertex_count() const { return vertices_.size(); }
    std::uint64_t weight(vertex_id v) const { return vertices_[v].weight; }
    std::uint32_t degree(vertex_id v) const { return vertices_[v].degree; }
    const std::vector<std::pair<vertex_id, vertex_id>>& edges() const { return edges_; }
    const clique_registry& ncliques() const { return ncliques_; }
    const clique_registry& n1cliques() const { return n1cliques_; }
    // Requires track_all_cliques; m in [2, N-2].
    const clique_registry& mcliques(int m) const;

    // Re-seeds the generator in place (used to replay steps from a frozen
    // state with fresh randomness). The recorded seed follows suit.
    void reseed(std::uint64_t seed);

    // Order-sensitive 64-bit digest of the full state, for determinism checks.
    std::uint64_t digest() const;

private:
    struct vertex_data {
        std::uint64_t weight = 0;
        std::uint32_t degree = 0;
    };

    void apply_interaction(const std::vector<vertex_id>& participants, interaction_record& rec);

    model_params params_;
    graph_options opts_;
    std::uint64_t seed_ = 0;
    std::uint64_t n_ = 0;
    rng_engine rng_;
    std::vector<vertex_data> vertices_;
    std::vector<std::pair<vertex_id, vertex_id>> edges_;  // insertion order
    std::unordered_set<std::uint64_t> edge_keys_;
    clique_registry ncliques_;
    clique_registry n1cliques_;
    std::vector<clique_registry> mcliques_;  // index m-2, only when tracking all
};

// Writes the edge list as text, one "u v" pair per line with 0-based ids, plus
// a sidecar JSON at <path>.json carrying N, p, q, r, seed, steps and the
// generator name.
void write_edge_list(const graph_state& state, const std::filesystem::path& path);

}  // namespace ncg
