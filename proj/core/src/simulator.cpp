#include "ncg/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ncg {

namespace {

void append_varint(std::string& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<char>(0x80 | (v & 0x7f)));
        v >>= 7;
    }
    out.push_back(static_cast<char>(v));
}

// Delta-encoded varint key of a sorted id tuple. Short enough to stay in the
// string's inline buffer for typical runs.
std::string member_key(std::span<const vertex_id> sorted_members) {
    std::string key;
    key.reserve(sorted_members.size() * 3);
    vertex_id prev = 0;
    for (const vertex_id v : sorted_members) {
        append_varint(key, v - prev);
        prev = v;
    }
    return key;
}

std::uint64_t edge_key(vertex_id a, vertex_id b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

clique_registry::clique_registry(int members_per_clique) : k_(members_per_clique) {
    if (k_ < 1) throw std::invalid_argument("clique_registry: members_per_clique must be >= 1");
}

clique_id clique_registry::add_or_increment(std::span<const vertex_id> sorted_members) {
    if (static_cast<int>(sorted_members.size()) != k_)
        throw std::invalid_argument("clique_registry: member count mismatch");
    const std::string key = member_key(sorted_members);
    auto [it, inserted] = by_key_.try_emplace(key, static_cast<clique_id>(weights_.size()));
    if (inserted) {
        member_pool_.insert(member_pool_.end(), sorted_members.begin(), sorted_members.end());
        weights_.push_back(0);
    }
    const clique_id id = it->second;
    ++weights_[id];
    sample_array_.push_back(id);
    return id;
}

clique_id clique_registry::sample_weighted(rng_engine& rng) const {
    if (sample_array_.empty()) throw std::logic_error("clique_registry: sampling empty registry");
    return sample_array_[bounded_uniform(rng, sample_array_.size())];
}

std::optional<clique_id> clique_registry::find(std::span<const vertex_id> sorted_members) const {
    const auto it = by_key_.find(member_key(sorted_members));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

std::span<const vertex_id> clique_registry::members(clique_id id) const {
    return {member_pool_.data() + static_cast<std::size_t>(id) * k_, static_cast<std::size_t>(k_)};
}

const char* to_string(step_branch b) {
    switch (b) {
        case step_branch::new_vertex_weighted: return "new_vertex_weighted";
        case step_branch::new_vertex_uniform: return "new_vertex_uniform";
        case step_branch::old_weighted: return "old_weighted";
        case step_branch::old_uniform: return "old_uniform";
    }
    return "unknown";
}

graph_state::graph_state(const model_params& params, std::uint64_t seed, graph_options opts)
    : params_(params),
      opts_(opts),
      seed_(seed),
      rng_(seed),
      ncliques_(params.N),
      n1cliques_(params.N - 1) {
    const auto violations = validate(params, validation_tier::simulable);
    if (!violations.empty()) {
        std::string msg = "graph_state: invalid params:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw std::domain_error(msg);
    }
    if (opts_.track_all_cliques) {
        for (int m = 2; m <= params_.N - 2; ++m) mcliques_.emplace_back(m);
    }

    // The seed interaction: all N initial vertices interact once, giving every
    // vertex weight 1 and degree N-1 and every tracked clique weight 1.
    vertices_.assign(params_.N, {});
    std::vector<vertex_id> all(params_.N);
    for (int i = 0; i < params_.N; ++i) all[i] = static_cast<vertex_id>(i);
    interaction_record rec;
    apply_interaction(all, rec);
}

const clique_registry& graph_state::mcliques(int m) const {
    if (!opts_.track_all_cliques)
        throw std::logic_error("graph_state: track_all_cliques is off");
    if (m < 2 || m > params_.N - 2)
        throw std::invalid_argument("graph_state: m outside [2, N-2]");
    return mcliques_[m - 2];
}

void graph_state::reseed(std::uint64_t seed) {
    seed_ = seed;
    rng_.seed(seed);
}

void graph_state::apply_interaction(const std::vector<vertex_id>& participants,
                                    interaction_record& rec) {
    const std::size_t k = participants.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const vertex_id a = participants[i];
            const vertex_id b = participants[j];
            if (edge_keys_.insert(edge_key(a, b)).second) {
                ++vertices_[a].degree;
                ++vertices_[b].degree;
                edges_.emplace_back(a, b);
                ++rec.edges_added;
            }
        }
    }
    for (const vertex_id v : participants) ++vertices_[v].weight;

    ncliques_.add_or_increment(participants);
    std::vector<vertex_id> sub(k - 1);
    for (std::size_t drop = 0; drop < k; ++drop) {
        std::size_t at = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (i != drop) sub[at++] = participants[i];
        n1cliques_.add_or_increment(sub);
    }

    if (opts_.track_all_cliques) {
        // Every m-subset of the participants, in lexicographic order.
        for (int m = 2; m <= params_.N - 2; ++m) {
            std::vector<std::size_t> idx(m);
            for (int i = 0; i < m; ++i) idx[i] = i;
            std::vector<vertex_id> subset(m);
            while (true) {
                for (int i = 0; i < m; ++i) subset[i] = participants[idx[i]];
                mcliques_[m - 2].add_or_increment(subset);
                int pos = m - 1;
                while (pos >= 0 && idx[pos] == k - m + pos) --pos;
                if (pos < 0) break;
                ++idx[pos];
                for (int i = pos + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
            }
        }
    }
}

interaction_record graph_state::step() {
    const int N = params_.N;
    const std::uint64_t old_count = vertices_.size();

    interaction_record rec;
    rec.step = n_ + 1;

    std::vector<vertex_id> participants;
    const double u_branch = unit_uniform(rng_);
    if (u_branch < params_.p) {
        const double u_kind = unit_uniform(rng_);
        if (u_kind < params_.r) {
            rec.branch = step_branch::new_vertex_weighted;
            const clique_id c = n1cliques_.sample_weighted(rng_);
            const auto m = n1cliques_.members(c);
            participants.assign(m.begin(), m.end());
        } else {
            rec.branch = step_branch::new_vertex_uniform;
            participants = sample_uniform_subset(old_count, static_cast<std::uint32_t>(N - 1), rng_);
        }
        const auto fresh = static_cast<vertex_id>(old_count);
        vertices_.push_back({});
        participants.push_back(fresh);  // fresh id is the maximum, order stays sorted
        rec.new_vertex = fresh;
    } else {
        const double u_kind = unit_uniform(rng_);
        if (u_kind < params_.q) {
            rec.branch = step_branch::old_weighted;
            const clique_id c = ncliques_.sample_weighted(rng_);
            const auto m = ncliques_.members(c);
            participants.assign(m.begin(), m.end());
        } else {
            rec.branch = step_branch::old_uniform;
            if (old_count < static_cast<std::uint64_t>(N))
                throw std::logic_error("graph_state: uniform N-subset needs at least N vertices");
            participants = sample_uniform_subset(old_count, static_cast<std::uint32_t>(N), rng_);
        }
    }

    apply_interaction(participants, rec);
    ++n_;
    rec.participants = std::move(participants);
    return rec;
}

std::vector<snapshot> graph_state::run(std::uint64_t steps,
                                       std::span<const std::uint64_t> snapshot_at) {
    if (!std::is_sorted(snapshot_at.begin(), snapshot_at.end()))
        throw std::invalid_argument("run: snapshot_at must be sorted");
    if (!snapshot_at.empty() && snapshot_at.back() > steps)
        throw std::invalid_argument("run: snapshot index exceeds step count");

    std::vector<snapshot> out;
    out.reserve(snapshot_at.size());
    std::size_t next = 0;
    while (next < snapshot_at.size() && snapshot_at[next] == 0) {
        check_invariants();
        out.push_back(make_snapshot());
        ++next;
    }
    for (std::uint64_t s = 1; s <= steps; ++s) {
        step();
        while (next < snapshot_at.size() && snapshot_at[next] == s) {
            check_invariants();
            out.push_back(make_snapshot());
            ++next;
        }
    }
    return out;
}

snapshot graph_state::make_snapshot() const {
    snapshot s;
    s.n = n_;
    s.vertex_count = vertices_.size();
    for (const auto& v : vertices_) {
        const auto d = static_cast<std::uint32_t>(v.degree);
        const auto w = static_cast<std::uint32_t>(v.weight);
        ++s.xdw[{d, w}];
        ++s.xw[w];
        ++s.ud[d];
    }
    return s;
}

void graph_state::check_invariants() const {
    const auto N = static_cast<std::uint64_t>(params_.N);
    const std::uint64_t V = vertices_.size();
    if (V < N || V > N + n_) throw std::logic_error("invariant: vertex count out of range");

    std::uint64_t weight_sum = 0;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        const auto& rec = vertices_[v];
        weight_sum += rec.weight;
        if (rec.weight < 1 || rec.weight > n_ + 1)
            throw std::logic_error("invariant: vertex weight out of range");
        if (rec.degree < N - 1 || rec.degree > (N - 1) * rec.weight)
            throw std::logic_error("invariant: vertex degree out of range");
    }
    if (weight_sum != N * (n_ + 1))
        throw std::logic_error("invariant: vertex weight sum mismatch");
    if (ncliques_.total_weight() != n_ + 1)
        throw std::logic_error("invariant: N-clique registry weight mismatch");
    if (n1cliques_.total_weight() != N * (n_ + 1))
        throw std::logic_error("invariant: (N-1)-clique registry weight mismatch");

    std::vector<std::uint32_t> rebuilt(V, 0);
    for (const auto& [a, b] : edges_) {
        ++rebuilt[a];
        ++rebuilt[b];
    }
    for (std::size_t v = 0; v < V; ++v)
        if (rebuilt[v] != vertices_[v].degree)
            throw std::logic_error("invariant: degree disagrees with adjacency");
}

std::uint64_t graph_state::digest() const {
    std::uint64_t h = mix64(n_ ^ 0x6e63675f64696765ULL);
    h ^= mix64(vertices_.size());
    for (const auto& v : vertices_) h = mix64(h ^ mix64(v.weight) ^ mix64(v.degree));
    for (const auto& [a, b] : edges_) h = mix64(h ^ edge_key(a, b));
    h ^= mix64(ncliques_.total_weight());
    h ^= mix64(n1cliques_.total_weight());
    for (std::size_t id = 0; id < ncliques_.size(); ++id)
        h = mix64(h ^ ncliques_.weight(static_cast<clique_id>(id)));
    for (std::size_t id = 0; id < n1cliques_.size(); ++id)
        h = mix64(h ^ n1cliques_.weight(static_cast<clique_id>(id)));
    return h;
}

void write_edge_list(const graph_state& state, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_edge_list: cannot open " + path.string());
    for (const auto& [a, b] : state.edges()) out << a << ' ' << b << '\n';
    out.close();

    nlohmann::ordered_json meta;
    meta["N"] = state.params().N;
    meta["p"] = state.params().p;
    meta["q"] = state.params().q;
    meta["r"] = state.params().r;
    meta["seed"] = state.seed();
    meta["steps"] = state.steps_done();
    meta["generator"] = rng_name;
    std::ofstream side(path.string() + ".json");
    if (!side) throw std::runtime_error("write_edge_list: cannot open sidecar");
    side << meta.dump(2) << '\n';
}

}  // namespace ncg
