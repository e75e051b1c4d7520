#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "papsim/blocks.hpp"
#include "papsim/error.hpp"
#include "papsim/props.hpp"
#include "papsim/stream.hpp"

namespace papsim {

struct MixerParams {};

struct SplitterParams {
    double phi = 0.5; // fraction to the first outlet
};

struct SeparatorParams {
    FlowMap to_top;
    StreamState top;
    StreamState bottom;
};

struct PumpParams {
    double p_out = 1.0;
};

struct HeaterParams {
    StreamState outlet;
};

using BlockParams = std::variant<MixerParams, SplitterParams, SeparatorParams, ReactorSpec,
                                 CompressorSpec, PumpParams, HeaterParams>;

inline constexpr std::string_view block_kind_name(const BlockParams& p) {
    constexpr std::string_view names[] = {"mixer",   "splitter", "component_splitter", "reactor",
                                          "compressor", "pump",  "heater"};
    return names[p.index()];
}

/// A unit operation wired to named streams. Outlet order matters for two-outlet
/// blocks: splitter (kept, rejected), component splitter (top, bottom).
struct Block {
    std::string id;
    BlockParams params;
    std::vector<std::string> inlets;
    std::vector<std::string> outlets;
    std::map<std::string, double> metadata; // carried, never used in calculations
};

struct TearSpec {
    std::string stream;
    std::optional<Stream> guess; // zero flows at 25 degC / 1 bar when absent
};

/// Raw flowsheet description before graph checks.
struct FlowsheetSpec {
    std::vector<Block> blocks;
    std::map<std::string, Stream> feeds;
    std::vector<TearSpec> tears;
};

/// Structural problems in a flowsheet spec. Empty result means the graph is sound.
inline std::vector<Diagnostic> check_topology(const FlowsheetSpec& spec) {
    std::vector<Diagnostic> out;
    std::map<std::string, std::string> producer;
    std::map<std::string, std::string> consumer;
    std::set<std::string> ids;

    auto arity_ok = [](const Block& b) {
        const auto nin = b.inlets.size();
        const auto nout = b.outlets.size();
        switch (b.params.index()) {
        case 0: // mixer
        case 3: // reactor
            return nin >= 1 && nout == 1;
        case 1: // splitter
        case 2: // component splitter
            return nin == 1 && nout == 2;
        default:
            return nin == 1 && nout == 1;
        }
    };

    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        const auto& b = spec.blocks[i];
        const std::string where = "blocks[" + std::to_string(i) + "]";
        if (!ids.insert(b.id).second) {
            out.push_back({ErrorCode::InvalidSpec, where, "duplicate block id '" + b.id + "'"});
        }
        if (!arity_ok(b)) {
            out.push_back({ErrorCode::InvalidSpec, where,
                           "block '" + b.id + "' (" + std::string(block_kind_name(b.params)) +
                               ") has the wrong number of inlets/outlets"});
        }
        for (const auto& s : b.outlets) {
            if (spec.feeds.contains(s)) {
                out.push_back({ErrorCode::DuplicateStreamProducer, where + ".outlets",
                               "stream '" + s + "' is a feed and also produced by '" + b.id + "'"});
            } else if (auto [it, fresh] = producer.emplace(s, b.id); !fresh) {
                out.push_back({ErrorCode::DuplicateStreamProducer, where + ".outlets",
                               "stream '" + s + "' produced by both '" + it->second + "' and '" +
                                   b.id + "'"});
            }
        }
        for (const auto& s : b.inlets) {
            if (auto [it, fresh] = consumer.emplace(s, b.id); !fresh) {
                out.push_back({ErrorCode::DuplicateStreamConsumer, where + ".inlets",
                               "stream '" + s + "' consumed by both '" + it->second + "' and '" +
                                   b.id + "'"});
            }
        }
    }
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        for (const auto& s : spec.blocks[i].inlets) {
            if (!producer.contains(s) && !spec.feeds.contains(s)) {
                out.push_back({ErrorCode::DanglingPort, "blocks[" + std::to_string(i) + "].inlets",
                               "stream '" + s + "' has no producer and is not a feed"});
            }
        }
    }
    std::set<std::string> seen_tears;
    for (std::size_t i = 0; i < spec.tears.size(); ++i) {
        const auto& t = spec.tears[i].stream;
        const std::string where = "tears[" + std::to_string(i) + "]";
        if (!seen_tears.insert(t).second) {
            out.push_back({ErrorCode::InvalidSpec, where, "stream '" + t + "' torn twice"});
        }
        if (!producer.contains(t) || !consumer.contains(t)) {
            out.push_back({ErrorCode::UnknownStream, where,
                           "tear '" + t + "' must be produced and consumed by blocks"});
        }
    }
    return out;
}

namespace detail {

/// Shortest directed cycle among `nodes` (indices into adjacency); empty if none.
inline std::vector<std::size_t> shortest_cycle(const std::vector<std::vector<std::size_t>>& adj,
                                               const std::vector<std::size_t>& nodes) {
    std::vector<std::size_t> best;
    std::vector<bool> member(adj.size(), false);
    for (auto n : nodes) member[n] = true;
    for (auto start : nodes) {
        std::vector<std::size_t> parent(adj.size(), adj.size());
        std::vector<bool> visited(adj.size(), false);
        std::deque<std::size_t> queue{start};
        visited[start] = true;
        bool closed = false;
        std::size_t last = start;
        while (!queue.empty() && !closed) {
            const auto u = queue.front();
            queue.pop_front();
            for (auto v : adj[u]) {
                if (!member[v]) continue;
                if (v == start) {
                    closed = true;
                    last = u;
                    break;
                }
                if (!visited[v]) {
                    visited[v] = true;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if (!closed) continue;
        std::vector<std::size_t> cycle;
        for (auto v = last; v != start; v = parent[v]) cycle.push_back(v);
        cycle.push_back(start);
        std::reverse(cycle.begin(), cycle.end());
        if (best.empty() || cycle.size() < best.size()) best = std::move(cycle);
    }
    return best;
}

} // namespace detail

class Flowsheet;
inline Flowsheet build_flowsheet(FlowsheetSpec spec);

/// A validated flowsheet with a fixed block evaluation order.
class Flowsheet {
public:
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::map<std::string, Stream>& feeds() const { return feeds_; }
    const std::vector<TearSpec>& tears() const { return tears_; }
    /// Indices into blocks(), in evaluation order.
    const std::vector<std::size_t>& order() const { return order_; }
    /// Every stream id (feeds and block outlets) in natural order.
    const std::vector<std::string>& stream_ids() const { return stream_ids_; }

    bool is_tear(std::string_view stream) const {
        return std::any_of(tears_.begin(), tears_.end(),
                           [&](const TearSpec& t) { return t.stream == stream; });
    }

private:
    friend Flowsheet build_flowsheet(FlowsheetSpec spec);

    std::vector<Block> blocks_;
    std::map<std::string, Stream> feeds_;
    std::vector<TearSpec> tears_;
    std::vector<std::size_t> order_;
    std::vector<std::string> stream_ids_;
};

/// Numeric-aware ordering so "2" sorts before "10".
inline bool natural_less(const std::string& a, const std::string& b) {
    auto numeric = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    const bool na = numeric(a);
    const bool nb = numeric(b);
    if (na && nb) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
    if (na != nb) return na;
    return a < b;
}

/// Checks the graph and orders blocks by a topological sort of the torn graph.
/// Ties are broken by definition order, so the result is deterministic.
inline Flowsheet build_flowsheet(FlowsheetSpec spec) {
    if (auto diags = check_topology(spec); !diags.empty()) {
        throw Error(diags.front().code, diags.front().message);
    }

    const auto n = spec.blocks.size();
    std::map<std::string, std::size_t> producer;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& s : spec.blocks[i].outlets) producer[s] = i;
    std::set<std::string> torn;
    for (const auto& t : spec.tears) torn.insert(t.stream);

    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& s : spec.blocks[i].inlets) {
            auto it = producer.find(s);
            if (it == producer.end() || torn.contains(s)) continue;
            adj[it->second].push_back(i);
            ++indegree[i];
        }
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const auto u = ready.top();
        ready.pop();
        order.push_back(u);
        for (auto v : adj[u])
            if (--indegree[v] == 0) ready.push(v);
    }

    if (order.size() != n) {
        std::vector<std::size_t> left;
        for (std::size_t i = 0; i < n; ++i)
            if (indegree[i] > 0) left.push_back(i);
        std::string names;
        for (auto i : detail::shortest_cycle(adj, left)) {
            if (!names.empty()) names += " -> ";
            names += spec.blocks[i].id;
        }
        throw Error(ErrorCode::CyclicWithoutTear, "cycle not broken by any tear: " + names);
    }

    Flowsheet fs;
    for (const auto& [id, s] : spec.feeds) fs.stream_ids_.push_back(id);
    for (const auto& b : spec.blocks)
        for (const auto& s : b.outlets) fs.stream_ids_.push_back(s);
    std::sort(fs.stream_ids_.begin(), fs.stream_ids_.end(), natural_less);

    fs.blocks_ = std::move(spec.blocks);
    fs.feeds_ = std::move(spec.feeds);
    fs.tears_ = std::move(spec.tears);
    fs.order_ = std::move(order);
    return fs;
}

enum class Acceleration { Direct, Wegstein };

struct SolveOptions {
    double tolerance = 1e-6;     // kmol/h, max-norm over tear flows
    double temp_tolerance = 0.01; // degC
    int max_iterations = 500;
    Acceleration acceleration = Acceleration::Wegstein;
    double q_low = -5.0;
    double q_high = 0.0;

    void check() const {
        if (!(tolerance > 0.0) || !(temp_tolerance > 0.0)) {
            throw Error(ErrorCode::InvalidSpec, "solver tolerances must be positive");
        }
        if (max_iterations < 1) throw Error(ErrorCode::InvalidSpec, "max_iterations must be >= 1");
        if (!(q_low < q_high)) throw Error(ErrorCode::InvalidSpec, "Wegstein bounds need q_low < q_high");
    }
};

enum class SolveStatus { Converged, NotConverged };

struct SolveResult {
    SolveStatus status = SolveStatus::NotConverged;
    std::map<std::string, Stream> streams;
    int iterations = 0;
    std::vector<double> residual_history;      // max |delta flow| per iteration
    std::vector<double> temp_residual_history; // max |delta T| per iteration
    std::map<std::string, double> block_duties; // cal/s
    std::map<std::string, double> block_powers; // kW

    bool converged() const { return status == SolveStatus::Converged; }
};

/// One Wegstein update per coordinate. Coordinates whose secant is degenerate
/// fall back to direct substitution.
inline std::vector<double> wegstein_step(std::span<const double> x_prev, std::span<const double> g_prev,
                                         std::span<const double> x_curr, std::span<const double> g_curr,
                                         double q_low, double q_high) {
    std::vector<double> next(x_curr.size());
    for (std::size_t i = 0; i < x_curr.size(); ++i) {
        const double dx = x_curr[i] - x_prev[i];
        const double slope = std::abs(dx) > 1e-12 ? (g_curr[i] - g_prev[i]) / dx : 0.0;
        double q = slope / (slope - 1.0);
        if (!std::isfinite(q)) q = q_low;
        q = std::clamp(q, q_low, q_high);
        next[i] = q * x_curr[i] + (1.0 - q) * g_curr[i];
    }
    return next;
}

namespace detail {

struct SweepOutput {
    std::map<std::string, Stream> streams;
    std::map<std::string, double> duties;
    std::map<std::string, double> powers;
};

inline SweepOutput sweep(const Flowsheet& fs, const std::map<std::string, Stream>& tear_values,
                         const ComponentRegistry& registry) {
    SweepOutput out;
    out.streams = fs.feeds();

    auto fetch = [&](const std::string& id) -> const Stream& {
        if (auto it = tear_values.find(id); it != tear_values.end()) return it->second;
        return out.streams.at(id);
    };

    for (auto index : fs.order()) {
        const Block& b = fs.blocks()[index];
        std::vector<Stream> in;
        in.reserve(b.inlets.size());
        for (const auto& s : b.inlets) in.push_back(fetch(s));

        try {
            std::visit(
                [&](const auto& p) {
                    using P = std::decay_t<decltype(p)>;
                    if constexpr (std::is_same_v<P, MixerParams>) {
                        out.streams[b.outlets[0]] = mix(in, registry);
                    } else if constexpr (std::is_same_v<P, SplitterParams>) {
                        auto r = split_stream(in[0], p.phi);
                        out.streams[b.outlets[0]] = std::move(r.kept);
                        out.streams[b.outlets[1]] = std::move(r.rejected);
                    } else if constexpr (std::is_same_v<P, SeparatorParams>) {
                        auto r = split_components(in[0], p.to_top, p.top, p.bottom);
                        out.streams[b.outlets[0]] = std::move(r.top);
                        out.streams[b.outlets[1]] = std::move(r.bottom);
                    } else if constexpr (std::is_same_v<P, ReactorSpec>) {
                        out.streams[b.outlets[0]] = react(mix(in, registry), p, registry);
                    } else if constexpr (std::is_same_v<P, CompressorSpec>) {
                        auto r = compress(in[0], p, registry);
                        out.streams[b.outlets[0]] = std::move(r.outlet);
                        out.powers[b.id] = r.power_kw;
                    } else if constexpr (std::is_same_v<P, PumpParams>) {
                        out.streams[b.outlets[0]] = pump(in[0], p.p_out);
                    } else if constexpr (std::is_same_v<P, HeaterParams>) {
                        auto r = set_temperature(in[0], p.outlet, registry);
                        out.streams[b.outlets[0]] = std::move(r.outlet);
                        out.duties[b.id] = r.duty;
                    }
                },
                b.params);
        } catch (const BlockFailure&) {
            throw;
        } catch (const Error& e) {
            throw BlockFailure(b.id, e.code(), e.what());
        }
    }
    return out;
}

} // namespace detail

/// Converges all tear streams together as one stacked vector
/// [flows of tear 1 in registry order, T of tear 1, flows of tear 2, ...].
/// A run that hits max_iterations returns NotConverged with the best iterate.
inline SolveResult solve(const Flowsheet& fs, const SolveOptions& options,
                         const ComponentRegistry& registry) {
    options.check();
    const auto& comps = registry.components();
    const std::size_t stride = comps.size() + 1;

    std::map<std::string, Stream> tear_values;
    for (const auto& t : fs.tears()) {
        Stream guess = t.guess.value_or(Stream{{}, 25.0, 1.0, Phase::Liquid});
        for (const auto& c : comps) guess.flows.try_emplace(c.name, 0.0);
        tear_values[t.stream] = std::move(guess);
    }

    auto pack = [&](const std::map<std::string, Stream>& values) {
        std::vector<double> v;
        v.reserve(stride * fs.tears().size());
        for (const auto& t : fs.tears()) {
            const Stream& s = values.at(t.stream);
            for (const auto& c : comps) v.push_back(s.flow(c.name));
            v.push_back(s.temperature);
        }
        return v;
    };

    SolveResult result;
    std::optional<detail::SweepOutput> best;
    double best_residual = std::numeric_limits<double>::infinity();
    std::vector<double> x_prev, g_prev;

    for (int k = 1; k <= options.max_iterations; ++k) {
        auto sweep = detail::sweep(fs, tear_values, registry);
        const auto x = pack(tear_values);
        const auto g = pack(sweep.streams);

        double flow_res = 0.0;
        double temp_res = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = std::abs(g[i] - x[i]);
            if ((i + 1) % stride == 0) temp_res = std::max(temp_res, d);
            else flow_res = std::max(flow_res, d);
        }
        result.residual_history.push_back(flow_res);
        result.temp_residual_history.push_back(temp_res);
        result.iterations = k;

        // Next guesses keep pressure and phase from the freshly computed tears.
        for (const auto& t : fs.tears()) tear_values[t.stream] = sweep.streams.at(t.stream);

        const bool done = flow_res <= options.tolerance && temp_res <= options.temp_tolerance;
        if (done || flow_res < best_residual) {
            best_residual = flow_res;
            best = std::move(sweep);
        }
        if (done) {
            result.status = SolveStatus::Converged;
            break;
        }

        if (options.acceleration == Acceleration::Wegstein && k >= 3) {
            const auto next = wegstein_step(x_prev, g_prev, x, g, options.q_low, options.q_high);
            std::size_t offset = 0;
            for (const auto& t : fs.tears()) {
                Stream& guess = tear_values.at(t.stream);
                for (std::size_t c = 0; c < comps.size(); ++c) {
                    // Extrapolation must not produce negative flows.
                    guess.flows[comps[c].name] = std::max(0.0, next[offset + c]);
                }
                guess.temperature = next[offset + comps.size()];
                offset += stride;
            }
        }
        x_prev = x;
        g_prev = g;
    }

    result.streams = std::move(best->streams);
    result.block_duties = std::move(best->duties);
    result.block_powers = std::move(best->powers);
    return result;
}

} // namespace papsim
