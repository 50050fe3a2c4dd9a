#include "rlnclab/network.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rlnclab {

namespace {

bool is_reserved_imaginary_id(const std::string& id) {
    if (id.size() < 2 || id[0] != 'd') return false;
    if (id[1] == '0') return false;
    return std::all_of(id.begin() + 1, id.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

NetworkSpec::NetworkSpec(std::vector<std::string> nodes, std::vector<Channel> real_channels,
                         std::string source, std::vector<std::string> sinks, int rate)
    : nodes_(std::move(nodes)),
      real_(std::move(real_channels)),
      source_(std::move(source)),
      sinks_(std::move(sinks)),
      rate_(rate) {
    for (auto& c : real_) c.kind = ChannelKind::Real;
    const int w = std::max(rate_, 0);
    imaginary_.reserve(static_cast<std::size_t>(w));
    for (int k = 1; k <= w; ++k)
        imaginary_.push_back(Channel{"d" + std::to_string(k), "", source_, ChannelKind::Imaginary});
}

NetworkSpec NetworkSpec::butterfly() {
    std::vector<std::string> nodes{"s", "s1", "s2", "i", "j", "t1", "t2"};
    std::vector<Channel> channels{
        {"e1", "s", "s1"}, {"e2", "s", "s2"}, {"e3", "s1", "t1"},
        {"e4", "s1", "i"}, {"e5", "s2", "i"}, {"e6", "s2", "t2"},
        {"e7", "i", "j"},  {"e8", "j", "t1"}, {"e9", "j", "t2"},
    };
    return NetworkSpec(std::move(nodes), std::move(channels), "s", {"t1", "t2"}, 2);
}

NetworkSpec NetworkSpec::from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw ParseError("network file must be a JSON object");
        if (doc.value("schema_version", -1) != 1)
            throw ParseError("network file schema_version must be 1");
        std::vector<std::string> nodes = doc.at("nodes").get<std::vector<std::string>>();
        std::vector<Channel> channels;
        for (const auto& c : doc.at("channels")) {
            channels.push_back(Channel{c.at("id").get<std::string>(),
                                       c.at("tail").get<std::string>(),
                                       c.at("head").get<std::string>(), ChannelKind::Real});
        }
        std::string source = doc.at("source").get<std::string>();
        std::vector<std::string> sinks = doc.at("sinks").get<std::vector<std::string>>();
        int rate = doc.at("rate").get<int>();
        return NetworkSpec(std::move(nodes), std::move(channels), std::move(source),
                           std::move(sinks), rate);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed network description: ") + e.what());
    }
}

NetworkSpec NetworkSpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

NetworkSpec NetworkSpec::resolve(const std::string& name_or_path) {
    if (name_or_path == "builtin:butterfly") return butterfly();
    if (name_or_path.rfind("builtin:", 0) == 0)
        throw ParseError("unknown builtin network '" + name_or_path + "'");
    return from_file(name_or_path);
}

const Channel* NetworkSpec::find_channel(const std::string& id) const {
    for (const auto& c : real_)
        if (c.id == id) return &c;
    for (const auto& c : imaginary_)
        if (c.id == id) return &c;
    return nullptr;
}

bool NetworkSpec::has_node(const std::string& id) const {
    return std::find(nodes_.begin(), nodes_.end(), id) != nodes_.end();
}

std::vector<const Channel*> NetworkSpec::incoming_real(const std::string& node) const {
    std::vector<const Channel*> out;
    for (const auto& c : real_)
        if (c.head == node) out.push_back(&c);
    return out;
}

std::vector<const Channel*> NetworkSpec::outgoing_real(const std::string& node) const {
    std::vector<const Channel*> out;
    for (const auto& c : real_)
        if (c.tail == node) out.push_back(&c);
    return out;
}

std::vector<const Channel*> NetworkSpec::incoming_all(const std::string& node) const {
    std::vector<const Channel*> out;
    for (const auto& c : imaginary_)
        if (c.head == node) out.push_back(&c);
    for (const auto& c : real_)
        if (c.head == node) out.push_back(&c);
    return out;
}

bool operator==(const NetworkSpec& a, const NetworkSpec& b) {
    auto key = [](const Channel& c) { return std::tuple(c.id, c.tail, c.head, c.kind); };
    if (a.nodes_ != b.nodes_ || a.source_ != b.source_ || a.sinks_ != b.sinks_ ||
        a.rate_ != b.rate_ || a.real_.size() != b.real_.size())
        return false;
    for (std::size_t i = 0; i < a.real_.size(); ++i)
        if (key(a.real_[i]) != key(b.real_[i])) return false;
    return true;
}

namespace {

// Reachability over real channels from `start`.
std::set<std::string> reachable_from(const NetworkSpec& spec, const std::string& start) {
    std::set<std::string> seen{start};
    std::queue<std::string> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
        std::string u = frontier.front();
        frontier.pop();
        for (const Channel* c : spec.outgoing_real(u)) {
            if (seen.insert(c->head).second) frontier.push(c->head);
        }
    }
    return seen;
}

bool has_cycle(const NetworkSpec& spec) {
    std::map<std::string, int> indeg;
    for (const auto& n : spec.nodes()) indeg[n] = 0;
    for (const auto& c : spec.real_channels()) {
        auto it = indeg.find(c.head);
        if (it != indeg.end()) ++it->second;
    }
    std::queue<std::string> ready;
    for (const auto& [n, d] : indeg)
        if (d == 0) ready.push(n);
    std::size_t seen = 0;
    while (!ready.empty()) {
        std::string u = ready.front();
        ready.pop();
        ++seen;
        for (const Channel* c : spec.outgoing_real(u)) {
            auto it = indeg.find(c->head);
            if (it != indeg.end() && --it->second == 0) ready.push(c->head);
        }
    }
    return seen != spec.nodes().size();
}

}  // namespace

ValidationReport validate(const NetworkSpec& spec) {
    ValidationReport report;
    auto err = [&](const std::string& msg) { report.errors.push_back(msg); };

    std::set<std::string> node_set(spec.nodes().begin(), spec.nodes().end());
    if (node_set.size() != spec.nodes().size()) err("duplicate node ids");
    if (spec.nodes().empty()) err("network has no nodes");
    if (spec.rate() < 1) err("rate must be >= 1");
    if (!node_set.count(spec.source())) err("source '" + spec.source() + "' is not a declared node");
    if (spec.sinks().empty()) err("network has no sinks");
    for (const auto& t : spec.sinks())
        if (!node_set.count(t)) err("sink '" + t + "' is not a declared node");

    std::set<std::string> channel_ids;
    bool endpoints_ok = true;
    for (const auto& c : spec.real_channels()) {
        if (!channel_ids.insert(c.id).second) err("duplicate channel id '" + c.id + "'");
        if (is_reserved_imaginary_id(c.id))
            err("channel id '" + c.id + "' is reserved for imaginary channels");
        if (!node_set.count(c.tail)) {
            err("channel '" + c.id + "' tail '" + c.tail + "' is not a declared node");
            endpoints_ok = false;
        }
        if (!node_set.count(c.head)) {
            err("channel '" + c.id + "' head '" + c.head + "' is not a declared node");
            endpoints_ok = false;
        }
        if (c.tail == c.head) err("channel '" + c.id + "' is a self-loop");
    }

    bool acyclic = true;
    if (endpoints_ok && has_cycle(spec)) {
        err("network contains a cycle over real channels");
        acyclic = false;
    }

    if (endpoints_ok && node_set.count(spec.source())) {
        const auto seen = reachable_from(spec, spec.source());
        for (const auto& t : spec.sinks())
            if (node_set.count(t) && !seen.count(t))
                err("sink '" + t + "' is not reachable from the source");
    }

    if (report.ok() && acyclic) {
        for (const auto& t : spec.sinks()) {
            int cut = min_cut(spec, t);
            if (cut < spec.rate())
                report.warnings.push_back("rate " + std::to_string(spec.rate()) +
                                          " exceeds min cut " + std::to_string(cut) +
                                          " of sink '" + t + "'; decoding can never succeed");
        }
    }
    return report;
}

std::vector<std::string> topological_order(const NetworkSpec& spec) {
    std::vector<std::string> order;
    order.reserve(spec.imaginary_channels().size() + spec.real_channels().size());
    for (const auto& c : spec.imaginary_channels()) order.push_back(c.id);

    // Channel-level Kahn: a real channel is ready once every channel entering
    // its tail has been emitted. Ready channels are emitted smallest id first.
    std::map<std::string, int> pending_in;  // node -> incoming channels not yet emitted
    for (const auto& n : spec.nodes()) pending_in[n] = 0;
    for (const auto& c : spec.real_channels()) ++pending_in[c.head];
    // Imaginary channels are already emitted, so they do not count.

    std::set<std::string> ready;  // ordered by id
    std::map<std::string, const Channel*> by_id;
    for (const auto& c : spec.real_channels()) by_id[c.id] = &c;
    for (const auto& c : spec.real_channels())
        if (pending_in[c.tail] == 0) ready.insert(c.id);

    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        const Channel* c = by_id[id];
        order.push_back(id);
        if (--pending_in[c->head] == 0)
            for (const Channel* out : spec.outgoing_real(c->head)) ready.insert(out->id);
    }
    if (order.size() != spec.imaginary_channels().size() + spec.real_channels().size())
        throw CyclicNetwork("network contains a cycle; no topological channel order exists");
    return order;
}

int min_cut(const NetworkSpec& spec, const std::string& sink) {
    if (std::find(spec.sinks().begin(), spec.sinks().end(), sink) == spec.sinks().end())
        throw UnknownSink("'" + sink + "' is not a sink of this network");

    // Edmonds-Karp on unit capacities; every augmenting path adds one unit.
    struct Edge {
        int to;
        int cap;
        int rev;
    };
    std::map<std::string, int> node_index;
    for (const auto& n : spec.nodes()) node_index.emplace(n, static_cast<int>(node_index.size()));
    std::vector<std::vector<Edge>> adj(node_index.size());
    auto add_edge = [&](int u, int v) {
        adj[u].push_back({v, 1, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0, static_cast<int>(adj[u].size()) - 1});
    };
    for (const auto& c : spec.real_channels()) add_edge(node_index[c.tail], node_index[c.head]);

    const int s = node_index[spec.source()], t = node_index[sink];
    if (s == t) return 0;
    int flow = 0;
    while (true) {
        std::vector<std::pair<int, int>> parent(adj.size(), {-1, -1});  // (node, edge idx)
        std::queue<int> frontier;
        frontier.push(s);
        parent[s] = {s, -1};
        while (!frontier.empty() && parent[t].first == -1) {
            int u = frontier.front();
            frontier.pop();
            for (std::size_t i = 0; i < adj[u].size(); ++i) {
                const Edge& e = adj[u][i];
                if (e.cap > 0 && parent[e.to].first == -1) {
                    parent[e.to] = {u, static_cast<int>(i)};
                    frontier.push(e.to);
                }
            }
        }
        if (parent[t].first == -1) break;
        for (int v = t; v != s;) {
            auto [u, i] = parent[v];
            Edge& e = adj[u][i];
            e.cap -= 1;
            adj[v][e.rev].cap += 1;
            v = u;
        }
        ++flow;
    }
    return flow;
}

}  // namespace rlnclab
