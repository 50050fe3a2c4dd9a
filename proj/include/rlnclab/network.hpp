#pragma once

#include <string>
#include <vector>

#include "rlnclab/errors.hpp"

namespace rlnclab {

enum class ChannelKind { Real, Imaginary };

// Unit-capacity directed channel. Imaginary channels carry the source
// messages into the source node; their tail is a virtual origin and is left
// empty.
struct Channel {
    std::string id;
    std::string tail;
    std::string head;
    ChannelKind kind = ChannelKind::Real;
};

// A single-source multicast DAG with information rate w. The w imaginary
// channels d1..dw are generated at construction, never declared; real channel
// ids matching d<number> are reserved and rejected by validation.
class NetworkSpec {
public:
    NetworkSpec(std::vector<std::string> nodes, std::vector<Channel> real_channels,
                std::string source, std::vector<std::string> sinks, int rate);

    // The multicast network of Fig-1 folklore: source s feeding sinks t1, t2
    // through relays s1, s2, i, j over nine unit channels, rate 2.
    static NetworkSpec butterfly();

    // Loads a network description file (JSON, schema_version 1).
    static NetworkSpec from_json_text(const std::string& text);
    static NetworkSpec from_file(const std::string& path);

    // Resolves "builtin:butterfly" or a file path.
    static NetworkSpec resolve(const std::string& name_or_path);

    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<Channel>& real_channels() const { return real_; }
    const std::vector<Channel>& imaginary_channels() const { return imaginary_; }
    const std::string& source() const { return source_; }
    const std::vector<std::string>& sinks() const { return sinks_; }
    int rate() const { return rate_; }

    const Channel* find_channel(const std::string& id) const;
    bool has_node(const std::string& id) const;

    // Real channels entering / leaving a node, in declaration order.
    std::vector<const Channel*> incoming_real(const std::string& node) const;
    std::vector<const Channel*> outgoing_real(const std::string& node) const;

    // All channels entering a node, imaginary included.
    std::vector<const Channel*> incoming_all(const std::string& node) const;

    friend bool operator==(const NetworkSpec& a, const NetworkSpec& b);

private:
    std::vector<std::string> nodes_;
    std::vector<Channel> real_;
    std::vector<Channel> imaginary_;
    std::string source_;
    std::vector<std::string> sinks_;
    int rate_;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

// Reports every violated structural invariant; never throws. A rate above
// some sink's min cut is only a warning: random coding on an infeasible
// instance is a legal, always-failing experiment.
ValidationReport validate(const NetworkSpec& spec);

// All channel ids, imaginary channels first (d1..dw in index order), then
// real channels such that every channel appears after all channels entering
// its tail node. Ties are broken by lexicographic channel id, so the order is
// deterministic. Throws CyclicNetwork when no such order exists.
std::vector<std::string> topological_order(const NetworkSpec& spec);

// Max-flow value from the source to a sink over unit-capacity real channels
// (BFS augmenting paths). Throws UnknownSink for ids not listed as sinks.
int min_cut(const NetworkSpec& spec, const std::string& sink);

}  // namespace rlnclab
