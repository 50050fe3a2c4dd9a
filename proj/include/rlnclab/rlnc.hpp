#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rlnclab/field.hpp"
#include "rlnclab/network.hpp"
#include "rlnclab/random.hpp"

namespace rlnclab {

// Compiled form of a network for kernel propagation. Channels are indexed in
// topological order with the w imaginary channels first; every adjacent
// channel pair (e_in, e_out) gets a stable index.
//
// The pair order is the reproducibility contract for coefficient sampling
// and enumeration: pairs are sorted by the topological position of the
// out-channel, then by the in-channel id. A seed therefore determines a
// sampled code exactly, independent of platform and worker count.
class CodingPlan {
public:
    struct Term {
        int src_channel;  // index of the incoming channel
        int pair;         // index into pairs()
    };
    struct SinkPlan {
        std::string id;
        std::vector<int> incoming;  // incoming real channels, id-sorted
    };

    // Validates the spec (throws Error listing the violations) and compiles it.
    static std::shared_ptr<const CodingPlan> build(const NetworkSpec& spec);

    const NetworkSpec& spec() const { return spec_; }
    int width() const { return width_; }
    int channel_count() const { return static_cast<int>(channel_ids_.size()); }
    int real_count() const { return channel_count() - width_; }
    int pair_count() const { return static_cast<int>(pairs_.size()); }

    const std::vector<std::string>& channel_ids() const { return channel_ids_; }
    int channel_index(const std::string& id) const;

    // Per channel index, the weighted contributions from upstream channels.
    const std::vector<std::vector<Term>>& terms() const { return terms_; }

    const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
    int pair_index(const std::string& in_id, const std::string& out_id) const;  // -1 if absent

    // Erasure mask bit for a channel index; -1 for imaginary channels.
    // Bits are assigned to real channels in lexicographic id order.
    int erasure_bit(int channel_index) const { return erasure_bits_[channel_index]; }
    const std::vector<std::string>& real_ids_by_bit() const { return real_ids_by_bit_; }

    const std::vector<SinkPlan>& sinks() const { return sinks_; }

    bool is_butterfly() const { return is_butterfly_; }

private:
    NetworkSpec spec_;
    int width_ = 0;
    std::vector<std::string> channel_ids_;
    std::map<std::string, int> channel_index_;
    std::vector<std::vector<Term>> terms_;
    std::vector<std::pair<std::string, std::string>> pairs_;
    std::map<std::pair<std::string, std::string>, int> pair_index_;
    std::vector<int> erasure_bits_;
    std::vector<std::string> real_ids_by_bit_;
    std::vector<SinkPlan> sinks_;
    bool is_butterfly_ = false;

    explicit CodingPlan(NetworkSpec spec) : spec_(std::move(spec)) {}
};

// One realization of all local encoding coefficients: one field element per
// adjacent channel pair, stored in the plan's canonical pair order.
class CoefficientAssignment {
public:
    CoefficientAssignment(std::shared_ptr<const CodingPlan> plan, FieldPtr field,
                          std::vector<std::uint32_t> values);

    // Builds an assignment from explicit (in, out) -> element entries. The
    // entry set must cover exactly the adjacent pairs of the network.
    static CoefficientAssignment from_entries(
        const NetworkSpec& spec, const FieldPtr& field,
        const std::map<std::pair<std::string, std::string>, FieldElement>& entries);

    const CodingPlan& plan() const { return *plan_; }
    std::shared_ptr<const CodingPlan> plan_ptr() const { return plan_; }
    const FieldPtr& field() const { return field_; }

    std::size_t size() const { return values_.size(); }
    const std::vector<std::uint32_t>& values() const { return values_; }

    FieldElement at(const std::string& in_id, const std::string& out_id) const;
    std::vector<std::pair<std::pair<std::string, std::string>, FieldElement>> entries() const;

private:
    std::shared_ptr<const CodingPlan> plan_;
    FieldPtr field_;
    std::vector<std::uint32_t> values_;
};

// Set of failed real channels.
class ErasurePattern {
public:
    ErasurePattern() = default;
    explicit ErasurePattern(std::set<std::string> erased) : erased_(std::move(erased)) {}

    const std::set<std::string>& erased() const { return erased_; }
    bool contains(const std::string& id) const { return erased_.count(id) != 0; }
    bool empty() const { return erased_.empty(); }

private:
    std::set<std::string> erased_;
};

// Active global encoding kernels per channel, as vectors of length w.
struct KernelTable {
    FieldPtr field;
    std::map<std::string, std::vector<FieldElement>> kernels;

    const std::vector<FieldElement>& at(const std::string& channel_id) const;
};

struct SinkReport {
    std::vector<std::vector<FieldElement>> matrix;  // w rows x |incoming| columns
    int rank = 0;
    bool success = false;  // rank == w
};

struct DecodingReport {
    std::map<std::string, SinkReport> per_sink;
    bool all_succeed() const;
};

// Draws every local encoding coefficient independently and uniformly from the
// field, in the plan's canonical pair order.
CoefficientAssignment sample_code(const NetworkSpec& spec, const FieldPtr& field,
                                  RandomStream& rng);

// Computes active global encoding kernels in topological order. An imaginary
// channel d_k carries the k-th standard basis vector. A real channel combines
// the active kernels of the channels entering its tail, weighted by its local
// coefficients; if the channel itself is erased the combination is discarded
// and the zero vector is emitted instead.
KernelTable propagate(const NetworkSpec& spec, const CoefficientAssignment& code,
                      const ErasurePattern& erasure = {});

// Per sink: decoding matrix whose columns are the kernels of the sink's
// incoming real channels in id order, with rank computed by exact Gaussian
// elimination over the field.
DecodingReport decoding_report(const NetworkSpec& spec, const KernelTable& kernels);

// Butterfly-only identity: the two decoding matrices factor through the
// source kernel as K_s * B1 and K_s * B2, where B1/B2 are built from the
// downstream coefficients alone. Returns whether both products match the
// propagated matrices entrywise (no erasures).
bool structural_factorization_check(const CoefficientAssignment& code);

namespace detail {

// Hot-path propagation over raw element codes. `kernels` must hold
// channel_count() * width() entries; erased_mask bit k refers to
// real_ids_by_bit()[k].
void propagate_codes(const CodingPlan& plan, const Field& field, const std::uint32_t* coeffs,
                     std::uint64_t erased_mask, std::uint32_t* kernels);

// Rank by Gaussian elimination over the field; destroys `m` (row-major).
int rank_codes(const Field& field, std::uint32_t* m, int rows, int cols);

// Rank of one sink's decoding matrix assembled from propagated kernels.
// `scratch` needs width() * incoming-size entries.
int sink_rank(const CodingPlan& plan, const Field& field, const std::uint32_t* kernels,
              const CodingPlan::SinkPlan& sink, std::uint32_t* scratch);

}  // namespace detail

}  // namespace rlnclab
