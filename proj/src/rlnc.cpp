#include "rlnclab/rlnc.hpp"

#include <algorithm>
#include <sstream>

namespace rlnclab {

std::shared_ptr<const CodingPlan> CodingPlan::build(const NetworkSpec& spec) {
    ValidationReport report = validate(spec);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "invalid network:";
        for (const auto& e : report.errors) msg << " " << e << ";";
        throw Error(msg.str());
    }

    auto plan = std::shared_ptr<CodingPlan>(new CodingPlan(spec));
    plan->width_ = spec.rate();
    plan->channel_ids_ = topological_order(spec);
    for (std::size_t i = 0; i < plan->channel_ids_.size(); ++i)
        plan->channel_index_.emplace(plan->channel_ids_[i], static_cast<int>(i));

    plan->terms_.resize(plan->channel_ids_.size());
    for (int ci = plan->width_; ci < plan->channel_count(); ++ci) {
        const std::string& out_id = plan->channel_ids_[static_cast<std::size_t>(ci)];
        const Channel* out = spec.find_channel(out_id);
        std::vector<const Channel*> in = spec.incoming_all(out->tail);
        std::sort(in.begin(), in.end(),
                  [](const Channel* a, const Channel* b) { return a->id < b->id; });
        for (const Channel* c : in) {
            const int pair = static_cast<int>(plan->pairs_.size());
            plan->pairs_.emplace_back(c->id, out_id);
            plan->pair_index_.emplace(std::make_pair(c->id, out_id), pair);
            plan->terms_[static_cast<std::size_t>(ci)].push_back(
                Term{plan->channel_index_.at(c->id), pair});
        }
    }

    plan->erasure_bits_.assign(plan->channel_ids_.size(), -1);
    for (const auto& c : spec.real_channels()) plan->real_ids_by_bit_.push_back(c.id);
    std::sort(plan->real_ids_by_bit_.begin(), plan->real_ids_by_bit_.end());
    for (std::size_t bit = 0; bit < plan->real_ids_by_bit_.size(); ++bit)
        plan->erasure_bits_[static_cast<std::size_t>(
            plan->channel_index_.at(plan->real_ids_by_bit_[bit]))] = static_cast<int>(bit);

    for (const auto& sink : spec.sinks()) {
        SinkPlan sp;
        sp.id = sink;
        std::vector<const Channel*> in = spec.incoming_real(sink);
        std::sort(in.begin(), in.end(),
                  [](const Channel* a, const Channel* b) { return a->id < b->id; });
        for (const Channel* c : in) sp.incoming.push_back(plan->channel_index_.at(c->id));
        plan->sinks_.push_back(std::move(sp));
    }

    plan->is_butterfly_ = spec == NetworkSpec::butterfly();
    return plan;
}

int CodingPlan::channel_index(const std::string& id) const {
    auto it = channel_index_.find(id);
    return it == channel_index_.end() ? -1 : it->second;
}

int CodingPlan::pair_index(const std::string& in_id, const std::string& out_id) const {
    auto it = pair_index_.find(std::make_pair(in_id, out_id));
    return it == pair_index_.end() ? -1 : it->second;
}

CoefficientAssignment::CoefficientAssignment(std::shared_ptr<const CodingPlan> plan,
                                             FieldPtr field, std::vector<std::uint32_t> values)
    : plan_(std::move(plan)), field_(std::move(field)), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(plan_->pair_count()))
        throw CoefficientSetMismatch("expected " + std::to_string(plan_->pair_count()) +
                                     " coefficients, got " + std::to_string(values_.size()));
    for (std::uint32_t v : values_)
        if (v >= field_->order()) throw CoefficientSetMismatch("coefficient code out of range");
}

CoefficientAssignment CoefficientAssignment::from_entries(
    const NetworkSpec& spec, const FieldPtr& field,
    const std::map<std::pair<std::string, std::string>, FieldElement>& entries) {
    auto plan = CodingPlan::build(spec);
    if (entries.size() != static_cast<std::size_t>(plan->pair_count()))
        throw CoefficientSetMismatch("expected " + std::to_string(plan->pair_count()) +
                                     " entries, got " + std::to_string(entries.size()));
    std::vector<std::uint32_t> values(static_cast<std::size_t>(plan->pair_count()), 0);
    for (const auto& [key, element] : entries) {
        const int idx = plan->pair_index(key.first, key.second);
        if (idx < 0)
            throw CoefficientSetMismatch("(" + key.first + ", " + key.second +
                                         ") is not an adjacent pair of this network");
        if (!element.field().same_field(*field))
            throw FieldMismatch("entry (" + key.first + ", " + key.second +
                                ") belongs to a different field");
        values[static_cast<std::size_t>(idx)] = element.code();
    }
    return CoefficientAssignment(std::move(plan), field, std::move(values));
}

FieldElement CoefficientAssignment::at(const std::string& in_id,
                                       const std::string& out_id) const {
    const int idx = plan_->pair_index(in_id, out_id);
    if (idx < 0)
        throw CoefficientSetMismatch("(" + in_id + ", " + out_id +
                                     ") is not an adjacent pair of this network");
    return field_->element(values_[static_cast<std::size_t>(idx)]);
}

std::vector<std::pair<std::pair<std::string, std::string>, FieldElement>>
CoefficientAssignment::entries() const {
    std::vector<std::pair<std::pair<std::string, std::string>, FieldElement>> out;
    out.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
        out.emplace_back(plan_->pairs()[i], field_->element(values_[i]));
    return out;
}

CoefficientAssignment sample_code(const NetworkSpec& spec, const FieldPtr& field,
                                  RandomStream& rng) {
    auto plan = CodingPlan::build(spec);
    std::vector<std::uint32_t> values(static_cast<std::size_t>(plan->pair_count()));
    for (auto& v : values) v = field->sample_code(rng);
    return CoefficientAssignment(std::move(plan), field, std::move(values));
}

const std::vector<FieldElement>& KernelTable::at(const std::string& channel_id) const {
    auto it = kernels.find(channel_id);
    if (it == kernels.end()) throw Error("no kernel for channel '" + channel_id + "'");
    return it->second;
}

bool DecodingReport::all_succeed() const {
    return std::all_of(per_sink.begin(), per_sink.end(),
                       [](const auto& kv) { return kv.second.success; });
}

namespace detail {

void propagate_codes(const CodingPlan& plan, const Field& field, const std::uint32_t* coeffs,
                     std::uint64_t erased_mask, std::uint32_t* kernels) {
    const int w = plan.width();
    const int n = plan.channel_count();
    for (int k = 0; k < w; ++k)
        for (int r = 0; r < w; ++r) kernels[k * w + r] = (k == r) ? 1u : 0u;
    for (int ci = w; ci < n; ++ci) {
        std::uint32_t* out = kernels + static_cast<std::size_t>(ci) * w;
        const int bit = plan.erasure_bit(ci);
        if (bit >= 0 && (erased_mask >> bit) & 1u) {
            for (int r = 0; r < w; ++r) out[r] = 0;
            continue;
        }
        for (int r = 0; r < w; ++r) out[r] = 0;
        for (const CodingPlan::Term& term : plan.terms()[static_cast<std::size_t>(ci)]) {
            const std::uint32_t k = coeffs[term.pair];
            if (k == 0) continue;
            const std::uint32_t* src = kernels + static_cast<std::size_t>(term.src_channel) * w;
            for (int r = 0; r < w; ++r)
                out[r] = field.add_code(out[r], field.mul_code(k, src[r]));
        }
    }
}

int rank_codes(const Field& field, std::uint32_t* m, int rows, int cols) {
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r) {
            if (m[r * cols + col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < cols; ++c) std::swap(m[pivot * cols + c], m[rank * cols + c]);
        const std::uint32_t scale = field.inv_code(m[rank * cols + col]);
        for (int c = col; c < cols; ++c)
            m[rank * cols + c] = field.mul_code(scale, m[rank * cols + c]);
        for (int r = rank + 1; r < rows; ++r) {
            const std::uint32_t factor = m[r * cols + col];
            if (factor == 0) continue;
            for (int c = col; c < cols; ++c)
                m[r * cols + c] = field.sub_code(m[r * cols + c],
                                                 field.mul_code(factor, m[rank * cols + c]));
        }
        ++rank;
    }
    return rank;
}

int sink_rank(const CodingPlan& plan, const Field& field, const std::uint32_t* kernels,
              const CodingPlan::SinkPlan& sink, std::uint32_t* scratch) {
    const int w = plan.width();
    const int cols = static_cast<int>(sink.incoming.size());
    for (int c = 0; c < cols; ++c) {
        const std::uint32_t* col = kernels + static_cast<std::size_t>(sink.incoming[c]) * w;
        for (int r = 0; r < w; ++r) scratch[r * cols + c] = col[r];
    }
    return rank_codes(field, scratch, w, cols);
}

}  // namespace detail

namespace {

std::uint64_t erasure_mask_for(const CodingPlan& plan, const ErasurePattern& erasure) {
    std::uint64_t mask = 0;
    for (const auto& id : erasure.erased()) {
        const int ci = plan.channel_index(id);
        const int bit = ci < 0 ? -1 : plan.erasure_bit(ci);
        if (bit < 0) throw Error("erasure pattern names '" + id + "', not a real channel");
        mask |= 1ULL << bit;
    }
    return mask;
}

}  // namespace

KernelTable propagate(const NetworkSpec& spec, const CoefficientAssignment& code,
                      const ErasurePattern& erasure) {
    const CodingPlan& plan = code.plan();
    if (!(plan.spec() == spec))
        throw CoefficientSetMismatch("coefficient assignment was sampled for a different network");
    const std::uint64_t mask = erasure_mask_for(plan, erasure);

    const Field& field = *code.field();
    const int w = plan.width();
    std::vector<std::uint32_t> kernels(static_cast<std::size_t>(plan.channel_count()) * w);
    detail::propagate_codes(plan, field, code.values().data(), mask, kernels.data());

    KernelTable table;
    table.field = code.field();
    for (int ci = 0; ci < plan.channel_count(); ++ci) {
        std::vector<FieldElement> vec;
        vec.reserve(static_cast<std::size_t>(w));
        for (int r = 0; r < w; ++r)
            vec.push_back(code.field()->element(kernels[static_cast<std::size_t>(ci) * w + r]));
        table.kernels.emplace(plan.channel_ids()[static_cast<std::size_t>(ci)], std::move(vec));
    }
    return table;
}

DecodingReport decoding_report(const NetworkSpec& spec, const KernelTable& kernels) {
    const Field& field = *kernels.field;
    const int w = spec.rate();
    DecodingReport report;
    for (const auto& sink : spec.sinks()) {
        std::vector<const Channel*> in = spec.incoming_real(sink);
        std::sort(in.begin(), in.end(),
                  [](const Channel* a, const Channel* b) { return a->id < b->id; });
        SinkReport sr;
        sr.matrix.assign(static_cast<std::size_t>(w), {});
        std::vector<std::uint32_t> m(static_cast<std::size_t>(w) * in.size());
        for (std::size_t c = 0; c < in.size(); ++c) {
            const auto& kernel = kernels.at(in[c]->id);
            if (kernel.size() != static_cast<std::size_t>(w))
                throw Error("kernel width mismatch for channel '" + in[c]->id + "'");
            for (int r = 0; r < w; ++r) {
                sr.matrix[static_cast<std::size_t>(r)].push_back(kernel[static_cast<std::size_t>(r)]);
                m[static_cast<std::size_t>(r) * in.size() + c] =
                    kernel[static_cast<std::size_t>(r)].code();
            }
        }
        sr.rank = in.empty() ? 0
                             : detail::rank_codes(field, m.data(), w, static_cast<int>(in.size()));
        sr.success = sr.rank == w;
        report.per_sink.emplace(sink, std::move(sr));
    }
    return report;
}

bool structural_factorization_check(const CoefficientAssignment& code) {
    const CodingPlan& plan = code.plan();
    if (!plan.is_butterfly())
        throw NotButterfly("structural factorization is defined for the builtin butterfly only");
    const FieldPtr& field = code.field();
    const NetworkSpec& spec = plan.spec();

    auto k = [&](const char* in, const char* out) { return code.at(in, out); };

    // Source kernel K_s: columns are the global kernels of e1 and e2.
    const FieldElement ks[2][2] = {{k("d1", "e1"), k("d1", "e2")},
                                   {k("d2", "e1"), k("d2", "e2")}};
    const FieldElement z = field->zero();
    const FieldElement b1[2][2] = {{k("e1", "e3"), k("e1", "e4") * k("e4", "e7") * k("e7", "e8")},
                                   {z, k("e2", "e5") * k("e5", "e7") * k("e7", "e8")}};
    const FieldElement b2[2][2] = {{z, k("e1", "e4") * k("e4", "e7") * k("e7", "e9")},
                                   {k("e2", "e6"), k("e2", "e5") * k("e5", "e7") * k("e7", "e9")}};

    auto mat_mul = [&](const FieldElement (&a)[2][2], const FieldElement (&b)[2][2]) {
        std::vector<FieldElement> out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                out.push_back(a[r][0] * b[0][c] + a[r][1] * b[1][c]);
        return out;
    };

    KernelTable kernels = propagate(spec, code);
    auto sink_matrix = [&](const char* c0, const char* c1) {
        std::vector<FieldElement> out;
        for (int r = 0; r < 2; ++r) {
            out.push_back(kernels.at(c0)[static_cast<std::size_t>(r)]);
            out.push_back(kernels.at(c1)[static_cast<std::size_t>(r)]);
        }
        return out;
    };

    return mat_mul(ks, b1) == sink_matrix("e3", "e8") && mat_mul(ks, b2) == sink_matrix("e6", "e9");
}

}  // namespace rlnclab
