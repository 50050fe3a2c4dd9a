#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rlnclab/errors.hpp"
#include "rlnclab/random.hpp"

namespace rlnclab {

class Field;
class FieldElement;
using FieldPtr = std::shared_ptr<const Field>;

// A finite field GF(p^m) with exact arithmetic on element codes.
//
// An element code is an integer in [0, q): the canonical representative
// itself for prime fields, and the base-p packing of the coefficient vector
// (constant term in the least significant digit) for extension fields.
//
// Extension fields use the canonical modulus polynomial: the
// lexicographically smallest monic irreducible of degree m over GF(p), with
// coefficient lists compared low-degree-first. This makes field construction
// reproducible without external polynomial tables.
//
// For q <= 256 full multiplication/addition/inverse tables are precomputed;
// larger fields fall back to on-the-fly polynomial arithmetic. Fields are
// immutable after construction and safe to share across threads.
class Field : public std::enable_shared_from_this<Field> {
public:
    static constexpr std::uint64_t kDefaultMaxOrder = 1ULL << 20;
    static constexpr std::uint64_t kTableLimit = 256;

    // GF(p^m). Rejects composite p, m < 1, and p^m beyond max_order.
    static FieldPtr create(std::uint64_t p, std::uint32_t m,
                           std::uint64_t max_order = kDefaultMaxOrder);

    // GF(q) for a prime power q; factors q and rejects anything else.
    static FieldPtr of_order(std::uint64_t q, std::uint64_t max_order = kDefaultMaxOrder);

    std::uint64_t characteristic() const { return p_; }
    std::uint32_t degree() const { return m_; }
    std::uint64_t order() const { return q_; }

    // Modulus polynomial coefficients, constant term first, length m+1.
    // Empty for prime fields.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    bool same_field(const Field& other) const { return p_ == other.p_ && m_ == other.m_; }
    std::string name() const { return "gf(" + std::to_string(q_) + ")"; }

    // Arithmetic on raw element codes; used by hot loops.
    std::uint32_t add_code(std::uint32_t a, std::uint32_t b) const {
        return add_table_ ? add_table_[a * q_ + b] : add_slow(a, b);
    }
    std::uint32_t mul_code(std::uint32_t a, std::uint32_t b) const {
        return mul_table_ ? mul_table_[a * q_ + b] : mul_slow(a, b);
    }
    std::uint32_t neg_code(std::uint32_t a) const {
        return neg_table_ ? neg_table_[a] : neg_slow(a);
    }
    std::uint32_t sub_code(std::uint32_t a, std::uint32_t b) const {
        return add_code(a, neg_code(b));
    }
    std::uint32_t inv_code(std::uint32_t a) const;

    // Uniform draw over all q element codes, rejection-sampled from the
    // stream's native 64-bit word so each code has probability exactly 1/q.
    std::uint32_t sample_code(RandomStream& rng) const {
        return static_cast<std::uint32_t>(rng.uniform_below(q_));
    }

    FieldElement element(std::uint64_t code) const;
    FieldElement element_from_coeffs(std::span<const std::uint32_t> coeffs) const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement sample(RandomStream& rng) const;

    // Coefficient vector of a code, length m, constant term first.
    std::vector<std::uint32_t> coefficients(std::uint32_t code) const;

private:
    struct Private {};

public:
    Field(Private, std::uint64_t p, std::uint32_t m, std::uint64_t q,
          std::vector<std::uint32_t> modulus);

private:
    std::uint32_t add_slow(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg_slow(std::uint32_t a) const;
    std::uint32_t inv_slow(std::uint32_t a) const;
    void build_tables();

    std::uint64_t p_;
    std::uint32_t m_;
    std::uint64_t q_;
    std::vector<std::uint32_t> modulus_;

    std::vector<std::uint32_t> add_storage_;
    std::vector<std::uint32_t> mul_storage_;
    std::vector<std::uint32_t> neg_storage_;
    std::vector<std::uint32_t> inv_storage_;
    const std::uint32_t* add_table_ = nullptr;
    const std::uint32_t* mul_table_ = nullptr;
    const std::uint32_t* neg_table_ = nullptr;
    const std::uint32_t* inv_table_ = nullptr;
};

// An element of a specific field. Immutable; cross-field operations throw
// FieldMismatch.
class FieldElement {
public:
    FieldElement(FieldPtr field, std::uint32_t code) : field_(std::move(field)), code_(code) {}

    std::uint32_t code() const { return code_; }
    const Field& field() const { return *field_; }
    FieldPtr field_ptr() const { return field_; }
    std::vector<std::uint32_t> coefficients() const { return field_->coefficients(code_); }
    bool is_zero() const { return code_ == 0; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.field_->same_field(*b.field_) && a.code_ == b.code_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

private:
    FieldPtr field_;
    std::uint32_t code_;
};

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldElement& a);
FieldElement inv(const FieldElement& a);
FieldElement zero(const FieldPtr& field);
FieldElement one(const FieldPtr& field);
FieldElement sample_uniform(const FieldPtr& field, RandomStream& rng);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return add(a, b); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return sub(a, b); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return mul(a, b); }
inline FieldElement operator-(const FieldElement& a) { return neg(a); }

// Parses the "gf(q)" syntax and realizes the field; rejects non-prime-powers.
FieldPtr parse_field(const std::string& text, std::uint64_t max_order = Field::kDefaultMaxOrder);

// Parses "gf(q)" (or a bare integer) into just the order, for the formula
// paths that accept any integer q >= 2 without realizing a field.
std::uint64_t parse_field_order(const std::string& text);

bool is_prime_u64(std::uint64_t n);

// Factors q as p^m; returns false when q is not a prime power.
bool factor_prime_power(std::uint64_t q, std::uint64_t& p, std::uint32_t& m);

}  // namespace rlnclab
