#include "rlnclab/field.hpp"

#include <algorithm>
#include <cctype>

namespace rlnclab {

namespace {

// Polynomials over GF(p) as coefficient vectors, constant term first, no
// trailing zeros (the zero polynomial is the empty vector).

void trim(std::vector<std::uint32_t>& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo monic g.
std::vector<std::uint32_t> poly_rem(std::vector<std::uint32_t> f, const std::vector<std::uint32_t>& g,
                                    std::uint64_t p) {
    trim(f);
    const std::size_t dg = g.size() - 1;
    while (f.size() > dg) {
        const std::uint64_t lead = f.back();
        const std::size_t shift = f.size() - 1 - dg;
        if (lead != 0) {
            for (std::size_t i = 0; i <= dg; ++i) {
                std::uint64_t v = f[shift + i] + p - (lead * g[i]) % p;
                f[shift + i] = static_cast<std::uint32_t>(v % p);
            }
        }
        f.pop_back();
        trim(f);
    }
    return f;
}

bool is_irreducible(const std::vector<std::uint32_t>& f, std::uint64_t p) {
    const std::size_t m = f.size() - 1;
    if (f[0] == 0) return false;  // divisible by x
    // Trial division by every monic polynomial of degree 1..m/2.
    for (std::size_t d = 1; 2 * d <= m; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t v = 0; v < count; ++v) {
            std::vector<std::uint32_t> g(d + 1, 0);
            std::uint64_t t = v;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            g[d] = 1;
            if (poly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

// Lexicographically smallest monic irreducible of degree m over GF(p),
// coefficient lists compared low-degree-first.
std::vector<std::uint32_t> canonical_modulus(std::uint64_t p, std::uint32_t m) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < m; ++i) count *= p;
    for (std::uint64_t v = 0; v < count; ++v) {
        std::vector<std::uint32_t> f(m + 1, 0);
        // v's most significant base-p digit is the constant term, so
        // increasing v walks the coefficient lists in lexicographic order.
        std::uint64_t t = v;
        for (std::uint32_t i = m; i-- > 0;) {
            f[i] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        f[m] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw Error("no irreducible polynomial found (unreachable for valid p, m)");
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // Extended Euclid on (a, p), p prime, a != 0.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

bool factor_prime_power(std::uint64_t q, std::uint64_t& p, std::uint32_t& m) {
    if (q < 2) return false;
    std::uint64_t x = q;
    std::uint64_t factor = 0;
    for (std::uint64_t d = 2; d * d <= x; ++d) {
        if (x % d == 0) {
            factor = d;
            break;
        }
    }
    if (factor == 0) {  // q is prime
        p = q;
        m = 1;
        return true;
    }
    p = factor;
    m = 0;
    while (x % factor == 0) {
        x /= factor;
        ++m;
    }
    return x == 1;
}

Field::Field(Private, std::uint64_t p, std::uint32_t m, std::uint64_t q,
             std::vector<std::uint32_t> modulus)
    : p_(p), m_(m), q_(q), modulus_(std::move(modulus)) {
    if (q_ <= kTableLimit) build_tables();
}

FieldPtr Field::create(std::uint64_t p, std::uint32_t m, std::uint64_t max_order) {
    if (!is_prime_u64(p))
        throw NonPrimeCharacteristic("characteristic " + std::to_string(p) + " is not prime");
    if (m < 1) throw DegreeOutOfRange("extension degree must be >= 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
        if (q > max_order / p)
            throw OrderTooLarge("field order " + std::to_string(p) + "^" + std::to_string(m) +
                                " exceeds maximum " + std::to_string(max_order));
        q *= p;
    }
    std::vector<std::uint32_t> modulus;
    if (m > 1) modulus = canonical_modulus(p, m);
    return std::make_shared<Field>(Private{}, p, m, q, std::move(modulus));
}

FieldPtr Field::of_order(std::uint64_t q, std::uint64_t max_order) {
    std::uint64_t p = 0;
    std::uint32_t m = 0;
    if (!factor_prime_power(q, p, m))
        throw NonPrimeCharacteristic("field order " + std::to_string(q) +
                                     " is not a prime power");
    return create(p, m, max_order);
}

std::uint32_t Field::add_slow(std::uint32_t a, std::uint32_t b) const {
    if (m_ == 1) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + b) % p_);
    std::uint32_t result = 0;
    std::uint64_t scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        std::uint64_t da = (a / scale) % p_;
        std::uint64_t db = (b / scale) % p_;
        result += static_cast<std::uint32_t>(((da + db) % p_) * scale);
        scale *= p_;
    }
    return result;
}

std::uint32_t Field::neg_slow(std::uint32_t a) const {
    if (m_ == 1) return a == 0 ? 0 : static_cast<std::uint32_t>(p_ - a);
    std::uint32_t result = 0;
    std::uint64_t scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        std::uint64_t d = (a / scale) % p_;
        result += static_cast<std::uint32_t>(((p_ - d) % p_) * scale);
        scale *= p_;
    }
    return result;
}

std::uint32_t Field::mul_slow(std::uint32_t a, std::uint32_t b) const {
    if (m_ == 1) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
    // Schoolbook product of the coefficient vectors, reduced by the modulus.
    std::vector<std::uint32_t> da = coefficients(a), db = coefficients(b);
    std::vector<std::uint32_t> prod(2 * m_ - 1, 0);
    for (std::uint32_t i = 0; i < m_; ++i) {
        if (da[i] == 0) continue;
        for (std::uint32_t j = 0; j < m_; ++j)
            prod[i + j] = static_cast<std::uint32_t>(
                (prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
    }
    std::vector<std::uint32_t> rem = poly_rem(std::move(prod), modulus_, p_);
    std::uint32_t result = 0;
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < rem.size(); ++i) {
        result += static_cast<std::uint32_t>(rem[i] * scale);
        scale *= p_;
    }
    return result;
}

std::uint32_t Field::inv_slow(std::uint32_t a) const {
    if (m_ == 1) return static_cast<std::uint32_t>(mod_inverse(a, p_));
    // Extended Euclid over GF(p)[x] against the modulus.
    std::vector<std::uint32_t> r0 = modulus_;
    std::vector<std::uint32_t> r1 = coefficients(a);
    trim(r1);
    std::vector<std::uint32_t> t0, t1{1};
    auto scale_poly = [&](const std::vector<std::uint32_t>& f, std::uint64_t c) {
        std::vector<std::uint32_t> out(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = static_cast<std::uint32_t>((f[i] * c) % p_);
        trim(out);
        return out;
    };
    auto sub_poly = [&](std::vector<std::uint32_t> f, const std::vector<std::uint32_t>& g) {
        if (g.size() > f.size()) f.resize(g.size(), 0);
        for (std::size_t i = 0; i < g.size(); ++i)
            f[i] = static_cast<std::uint32_t>((f[i] + p_ - g[i]) % p_);
        trim(f);
        return f;
    };
    while (!r1.empty()) {
        // Divide r0 by r1.
        std::vector<std::uint32_t> q_poly(r0.size() > r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
        std::vector<std::uint32_t> rem = r0;
        const std::uint64_t lead_inv = mod_inverse(r1.back(), p_);
        while (rem.size() >= r1.size() && !rem.empty()) {
            const std::uint64_t c = (rem.back() * lead_inv) % p_;
            const std::size_t shift = rem.size() - r1.size();
            q_poly[shift] = static_cast<std::uint32_t>(c);
            for (std::size_t i = 0; i < r1.size(); ++i)
                rem[shift + i] =
                    static_cast<std::uint32_t>((rem[shift + i] + p_ - (c * r1[i]) % p_) % p_);
            trim(rem);
            if (rem.size() <= shift) break;
        }
        trim(q_poly);
        // (r0, r1) <- (r1, r0 - q r1); same recurrence for t.
        std::vector<std::uint32_t> qt(q_poly.size() + t1.size(), 0);
        for (std::size_t i = 0; i < q_poly.size(); ++i) {
            if (q_poly[i] == 0) continue;
            for (std::size_t j = 0; j < t1.size(); ++j)
                qt[i + j] = static_cast<std::uint32_t>(
                    (qt[i + j] + static_cast<std::uint64_t>(q_poly[i]) * t1[j]) % p_);
        }
        trim(qt);
        std::vector<std::uint32_t> t2 = sub_poly(t0, qt);
        t0 = std::move(t1);
        t1 = std::move(t2);
        r0 = std::move(r1);
        r1 = std::move(rem);
    }
    // r0 is now the gcd, a nonzero constant since the modulus is irreducible.
    std::vector<std::uint32_t> result = scale_poly(t0, mod_inverse(r0[0], p_));
    std::uint32_t code = 0;
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < result.size(); ++i) {
        code += static_cast<std::uint32_t>(result[i] * scale);
        scale *= p_;
    }
    return code;
}

std::uint32_t Field::inv_code(std::uint32_t a) const {
    if (a == 0) throw InverseOfZero("inverse of zero in " + name());
    return inv_table_ ? inv_table_[a] : inv_slow(a);
}

void Field::build_tables() {
    const std::size_t q = q_;
    add_storage_.resize(q * q);
    mul_storage_.resize(q * q);
    neg_storage_.resize(q);
    inv_storage_.assign(q, 0);
    for (std::size_t a = 0; a < q; ++a) {
        neg_storage_[a] = neg_slow(static_cast<std::uint32_t>(a));
        for (std::size_t b = 0; b < q; ++b) {
            add_storage_[a * q + b] = add_slow(static_cast<std::uint32_t>(a),
                                               static_cast<std::uint32_t>(b));
            const std::uint32_t prod = mul_slow(static_cast<std::uint32_t>(a),
                                                static_cast<std::uint32_t>(b));
            mul_storage_[a * q + b] = prod;
            if (prod == 1) inv_storage_[a] = static_cast<std::uint32_t>(b);
        }
    }
    add_table_ = add_storage_.data();
    mul_table_ = mul_storage_.data();
    neg_table_ = neg_storage_.data();
    inv_table_ = inv_storage_.data();
}

std::vector<std::uint32_t> Field::coefficients(std::uint32_t code) const {
    std::vector<std::uint32_t> out(m_);
    std::uint64_t t = code;
    for (std::uint32_t i = 0; i < m_; ++i) {
        out[i] = static_cast<std::uint32_t>(t % p_);
        t /= p_;
    }
    return out;
}

FieldElement Field::element(std::uint64_t code) const {
    if (code >= q_)
        throw std::out_of_range("element code " + std::to_string(code) + " out of range for " +
                                name());
    return FieldElement(shared_from_this(), static_cast<std::uint32_t>(code));
}

FieldElement Field::element_from_coeffs(std::span<const std::uint32_t> coeffs) const {
    if (coeffs.size() != m_)
        throw std::out_of_range("coefficient vector must have length " + std::to_string(m_));
    std::uint64_t code = 0;
    std::uint64_t scale = 1;
    for (std::uint32_t c : coeffs) {
        if (c >= p_) throw std::out_of_range("coefficient not reduced modulo characteristic");
        code += c * scale;
        scale *= p_;
    }
    return element(code);
}

FieldElement Field::zero() const { return FieldElement(shared_from_this(), 0); }

FieldElement Field::one() const { return FieldElement(shared_from_this(), 1); }

FieldElement Field::sample(RandomStream& rng) const {
    return FieldElement(shared_from_this(), sample_code(rng));
}

namespace {

void require_same(const FieldElement& a, const FieldElement& b) {
    if (!a.field().same_field(b.field()))
        throw FieldMismatch("mixed operands from " + a.field().name() + " and " +
                            b.field().name());
}

}  // namespace

FieldElement add(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    return FieldElement(a.field_ptr(), a.field().add_code(a.code(), b.code()));
}

FieldElement sub(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    return FieldElement(a.field_ptr(), a.field().sub_code(a.code(), b.code()));
}

FieldElement mul(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    return FieldElement(a.field_ptr(), a.field().mul_code(a.code(), b.code()));
}

FieldElement neg(const FieldElement& a) {
    return FieldElement(a.field_ptr(), a.field().neg_code(a.code()));
}

FieldElement inv(const FieldElement& a) {
    return FieldElement(a.field_ptr(), a.field().inv_code(a.code()));
}

FieldElement zero(const FieldPtr& field) { return field->zero(); }

FieldElement one(const FieldPtr& field) { return field->one(); }

FieldElement sample_uniform(const FieldPtr& field, RandomStream& rng) {
    return field->sample(rng);
}

std::uint64_t parse_field_order(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::string digits;
    if (s.size() > 4 && s.substr(0, 3) == "gf(" && s.back() == ')') {
        digits = s.substr(3, s.size() - 4);
    } else {
        digits = s;
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        }))
        throw ParseError("cannot parse field '" + text + "'; expected gf(q)");
    std::uint64_t q = 0;
    for (char c : digits) {
        if (q > (UINT64_MAX - 9) / 10) throw ParseError("field order too large in '" + text + "'");
        q = q * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (q < 2) throw ParseError("field order must be at least 2, got '" + text + "'");
    return q;
}

FieldPtr parse_field(const std::string& text, std::uint64_t max_order) {
    return Field::of_order(parse_field_order(text), max_order);
}

}  // namespace rlnclab
