#pragma once

// Prime-field arithmetic and the rank machinery every minrank and
// decodability query is built on.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace eicp::gf {

using Elem = std::uint8_t;

/// Order q of a prime field F_q, 2 <= q <= 251.
class FieldOrder {
public:
    /// Throws FieldError unless q is a prime in [2, 251].
    explicit FieldOrder(unsigned q);

    [[nodiscard]] unsigned value() const noexcept { return q_; }

    [[nodiscard]] Elem reduce(long long v) const noexcept {
        long long r = v % static_cast<long long>(q_);
        return static_cast<Elem>(r < 0 ? r + q_ : r);
    }
    [[nodiscard]] Elem add(Elem a, Elem b) const noexcept {
        unsigned s = unsigned{a} + b;
        return static_cast<Elem>(s >= q_ ? s - q_ : s);
    }
    [[nodiscard]] Elem sub(Elem a, Elem b) const noexcept {
        return static_cast<Elem>(a >= b ? a - b : a + q_ - b);
    }
    [[nodiscard]] Elem neg(Elem a) const noexcept { return a == 0 ? 0 : static_cast<Elem>(q_ - a); }
    [[nodiscard]] Elem mul(Elem a, Elem b) const noexcept {
        return static_cast<Elem>((unsigned{a} * b) % q_);
    }
    /// Throws FieldError for a = 0.
    [[nodiscard]] Elem inv(Elem a) const;

    friend bool operator==(FieldOrder, FieldOrder) = default;

private:
    std::uint8_t q_;
};

[[nodiscard]] bool is_prime(unsigned n) noexcept;

/// b with a*b = 1 in F_q.
[[nodiscard]] Elem field_inv(Elem a, FieldOrder q);

class GfVector {
public:
    GfVector(FieldOrder q, std::size_t length);
    /// Coordinates are reduced modulo q.
    GfVector(FieldOrder q, std::span<const long long> coords);
    GfVector(FieldOrder q, std::initializer_list<long long> coords);

    static GfVector unit(FieldOrder q, std::size_t length, std::size_t i);

    [[nodiscard]] FieldOrder field() const noexcept { return q_; }
    [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
    [[nodiscard]] Elem operator[](std::size_t i) const { return coords_[i]; }
    void set(std::size_t i, long long v) { coords_.at(i) = q_.reduce(v); }
    [[nodiscard]] std::span<const Elem> coords() const noexcept { return coords_; }

    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] std::vector<std::size_t> support() const;
    /// x ◁ S: every nonzero coordinate lies in the sorted index set S.
    [[nodiscard]] bool supported_in(std::span<const std::size_t> sorted_set) const;
    [[nodiscard]] std::optional<std::size_t> first_nonzero() const noexcept;

    /// this += s * other
    void add_scaled(const GfVector& other, Elem s);
    void scale(Elem s);
    /// Scales so the first nonzero coordinate is 1. No-op on zero.
    void normalize();

    friend bool operator==(const GfVector& a, const GfVector& b) {
        return a.q_ == b.q_ && a.coords_ == b.coords_;
    }
    friend std::strong_ordering operator<=>(const GfVector& a, const GfVector& b) {
        return a.coords_ <=> b.coords_;
    }

private:
    FieldOrder q_;
    std::vector<Elem> coords_;
};

class GfMatrix {
public:
    GfMatrix(FieldOrder q, std::size_t rows, std::size_t cols);

    /// Stacks vectors of equal length as rows.
    static GfMatrix from_rows(FieldOrder q, std::size_t cols, std::span<const GfVector> rows);
    /// Places vectors of equal length side by side as columns.
    static GfMatrix from_columns(FieldOrder q, std::size_t rows, std::span<const GfVector> cols);

    [[nodiscard]] FieldOrder field() const noexcept { return q_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] Elem at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, long long v) { entries_.at(r * cols_ + c) = q_.reduce(v); }

    [[nodiscard]] GfVector row(std::size_t r) const;
    [[nodiscard]] GfVector column(std::size_t c) const;
    [[nodiscard]] GfMatrix transpose() const;

    friend bool operator==(const GfMatrix&, const GfMatrix&) = default;

private:
    FieldOrder q_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> entries_;
};

/// Row rank over F_q.
[[nodiscard]] std::size_t rank(const GfMatrix& m);

/// Some x with a * x = b, free variables set to zero; nullopt if inconsistent.
[[nodiscard]] std::optional<GfVector> solve(const GfMatrix& a, const GfVector& b);

/// Incrementally grown row space kept in reduced row-echelon form: every row
/// has a leading 1 at its pivot and zeros in all other rows' pivot columns.
/// Rows are stored flat so copies into preallocated search frames do not
/// reallocate.
class EchelonBasis {
public:
    EchelonBasis(FieldOrder q, std::size_t dim);

    [[nodiscard]] FieldOrder field() const noexcept { return q_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t rank() const noexcept { return pivots_.size(); }
    [[nodiscard]] std::span<const std::size_t> pivots() const noexcept { return pivots_; }
    [[nodiscard]] GfVector row(std::size_t k) const;

    /// Adds v to the spanning set. Returns true iff the rank grew.
    bool insert(const GfVector& v);
    /// Value form of insert: the receiver is left untouched.
    [[nodiscard]] std::pair<EchelonBasis, bool> inserted(const GfVector& v) const;
    [[nodiscard]] bool in_span(const GfVector& v) const;
    /// Residual of v after elimination against the basis.
    [[nodiscard]] GfVector reduce(GfVector v) const;

private:
    void check(const GfVector& v) const;
    void reduce_in_place(std::span<Elem> v) const;

    FieldOrder q_;
    std::size_t dim_;
    std::vector<Elem> rows_;  // rank() x dim_, ordered by pivot
    std::vector<std::size_t> pivots_;
};

} // namespace eicp::gf
