#include "eicp/gf.hpp"

#include "eicp/error.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace eicp::gf {

namespace {

constexpr unsigned kMaxOrder = 251;

// inverse[q][a] for every prime q <= 251, built once.
const std::array<std::array<Elem, 256>, 256>& inverse_table() {
    static const auto table = [] {
        std::array<std::array<Elem, 256>, 256> t{};
        for (unsigned q = 2; q <= kMaxOrder; ++q) {
            if (!is_prime(q)) {
                continue;
            }
            for (unsigned a = 1; a < q; ++a) {
                for (unsigned b = 1; b < q; ++b) {
                    if ((a * b) % q == 1) {
                        t[q][a] = static_cast<Elem>(b);
                        break;
                    }
                }
            }
        }
        return t;
    }();
    return table;
}

} // namespace

bool is_prime(unsigned n) noexcept {
    if (n < 2) {
        return false;
    }
    for (unsigned d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

FieldOrder::FieldOrder(unsigned q) : q_(0) {
    if (q > kMaxOrder || !is_prime(q)) {
        throw FieldError("field order must be prime (2 <= q <= 251), got " + std::to_string(q));
    }
    q_ = static_cast<std::uint8_t>(q);
}

Elem FieldOrder::inv(Elem a) const {
    if (a % q_ == 0) {
        throw FieldError("inversion of zero in F_" + std::to_string(q_));
    }
    return inverse_table()[q_][a % q_];
}

Elem field_inv(Elem a, FieldOrder q) { return q.inv(a); }

// ---------------------------------------------------------------- GfVector

GfVector::GfVector(FieldOrder q, std::size_t length) : q_(q), coords_(length, 0) {}

GfVector::GfVector(FieldOrder q, std::span<const long long> coords) : q_(q), coords_(coords.size()) {
    std::ranges::transform(coords, coords_.begin(), [q](long long v) { return q.reduce(v); });
}

GfVector::GfVector(FieldOrder q, std::initializer_list<long long> coords)
    : GfVector(q, std::span<const long long>(coords.begin(), coords.size())) {}

GfVector GfVector::unit(FieldOrder q, std::size_t length, std::size_t i) {
    GfVector v(q, length);
    v.coords_.at(i) = 1;
    return v;
}

bool GfVector::is_zero() const noexcept {
    return std::ranges::all_of(coords_, [](Elem e) { return e == 0; });
}

std::vector<std::size_t> GfVector::support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] != 0) {
            s.push_back(i);
        }
    }
    return s;
}

bool GfVector::supported_in(std::span<const std::size_t> sorted_set) const {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] != 0 && !std::ranges::binary_search(sorted_set, i)) {
            return false;
        }
    }
    return true;
}

std::optional<std::size_t> GfVector::first_nonzero() const noexcept {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] != 0) {
            return i;
        }
    }
    return std::nullopt;
}

void GfVector::add_scaled(const GfVector& other, Elem s) {
    if (other.q_ != q_ || other.size() != size()) {
        throw DimensionMismatch("add_scaled: vectors differ in field or length");
    }
    if (s == 0) {
        return;
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        coords_[i] = q_.add(coords_[i], q_.mul(s, other.coords_[i]));
    }
}

void GfVector::scale(Elem s) {
    for (auto& c : coords_) {
        c = q_.mul(c, s);
    }
}

void GfVector::normalize() {
    if (auto lead = first_nonzero()) {
        scale(q_.inv(coords_[*lead]));
    }
}

// ---------------------------------------------------------------- GfMatrix

GfMatrix::GfMatrix(FieldOrder q, std::size_t rows, std::size_t cols)
    : q_(q), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

GfMatrix GfMatrix::from_rows(FieldOrder q, std::size_t cols, std::span<const GfVector> rows) {
    GfMatrix m(q, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols || rows[r].field() != q) {
            throw DimensionMismatch("from_rows: row " + std::to_string(r) + " has wrong length or field");
        }
        std::ranges::copy(rows[r].coords(), m.entries_.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    return m;
}

GfMatrix GfMatrix::from_columns(FieldOrder q, std::size_t rows, std::span<const GfVector> cols) {
    GfMatrix m(q, rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != rows || cols[c].field() != q) {
            throw DimensionMismatch("from_columns: column " + std::to_string(c) + " has wrong length or field");
        }
        for (std::size_t r = 0; r < rows; ++r) {
            m.entries_[r * m.cols_ + c] = cols[c][r];
        }
    }
    return m;
}

GfVector GfMatrix::row(std::size_t r) const {
    GfVector v(q_, cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        v.set(c, at(r, c));
    }
    return v;
}

GfVector GfMatrix::column(std::size_t c) const {
    GfVector v(q_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        v.set(r, at(r, c));
    }
    return v;
}

GfMatrix GfMatrix::transpose() const {
    GfMatrix t(q_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t.entries_[c * rows_ + r] = at(r, c);
        }
    }
    return t;
}

namespace {

// Forward elimination to row-echelon form with normalized pivots. Pivot for a
// column is the first nonzero entry at or below the current row. Returns the
// pivot columns in order.
std::vector<std::size_t> eliminate(FieldOrder q, std::size_t rows, std::size_t cols, std::vector<Elem>& e,
                                   std::size_t pivot_cols_limit, bool full_reduce) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_cols_limit && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && e[p * cols + c] == 0) {
            ++p;
        }
        if (p == rows) {
            continue;
        }
        if (p != r) {
            std::swap_ranges(e.begin() + static_cast<std::ptrdiff_t>(p * cols),
                             e.begin() + static_cast<std::ptrdiff_t>((p + 1) * cols),
                             e.begin() + static_cast<std::ptrdiff_t>(r * cols));
        }
        Elem s = q.inv(e[r * cols + c]);
        for (std::size_t k = c; k < cols; ++k) {
            e[r * cols + k] = q.mul(e[r * cols + k], s);
        }
        for (std::size_t i = full_reduce ? 0 : r + 1; i < rows; ++i) {
            if (i == r) {
                continue;
            }
            Elem f = e[i * cols + c];
            if (f == 0) {
                continue;
            }
            for (std::size_t k = c; k < cols; ++k) {
                e[i * cols + k] = q.sub(e[i * cols + k], q.mul(f, e[r * cols + k]));
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::size_t rank(const GfMatrix& m) {
    std::vector<Elem> e(m.rows() * m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            e[r * m.cols() + c] = m.at(r, c);
        }
    }
    return eliminate(m.field(), m.rows(), m.cols(), e, m.cols(), false).size();
}

std::optional<GfVector> solve(const GfMatrix& a, const GfVector& b) {
    if (b.size() != a.rows() || b.field() != a.field()) {
        throw DimensionMismatch("solve: right-hand side does not match matrix");
    }
    const FieldOrder q = a.field();
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols() + 1;
    std::vector<Elem> e(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            e[r * cols + c] = a.at(r, c);
        }
        e[r * cols + a.cols()] = b[r];
    }
    auto pivots = eliminate(q, rows, cols, e, a.cols(), true);
    for (std::size_t r = pivots.size(); r < rows; ++r) {
        if (e[r * cols + a.cols()] != 0) {
            return std::nullopt;
        }
    }
    GfVector x(q, a.cols());
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        x.set(pivots[k], e[k * cols + a.cols()]);
    }
    return x;
}

// ------------------------------------------------------------ EchelonBasis

EchelonBasis::EchelonBasis(FieldOrder q, std::size_t dim) : q_(q), dim_(dim) {}

GfVector EchelonBasis::row(std::size_t k) const {
    GfVector v(q_, dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
        v.set(c, rows_.at(k * dim_ + c));
    }
    return v;
}

void EchelonBasis::check(const GfVector& v) const {
    if (v.size() != dim_ || v.field() != q_) {
        throw DimensionMismatch("echelon basis: vector of length " + std::to_string(v.size()) + " over F_" +
                                std::to_string(v.field().value()) + " against basis of dimension " +
                                std::to_string(dim_) + " over F_" + std::to_string(q_.value()));
    }
}

void EchelonBasis::reduce_in_place(std::span<Elem> v) const {
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
        Elem f = v[pivots_[k]];
        if (f == 0) {
            continue;
        }
        const Elem* row = rows_.data() + k * dim_;
        for (std::size_t c = pivots_[k]; c < dim_; ++c) {
            if (row[c] != 0) {
                v[c] = q_.sub(v[c], q_.mul(f, row[c]));
            }
        }
    }
}

GfVector EchelonBasis::reduce(GfVector v) const {
    check(v);
    std::vector<Elem> buf(v.coords().begin(), v.coords().end());
    reduce_in_place(buf);
    for (std::size_t c = 0; c < dim_; ++c) {
        v.set(c, buf[c]);
    }
    return v;
}

bool EchelonBasis::in_span(const GfVector& v) const {
    check(v);
    std::vector<Elem> buf(v.coords().begin(), v.coords().end());
    reduce_in_place(buf);
    return std::ranges::all_of(buf, [](Elem e) { return e == 0; });
}

bool EchelonBasis::insert(const GfVector& v) {
    check(v);
    std::vector<Elem> buf(v.coords().begin(), v.coords().end());
    reduce_in_place(buf);
    auto lead = std::ranges::find_if(buf, [](Elem e) { return e != 0; });
    if (lead == buf.end()) {
        return false;
    }
    const auto p = static_cast<std::size_t>(lead - buf.begin());
    const Elem s = q_.inv(*lead);
    for (std::size_t c = p; c < dim_; ++c) {
        buf[c] = q_.mul(buf[c], s);
    }
    // Clear the new pivot column from the existing rows.
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
        Elem* row = rows_.data() + k * dim_;
        Elem f = row[p];
        if (f == 0) {
            continue;
        }
        for (std::size_t c = p; c < dim_; ++c) {
            if (buf[c] != 0) {
                row[c] = q_.sub(row[c], q_.mul(f, buf[c]));
            }
        }
    }
    auto pos = std::ranges::upper_bound(pivots_, p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos * static_cast<std::ptrdiff_t>(dim_), buf.begin(), buf.end());
    return true;
}

std::pair<EchelonBasis, bool> EchelonBasis::inserted(const GfVector& v) const {
    EchelonBasis copy = *this;
    bool grew = copy.insert(v);
    return {std::move(copy), grew};
}

} // namespace eicp::gf
