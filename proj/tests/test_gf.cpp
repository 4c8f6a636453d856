#include "eicp/error.hpp"
#include "eicp/gf.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace eicp;
using gf::FieldOrder;
using gf::GfMatrix;
using gf::GfVector;

namespace {

GfMatrix random_matrix(std::mt19937_64& rng, FieldOrder q, std::size_t r, std::size_t c) {
    GfMatrix m(q, r, c);
    std::uniform_int_distribution<unsigned> e(0, q.value() - 1);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            m.set(i, j, e(rng));
        }
    }
    return m;
}

std::vector<std::vector<unsigned>> plain(const GfMatrix& m) {
    std::vector<std::vector<unsigned>> out(m.rows(), std::vector<unsigned>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[i][j] = m.at(i, j);
        }
    }
    return out;
}

} // namespace

TEST_CASE("field order accepts primes up to 251 only") {
    CHECK_NOTHROW(FieldOrder(2));
    CHECK_NOTHROW(FieldOrder(251));
    CHECK_THROWS_AS(FieldOrder(4), FieldError);
    CHECK_THROWS_AS(FieldOrder(1), FieldError);
    CHECK_THROWS_AS(FieldOrder(257), FieldError);
}

TEST_CASE("field inverses") {
    for (unsigned q : {2U, 3U, 5U, 7U, 251U}) {
        const FieldOrder f(q);
        for (unsigned a = 1; a < q; ++a) {
            CHECK(f.mul(static_cast<gf::Elem>(a), f.inv(static_cast<gf::Elem>(a))) == 1);
        }
        CHECK_THROWS_AS((void)f.inv(0), FieldError);
    }
}

TEST_CASE("vector helpers") {
    const FieldOrder q(5);
    GfVector v(q, {0, 3, 0, 7});
    CHECK(v[3] == 2);
    CHECK(v.support() == std::vector<std::size_t>{1, 3});
    CHECK(v.first_nonzero() == 1);
    v.normalize();
    CHECK(v[1] == 1);
    CHECK(GfVector::unit(q, 4, 2).support() == std::vector<std::size_t>{2});
    CHECK(v.supported_in(std::vector<std::size_t>{1, 3}));
    CHECK_FALSE(v.supported_in(std::vector<std::size_t>{1}));
}

TEST_CASE("rank of known matrices") {
    const FieldOrder q2(2);
    const std::vector<GfVector> rows{GfVector(q2, {1, 1, 0}), GfVector(q2, {0, 1, 1}), GfVector(q2, {1, 0, 1})};
    CHECK(gf::rank(GfMatrix::from_rows(q2, 3, rows)) == 2);
    const FieldOrder q3(3);
    const std::vector<GfVector> rows3{GfVector(q3, {1, 1, 0}), GfVector(q3, {0, 1, 1}), GfVector(q3, {1, 0, 1})};
    CHECK(gf::rank(GfMatrix::from_rows(q3, 3, rows3)) == 3);
    CHECK(gf::rank(GfMatrix(q3, 0, 4)) == 0);
}

TEST_CASE("rank agrees with span counting on small random matrices") {
    std::mt19937_64 rng(11);
    for (unsigned qv : {2U, 3U, 5U}) {
        const FieldOrder q(qv);
        for (int t = 0; t < 150; ++t) {
            const std::size_t r = 1 + rng() % 4;
            const std::size_t c = 1 + rng() % 5;
            const auto m = random_matrix(rng, q, r, c);
            CHECK(gf::rank(m) == testsupport::span_count_rank(qv, plain(m)));
        }
    }
}

TEST_CASE("transpose preserves rank and echelon basis matches rank") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const FieldOrder q(t % 2 ? 3 : 7);
        const auto m = random_matrix(rng, q, 1 + rng() % 6, 1 + rng() % 6);
        CHECK(gf::rank(m) == gf::rank(m.transpose()));
        gf::EchelonBasis b(q, m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            b.insert(m.row(i));
        }
        CHECK(b.rank() == gf::rank(m));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            CHECK(b.in_span(m.row(i)));
            CHECK(b.reduce(m.row(i)).is_zero());
        }
    }
}

TEST_CASE("echelon basis insert reports growth and stays reduced") {
    const FieldOrder q(3);
    gf::EchelonBasis b(q, 3);
    CHECK(b.insert(GfVector(q, {0, 2, 1})));
    CHECK(b.insert(GfVector(q, {1, 0, 0})));
    CHECK_FALSE(b.insert(GfVector(q, {2, 1, 2})));
    CHECK_FALSE(b.insert(GfVector(q, 3)));
    CHECK(b.rank() == 2);
    for (std::size_t k = 0; k < b.rank(); ++k) {
        const auto row = b.row(k);
        CHECK(row[b.pivots()[k]] == 1);
        for (std::size_t j = 0; j < b.rank(); ++j) {
            if (j != k) {
                CHECK(row[b.pivots()[j]] == 0);
            }
        }
    }
    auto [c, grew] = b.inserted(GfVector(q, {0, 0, 1}));
    CHECK(grew);
    CHECK(c.rank() == 3);
    CHECK(b.rank() == 2);
    CHECK_THROWS_AS(b.insert(GfVector(FieldOrder(5), 3)), DimensionMismatch);
    CHECK_THROWS_AS(b.insert(GfVector(q, 4)), DimensionMismatch);
}

TEST_CASE("solve returns a solution or nullopt") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const FieldOrder q(5);
        const auto a = random_matrix(rng, q, 1 + rng() % 5, 1 + rng() % 5);
        GfVector b(q, a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            b.set(i, static_cast<long long>(rng() % 5));
        }
        const auto x = gf::solve(a, b);
        // Consistent iff appending b does not raise the rank.
        std::vector<GfVector> cols;
        for (std::size_t c = 0; c < a.cols(); ++c) {
            cols.push_back(a.column(c));
        }
        const std::size_t r = gf::rank(a);
        cols.push_back(b);
        const bool consistent = gf::rank(GfMatrix::from_columns(q, a.rows(), cols)) == r;
        CHECK(x.has_value() == consistent);
        if (x) {
            for (std::size_t i = 0; i < a.rows(); ++i) {
                unsigned s = 0;
                for (std::size_t c = 0; c < a.cols(); ++c) {
                    s = (s + unsigned{a.at(i, c)} * (*x)[c]) % 5;
                }
                CHECK(s == b[i]);
            }
        }
    }
}
