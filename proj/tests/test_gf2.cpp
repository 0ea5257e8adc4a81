#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "catch_amalgamated.hpp"

#include "bcc/bitmatrix.hpp"
#include "bcc/bitvec.hpp"
#include "bcc/gf2field.hpp"
#include "bcc/rng.hpp"

using bcc::BitMatrix;
using bcc::BitVec;
using bcc::Gf2Field;
using bcc::Rng;

namespace {

BitVec random_vec(std::size_t len, Rng& rng) { return rng.bitvec(len); }

// Independent row-reduction oracle on bool matrices.
std::size_t naive_rank(std::vector<std::vector<bool>> m) {
    if (m.empty()) {
        return 0;
    }
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && !m[pivot][c]) {
            ++pivot;
        }
        if (pivot == rows) {
            continue;
        }
        std::swap(m[pivot], m[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i != r && m[i][c]) {
                for (std::size_t j = 0; j < cols; ++j) {
                    m[i][j] = m[i][j] ^ m[r][j];
                }
            }
        }
        ++r;
    }
    return r;
}

std::vector<std::vector<bool>> to_bools(const BitMatrix& m) {
    std::vector<std::vector<bool>> out(m.rows(), std::vector<bool>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[i][j] = m.get(i, j);
        }
    }
    return out;
}

BitVec combine(const BitMatrix& m, const BitVec& combo) {
    BitVec acc(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (combo.get(i)) {
            acc ^= m.row(i);
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("bitvec basics") {
    BitVec v = BitVec::from_string("1011");
    CHECK(v.size() == 4);
    CHECK(v.get(0));
    CHECK_FALSE(v.get(1));
    CHECK(v.to_string() == "1011");
    CHECK(v.popcount() == 3);
    CHECK(v.to_uint() == 0b1101u);  // bit 0 first

    BitVec w = BitVec::from_string("0110");
    CHECK((v ^ w).to_string() == "1101");

    CHECK((v ^ v).is_zero());
    CHECK((v ^ BitVec(4)) == v);

    CHECK_THROWS_AS(v ^ BitVec(5), std::invalid_argument);
    CHECK_THROWS_AS(v.get(4), std::out_of_range);
    CHECK_THROWS_AS(BitVec::from_string("10x"), std::invalid_argument);

    CHECK(BitVec::from_uint(22, 5).to_string() == "01101");
    CHECK(BitVec::from_uint(22, 5).to_uint() == 22);
    CHECK_THROWS_AS(BitVec::from_uint(32, 5), std::invalid_argument);

    BitVec big(130);
    big.set(129, true);
    CHECK(big.find_first() == 129);
    CHECK(big.popcount() == 1);
    CHECK(BitVec(130).find_first() == 130);

    CHECK(BitVec::concat(v, w).to_string() == "10110110");
    CHECK(BitVec::concat(v, w).slice(4, 4) == w);
    CHECK_THROWS_AS(v.slice(2, 3), std::out_of_range);
}

TEST_CASE("xor is an involution and abelian") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t len = 1 + rng.below(100);
        BitVec a = random_vec(len, rng);
        BitVec b = random_vec(len, rng);
        BitVec c = random_vec(len, rng);
        CHECK(((a ^ b) ^ c) == (a ^ (b ^ c)));
        CHECK((a ^ b) == (b ^ a));
        CHECK((a ^ a).is_zero());
        CHECK((a ^ BitVec(len)) == a);
    }
}

TEST_CASE("rank matches naive elimination oracle") {
    BitMatrix id(5, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        id.set(i, i, true);
    }
    CHECK(bcc::rank(id) == 5);
    CHECK(bcc::rank(BitMatrix(4, 6)) == 0);

    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 1 + rng.below(8);
        const std::size_t cols = 1 + rng.below(8);
        BitMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            m.row(i) = random_vec(cols, rng);
        }
        const std::size_t r = bcc::rank(m);
        CHECK(r == naive_rank(to_bools(m)));
        CHECK(r <= std::min(rows, cols));

        // Invariance under row swaps and row XORs.
        BitMatrix m2 = m;
        if (rows >= 2) {
            std::swap(m2.row(0), m2.row(rows - 1));
            m2.row(1 % rows) ^= m2.row(0);
        }
        CHECK(bcc::rank(m2) == r);
    }
}

TEST_CASE("solve_membership finds combinations") {
    SECTION("identity matrix reproduces the target") {
        BitMatrix id(6, 6);
        for (std::size_t i = 0; i < 6; ++i) {
            id.set(i, i, true);
        }
        Rng rng(3);
        BitVec t = random_vec(6, rng);
        auto c = bcc::solve_membership(id, t);
        REQUIRE(c.has_value());
        CHECK(*c == t);
    }

    SECTION("zero target accepts the zero combination") {
        Rng rng(4);
        BitMatrix m(3, 5);
        for (std::size_t i = 0; i < 3; ++i) {
            m.row(i) = random_vec(5, rng);
        }
        auto c = bcc::solve_membership(m, BitVec(5));
        REQUIRE(c.has_value());
        CHECK(combine(m, *c).is_zero());
    }

    SECTION("row1 xor row3 of a 4x6 matrix") {
        Rng rng(5);
        BitMatrix m(4, 6);
        for (std::size_t i = 0; i < 4; ++i) {
            m.row(i) = random_vec(6, rng);
        }
        const BitVec t = m.row(1) ^ m.row(3);
        auto c = bcc::solve_membership(m, t);
        REQUIRE(c.has_value());
        CHECK(combine(m, *c) == t);
    }

    SECTION("agrees with brute force over all combinations") {
        Rng rng(6);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t rows = 1 + rng.below(6);
            const std::size_t cols = 1 + rng.below(6);
            BitMatrix m(rows, cols);
            for (std::size_t i = 0; i < rows; ++i) {
                m.row(i) = random_vec(cols, rng);
            }
            const BitVec t = random_vec(cols, rng);
            bool reachable = false;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows); ++mask) {
                BitVec acc(cols);
                for (std::size_t i = 0; i < rows; ++i) {
                    if ((mask >> i) & 1u) {
                        acc ^= m.row(i);
                    }
                }
                if (acc == t) {
                    reachable = true;
                    break;
                }
            }
            auto c = bcc::solve_membership(m, t);
            CHECK(c.has_value() == reachable);
            if (c) {
                CHECK(combine(m, *c) == t);
            }

            // Some iff rank([M; t]) == rank(M).
            BitMatrix aug = m;
            aug.append_row(t);
            CHECK(c.has_value() == (bcc::rank(aug) == bcc::rank(m)));
        }
    }

    SECTION("length mismatch throws") {
        BitMatrix m(2, 4);
        CHECK_THROWS_AS(bcc::solve_membership(m, BitVec(5)), std::invalid_argument);
    }
}

TEST_CASE("row basis tracks rank incrementally") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t cols = 1 + rng.below(10);
        bcc::RowBasis basis(cols);
        BitMatrix m(0, cols);
        for (int step = 0; step < 12; ++step) {
            BitVec v = random_vec(cols, rng);
            m.append_row(v);
            const std::size_t before = basis.rank();
            basis.insert(v);
            CHECK(basis.rank() == bcc::rank(m));
            CHECK(basis.rank() >= before);
            CHECK(basis.contains(v));
        }
    }
}

TEST_CASE("random_subset_xor") {
    SECTION("inclusion frequency is about one half") {
        Rng rng(12345);
        const std::vector<BitVec> one{BitVec::from_string("101")};
        std::size_t included = 0;
        const std::size_t trials = 20000;
        for (std::size_t i = 0; i < trials; ++i) {
            auto [chosen, sum] = bcc::random_subset_xor(one, rng);
            included += chosen.size();
            if (!chosen.empty()) {
                CHECK(sum == one[0]);
            } else {
                CHECK(sum.is_zero());
            }
        }
        const double freq = static_cast<double>(included) / trials;
        CHECK(freq > 0.48);
        CHECK(freq < 0.52);
    }

    SECTION("sum is consistent with the chosen set") {
        Rng rng(77);
        std::vector<BitVec> vecs;
        for (int i = 0; i < 9; ++i) {
            vecs.push_back(random_vec(17, rng));
        }
        for (int trial = 0; trial < 200; ++trial) {
            auto [chosen, sum] = bcc::random_subset_xor(vecs, rng);
            BitVec manual(17);
            for (std::size_t i : chosen) {
                manual ^= vecs[i];
            }
            CHECK(sum == manual);
        }
    }

    SECTION("empty input needs a declared length") {
        Rng rng(1);
        CHECK_THROWS_AS(bcc::random_subset_xor({}, rng), std::invalid_argument);
        auto [chosen, sum] = bcc::random_subset_xor({}, rng, 6);
        CHECK(chosen.empty());
        CHECK(sum == BitVec(6));
    }

    SECTION("mixed lengths throw") {
        Rng rng(2);
        std::vector<BitVec> vecs{BitVec(3), BitVec(4)};
        CHECK_THROWS_AS(bcc::random_subset_xor(vecs, rng), std::invalid_argument);
    }
}

TEST_CASE("rng streams are deterministic") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.coin() == b.coin());
    }
    CHECK(Rng(1).bits(16) != Rng(2).bits(16));
    CHECK(bcc::mix_seed({1, 2, 3}) != bcc::mix_seed({1, 2, 4}));
    CHECK(bcc::mix_seed({1, 2, 3}) == bcc::mix_seed({1, 2, 3}));
}

namespace {

// Test-local polynomial helpers over GF(2), coefficients in uint64 words.
std::uint64_t poly_mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t mod,
                           unsigned deg) {
    // Schoolbook carry-less product, then long division by mod.
    std::uint64_t prod[2] = {0, 0};
    for (unsigned i = 0; i < 64; ++i) {
        if ((a >> i) & 1u) {
            if (i == 0) {
                prod[0] ^= b;
            } else {
                prod[0] ^= b << i;
                prod[1] ^= b >> (64 - i);
            }
        }
    }
    for (int bit = 127; bit >= static_cast<int>(deg); --bit) {
        const bool set = bit >= 64 ? ((prod[1] >> (bit - 64)) & 1u) : ((prod[0] >> bit) & 1u);
        if (!set) {
            continue;
        }
        const unsigned shift = bit - deg;
        if (shift == 0) {
            prod[0] ^= mod;
        } else if (shift < 64) {
            prod[0] ^= mod << shift;
            prod[1] ^= mod >> (64 - shift);
        } else {
            prod[1] ^= mod << (shift - 64);
        }
    }
    return prod[0];
}

unsigned poly_degree(std::uint64_t p) {
    unsigned d = 0;
    while (p >> (d + 1)) {
        ++d;
    }
    return d;
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
    const unsigned db = poly_degree(b);
    while (a != 0 && poly_degree(a) >= db) {
        a ^= b << (poly_degree(a) - db);
    }
    return a;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

}  // namespace

TEST_CASE("field moduli are irreducible (Rabin criterion)") {
    for (unsigned t = 1; t <= 16; ++t) {
        const Gf2Field field(t);
        const std::uint64_t mod = field.modulus();
        // x^(2^t) == x mod p
        std::uint64_t x = 0b10;
        std::uint64_t r = x;
        for (unsigned i = 0; i < t; ++i) {
            r = poly_mul_mod(r, r, mod, t);
        }
        CHECK(r == (t == 1 ? poly_mod(x, mod) : x));
        // gcd(x^(2^(t/q)) - x, p) == 1 for every prime q | t
        for (unsigned q = 2; q <= t; ++q) {
            if (t % q != 0) {
                continue;
            }
            bool q_prime = true;
            for (unsigned d = 2; d * d <= q; ++d) {
                q_prime = q_prime && (q % d != 0);
            }
            if (!q_prime) {
                continue;
            }
            std::uint64_t s = x;
            for (unsigned i = 0; i < t / q; ++i) {
                s = poly_mul_mod(s, s, mod, t);
            }
            CHECK(poly_gcd(s ^ x, mod) == 1);
        }
    }
}

TEST_CASE("gf(2^4) multiplication matches an independent table") {
    const Gf2Field field(4);
    // Independent table: carry-less schoolbook product reduced by long division.
    for (std::uint32_t a = 0; a < 16; ++a) {
        for (std::uint32_t b = 0; b < 16; ++b) {
            const std::uint32_t expect =
                static_cast<std::uint32_t>(poly_mul_mod(a, b, field.modulus(), 4));
            CHECK(field.mul(a, b) == expect);
        }
    }
    // pow agrees with iterated mul.
    for (std::uint32_t y = 1; y < 16; ++y) {
        CHECK(field.pow(y, 3) == field.mul(y, field.mul(y, y)));
        CHECK(field.pow(y, 0) == 1);
        CHECK(field.pow(y, 15) == 1);  // multiplicative order divides 15
    }
}
