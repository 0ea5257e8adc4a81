#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcc/bitvec.hpp"

namespace bcc {

/// Row-major matrix over GF(2); every row has length cols().
class BitMatrix {
public:
    BitMatrix() = default;

    BitMatrix(std::size_t rows, std::size_t cols)
        : cols_(cols), rows_(rows, BitVec(cols)) {}

    explicit BitMatrix(std::vector<BitVec> rows) : rows_(std::move(rows)) {
        cols_ = rows_.empty() ? 0 : rows_.front().size();
        for (const BitVec& r : rows_) {
            if (r.size() != cols_) {
                throw std::invalid_argument("BitMatrix: ragged rows");
            }
        }
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    const BitVec& row(std::size_t i) const { return rows_.at(i); }
    BitVec& row(std::size_t i) { return rows_.at(i); }

    bool get(std::size_t i, std::size_t j) const { return rows_.at(i).get(j); }
    void set(std::size_t i, std::size_t j, bool v) { rows_.at(i).set(j, v); }

    void append_row(BitVec r) {
        if (rows_.empty() && cols_ == 0) {
            cols_ = r.size();
        }
        if (r.size() != cols_) {
            throw std::invalid_argument("BitMatrix: row length mismatch");
        }
        rows_.push_back(std::move(r));
    }

private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

/// Dimension of the row space over GF(2).
inline std::size_t rank(const BitMatrix& m) {
    std::vector<BitVec> work;
    work.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        work.push_back(m.row(i));
    }
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.cols() && r < work.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < work.size() && !work[pivot].get(col)) {
            ++pivot;
        }
        if (pivot == work.size()) {
            continue;
        }
        std::swap(work[pivot], work[r]);
        for (std::size_t i = 0; i < work.size(); ++i) {
            if (i != r && work[i].get(col)) {
                work[i] ^= work[r];
            }
        }
        ++r;
    }
    return r;
}

/// If t lies in the row span of m, returns a combination c (length = rows)
/// with c * m = t; otherwise nullopt. Any valid combination is acceptable.
inline std::optional<BitVec> solve_membership(const BitMatrix& m, const BitVec& t) {
    if (t.size() != m.cols()) {
        throw std::invalid_argument("solve_membership: target length mismatch");
    }
    // Eliminate rows while tracking which original rows each reduced row combines.
    std::vector<BitVec> basis;
    std::vector<BitVec> combo;
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        BitVec v = m.row(i);
        BitVec c(m.rows());
        c.set(i, true);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (v.get(pivots[b])) {
                v ^= basis[b];
                c ^= combo[b];
            }
        }
        if (v.any()) {
            pivots.push_back(v.find_first());
            basis.push_back(std::move(v));
            combo.push_back(std::move(c));
        }
    }
    BitVec residue = t;
    BitVec c(m.rows());
    for (std::size_t b = 0; b < basis.size(); ++b) {
        if (residue.get(pivots[b])) {
            residue ^= basis[b];
            c ^= combo[b];
        }
    }
    if (residue.any()) {
        return std::nullopt;
    }
    return c;
}

/// Incrementally maintained GF(2) row basis; used for RLNC decode tracking.
class RowBasis {
public:
    explicit RowBasis(std::size_t width) : width_(width) {}

    std::size_t width() const { return width_; }
    std::size_t rank() const { return rows_.size(); }

    /// Reduces v against the basis; inserts the residue if nonzero.
    /// Returns true when the rank grew.
    bool insert(BitVec v) {
        if (v.size() != width_) {
            throw std::invalid_argument("RowBasis: width mismatch");
        }
        reduce(v);
        if (v.is_zero()) {
            return false;
        }
        const std::size_t p = v.find_first();
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].get(p)) {
                rows_[i] ^= v;
            }
        }
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
    }

    bool contains(BitVec v) const {
        if (v.size() != width_) {
            throw std::invalid_argument("RowBasis: width mismatch");
        }
        reduce(v);
        return v.is_zero();
    }

private:
    void reduce(BitVec& v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (v.get(pivots_[i])) {
                v ^= rows_[i];
            }
        }
    }

    std::size_t width_;
    std::vector<BitVec> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace bcc
