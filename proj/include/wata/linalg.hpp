#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wata/errors.hpp"
#include "wata/semiring.hpp"

namespace wata {

/// An ordered finite set of distinct labels. Labels are either atoms (state
/// names) or tuple labels "(a,b,...)" produced by Kronecker-style products;
/// "()" is the label of the empty tuple. Atoms never contain '(' ')' ','.
class IndexSet {
public:
    IndexSet() = default;

    explicit IndexSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (!positions_.emplace(labels_[i], i).second) {
                throw InputError("duplicate index label " + labels_[i]);
            }
        }
    }

    /// The singleton index set holding the empty tuple.
    static IndexSet unit() { return IndexSet({"()"}); }

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> position(std::string_view label) const {
        auto it = positions_.find(label);
        if (it == positions_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t position_or_throw(std::string_view label) const {
        auto p = position(label);
        if (!p) throw InputError("unknown index label " + std::string(label));
        return *p;
    }

    bool contains(std::string_view label) const { return position(label).has_value(); }

    bool operator==(const IndexSet& other) const { return labels_ == other.labels_; }
    bool operator!=(const IndexSet& other) const { return !(*this == other); }

private:
    std::vector<std::string> labels_;
    std::map<std::string, std::size_t, std::less<>> positions_;
};

namespace detail {

/// Splits a label into its atom sequence: "q" -> [q], "(q,p)" -> [q, p],
/// "()" -> [].
inline std::vector<std::string> label_atoms(const std::string& label) {
    if (label.size() >= 2 && label.front() == '(' && label.back() == ')') {
        std::vector<std::string> atoms;
        std::string_view inner(label.data() + 1, label.size() - 2);
        while (!inner.empty()) {
            std::size_t comma = inner.find(',');
            atoms.emplace_back(inner.substr(0, comma));
            if (comma == std::string_view::npos) break;
            inner.remove_prefix(comma + 1);
        }
        return atoms;
    }
    if (label == "()") return {};
    return {label};
}

inline std::string label_from_atoms(const std::vector<std::string>& atoms) {
    if (atoms.size() == 1) return atoms.front();
    std::string out = "(";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0) out += ",";
        out += atoms[i];
    }
    out += ")";
    return out;
}

inline std::string join_labels(const std::string& a, const std::string& b) {
    std::vector<std::string> atoms = label_atoms(a);
    std::vector<std::string> batoms = label_atoms(b);
    atoms.insert(atoms.end(), batoms.begin(), batoms.end());
    return label_from_atoms(atoms);
}

} // namespace detail

/// Row/column index set of a Kronecker product: all pairs in row-major order
/// (first factor significant), with flattened tuple labels.
inline IndexSet product_index(const IndexSet& a, const IndexSet& b) {
    std::vector<std::string> labels;
    labels.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            labels.push_back(detail::join_labels(a.label(i), b.label(j)));
        }
    }
    return IndexSet(std::move(labels));
}

/// The index set of k-tuples over `base`, materialized lexicographically in
/// factor order. k = 0 yields the empty-tuple singleton.
inline IndexSet tuple_power(const IndexSet& base, std::size_t k) {
    IndexSet out = IndexSet::unit();
    for (std::size_t i = 0; i < k; ++i) out = product_index(out, base);
    return out;
}

/// Dense exact-valued vector indexed by a named finite index set.
class Vec {
public:
    Vec(Semiring semiring, IndexSet index)
        : semiring_(semiring), index_(std::move(index)),
          entries_(index_.size(), semiring.zero()) {}

    Vec(Semiring semiring, IndexSet index, std::vector<Value> entries)
        : semiring_(semiring), index_(std::move(index)), entries_(std::move(entries)) {
        if (entries_.size() != index_.size()) {
            throw ShapeError("vector entry count does not match its index set");
        }
        for (const Value& v : entries_) check_entry(v);
    }

    const Semiring& semiring() const { return semiring_; }
    const IndexSet& index() const { return index_; }
    std::size_t size() const { return entries_.size(); }

    const Value& at(std::size_t i) const { return entries_.at(i); }
    void set(std::size_t i, Value v) {
        check_entry(v);
        entries_.at(i) = std::move(v);
    }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](const Value& v) { return v.is_zero(); });
    }

    Value sum() const {
        Value acc = semiring_.zero();
        for (const Value& v : entries_) acc = semiring_.add(acc, v);
        return acc;
    }

    bool operator==(const Vec& other) const {
        return semiring_ == other.semiring_ && index_ == other.index_ &&
               entries_ == other.entries_;
    }
    bool operator!=(const Vec& other) const { return !(*this == other); }

private:
    void check_entry(const Value& v) const {
        if (v.carrier() != semiring_.carrier()) {
            throw InputError("entry carrier does not match the vector's semiring");
        }
    }

    Semiring semiring_;
    IndexSet index_;
    std::vector<Value> entries_;
};

/// Dense exact-valued matrix with named row and column index sets.
class Matrix {
public:
    Matrix(Semiring semiring, IndexSet rows, IndexSet cols)
        : semiring_(semiring), rows_(std::move(rows)), cols_(std::move(cols)),
          entries_(rows_.size() * cols_.size(), semiring.zero()) {}

    const Semiring& semiring() const { return semiring_; }
    const IndexSet& rows() const { return rows_; }
    const IndexSet& cols() const { return cols_; }
    std::size_t row_count() const { return rows_.size(); }
    std::size_t col_count() const { return cols_.size(); }

    const Value& at(std::size_t r, std::size_t c) const { return entries_.at(r * cols_.size() + c); }
    void set(std::size_t r, std::size_t c, Value v) {
        if (v.carrier() != semiring_.carrier()) {
            throw InputError("entry carrier does not match the matrix's semiring");
        }
        entries_.at(r * cols_.size() + c) = std::move(v);
    }

    Vec row(std::size_t r) const {
        Vec out(semiring_, cols_);
        for (std::size_t c = 0; c < cols_.size(); ++c) out.set(c, at(r, c));
        return out;
    }

    Vec col(std::size_t c) const {
        Vec out(semiring_, rows_);
        for (std::size_t r = 0; r < rows_.size(); ++r) out.set(r, at(r, c));
        return out;
    }

    bool operator==(const Matrix& other) const {
        return semiring_ == other.semiring_ && rows_ == other.rows_ && cols_ == other.cols_ &&
               entries_ == other.entries_;
    }
    bool operator!=(const Matrix& other) const { return !(*this == other); }

private:
    Semiring semiring_;
    IndexSet rows_;
    IndexSet cols_;
    std::vector<Value> entries_;
};

inline Matrix identity(const Semiring& semiring, const IndexSet& index) {
    Matrix out(semiring, index, index);
    for (std::size_t i = 0; i < index.size(); ++i) out.set(i, i, semiring.one());
    return out;
}

inline Matrix transpose(const Matrix& x) {
    Matrix out(x.semiring(), x.cols(), x.rows());
    for (std::size_t r = 0; r < x.row_count(); ++r) {
        for (std::size_t c = 0; c < x.col_count(); ++c) out.set(c, r, x.at(r, c));
    }
    return out;
}

namespace detail {

inline void check_same_semiring(const Semiring& a, const Semiring& b) {
    if (a != b) throw InputError("operands live in different semirings");
}

} // namespace detail

/// Classical matrix product; inner index sets must agree label for label.
inline Matrix matmul(const Matrix& x, const Matrix& y) {
    detail::check_same_semiring(x.semiring(), y.semiring());
    if (x.cols() != y.rows()) {
        throw ShapeError("matrix product: inner index sets differ");
    }
    const Semiring& sr = x.semiring();
    Matrix out(sr, x.rows(), y.cols());
    for (std::size_t r = 0; r < x.row_count(); ++r) {
        for (std::size_t c = 0; c < y.col_count(); ++c) {
            Value acc = sr.zero();
            for (std::size_t k = 0; k < x.col_count(); ++k) {
                acc = sr.add(acc, sr.mul(x.at(r, k), y.at(k, c)));
            }
            out.set(r, c, std::move(acc));
        }
    }
    return out;
}

inline Vec vecmat(const Vec& v, const Matrix& x) {
    detail::check_same_semiring(v.semiring(), x.semiring());
    if (v.index() != x.rows()) {
        throw ShapeError("vector-matrix product: index sets differ");
    }
    const Semiring& sr = v.semiring();
    Vec out(sr, x.cols());
    for (std::size_t c = 0; c < x.col_count(); ++c) {
        Value acc = sr.zero();
        for (std::size_t r = 0; r < v.size(); ++r) {
            acc = sr.add(acc, sr.mul(v.at(r), x.at(r, c)));
        }
        out.set(c, std::move(acc));
    }
    return out;
}

inline Vec matvec(const Matrix& x, const Vec& v) {
    detail::check_same_semiring(x.semiring(), v.semiring());
    if (x.cols() != v.index()) {
        throw ShapeError("matrix-vector product: index sets differ");
    }
    const Semiring& sr = x.semiring();
    Vec out(sr, x.rows());
    for (std::size_t r = 0; r < x.row_count(); ++r) {
        Value acc = sr.zero();
        for (std::size_t c = 0; c < x.col_count(); ++c) {
            acc = sr.add(acc, sr.mul(x.at(r, c), v.at(c)));
        }
        out.set(r, std::move(acc));
    }
    return out;
}

inline Value dot(const Vec& v, const Vec& w) {
    detail::check_same_semiring(v.semiring(), w.semiring());
    if (v.index() != w.index()) {
        throw ShapeError("dot product: index sets differ");
    }
    const Semiring& sr = v.semiring();
    Value acc = sr.zero();
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc = sr.add(acc, sr.mul(v.at(i), w.at(i)));
    }
    return acc;
}

/// Kronecker product; row-major pairing of indices on both axes.
inline Matrix kron(const Matrix& x, const Matrix& y) {
    detail::check_same_semiring(x.semiring(), y.semiring());
    const Semiring& sr = x.semiring();
    Matrix out(sr, product_index(x.rows(), y.rows()), product_index(x.cols(), y.cols()));
    for (std::size_t r1 = 0; r1 < x.row_count(); ++r1) {
        for (std::size_t r2 = 0; r2 < y.row_count(); ++r2) {
            for (std::size_t c1 = 0; c1 < x.col_count(); ++c1) {
                for (std::size_t c2 = 0; c2 < y.col_count(); ++c2) {
                    out.set(r1 * y.row_count() + r2, c1 * y.col_count() + c2,
                            sr.mul(x.at(r1, c1), y.at(r2, c2)));
                }
            }
        }
    }
    return out;
}

inline Vec kron(const Vec& v, const Vec& w) {
    detail::check_same_semiring(v.semiring(), w.semiring());
    const Semiring& sr = v.semiring();
    Vec out(sr, product_index(v.index(), w.index()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            out.set(i * w.size() + j, sr.mul(v.at(i), w.at(j)));
        }
    }
    return out;
}

/// k-fold Kronecker power; k = 0 is the 1x1 unit matrix (1) on the
/// empty-tuple index.
inline Matrix kron_power(const Matrix& x, std::size_t k) {
    Matrix out(x.semiring(), IndexSet::unit(), IndexSet::unit());
    out.set(0, 0, x.semiring().one());
    for (std::size_t i = 0; i < k; ++i) out = kron(out, x);
    return out;
}

/// Structural predicates of a matrix. The relation-derived flags
/// (functional, surjective, injective) are only meaningful when the matrix
/// is relational; they are false otherwise. "functional" means a total
/// function: every row has exactly one 1.
struct MatrixClass {
    bool relational = false;
    bool functional = false;
    bool surjective = false;
    bool injective = false;
    bool diagonal = false;
    bool invertible_diagonal = false;
    bool nondegenerate = false;
};

inline MatrixClass classify(const Matrix& x) {
    const Semiring& sr = x.semiring();
    MatrixClass out;
    out.relational = true;
    for (std::size_t r = 0; r < x.row_count() && out.relational; ++r) {
        for (std::size_t c = 0; c < x.col_count(); ++c) {
            const Value& v = x.at(r, c);
            if (!v.is_zero() && !v.is_one()) {
                out.relational = false;
                break;
            }
        }
    }
    if (out.relational) {
        out.functional = true;
        out.injective = true;
        out.surjective = true;
        std::vector<std::size_t> col_hits(x.col_count(), 0);
        for (std::size_t r = 0; r < x.row_count(); ++r) {
            std::size_t ones = 0;
            for (std::size_t c = 0; c < x.col_count(); ++c) {
                if (x.at(r, c).is_one()) {
                    ++ones;
                    ++col_hits[c];
                }
            }
            if (ones != 1) out.functional = false;
        }
        for (std::size_t hits : col_hits) {
            if (hits == 0) out.surjective = false;
            if (hits > 1) out.injective = false;
        }
    }
    if (x.row_count() == x.col_count()) {
        out.diagonal = true;
        for (std::size_t r = 0; r < x.row_count() && out.diagonal; ++r) {
            for (std::size_t c = 0; c < x.col_count(); ++c) {
                if (r != c && !x.at(r, c).is_zero()) {
                    out.diagonal = false;
                    break;
                }
            }
        }
        if (out.diagonal) {
            out.invertible_diagonal = true;
            for (std::size_t i = 0; i < x.row_count(); ++i) {
                if (!sr.is_unit(x.at(i, i))) {
                    out.invertible_diagonal = false;
                    break;
                }
            }
        }
    }
    out.nondegenerate = true;
    for (std::size_t r = 0; r < x.row_count(); ++r) {
        bool nonzero = false;
        for (std::size_t c = 0; c < x.col_count(); ++c) {
            if (!x.at(r, c).is_zero()) {
                nonzero = true;
                break;
            }
        }
        if (!nonzero) out.nondegenerate = false;
    }
    for (std::size_t c = 0; c < x.col_count(); ++c) {
        bool nonzero = false;
        for (std::size_t r = 0; r < x.row_count(); ++r) {
            if (!x.at(r, c).is_zero()) {
                nonzero = true;
                break;
            }
        }
        if (!nonzero) out.nondegenerate = false;
    }
    return out;
}

/// The total function rows -> cols encoded by a functional matrix.
inline std::vector<std::size_t> rho(const Matrix& x) {
    if (!classify(x).functional) {
        throw InputError("rho requested on a non-functional matrix");
    }
    std::vector<std::size_t> out(x.row_count());
    for (std::size_t r = 0; r < x.row_count(); ++r) {
        for (std::size_t c = 0; c < x.col_count(); ++c) {
            if (x.at(r, c).is_one()) {
                out[r] = c;
                break;
            }
        }
    }
    return out;
}

inline Matrix invert_diagonal(const Matrix& e) {
    MatrixClass cls = classify(e);
    if (!cls.diagonal) {
        throw InputError("invert_diagonal on a non-diagonal matrix");
    }
    if (!cls.invertible_diagonal) {
        for (std::size_t i = 0; i < e.row_count(); ++i) {
            if (!e.semiring().is_unit(e.at(i, i))) {
                throw InputError("diagonal entry " + e.at(i, i).str() + " at " +
                                 e.rows().label(i) + " is not a unit of " +
                                 std::string(e.semiring().name()));
            }
        }
    }
    Matrix out(e.semiring(), e.cols(), e.rows());
    for (std::size_t i = 0; i < e.row_count(); ++i) {
        out.set(i, i, e.semiring().invert_unit(e.at(i, i)));
    }
    return out;
}

} // namespace wata
