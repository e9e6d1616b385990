#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wata/errors.hpp"
#include "wata/linalg.hpp"
#include "wata/simulation.hpp"
#include "wata/wta.hpp"

namespace wata {

struct ConstructionTag {
    enum class Kind { sum, sigma_product, hadamard, sigma_star };
    Kind kind;
    std::string symbol; // rank-0 symbol for sigma_product / sigma_star
};

namespace detail {

/// Union of two label sets in order; colliding names get .L/.R suffixes
/// (repeated until unique), deterministically on both sides.
struct DisjointUnion {
    IndexSet combined;
    std::vector<std::string> left;
    std::vector<std::string> right;
};

inline DisjointUnion disjoint_union(const IndexSet& a, const IndexSet& b) {
    DisjointUnion out;
    std::vector<std::string> labels;
    auto taken = [&labels](const IndexSet& other, const std::string& candidate) {
        if (other.contains(candidate)) return true;
        for (const std::string& l : labels) {
            if (l == candidate) return true;
        }
        return false;
    };
    for (const std::string& l : a.labels()) {
        std::string name = l;
        while (taken(b, name)) name += ".L";
        out.left.push_back(name);
        labels.push_back(name);
    }
    for (const std::string& l : b.labels()) {
        std::string name = l;
        while (taken(a, name)) name += ".R";
        out.right.push_back(name);
        labels.push_back(name);
    }
    out.combined = IndexSet(std::move(labels));
    return out;
}

/// Pair states of a product construction, left-major, named q.p (with a
/// numeric suffix in the unlikely event of a collision).
inline IndexSet product_states(const IndexSet& a, const IndexSet& b) {
    std::vector<std::string> labels;
    labels.reserve(a.size() * b.size());
    for (const std::string& q : a.labels()) {
        for (const std::string& p : b.labels()) {
            std::string name = q + "." + p;
            std::size_t n = 2;
            auto taken = [&labels](const std::string& candidate) {
                for (const std::string& l : labels) {
                    if (l == candidate) return true;
                }
                return false;
            };
            while (taken(name)) name = q + "." + p + "." + std::to_string(n++);
            labels.push_back(std::move(name));
        }
    }
    return IndexSet(std::move(labels));
}

inline void check_construction_inputs(const Wta& m, const Wta& n) {
    if (m.semiring() != n.semiring()) throw InputError("construction: mismatched semirings");
    if (!m.alphabet().same_symbols(n.alphabet())) {
        throw InputError("construction: automata use different alphabets");
    }
}

inline std::size_t require_nullary(const Wta& m, std::string_view s0) {
    auto rank = m.alphabet().rank_of(s0);
    if (!rank) throw InputError("unknown symbol " + std::string(s0));
    if (*rank != 0) throw InputError(std::string(s0) + " is not a rank-0 symbol");
    return *rank;
}

} // namespace detail

/// The sum automaton: disjoint union of states, block transitions, and
/// stacked final weights; recognizes the sum of the two series.
inline Wta sum_wta(const Wta& m, const Wta& n) {
    detail::check_construction_inputs(m, n);
    const Semiring& sr = m.semiring();
    auto du = detail::disjoint_union(m.states(), n.states());
    std::size_t nq = m.state_count();
    std::size_t total = du.combined.size();

    std::map<std::string, Matrix> kappa;
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mu = m.transition(sym.name);
        const Matrix& nu = n.transition(sym.name);
        Matrix k(sr, tuple_power(du.combined, sym.rank), du.combined);
        detail::for_each_tuple(sym.rank, total, [&](const std::vector<std::size_t>& tuple) {
            bool all_left = true;
            bool all_right = true;
            for (std::size_t t : tuple) {
                all_left = all_left && t < nq;
                all_right = all_right && t >= nq;
            }
            std::size_t row = detail::tuple_row(tuple, total);
            if (all_left) {
                std::vector<std::size_t> inner(tuple);
                std::size_t mu_row = detail::tuple_row(inner, nq);
                for (std::size_t c = 0; c < nq; ++c) k.set(row, c, mu.at(mu_row, c));
            }
            if (all_right) {
                std::vector<std::size_t> inner(tuple.size());
                for (std::size_t i = 0; i < tuple.size(); ++i) inner[i] = tuple[i] - nq;
                std::size_t nu_row = detail::tuple_row(inner, n.state_count());
                for (std::size_t c = 0; c < n.state_count(); ++c) {
                    k.set(row, nq + c, nu.at(nu_row, c));
                }
            }
        });
        kappa.emplace(sym.name, std::move(k));
    }
    Vec h(sr, du.combined);
    for (std::size_t q = 0; q < nq; ++q) h.set(q, m.final_weights().at(q));
    for (std::size_t p = 0; p < n.state_count(); ++p) h.set(nq + p, n.final_weights().at(p));
    return Wta(sr, m.alphabet(), du.combined, std::move(kappa), std::move(h),
               m.name() + "+" + n.name());
}

/// Block-diagonal sum of transfer matrices.
inline TransferMatrix sum_tm(const TransferMatrix& x, const TransferMatrix& y) {
    if (x.matrix.semiring() != y.matrix.semiring()) {
        throw InputError("transfer matrix sum: mismatched semirings");
    }
    auto rows = detail::disjoint_union(x.matrix.rows(), y.matrix.rows());
    auto cols = detail::disjoint_union(x.matrix.cols(), y.matrix.cols());
    Matrix out(x.matrix.semiring(), rows.combined, cols.combined);
    for (std::size_t r = 0; r < x.matrix.row_count(); ++r) {
        for (std::size_t c = 0; c < x.matrix.col_count(); ++c) out.set(r, c, x.matrix.at(r, c));
    }
    std::size_t ro = x.matrix.row_count();
    std::size_t co = x.matrix.col_count();
    for (std::size_t r = 0; r < y.matrix.row_count(); ++r) {
        for (std::size_t c = 0; c < y.matrix.col_count(); ++c) {
            out.set(ro + r, co + c, y.matrix.at(r, c));
        }
    }
    return TransferMatrix{std::move(out), x.source_id + "+" + y.source_id,
                          x.target_id + "+" + y.target_id};
}

/// The Hadamard product automaton on pair states; recognizes the pointwise
/// product of the two series (commutative carriers only).
inline Wta hadamard_wta(const Wta& m, const Wta& n) {
    detail::check_construction_inputs(m, n);
    const Semiring& sr = m.semiring();
    if (!sr.is_commutative()) {
        throw CapabilityError("the Hadamard product requires a commutative semiring");
    }
    IndexSet states = detail::product_states(m.states(), n.states());
    std::size_t nq = m.state_count();
    std::size_t np = n.state_count();

    std::map<std::string, Matrix> kappa;
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mu = m.transition(sym.name);
        const Matrix& nu = n.transition(sym.name);
        Matrix k(sr, tuple_power(states, sym.rank), states);
        detail::for_each_tuple(sym.rank, states.size(), [&](const std::vector<std::size_t>& tuple) {
            std::vector<std::size_t> left(tuple.size());
            std::vector<std::size_t> right(tuple.size());
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                left[i] = tuple[i] / np;
                right[i] = tuple[i] % np;
            }
            std::size_t row = detail::tuple_row(tuple, states.size());
            std::size_t mu_row = detail::tuple_row(left, nq);
            std::size_t nu_row = detail::tuple_row(right, np);
            for (std::size_t q = 0; q < nq; ++q) {
                for (std::size_t p = 0; p < np; ++p) {
                    k.set(row, q * np + p, sr.mul(mu.at(mu_row, q), nu.at(nu_row, p)));
                }
            }
        });
        kappa.emplace(sym.name, std::move(k));
    }
    Vec h(sr, states);
    for (std::size_t q = 0; q < nq; ++q) {
        for (std::size_t p = 0; p < np; ++p) {
            h.set(q * np + p, sr.mul(m.final_weights().at(q), n.final_weights().at(p)));
        }
    }
    return Wta(sr, m.alphabet(), states, std::move(kappa), std::move(h),
               m.name() + "*" + n.name());
}

/// Kronecker product of transfer matrices, indexed by pair states.
inline TransferMatrix hadamard_tm(const TransferMatrix& x, const TransferMatrix& y) {
    Matrix raw = kron(x.matrix, y.matrix);
    Matrix out(raw.semiring(), detail::product_states(x.matrix.rows(), y.matrix.rows()),
               detail::product_states(x.matrix.cols(), y.matrix.cols()));
    for (std::size_t r = 0; r < raw.row_count(); ++r) {
        for (std::size_t c = 0; c < raw.col_count(); ++c) out.set(r, c, raw.at(r, c));
    }
    return TransferMatrix{std::move(out), x.source_id + "*" + y.source_id,
                          x.target_id + "*" + y.target_id};
}

/// The s0-product automaton: N runs in inner subtrees that substitute
/// s0-leaves of M's trees; finishing an inner run in N charges N's final
/// weight and M's s0 weight. Only the left part keeps final weights.
inline Wta sigma_product_wta(const Wta& m, const Wta& n, std::string_view s0) {
    detail::check_construction_inputs(m, n);
    detail::require_nullary(m, s0);
    const Semiring& sr = m.semiring();
    if (!sr.is_commutative()) {
        throw CapabilityError("the s0-product requires a commutative semiring");
    }
    auto du = detail::disjoint_union(m.states(), n.states());
    std::size_t nq = m.state_count();
    std::size_t np = n.state_count();
    std::size_t total = du.combined.size();

    // weight of a completed inner run: sum over N's states of nu * G
    auto inner_completion = [&](const Matrix& nu, std::size_t nu_row) {
        Value acc = sr.zero();
        for (std::size_t p = 0; p < np; ++p) {
            acc = sr.add(acc, sr.mul(nu.at(nu_row, p), n.final_weights().at(p)));
        }
        return acc;
    };

    std::map<std::string, Matrix> kappa;
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mu = m.transition(sym.name);
        const Matrix& nu = n.transition(sym.name);
        const Matrix& mu_s0 = m.transition(std::string(s0));
        bool is_s0 = sym.name == s0;
        Matrix k(sr, tuple_power(du.combined, sym.rank), du.combined);
        detail::for_each_tuple(sym.rank, total, [&](const std::vector<std::size_t>& tuple) {
            bool all_left = true;
            bool all_right = true;
            for (std::size_t t : tuple) {
                all_left = all_left && t < nq;
                all_right = all_right && t >= nq;
            }
            std::size_t row = detail::tuple_row(tuple, total);
            if (all_left && !is_s0) {
                std::size_t mu_row = detail::tuple_row(tuple, nq);
                for (std::size_t q = 0; q < nq; ++q) k.set(row, q, mu.at(mu_row, q));
            }
            if (all_right) {
                std::vector<std::size_t> inner(tuple.size());
                for (std::size_t i = 0; i < tuple.size(); ++i) inner[i] = tuple[i] - nq;
                std::size_t nu_row = detail::tuple_row(inner, np);
                // the inner run continues in N
                for (std::size_t p = 0; p < np; ++p) k.set(row, nq + p, nu.at(nu_row, p));
                // or completes and substitutes an s0-leaf of M; for nullary
                // symbols this adds to the plain M case above
                Value completion = inner_completion(nu, nu_row);
                for (std::size_t q = 0; q < nq; ++q) {
                    Value cross = sr.mul(mu_s0.at(0, q), completion);
                    k.set(row, q, sr.add(k.at(row, q), cross));
                }
            }
        });
        kappa.emplace(sym.name, std::move(k));
    }
    Vec h(sr, du.combined);
    for (std::size_t q = 0; q < nq; ++q) h.set(q, m.final_weights().at(q));
    return Wta(sr, m.alphabet(), du.combined, std::move(kappa), std::move(h),
               m.name() + "." + n.name());
}

inline TransferMatrix sigma_product_tm(const TransferMatrix& x, const TransferMatrix& y) {
    return sum_tm(x, y);
}

/// The s0-iteration automaton: any completed run may be folded back as an
/// s0-leaf, weighted by the star of the automaton's own s0 weight.
inline Wta sigma_star_wta(const Wta& m, std::string_view s0) {
    detail::require_nullary(m, s0);
    const Semiring& sr = m.semiring();
    if (!sr.is_commutative()) {
        throw CapabilityError("the s0-iteration requires a commutative semiring");
    }
    Value s0_weight = eval(m, Tree(std::string(s0)));
    Value star = sr.star(s0_weight); // gates on has_star; may throw DivergentStarError
    const Matrix& mu_s0 = m.transition(std::string(s0));
    std::size_t nq = m.state_count();

    std::map<std::string, Matrix> kappa;
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mu = m.transition(sym.name);
        if (sym.name == s0) {
            kappa.emplace(sym.name, mu);
            continue;
        }
        Matrix k(sr, mu.rows(), mu.cols());
        for (std::size_t row = 0; row < mu.row_count(); ++row) {
            Value completion = sr.zero();
            for (std::size_t p = 0; p < nq; ++p) {
                completion = sr.add(completion, sr.mul(mu.at(row, p), m.final_weights().at(p)));
            }
            Value folded = sr.mul(star, completion);
            for (std::size_t q = 0; q < nq; ++q) {
                k.set(row, q, sr.add(mu.at(row, q), sr.mul(folded, mu_s0.at(0, q))));
            }
        }
        kappa.emplace(sym.name, std::move(k));
    }
    return Wta(sr, m.alphabet(), m.states(), std::move(kappa), m.final_weights(),
               m.name() + "^*");
}

inline TransferMatrix sigma_star_tm(const TransferMatrix& x) { return x; }

} // namespace wata
