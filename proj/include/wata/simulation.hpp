#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wata/errors.hpp"
#include "wata/linalg.hpp"
#include "wata/semiring.hpp"
#include "wata/wta.hpp"

namespace wata {

/// A matrix witnessing that the automaton `source_id` simulates `target_id`:
/// rows are indexed by the simulating automaton's states, columns by the
/// simulated one's.
struct TransferMatrix {
    Matrix matrix;
    std::string source_id;
    std::string target_id;
};

struct SimCheckResult {
    bool ok = false;
    std::string violation; // empty when ok; otherwise names the first failure

    explicit operator bool() const { return ok; }
};

namespace detail {

inline void check_sim_inputs(const Wta& m, const Wta& n, const Matrix& x) {
    if (m.semiring() != n.semiring() || m.semiring() != x.semiring()) {
        throw InputError("simulation check: mismatched semirings");
    }
    if (!m.alphabet().same_symbols(n.alphabet())) {
        throw InputError("simulation check: automata use different alphabets");
    }
    if (x.rows() != m.states() || x.cols() != n.states()) {
        throw ShapeError("transfer matrix must be indexed by the two state sets");
    }
}

} // namespace detail

/// Checks the two transfer-matrix conditions F = XG and
/// mu_k(sigma) X = X^{k,x} nu_k(sigma); reports the first violated
/// coordinate in fixed index order (finals first, then symbols in
/// declaration order, rows before columns).
inline SimCheckResult check_simulation(const Wta& m, const Wta& n, const Matrix& x) {
    detail::check_sim_inputs(m, n, x);
    Vec xg = matvec(x, n.final_weights());
    for (std::size_t q = 0; q < m.state_count(); ++q) {
        if (m.final_weights().at(q) != xg.at(q)) {
            return {false, "final weight at " + m.states().label(q) + ": " +
                               m.final_weights().at(q).str() + " != " + xg.at(q).str()};
        }
    }
    for (const Symbol& sym : m.alphabet().symbols()) {
        Matrix lhs = matmul(m.transition(sym.name), x);
        Matrix rhs = matmul(kron_power(x, sym.rank), n.transition(sym.name));
        for (std::size_t r = 0; r < lhs.row_count(); ++r) {
            for (std::size_t c = 0; c < lhs.col_count(); ++c) {
                if (lhs.at(r, c) != rhs.at(r, c)) {
                    return {false, "symbol " + sym.name + " at (" + lhs.rows().label(r) + ", " +
                                       lhs.cols().label(c) + "): " + lhs.at(r, c).str() +
                                       " != " + rhs.at(r, c).str()};
                }
            }
        }
    }
    return {true, ""};
}

/// A total state map given by positions: rho[q] is the position in the
/// simulated automaton's state set.
using StateMap = std::vector<std::size_t>;

inline bool is_surjective(const StateMap& rho, std::size_t target_size) {
    std::vector<bool> hit(target_size, false);
    for (std::size_t p : rho) {
        if (p >= target_size) return false;
        hit[p] = true;
    }
    for (bool h : hit) {
        if (!h) return false;
    }
    return true;
}

/// The functional 0/1 matrix induced by a state map.
inline Matrix induced_matrix(const Semiring& sr, const IndexSet& from, const IndexSet& to,
                             const StateMap& rho) {
    if (rho.size() != from.size()) throw InputError("state map does not cover the state set");
    Matrix x(sr, from, to);
    for (std::size_t q = 0; q < rho.size(); ++q) {
        if (rho[q] >= to.size()) throw InputError("state map hits an unknown state");
        x.set(q, rho[q], sr.one());
    }
    return x;
}

inline std::map<std::string, std::string> state_map_names(const Wta& m, const Wta& n,
                                                          const StateMap& rho) {
    std::map<std::string, std::string> out;
    for (std::size_t q = 0; q < rho.size(); ++q) {
        out[m.states().label(q)] = n.states().label(rho[q]);
    }
    return out;
}

namespace detail {

inline void check_rho_inputs(const Wta& m, const Wta& n, const StateMap& rho) {
    if (m.semiring() != n.semiring()) throw InputError("mismatched semirings");
    if (!m.alphabet().same_symbols(n.alphabet())) throw InputError("different alphabets");
    if (rho.size() != m.state_count()) throw InputError("state map must be total");
    if (!is_surjective(rho, n.state_count())) throw InputError("state map must be surjective");
}

inline std::size_t tuple_row(const std::vector<std::size_t>& tuple, std::size_t base) {
    std::size_t row = 0;
    for (std::size_t t : tuple) row = row * base + t;
    return row;
}

/// Iterates over all k-tuples with entries < base in row-major order.
template <typename Fn>
inline void for_each_tuple(std::size_t k, std::size_t base, Fn&& fn) {
    if (base == 0 && k > 0) return;
    std::vector<std::size_t> tuple(k, 0);
    for (;;) {
        fn(static_cast<const std::vector<std::size_t>&>(tuple));
        std::size_t pos = k;
        while (pos > 0) {
            if (++tuple[pos - 1] < base) break;
            tuple[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;
    }
}

} // namespace detail

/// Forward simulation: F_q = G_{rho(q)} and preimage sums of transitions
/// match the merged transition of the image tuple.
inline bool check_forward(const Wta& m, const Wta& n, const StateMap& rho) {
    detail::check_rho_inputs(m, n, rho);
    const Semiring& sr = m.semiring();
    for (std::size_t q = 0; q < m.state_count(); ++q) {
        if (m.final_weights().at(q) != n.final_weights().at(rho[q])) return false;
    }
    std::size_t nq = m.state_count();
    std::size_t np = n.state_count();
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mu = m.transition(sym.name);
        const Matrix& nu = n.transition(sym.name);
        bool ok = true;
        detail::for_each_tuple(sym.rank, nq, [&](const std::vector<std::size_t>& tuple) {
            if (!ok) return;
            std::size_t mu_row = detail::tuple_row(tuple, nq);
            std::vector<std::size_t> image(tuple.size());
            for (std::size_t i = 0; i < tuple.size(); ++i) image[i] = rho[tuple[i]];
            std::size_t nu_row = detail::tuple_row(image, np);
            for (std::size_t p = 0; p < np; ++p) {
                Value sum = sr.zero();
                for (std::size_t q = 0; q < nq; ++q) {
                    if (rho[q] == p) sum = sr.add(sum, mu.at(mu_row, q));
                }
                if (sum != nu.at(nu_row, p)) {
                    ok = false;
                    return;
                }
            }
        });
        if (!ok) return false;
    }
    return true;
}

/// Backward simulation: preimage sums of final weights match, and sums of
/// transitions over preimage tuples match the image transition.
inline bool check_backward(const Wta& m, const Wta& n, const StateMap& rho) {
    detail::check_rho_inputs(m, n, rho);
    const Semiring& sr = m.semiring();
    std::size_t nq = m.state_count();
    std::size_t np = n.state_count();
    for (std::size_t p = 0; p < np; ++p) {
        Value sum = sr.zero();
        for (std::size_t q = 0; q < nq; ++q) {
            if (rho[q] == p) sum = sr.add(sum, m.final_weights().at(q));
        }
        if (sum != n.final_weights().at(p)) return false;
    }
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mu = m.transition(sym.name);
        const Matrix& nu = n.transition(sym.name);
        bool ok = true;
        detail::for_each_tuple(sym.rank, np, [&](const std::vector<std::size_t>& image) {
            if (!ok) return;
            std::size_t nu_row = detail::tuple_row(image, np);
            for (std::size_t q = 0; q < nq && ok; ++q) {
                Value sum = sr.zero();
                detail::for_each_tuple(sym.rank, nq, [&](const std::vector<std::size_t>& tuple) {
                    for (std::size_t i = 0; i < tuple.size(); ++i) {
                        if (rho[tuple[i]] != image[i]) return;
                    }
                    sum = sr.add(sum, mu.at(detail::tuple_row(tuple, nq), q));
                });
                if (sum != nu.at(nu_row, rho[q])) ok = false;
            }
        });
        if (!ok) return false;
    }
    return true;
}

namespace detail {

template <typename Check>
inline std::optional<StateMap> find_state_map(const Wta& m, const Wta& n, Check&& check) {
    if (m.semiring() != n.semiring()) throw InputError("mismatched semirings");
    if (!m.alphabet().same_symbols(n.alphabet())) throw InputError("different alphabets");
    std::size_t nq = m.state_count();
    std::size_t np = n.state_count();
    if (nq > 8) {
        throw BudgetError("state map search is limited to 8 states, got " + std::to_string(nq));
    }
    if (np > nq) return std::nullopt;
    std::optional<StateMap> found;
    // lexicographic enumeration of rho as an |Q|-digit base-|P| word
    for_each_tuple(nq, np, [&](const std::vector<std::size_t>& word) {
        if (found) return;
        if (!is_surjective(word, np)) return;
        if (check(word)) found = word;
    });
    return found;
}

} // namespace detail

/// Exhaustive search for a forward simulation, in lexicographic order over
/// surjections; desk-scale only.
inline std::optional<StateMap> find_forward(const Wta& m, const Wta& n) {
    return detail::find_state_map(m, n,
                                  [&](const StateMap& rho) { return check_forward(m, n, rho); });
}

inline std::optional<StateMap> find_backward(const Wta& m, const Wta& n) {
    return detail::find_state_map(m, n,
                                  [&](const StateMap& rho) { return check_backward(m, n, rho); });
}

/// Test predicate for the trimness consequence: under the stated hypotheses
/// an accepted transfer matrix has no zero row or column.
inline bool check_nondegenerate_consequence(const Wta& m, const Wta& n, const Matrix& x) {
    if (!is_trim(m) || !is_trim(n)) {
        throw InputError("nondegeneracy consequence requires trim automata");
    }
    if (!check_simulation(m, n, x).ok) {
        throw InputError("nondegeneracy consequence requires an accepted transfer matrix");
    }
    if (!classify(x).functional && !m.semiring().is_positive()) {
        throw InputError("hypotheses require a functional matrix or a positive semiring");
    }
    return classify(x).nondegenerate;
}

/// X = C E D with C^T and D functional and E invertible diagonal, over the
/// triple index {(q, i, p)} of unit summands of the entries of X.
struct UnitDecomposition {
    Matrix c;
    Matrix e;
    Matrix d;
};

inline UnitDecomposition decompose_units(const Matrix& x) {
    const Semiring& sr = x.semiring();
    if (sr.carrier() == Carrier::boolean) {
        throw CapabilityError("unit decomposition is not available over bool");
    }
    std::vector<std::string> j_labels;
    std::vector<std::size_t> j_row;
    std::vector<std::size_t> j_col;
    std::vector<Value> j_unit;
    for (std::size_t r = 0; r < x.row_count(); ++r) {
        for (std::size_t c = 0; c < x.col_count(); ++c) {
            std::vector<Value> units = sr.unit_decompose(x.at(r, c));
            for (std::size_t i = 0; i < units.size(); ++i) {
                j_labels.push_back(x.rows().label(r) + "." + std::to_string(i + 1) + "." +
                                   x.cols().label(c));
                j_row.push_back(r);
                j_col.push_back(c);
                j_unit.push_back(units[i]);
            }
        }
    }
    IndexSet j(j_labels);
    Matrix c(sr, x.rows(), j);
    Matrix e(sr, j, j);
    Matrix d(sr, j, x.cols());
    for (std::size_t i = 0; i < j.size(); ++i) {
        c.set(j_row[i], i, sr.one());
        e.set(i, i, j_unit[i]);
        d.set(i, j_col[i], sr.one());
    }
    return UnitDecomposition{std::move(c), std::move(e), std::move(d)};
}

namespace detail {

/// Splits v entrywise into v = v' + y with sum(v') = s1 and sum(y) = s2,
/// peeling one entry at a time by equisubtraction.
inline std::pair<std::vector<Value>, std::vector<Value>> split_vector(
    const Semiring& sr, const std::vector<Value>& v, Value s1, Value s2) {
    std::vector<Value> left;
    std::vector<Value> right;
    left.reserve(v.size());
    right.reserve(v.size());
    std::vector<Value> suffix_sums(v.size() + 1, sr.zero());
    for (std::size_t i = v.size(); i-- > 0;) {
        suffix_sums[i] = sr.add(v[i], suffix_sums[i + 1]);
    }
    Value want_left = std::move(s1);
    Value want_right = std::move(s2);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i + 1 == v.size()) {
            if (sr.add(want_left, want_right) != v[i]) {
                throw InternalError("vector split lost mass");
            }
            left.push_back(want_left);
            right.push_back(want_right);
            break;
        }
        EquiSplit es = sr.equisubtract(v[i], suffix_sums[i + 1], want_left, want_right);
        left.push_back(es.c1);
        right.push_back(es.d1);
        want_left = es.c2;
        want_right = es.d2;
    }
    return {std::move(left), std::move(right)};
}

} // namespace detail

/// Builds a matrix with the prescribed row and column sums by peeling one
/// row and one column per step and refining the sums by equisubtraction.
inline Matrix fill_matrix(const Vec& row_sums, const Vec& col_sums) {
    const Semiring& sr = row_sums.semiring();
    if (sr != col_sums.semiring()) throw InputError("row/column sums live in different semirings");
    if (!sr.is_equisubtractive()) {
        throw CapabilityError(std::string(sr.name()) + " is not equisubtractive");
    }
    if (row_sums.sum() != col_sums.sum()) {
        throw InputError("total of row sums differs from total of column sums");
    }
    std::size_t nr = row_sums.size();
    std::size_t nc = col_sums.size();
    Matrix out(sr, row_sums.index(), col_sums.index());
    if (nr == 0 || nc == 0) {
        const Vec& other = nr == 0 ? col_sums : row_sums;
        for (std::size_t i = 0; i < other.size(); ++i) {
            if (!other.at(i).is_zero()) {
                throw InputError("no matrix with an empty axis realizes nonzero sums");
            }
        }
        return out;
    }
    if (nr == 1) {
        for (std::size_t c = 0; c < nc; ++c) out.set(0, c, col_sums.at(c));
        return out;
    }
    if (nc == 1) {
        for (std::size_t r = 0; r < nr; ++r) out.set(r, 0, row_sums.at(r));
        return out;
    }

    // peel the last row i and last column j
    std::vector<Value> r_rest;
    for (std::size_t r = 0; r + 1 < nr; ++r) r_rest.push_back(row_sums.at(r));
    std::vector<Value> c_rest;
    for (std::size_t c = 0; c + 1 < nc; ++c) c_rest.push_back(col_sums.at(c));
    Value r_rest_sum = sr.zero();
    for (const Value& v : r_rest) r_rest_sum = sr.add(r_rest_sum, v);
    Value c_rest_sum = sr.zero();
    for (const Value& v : c_rest) c_rest_sum = sr.add(c_rest_sum, v);

    EquiSplit es = sr.equisubtract(r_rest_sum, row_sums.at(nr - 1), c_rest_sum, col_sums.at(nc - 1));
    const Value& shared = es.c1;      // total of the interior block
    const Value& corner_col = es.d1;  // mass of the last column above the corner
    const Value& corner_row = es.c2;  // mass of the last row left of the corner
    const Value& corner = es.d2;

    auto [interior_rows, last_col] = detail::split_vector(sr, r_rest, shared, corner_col);
    auto [interior_cols, last_row] = detail::split_vector(sr, c_rest, shared, corner_row);

    std::vector<std::string> row_labels(row_sums.index().labels().begin(),
                                        row_sums.index().labels().end() - 1);
    std::vector<std::string> col_labels(col_sums.index().labels().begin(),
                                        col_sums.index().labels().end() - 1);
    Matrix interior = fill_matrix(Vec(sr, IndexSet(row_labels), interior_rows),
                                  Vec(sr, IndexSet(col_labels), interior_cols));
    for (std::size_t r = 0; r + 1 < nr; ++r) {
        for (std::size_t c = 0; c + 1 < nc; ++c) out.set(r, c, interior.at(r, c));
        out.set(r, nc - 1, last_col[r]);
    }
    for (std::size_t c = 0; c + 1 < nc; ++c) out.set(nr - 1, c, last_row[c]);
    out.set(nr - 1, nc - 1, corner);
    return out;
}

/// The three-step refinement of a simulation: M ->C M' ->E N' ->D N with
/// C^T, D functional and E invertible diagonal.
struct SimulationDecomposition {
    Wta m_prime;
    Wta n_prime;
    Matrix c;
    Matrix e;
    Matrix d;
};

inline SimulationDecomposition decompose_simulation(const Wta& m, const Wta& n, const Matrix& x) {
    const Semiring& sr = m.semiring();
    if (!sr.is_equisubtractive() || sr.carrier() == Carrier::boolean) {
        throw CapabilityError("simulation decomposition requires an equisubtractive, "
                              "unit-generated carrier (nat, int, rat)");
    }
    SimCheckResult accepted = check_simulation(m, n, x);
    if (!accepted.ok) {
        throw InputError("decompose_simulation requires an accepted transfer matrix: " +
                         accepted.violation);
    }

    UnitDecomposition units = decompose_units(x);
    const IndexSet& joint = units.e.rows();
    std::vector<std::size_t> phi = rho(transpose(units.c)); // joint -> Q
    std::vector<std::size_t> psi = rho(units.d);            // joint -> P

    Vec g_prime = matvec(units.d, n.final_weights());
    Vec f_prime(sr, joint);
    for (std::size_t i = 0; i < joint.size(); ++i) {
        f_prime.set(i, sr.mul(units.e.at(i, i), g_prime.at(i)));
    }

    std::size_t nq = m.state_count();
    std::size_t np = n.state_count();
    std::vector<std::vector<std::size_t>> members_of_q(nq);
    std::vector<std::vector<std::size_t>> members_of_p(np);
    for (std::size_t i = 0; i < joint.size(); ++i) {
        members_of_q[phi[i]].push_back(i);
        members_of_p[psi[i]].push_back(i);
    }

    std::map<std::string, Matrix> mu_prime;
    std::map<std::string, Matrix> nu_prime;
    for (const Symbol& sym : m.alphabet().symbols()) {
        std::size_t k = sym.rank;
        const Matrix& mu = m.transition(sym.name);
        const Matrix& nu = n.transition(sym.name);
        Matrix y(sr, tuple_power(joint, k), joint);

        detail::for_each_tuple(k, nq, [&](const std::vector<std::size_t>& q_tuple) {
            // rows of this block: tuples over the preimages of the q_tuple
            std::vector<std::vector<std::size_t>> block_rows;
            {
                std::vector<std::size_t> pick(k, 0);
                for (;;) {
                    std::vector<std::size_t> row(k);
                    bool done = false;
                    for (std::size_t i = 0; i < k; ++i) {
                        const auto& members = members_of_q[q_tuple[i]];
                        if (members.empty()) {
                            done = true;
                            break;
                        }
                        row[i] = members[pick[i]];
                    }
                    if (done) break;
                    block_rows.push_back(row);
                    std::size_t pos = k;
                    while (pos > 0 && ++pick[pos - 1] == members_of_q[q_tuple[pos - 1]].size()) {
                        pick[--pos] = 0;
                    }
                    if (pos == 0) break;
                }
            }
            std::size_t mu_row = detail::tuple_row(q_tuple, nq);
            for (std::size_t p = 0; p < np; ++p) {
                const std::vector<std::size_t>& block_cols = members_of_p[p];
                if (block_rows.empty() && block_cols.empty()) continue;

                std::vector<std::string> row_labels;
                std::vector<Value> row_targets;
                for (const auto& row : block_rows) {
                    std::vector<std::size_t> image(k);
                    for (std::size_t i = 0; i < k; ++i) image[i] = psi[row[i]];
                    Value target = nu.at(detail::tuple_row(image, np), p);
                    for (std::size_t i = 0; i < k; ++i) {
                        target = sr.mul(units.e.at(row[i], row[i]), target);
                    }
                    row_targets.push_back(target);
                    row_labels.push_back("r" + std::to_string(row_labels.size()));
                }
                std::vector<std::string> col_labels;
                std::vector<Value> col_targets;
                for (std::size_t j : block_cols) {
                    col_targets.push_back(sr.mul(mu.at(mu_row, phi[j]), units.e.at(j, j)));
                    col_labels.push_back("c" + std::to_string(col_labels.size()));
                }

                Vec r_vec(sr, IndexSet(row_labels), row_targets);
                Vec c_vec(sr, IndexSet(col_labels), col_targets);
                if (r_vec.sum() != c_vec.sum()) {
                    throw InternalError("incompatible block sums in decompose_simulation");
                }
                Matrix block = fill_matrix(r_vec, c_vec);

                for (std::size_t br = 0; br < block_rows.size(); ++br) {
                    std::size_t y_row = detail::tuple_row(block_rows[br], joint.size());
                    for (std::size_t bc = 0; bc < block_cols.size(); ++bc) {
                        y.set(y_row, block_cols[bc], block.at(br, bc));
                    }
                }
            }
        });

        mu_prime.emplace(sym.name, matmul(y, invert_diagonal(units.e)));
        nu_prime.emplace(sym.name, matmul(invert_diagonal(kron_power(units.e, k)), y));
    }

    Wta m_prime(sr, m.alphabet(), joint, std::move(mu_prime), std::move(f_prime),
                m.name().empty() ? "m_prime" : m.name() + "_prime");
    Wta n_prime(sr, m.alphabet(), joint, std::move(nu_prime), std::move(g_prime),
                n.name().empty() ? "n_prime" : n.name() + "_prime");

    if (!check_simulation(m, m_prime, units.c).ok || !check_simulation(m_prime, n_prime, units.e).ok ||
        !check_simulation(n_prime, n, units.d).ok ||
        matmul(units.c, matmul(units.e, units.d)) != x) {
        throw InternalError("decompose_simulation produced an invalid chain");
    }
    return SimulationDecomposition{std::move(m_prime), std::move(n_prime), std::move(units.c),
                                   std::move(units.e), std::move(units.d)};
}

/// Composition along a chain: if M ->X M' and M' ->Y N then M ->XY N.
inline TransferMatrix compose(const TransferMatrix& x, const TransferMatrix& y) {
    if (x.target_id != y.source_id) {
        throw InputError("transfer matrices do not chain: " + x.target_id + " vs " + y.source_id);
    }
    return TransferMatrix{matmul(x.matrix, y.matrix), x.source_id, y.target_id};
}

enum class StepKind { general, forward_functional, backward_functional, invertible_diagonal };

struct ChainStep {
    Matrix transfer;
    StepKind kind = StepKind::general;
    bool reversed = false; // when true the step simulates right-to-left
};

/// A finite chain of simulations joining a sequence of automata.
struct SimulationChain {
    std::vector<Wta> automata;
    std::vector<ChainStep> steps;
};

inline bool validate_chain(const SimulationChain& chain) {
    if (chain.automata.size() != chain.steps.size() + 1) return false;
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        const ChainStep& step = chain.steps[i];
        const Wta& source = step.reversed ? chain.automata[i + 1] : chain.automata[i];
        const Wta& target = step.reversed ? chain.automata[i] : chain.automata[i + 1];
        if (!check_simulation(source, target, step.transfer).ok) return false;
        MatrixClass cls = classify(step.transfer);
        switch (step.kind) {
            case StepKind::general: break;
            case StepKind::forward_functional:
                if (!cls.functional) return false;
                break;
            case StepKind::backward_functional:
                if (!classify(transpose(step.transfer)).functional) return false;
                break;
            case StepKind::invertible_diagonal:
                if (!cls.invertible_diagonal) return false;
                break;
        }
    }
    return true;
}

} // namespace wata
