#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wata/errors.hpp"
#include "wata/linalg.hpp"
#include "wata/semiring.hpp"
#include "wata/tree.hpp"

namespace wata {

/// A weighted tree automaton: per-symbol transition matrices over the state
/// tuple index sets and a final weight vector. Immutable after construction.
class Wta {
public:
    Wta(Semiring semiring, RankedAlphabet alphabet, IndexSet states,
        std::map<std::string, Matrix> transitions, Vec final_weights, std::string name = "")
        : semiring_(semiring), alphabet_(std::move(alphabet)), states_(std::move(states)),
          transitions_(std::move(transitions)), final_(std::move(final_weights)),
          name_(std::move(name)) {
        if (final_.semiring() != semiring_ || final_.index() != states_) {
            throw ShapeError("final vector does not match the state set");
        }
        for (const Symbol& sym : alphabet_.symbols()) {
            auto it = transitions_.find(sym.name);
            if (it == transitions_.end()) {
                throw ShapeError("missing transition matrix for symbol " + sym.name);
            }
            const Matrix& m = it->second;
            if (m.semiring() != semiring_) {
                throw ShapeError("transition matrix of " + sym.name + " has the wrong semiring");
            }
            if (m.rows() != tuple_power(states_, sym.rank) || m.cols() != states_) {
                throw ShapeError("transition matrix of " + sym.name + " has the wrong shape");
            }
        }
        if (transitions_.size() != alphabet_.size()) {
            throw ShapeError("transition map mentions symbols outside the alphabet");
        }
    }

    const Semiring& semiring() const { return semiring_; }
    const RankedAlphabet& alphabet() const { return alphabet_; }
    const IndexSet& states() const { return states_; }
    const Vec& final_weights() const { return final_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    std::size_t state_count() const { return states_.size(); }

    const Matrix& transition(std::string_view symbol) const {
        auto it = transitions_.find(std::string(symbol));
        if (it == transitions_.end()) throw InputError("unknown symbol " + std::string(symbol));
        return it->second;
    }

    /// Equality of the presentation (name excluded): same semiring, symbol
    /// and state order, transitions, and final weights.
    bool operator==(const Wta& other) const {
        return semiring_ == other.semiring_ && alphabet_ == other.alphabet_ &&
               states_ == other.states_ && transitions_ == other.transitions_ &&
               final_ == other.final_;
    }
    bool operator!=(const Wta& other) const { return !(*this == other); }

private:
    Semiring semiring_;
    RankedAlphabet alphabet_;
    IndexSet states_;
    std::map<std::string, Matrix> transitions_;
    Vec final_;
    std::string name_;
};

/// Incremental construction of a Wta; unset weights stay zero.
class WtaBuilder {
public:
    WtaBuilder(Semiring semiring, RankedAlphabet alphabet)
        : semiring_(semiring), alphabet_(std::move(alphabet)) {}

    void add_state(std::string name) { state_names_.push_back(std::move(name)); }

    void set_final(std::string_view state, Value weight) {
        finals_.emplace_back(std::string(state), std::move(weight));
    }

    void set_transition(std::string_view symbol, std::vector<std::string> children,
                        std::string_view target, Value weight) {
        transitions_.push_back(
            Entry{std::string(symbol), std::move(children), std::string(target), std::move(weight)});
    }

    Wta build(std::string name = "") const {
        IndexSet states(state_names_);
        std::map<std::string, Matrix> mu;
        for (const Symbol& sym : alphabet_.symbols()) {
            mu.emplace(sym.name, Matrix(semiring_, tuple_power(states, sym.rank), states));
        }
        for (const Entry& e : transitions_) {
            auto rank = alphabet_.rank_of(e.symbol);
            if (!rank) throw InputError("unknown symbol " + e.symbol);
            if (*rank != e.children.size()) {
                throw InputError("symbol " + e.symbol + " has rank " + std::to_string(*rank) +
                                 " but the transition lists " + std::to_string(e.children.size()) +
                                 " children");
            }
            Matrix& m = mu.at(e.symbol);
            std::size_t row = 0;
            for (const std::string& child : e.children) {
                row = row * states.size() + states.position_or_throw(child);
            }
            m.set(row, states.position_or_throw(e.target), e.weight);
        }
        Vec final_weights(semiring_, states);
        for (const auto& [state, weight] : finals_) {
            final_weights.set(states.position_or_throw(state), weight);
        }
        return Wta(semiring_, alphabet_, states, std::move(mu), std::move(final_weights),
                   std::move(name));
    }

private:
    struct Entry {
        std::string symbol;
        std::vector<std::string> children;
        std::string target;
        Value weight;
    };

    Semiring semiring_;
    RankedAlphabet alphabet_;
    std::vector<std::string> state_names_;
    std::vector<std::pair<std::string, Value>> finals_;
    std::vector<Entry> transitions_;
};

/// The state-indexed weight vector of a tree, computed bottom-up.
inline Vec eval_vector(const Wta& m, const Tree& t) {
    validate_tree(m.alphabet(), t);
    auto rec = [&](auto&& self, const Tree& node) -> Vec {
        Vec tuple(m.semiring(), IndexSet::unit());
        tuple.set(0, m.semiring().one());
        for (const Tree& child : node.children()) tuple = kron(tuple, self(self, child));
        return vecmat(tuple, m.transition(node.root()));
    };
    return rec(rec, t);
}

/// The weight the automaton assigns to a tree.
inline Value eval(const Wta& m, const Tree& t) {
    return dot(eval_vector(m, t), m.final_weights());
}

/// The Boolean support automaton: every nonzero weight becomes 1.
inline Wta support(const Wta& m) {
    Semiring sr(Carrier::boolean);
    auto f = [&](const Value& v) { return v.is_zero() ? sr.zero() : sr.one(); };
    std::map<std::string, Matrix> mu;
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& src = m.transition(sym.name);
        Matrix dst(sr, src.rows(), src.cols());
        for (std::size_t r = 0; r < src.row_count(); ++r) {
            for (std::size_t c = 0; c < src.col_count(); ++c) dst.set(r, c, f(src.at(r, c)));
        }
        mu.emplace(sym.name, std::move(dst));
    }
    Vec final_weights(sr, m.states());
    for (std::size_t i = 0; i < m.state_count(); ++i) {
        final_weights.set(i, f(m.final_weights().at(i)));
    }
    return Wta(sr, m.alphabet(), m.states(), std::move(mu), std::move(final_weights), m.name());
}

namespace detail {

/// Decodes row index `row` of the Q^k tuple index set into k state positions.
inline std::vector<std::size_t> decode_tuple(std::size_t row, std::size_t k,
                                             std::size_t state_count) {
    std::vector<std::size_t> tuple(k);
    for (std::size_t i = k; i-- > 0;) {
        tuple[i] = row % state_count;
        row /= state_count;
    }
    return tuple;
}

inline std::vector<bool> accessible_states(const Wta& m) {
    std::size_t n = m.state_count();
    std::vector<bool> accessible(n, false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Symbol& sym : m.alphabet().symbols()) {
            const Matrix& mat = m.transition(sym.name);
            for (std::size_t row = 0; row < mat.row_count(); ++row) {
                auto tuple = decode_tuple(row, sym.rank, n);
                bool all_accessible = true;
                for (std::size_t q : tuple) {
                    if (!accessible[q]) {
                        all_accessible = false;
                        break;
                    }
                }
                if (!all_accessible) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    if (!accessible[c] && !mat.at(row, c).is_zero()) {
                        accessible[c] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    return accessible;
}

} // namespace detail

struct TrimResult {
    Wta automaton;
    std::vector<std::string> removed;
};

/// Removes states that are not both accessible and co-accessible in the
/// support automaton, restricting transitions and final weights. The result
/// may have zero states.
inline TrimResult trim(const Wta& m) {
    std::size_t n = m.state_count();
    std::vector<bool> accessible = detail::accessible_states(m);

    // a state is co-accessible if it has a nonzero final weight or feeds,
    // alongside accessible siblings, a transition into a co-accessible state
    std::vector<bool> coaccessible(n, false);
    for (std::size_t q = 0; q < n; ++q) {
        coaccessible[q] = !m.final_weights().at(q).is_zero();
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Symbol& sym : m.alphabet().symbols()) {
            if (sym.rank == 0) continue;
            const Matrix& mat = m.transition(sym.name);
            for (std::size_t row = 0; row < mat.row_count(); ++row) {
                auto tuple = detail::decode_tuple(row, sym.rank, n);
                for (std::size_t c = 0; c < n; ++c) {
                    if (!coaccessible[c] || mat.at(row, c).is_zero()) continue;
                    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
                        bool siblings_accessible = true;
                        for (std::size_t other = 0; other < tuple.size(); ++other) {
                            if (other != pos && !accessible[tuple[other]]) {
                                siblings_accessible = false;
                                break;
                            }
                        }
                        if (siblings_accessible && !coaccessible[tuple[pos]]) {
                            coaccessible[tuple[pos]] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
    }

    std::vector<std::string> kept;
    std::vector<std::string> removed;
    for (std::size_t q = 0; q < n; ++q) {
        if (accessible[q] && coaccessible[q]) {
            kept.push_back(m.states().label(q));
        } else {
            removed.push_back(m.states().label(q));
        }
    }
    if (removed.empty()) return TrimResult{m, {}};

    WtaBuilder builder(m.semiring(), m.alphabet());
    IndexSet kept_states(kept);
    for (const std::string& s : kept) builder.add_state(s);
    for (const std::string& s : kept) {
        const Value& w = m.final_weights().at(m.states().position_or_throw(s));
        if (!w.is_zero()) builder.set_final(s, w);
    }
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mat = m.transition(sym.name);
        for (std::size_t row = 0; row < mat.row_count(); ++row) {
            auto tuple = detail::decode_tuple(row, sym.rank, n);
            bool tuple_kept = true;
            std::vector<std::string> children;
            for (std::size_t q : tuple) {
                if (!kept_states.contains(m.states().label(q))) {
                    tuple_kept = false;
                    break;
                }
                children.push_back(m.states().label(q));
            }
            if (!tuple_kept) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (mat.at(row, c).is_zero() || !kept_states.contains(m.states().label(c))) {
                    continue;
                }
                builder.set_transition(sym.name, children, m.states().label(c), mat.at(row, c));
            }
        }
    }
    return TrimResult{builder.build(m.name()), std::move(removed)};
}

inline bool is_trim(const Wta& m) { return trim(m).removed.empty(); }

} // namespace wata
