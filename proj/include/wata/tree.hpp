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

namespace wata {

struct Symbol {
    std::string name;
    std::size_t rank = 0;

    bool operator==(const Symbol& other) const {
        return name == other.name && rank == other.rank;
    }
};

/// A finite set of ranked symbols. Declaration order is preserved and fixes
/// iteration order everywhere.
class RankedAlphabet {
public:
    RankedAlphabet() = default;

    explicit RankedAlphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
        for (const Symbol& s : symbols_) {
            if (!ranks_.emplace(s.name, s.rank).second) {
                throw InputError("duplicate symbol " + s.name);
            }
        }
    }

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }

    std::optional<std::size_t> rank_of(std::string_view name) const {
        auto it = ranks_.find(name);
        if (it == ranks_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(std::string_view name) const { return ranks_.find(name) != ranks_.end(); }

    bool has_nullary() const {
        return std::any_of(symbols_.begin(), symbols_.end(),
                           [](const Symbol& s) { return s.rank == 0; });
    }

    std::size_t max_rank() const {
        std::size_t m = 0;
        for (const Symbol& s : symbols_) m = std::max(m, s.rank);
        return m;
    }

    /// Alphabets are compared as sets; declaration order is presentation only.
    bool same_symbols(const RankedAlphabet& other) const { return ranks_ == other.ranks_; }

    bool operator==(const RankedAlphabet& other) const { return symbols_ == other.symbols_; }
    bool operator!=(const RankedAlphabet& other) const { return !(*this == other); }

private:
    std::vector<Symbol> symbols_;
    std::map<std::string, std::size_t, std::less<>> ranks_;
};

class Tree {
public:
    explicit Tree(std::string root, std::vector<Tree> children = {})
        : root_(std::move(root)), children_(std::move(children)), size_(1) {
        for (const Tree& c : children_) size_ += c.size_;
    }

    const std::string& root() const { return root_; }
    const std::vector<Tree>& children() const { return children_; }

    /// Node count.
    std::size_t size() const { return size_; }

    std::string str() const {
        if (children_.empty()) return root_;
        std::string out = root_ + "(";
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i > 0) out += ", ";
            out += children_[i].str();
        }
        out += ")";
        return out;
    }

    bool operator==(const Tree& other) const {
        return root_ == other.root_ && children_ == other.children_;
    }
    bool operator!=(const Tree& other) const { return !(*this == other); }

private:
    std::string root_;
    std::vector<Tree> children_;
    std::size_t size_;
};

/// The deterministic tree order used by enumeration and witness search:
/// by size, then by root symbol name, then by children left to right.
inline bool tree_less(const Tree& a, const Tree& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.root() != b.root()) return a.root() < b.root();
    for (std::size_t i = 0; i < a.children().size(); ++i) {
        if (a.children()[i] != b.children()[i]) return tree_less(a.children()[i], b.children()[i]);
    }
    return false;
}

/// Checks that every node's symbol exists in the alphabet with the right
/// arity; throws InputError otherwise.
inline void validate_tree(const RankedAlphabet& alphabet, const Tree& t) {
    auto rank = alphabet.rank_of(t.root());
    if (!rank) throw InputError("unknown symbol " + t.root());
    if (*rank != t.children().size()) {
        throw InputError("symbol " + t.root() + " has rank " + std::to_string(*rank) +
                         " but " + std::to_string(t.children().size()) + " children");
    }
    for (const Tree& c : t.children()) validate_tree(alphabet, c);
}

namespace detail {

inline std::vector<std::vector<Tree>> trees_by_size(const RankedAlphabet& alphabet,
                                                    std::size_t max_size) {
    // by_size[s] holds all trees with exactly s nodes, sorted by tree_less
    std::vector<std::vector<Tree>> by_size(max_size + 1);
    for (std::size_t s = 1; s <= max_size; ++s) {
        std::vector<Tree>& bucket = by_size[s];
        for (const Symbol& sym : alphabet.symbols()) {
            if (sym.rank == 0) {
                if (s == 1) bucket.emplace_back(sym.name);
                continue;
            }
            if (s < sym.rank + 1) continue;
            // distribute s - 1 nodes over sym.rank children, each >= 1
            std::vector<std::size_t> split(sym.rank, 1);
            std::size_t budget = s - 1;
            auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
                if (pos + 1 == split.size()) {
                    split[pos] = left;
                    std::vector<std::size_t> choice(split.size(), 0);
                    auto fill = [&](auto&& fill_self, std::size_t cpos) -> void {
                        if (cpos == split.size()) {
                            std::vector<Tree> children;
                            children.reserve(split.size());
                            for (std::size_t i = 0; i < split.size(); ++i) {
                                children.push_back(by_size[split[i]][choice[i]]);
                            }
                            bucket.emplace_back(sym.name, std::move(children));
                            return;
                        }
                        for (std::size_t i = 0; i < by_size[split[cpos]].size(); ++i) {
                            choice[cpos] = i;
                            fill_self(fill_self, cpos + 1);
                        }
                    };
                    fill(fill, 0);
                    return;
                }
                for (std::size_t take = 1; take + (split.size() - pos - 1) <= left; ++take) {
                    split[pos] = take;
                    self(self, pos + 1, left - take);
                }
            };
            rec(rec, 0, budget);
        }
        std::sort(bucket.begin(), bucket.end(), tree_less);
    }
    return by_size;
}

} // namespace detail

/// All trees with at most max_size nodes, ordered by size then
/// lexicographically. Distinct derivations yield distinct trees, so the
/// result is duplicate-free by construction.
inline std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_size) {
    if (max_size < 1) throw InputError("enumerate_trees requires max_size >= 1");
    auto by_size = detail::trees_by_size(alphabet, max_size);
    std::vector<Tree> out;
    for (std::size_t s = 1; s <= max_size; ++s) {
        out.insert(out.end(), by_size[s].begin(), by_size[s].end());
    }
    return out;
}

/// Trees with exactly `size` nodes in enumeration order.
inline std::vector<Tree> enumerate_trees_of_size(const RankedAlphabet& alphabet,
                                                 std::size_t size) {
    if (size < 1) throw InputError("tree size must be >= 1");
    return detail::trees_by_size(alphabet, size)[size];
}

/// Parses `sigma(alpha, sigma(alpha, alpha))`; a nullary symbol may be
/// written bare or with empty parentheses. Arities are not checked here;
/// see validate_tree.
inline Tree parse_tree(std::string_view text) {
    std::size_t pos = 0;
    auto error = [&](const std::string& msg) -> ParseError {
        return ParseError(msg, 1, pos + 1);
    };
    auto skip_ws = [&] {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    auto is_name_char = [](char ch) {
        return ch != '(' && ch != ')' && ch != ',' && ch != ' ' && ch != '\t' && ch != ':' &&
               ch != '#' && ch != '{' && ch != '}';
    };
    auto parse_node = [&](auto&& self) -> Tree {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && is_name_char(text[pos])) ++pos;
        if (pos == start) throw error("expected a symbol name");
        std::string name(text.substr(start, pos - start));
        skip_ws();
        std::vector<Tree> children;
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            skip_ws();
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
            } else {
                while (true) {
                    children.push_back(self(self));
                    skip_ws();
                    if (pos < text.size() && text[pos] == ',') {
                        ++pos;
                        continue;
                    }
                    if (pos < text.size() && text[pos] == ')') {
                        ++pos;
                        break;
                    }
                    throw error("expected ',' or ')'");
                }
            }
        }
        return Tree(std::move(name), std::move(children));
    };
    Tree t = parse_node(parse_node);
    skip_ws();
    if (pos != text.size()) throw error("trailing input after tree");
    return t;
}

} // namespace wata
