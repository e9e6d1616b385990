#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wata/errors.hpp"
#include "wata/linalg.hpp"
#include "wata/semiring.hpp"
#include "wata/tree.hpp"
#include "wata/wta.hpp"

namespace wata {

namespace detail {

/// Whitespace-and-punctuation tokenizer over line-oriented input with
/// `#` comments. Tracks 1-based positions for error reporting.
class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    struct Token {
        std::string text;
        std::size_t line;
        std::size_t column;
    };

    std::optional<Token> peek() {
        if (!lookahead_) lookahead_ = scan();
        return lookahead_;
    }

    std::optional<Token> next() {
        if (lookahead_) {
            auto t = std::move(lookahead_);
            lookahead_.reset();
            return t;
        }
        return scan();
    }

    Token expect(std::string_view what) {
        auto t = next();
        if (!t) throw ParseError("expected " + std::string(what) + ", found end of input", line_, column_);
        return *t;
    }

    Token expect_exact(std::string_view text) {
        Token t = expect("'" + std::string(text) + "'");
        if (t.text != text) {
            throw ParseError("expected '" + std::string(text) + "', found '" + t.text + "'",
                             t.line, t.column);
        }
        return t;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError(msg, t.line, t.column);
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static bool is_punct(char ch) {
        return ch == '(' || ch == ')' || ch == ',' || ch == ':' || ch == '{' || ch == '}';
    }

    std::optional<Token> scan() {
        for (;;) {
            if (pos_ >= text_.size()) return std::nullopt;
            char ch = text_[pos_];
            if (ch == '\n') {
                ++line_;
                column_ = 1;
                ++pos_;
                continue;
            }
            if (ch == ' ' || ch == '\t' || ch == '\r') {
                ++column_;
                ++pos_;
                continue;
            }
            if (ch == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        Token t{{}, line_, column_};
        char ch = text_[pos_];
        if (is_punct(ch)) {
            t.text = std::string(1, ch);
            ++pos_;
            ++column_;
            return t;
        }
        if (pos_ + 1 < text_.size() && ch == '-' && text_[pos_ + 1] == '>') {
            t.text = "->";
            pos_ += 2;
            column_ += 2;
            return t;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#' || is_punct(c)) break;
            if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
            ++pos_;
            ++column_;
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    std::optional<Token> lookahead_;
};

inline Value parse_value_token(Scanner& sc, Carrier carrier) {
    auto t = sc.expect("a value");
    auto v = try_parse_value(carrier, t.text);
    if (!v) sc.fail(t, "'" + t.text + "' is not a value of carrier " + std::string(carrier_name(carrier)));
    return *v;
}

} // namespace detail

/// Parses the line-oriented automaton format:
///
///   wta {
///     semiring int
///     symbol sigma 2
///     state q0
///     final q0 : 1
///     trans sigma (q0, q0) -> q0 : 2
///   }
///
/// Omitted final weights and transitions are 0. State declaration order is
/// preserved and fixes matrix column order everywhere.
inline Wta parse_wta(std::string_view text, std::string name = "") {
    detail::Scanner sc(text);
    sc.expect_exact("wta");
    sc.expect_exact("{");

    std::optional<Semiring> semiring;
    std::vector<Symbol> symbols;
    std::vector<std::string> states;
    struct FinalDecl {
        std::string state;
        Value weight;
    };
    struct TransDecl {
        std::string symbol;
        std::vector<std::string> children;
        std::string target;
        Value weight;
    };
    std::vector<FinalDecl> finals;
    std::vector<TransDecl> transitions;

    auto contains_symbol = [&](std::string_view n) {
        for (const Symbol& s : symbols) {
            if (s.name == n) return true;
        }
        return false;
    };
    auto contains_state = [&](std::string_view n) {
        for (const std::string& s : states) {
            if (s == n) return true;
        }
        return false;
    };
    auto require_semiring = [&](const detail::Scanner::Token& at) -> const Semiring& {
        if (!semiring) sc.fail(at, "the semiring must be declared before weights");
        return *semiring;
    };

    for (;;) {
        auto tok = sc.expect("a declaration or '}'");
        if (tok.text == "}") break;
        if (tok.text == "semiring") {
            auto nm = sc.expect("a semiring name");
            auto carrier = carrier_from_name(nm.text);
            if (!carrier) sc.fail(nm, "unknown semiring '" + nm.text + "'");
            if (semiring) sc.fail(tok, "duplicate semiring declaration");
            semiring = Semiring(*carrier);
        } else if (tok.text == "symbol") {
            auto nm = sc.expect("a symbol name");
            auto rank_tok = sc.expect("a rank");
            std::size_t rank = 0;
            for (char c : rank_tok.text) {
                if (c < '0' || c > '9') sc.fail(rank_tok, "rank must be a natural number");
                rank = rank * 10 + static_cast<std::size_t>(c - '0');
            }
            if (contains_symbol(nm.text)) sc.fail(nm, "duplicate symbol " + nm.text);
            symbols.push_back(Symbol{nm.text, rank});
        } else if (tok.text == "state") {
            auto nm = sc.expect("a state name");
            if (contains_state(nm.text)) sc.fail(nm, "duplicate state " + nm.text);
            states.push_back(nm.text);
        } else if (tok.text == "final") {
            auto nm = sc.expect("a state name");
            if (!contains_state(nm.text)) sc.fail(nm, "unknown state " + nm.text);
            sc.expect_exact(":");
            Value w = detail::parse_value_token(sc, require_semiring(tok).carrier());
            for (const FinalDecl& f : finals) {
                if (f.state == nm.text) sc.fail(nm, "duplicate final declaration for " + nm.text);
            }
            finals.push_back(FinalDecl{nm.text, std::move(w)});
        } else if (tok.text == "trans") {
            auto nm = sc.expect("a symbol name");
            std::size_t rank = 0;
            bool found = false;
            for (const Symbol& s : symbols) {
                if (s.name == nm.text) {
                    rank = s.rank;
                    found = true;
                    break;
                }
            }
            if (!found) sc.fail(nm, "unknown symbol " + nm.text);
            sc.expect_exact("(");
            std::vector<std::string> children;
            auto following = sc.expect("a state name or ')'");
            if (following.text != ")") {
                for (;;) {
                    if (!contains_state(following.text)) {
                        sc.fail(following, "unknown state " + following.text);
                    }
                    children.push_back(following.text);
                    auto sep = sc.expect("',' or ')'");
                    if (sep.text == ")") break;
                    if (sep.text != ",") sc.fail(sep, "expected ',' or ')'");
                    following = sc.expect("a state name");
                }
            }
            if (children.size() != rank) {
                sc.fail(nm, "symbol " + nm.text + " has rank " + std::to_string(rank) + " but " +
                                std::to_string(children.size()) + " children are listed");
            }
            sc.expect_exact("->");
            auto target = sc.expect("a state name");
            if (!contains_state(target.text)) sc.fail(target, "unknown state " + target.text);
            sc.expect_exact(":");
            Value w = detail::parse_value_token(sc, require_semiring(tok).carrier());
            for (const TransDecl& t : transitions) {
                if (t.symbol == nm.text && t.children == children && t.target == target.text) {
                    sc.fail(nm, "duplicate transition declaration");
                }
            }
            transitions.push_back(TransDecl{nm.text, std::move(children), target.text, std::move(w)});
        } else {
            sc.fail(tok, "unknown declaration '" + tok.text + "'");
        }
    }
    if (auto extra = sc.next()) {
        throw ParseError("trailing input after '}'", extra->line, extra->column);
    }
    if (!semiring) throw ParseError("missing semiring declaration", 1, 1);

    WtaBuilder builder(*semiring, RankedAlphabet(symbols));
    for (const std::string& s : states) builder.add_state(s);
    for (const FinalDecl& f : finals) builder.set_final(f.state, f.weight);
    for (const TransDecl& t : transitions) {
        builder.set_transition(t.symbol, t.children, t.target, t.weight);
    }
    return builder.build(std::move(name));
}

/// Canonical form: semiring, symbols, states in declaration order; only
/// nonzero final weights and transitions, in state-tuple order per symbol.
/// parse_wta(print_wta(m)) == m.
inline std::string print_wta(const Wta& m) {
    std::string out = "wta {\n";
    out += "  semiring " + std::string(m.semiring().name()) + "\n";
    for (const Symbol& sym : m.alphabet().symbols()) {
        out += "  symbol " + sym.name + " " + std::to_string(sym.rank) + "\n";
    }
    for (const std::string& s : m.states().labels()) out += "  state " + s + "\n";
    for (std::size_t i = 0; i < m.state_count(); ++i) {
        const Value& w = m.final_weights().at(i);
        if (!w.is_zero()) out += "  final " + m.states().label(i) + " : " + w.str() + "\n";
    }
    std::size_t n = m.state_count();
    for (const Symbol& sym : m.alphabet().symbols()) {
        const Matrix& mat = m.transition(sym.name);
        for (std::size_t row = 0; row < mat.row_count(); ++row) {
            std::vector<std::size_t> tuple(sym.rank);
            std::size_t rest = row;
            for (std::size_t i = sym.rank; i-- > 0;) {
                tuple[i] = rest % n;
                rest /= n;
            }
            for (std::size_t c = 0; c < mat.col_count(); ++c) {
                const Value& w = mat.at(row, c);
                if (w.is_zero()) continue;
                out += "  trans " + sym.name + " (";
                for (std::size_t i = 0; i < tuple.size(); ++i) {
                    if (i > 0) out += ", ";
                    out += m.states().label(tuple[i]);
                }
                out += ") -> " + m.states().label(c) + " : " + w.str() + "\n";
            }
        }
    }
    out += "}\n";
    return out;
}

/// Parses a matrix block
///
///   matrix {
///     row q0 : 1 0 2
///   }
///
/// against known row/column index sets; every row must be given exactly
/// once, with one value per column in the declared column order.
inline Matrix parse_matrix(std::string_view text, const Semiring& semiring, const IndexSet& rows,
                           const IndexSet& cols) {
    detail::Scanner sc(text);
    sc.expect_exact("matrix");
    sc.expect_exact("{");
    Matrix out(semiring, rows, cols);
    std::vector<bool> seen(rows.size(), false);
    for (;;) {
        auto tok = sc.expect("'row' or '}'");
        if (tok.text == "}") break;
        if (tok.text != "row") sc.fail(tok, "expected 'row' or '}'");
        auto nm = sc.expect("a row label");
        auto pos = rows.position(nm.text);
        if (!pos) sc.fail(nm, "unknown row label " + nm.text);
        if (seen[*pos]) sc.fail(nm, "duplicate row " + nm.text);
        seen[*pos] = true;
        sc.expect_exact(":");
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out.set(*pos, c, detail::parse_value_token(sc, semiring.carrier()));
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!seen[r]) {
            throw ParseError("missing row " + rows.label(r), sc.line(), sc.column());
        }
    }
    if (auto extra = sc.next()) {
        throw ParseError("trailing input after '}'", extra->line, extra->column);
    }
    return out;
}

inline std::string print_matrix(const Matrix& m) {
    std::string out = "matrix {\n";
    for (std::size_t r = 0; r < m.row_count(); ++r) {
        out += "  row " + m.rows().label(r) + " :";
        for (std::size_t c = 0; c < m.col_count(); ++c) out += " " + m.at(r, c).str();
        out += "\n";
    }
    out += "}\n";
    return out;
}

} // namespace wata
