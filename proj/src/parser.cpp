#include "homsa/parser.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>

#include "homsa/errors.hpp"

namespace homsa {

namespace {

enum class Tok {
    IDENT, NUMBER, LPAREN, RPAREN, AND, OR, BANG,
    PLUS, MINUS, STAR, CARET, SLASH, SEMI, EQUALS, LE, GE, END
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

[[noreturn]] void fail(int line, int col, const std::string& message) {
    std::ostringstream out;
    out << "line " << line << ", col " << col << ": " << message;
    throw input_error(out.str());
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_space();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Tok::END, "", line, col};
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                word.push_back(take());
            return {Tok::IDENT, word, line, col};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::string num;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                    text_[pos_] == 'e' || text_[pos_] == 'E' ||
                    ((text_[pos_] == '+' || text_[pos_] == '-') && !num.empty() &&
                     (num.back() == 'e' || num.back() == 'E'))))
                num.push_back(take());
            return {Tok::NUMBER, num, line, col};
        }
        take();
        switch (c) {
        case '(': return {Tok::LPAREN, "(", line, col};
        case ')': return {Tok::RPAREN, ")", line, col};
        case '&': return {Tok::AND, "&", line, col};
        case '|': return {Tok::OR, "|", line, col};
        case '!': return {Tok::BANG, "!", line, col};
        case '+': return {Tok::PLUS, "+", line, col};
        case '-': return {Tok::MINUS, "-", line, col};
        case '*': return {Tok::STAR, "*", line, col};
        case '^': return {Tok::CARET, "^", line, col};
        case '/': return {Tok::SLASH, "/", line, col};
        case ';': return {Tok::SEMI, ";", line, col};
        case '=': return {Tok::EQUALS, "=", line, col};
        case '<':
            if (pos_ < text_.size() && text_[pos_] == '=') {
                take();
                return {Tok::LE, "<=", line, col};
            }
            fail(line, col, "expected '<='");
        case '>':
            if (pos_ < text_.size() && text_[pos_] == '=') {
                take();
                return {Tok::GE, ">=", line, col};
            }
            fail(line, col, "expected '>='");
        default: fail(line, col, std::string("unexpected character '") + c + "'");
        }
    }

private:
    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') { // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') take();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                break;
            }
        }
    }
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    ProblemInput run() {
        while (true) {
            if (cur_.kind == Tok::IDENT && cur_.text == "vars") {
                advance();
                parse_vars_decl();
            } else if (cur_.kind == Tok::IDENT && cur_.text == "poly") {
                advance();
                parse_poly_decl();
            } else {
                break;
            }
            expect(Tok::SEMI, "expected ';' after declaration");
        }
        if (!(cur_.kind == Tok::IDENT && cur_.text == "formula"))
            fail(cur_.line, cur_.col, "expected 'formula'");
        advance();
        LaxFormula phi = parse_or();
        if (cur_.kind == Tok::BANG)
            fail(cur_.line, cur_.col, "lax formulas admit no negation");
        if (cur_.kind != Tok::END) fail(cur_.line, cur_.col, "trailing input after formula");
        if (polys_.empty()) fail(cur_.line, cur_.col, "no polynomials declared");
        if (var_names_.empty()) fail(cur_.line, cur_.col, "no variables in use");
        return ProblemInput{PolyTuple(std::move(polys_)), std::move(phi), std::move(var_names_),
                            std::move(poly_names_)};
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void expect(Tok kind, const std::string& message) {
        if (cur_.kind != kind) fail(cur_.line, cur_.col, message);
        advance();
    }

    std::size_t var_index(const std::string& name) {
        auto it = var_lookup_.find(name);
        if (it != var_lookup_.end()) return it->second;
        if (vars_fixed_)
            fail(cur_.line, cur_.col, "unknown variable '" + name + "'");
        var_lookup_.emplace(name, var_names_.size());
        var_names_.push_back(name);
        return var_names_.size() - 1;
    }

    void parse_vars_decl() {
        if (cur_.kind != Tok::IDENT) fail(cur_.line, cur_.col, "expected variable name");
        while (cur_.kind == Tok::IDENT) {
            if (var_lookup_.count(cur_.text))
                fail(cur_.line, cur_.col, "duplicate variable '" + cur_.text + "'");
            var_lookup_.emplace(cur_.text, var_names_.size());
            var_names_.push_back(cur_.text);
            advance();
        }
        vars_fixed_ = true;
    }

    unsigned parse_nat(const std::string& what) {
        if (cur_.kind != Tok::NUMBER) fail(cur_.line, cur_.col, "expected " + what);
        char* end = nullptr;
        long v = std::strtol(cur_.text.c_str(), &end, 10);
        if (*end != '\0' || v < 0) fail(cur_.line, cur_.col, "expected " + what);
        advance();
        return static_cast<unsigned>(v);
    }

    double parse_coeff_value() {
        int line = cur_.line, col = cur_.col;
        std::string text = cur_.text;
        advance();
        if (cur_.kind == Tok::SLASH) { // rational a/b, parsed exactly
            advance();
            if (cur_.kind != Tok::NUMBER) fail(cur_.line, cur_.col, "expected denominator");
            char* enda = nullptr;
            char* endb = nullptr;
            double num = static_cast<double>(std::strtoll(text.c_str(), &enda, 10));
            double den = static_cast<double>(std::strtoll(cur_.text.c_str(), &endb, 10));
            if (*enda != '\0' || *endb != '\0' || den == 0.0)
                fail(line, col, "malformed rational coefficient");
            advance();
            return num / den;
        }
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (*end != '\0') fail(line, col, "malformed number");
        return v;
    }

    // One signed product of an optional coefficient and variable powers.
    void parse_term(double sign, std::map<std::string, unsigned>& exps_out, double& coeff_out) {
        double coeff = sign;
        bool any = false;
        if (cur_.kind == Tok::NUMBER) {
            coeff *= parse_coeff_value();
            any = true;
        }
        std::map<std::string, unsigned> exps;
        while (cur_.kind == Tok::IDENT || cur_.kind == Tok::STAR) {
            if (cur_.kind == Tok::IDENT &&
                (cur_.text == "deg" || cur_.text == "vars" || cur_.text == "poly" ||
                 cur_.text == "formula"))
                break; // keywords cannot be variable names
            if (cur_.kind == Tok::STAR) {
                advance();
                continue;
            }
            std::string name = cur_.text;
            advance();
            unsigned e = 1;
            if (cur_.kind == Tok::CARET) {
                advance();
                e = parse_nat("exponent");
            }
            exps[name] += e;
            any = true;
        }
        if (!any) fail(cur_.line, cur_.col, "expected a term");
        exps_out = std::move(exps);
        coeff_out = coeff;
    }

    void parse_poly_decl() {
        if (cur_.kind != Tok::IDENT) fail(cur_.line, cur_.col, "expected polynomial name");
        std::string name = cur_.text;
        if (poly_lookup_.count(name))
            fail(cur_.line, cur_.col, "duplicate polynomial '" + name + "'");
        advance();
        expect(Tok::EQUALS, "expected '=' in poly declaration");

        // Accumulate terms with named variables; resolve indices afterwards
        // so that new variables discovered mid-expression are handled.
        std::vector<std::pair<std::map<std::string, unsigned>, double>> raw_terms;
        double sign = 1.0;
        if (cur_.kind == Tok::PLUS || cur_.kind == Tok::MINUS) {
            sign = cur_.kind == Tok::MINUS ? -1.0 : 1.0;
            advance();
        }
        while (true) {
            std::map<std::string, unsigned> exps;
            double coeff = 0.0;
            parse_term(sign, exps, coeff);
            raw_terms.emplace_back(std::move(exps), coeff);
            if (cur_.kind == Tok::PLUS || cur_.kind == Tok::MINUS) {
                sign = cur_.kind == Tok::MINUS ? -1.0 : 1.0;
                advance();
            } else {
                break;
            }
        }
        std::optional<unsigned> annotated;
        if (cur_.kind == Tok::IDENT && cur_.text == "deg") {
            advance();
            annotated = parse_nat("degree annotation");
        }
        for (const auto& [exps, coeff] : raw_terms)
            for (const auto& [vname, e] : exps) var_index(vname);
        pending_polys_.push_back({name, std::move(raw_terms), annotated});
        poly_lookup_.emplace(name, pending_polys_.size() - 1);
        poly_names_.push_back(name);
        rebuild_polys();
    }

    // Polynomials share the full variable list, so they are (re)built once
    // the set of variables can still grow.
    void rebuild_polys() {
        polys_.clear();
        for (const auto& pending : pending_polys_) {
            Polynomial::TermMap terms;
            unsigned actual = 0;
            for (const auto& [exps, coeff] : pending.terms) {
                Monomial mono(var_names_.size(), 0u);
                for (const auto& [vname, e] : exps) mono[var_lookup_.at(vname)] += e;
                actual = std::max(actual, total_degree(mono));
                terms[mono] += coeff;
            }
            unsigned degree = std::max(1u, actual);
            if (pending.annotated) {
                if (*pending.annotated < actual)
                    throw input_error("degree annotation " + std::to_string(*pending.annotated) +
                                      " on '" + pending.name + "' is smaller than the actual degree " +
                                      std::to_string(actual));
                degree = std::max(1u, *pending.annotated);
            }
            polys_.emplace_back(var_names_.size(), degree, false, std::move(terms));
        }
    }

    LaxFormula parse_or() {
        std::vector<LaxFormula> parts;
        parts.push_back(parse_and());
        while (cur_.kind == Tok::OR) {
            advance();
            parts.push_back(parse_and());
        }
        return LaxFormula::disjunction(std::move(parts));
    }

    LaxFormula parse_and() {
        std::vector<LaxFormula> parts;
        parts.push_back(parse_primary());
        while (cur_.kind == Tok::AND) {
            advance();
            parts.push_back(parse_primary());
        }
        return LaxFormula::conjunction(std::move(parts));
    }

    LaxFormula parse_primary() {
        if (cur_.kind == Tok::BANG)
            fail(cur_.line, cur_.col, "lax formulas admit no negation");
        if (cur_.kind != Tok::LPAREN)
            fail(cur_.line, cur_.col, "expected '(' starting an atom or group");
        int line = cur_.line, col = cur_.col;
        advance();
        if (cur_.kind == Tok::IDENT) {
            // Could be an atom "(p <= 0)" or a parenthesized formula whose
            // first token is an ident (which the grammar does not allow
            // except inside an atom), so lex-ahead on the relation.
            std::string name = cur_.text;
            advance();
            Relation rel;
            switch (cur_.kind) {
            case Tok::LE: rel = Relation::LE; break;
            case Tok::EQUALS: rel = Relation::EQ; break;
            case Tok::GE: rel = Relation::GE; break;
            default: fail(cur_.line, cur_.col, "expected relation '<=', '=' or '>='");
            }
            advance();
            if (cur_.kind != Tok::NUMBER || cur_.text != "0")
                fail(cur_.line, cur_.col, "atoms compare against literal 0");
            advance();
            expect(Tok::RPAREN, "expected ')' closing atom");
            auto it = poly_lookup_.find(name);
            if (it == poly_lookup_.end())
                fail(line, col, "unknown polynomial name '" + name + "'");
            return LaxFormula::atom(Atom{it->second, rel});
        }
        LaxFormula inner = parse_or();
        expect(Tok::RPAREN, "expected ')'");
        return inner;
    }

    struct PendingPoly {
        std::string name;
        std::vector<std::pair<std::map<std::string, unsigned>, double>> terms;
        std::optional<unsigned> annotated;
    };

    Lexer lexer_;
    Token cur_{};
    std::map<std::string, std::size_t> var_lookup_;
    std::vector<std::string> var_names_;
    bool vars_fixed_ = false;
    std::map<std::string, std::size_t> poly_lookup_;
    std::vector<std::string> poly_names_;
    std::vector<PendingPoly> pending_polys_;
    std::vector<Polynomial> polys_;
};

} // namespace

ProblemInput parse(const std::string& text) { return Parser(text).run(); }

std::string print_problem(const ProblemInput& input) {
    std::ostringstream out;
    out << "vars";
    for (const auto& v : input.var_names) out << " " << v;
    out << ";\n";
    for (std::size_t i = 0; i < input.tuple.size(); ++i) {
        out << "poly " << input.poly_names[i] << " = "
            << to_string(input.tuple[i], input.var_names);
        if (input.tuple[i].degree() != std::max(1u, input.tuple[i].actual_total_degree()))
            out << " deg " << input.tuple[i].degree();
        out << ";\n";
    }
    out << "formula " << to_string(input.formula, input.poly_names) << "\n";
    return out.str();
}

} // namespace homsa
