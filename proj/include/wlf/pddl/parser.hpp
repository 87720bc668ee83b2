#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/pddl/model.hpp"

namespace wlf::pddl {

namespace detail {

// S-expression node. Leaves hold lower-cased symbols; every node keeps
// the source position of its first token for error messages.
struct Sexpr {
    std::string symbol;
    std::vector<Sexpr> items;
    bool is_list = false;
    int line = 0;
    int column = 0;

    bool is_symbol() const {return !is_list;}
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    struct Token {
        enum Kind { lparen, rparen, symbol, end } kind = end;
        std::string text;
        int line = 1;
        int column = 1;
    };

    Token next() {
        skip_blank();
        Token tok;
        tok.line = line_;
        tok.column = column_;
        if (pos_ >= text_.size())
            return tok;
        char c = text_[pos_];
        if (c == '(') {
            advance();
            tok.kind = Token::lparen;
            return tok;
        }
        if (c == ')') {
            advance();
            tok.kind = Token::rparen;
            return tok;
        }
        tok.kind = Token::symbol;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
            tok.text += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
            advance();
        }
        return tok;
    }

private:
    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

inline Sexpr parse_sexpr_from(Lexer &lexer, const Lexer::Token &first) {
    Sexpr node;
    node.line = first.line;
    node.column = first.column;
    if (first.kind == Lexer::Token::symbol) {
        node.symbol = first.text;
        return node;
    }
    if (first.kind != Lexer::Token::lparen)
        throw ParseError(first.line, first.column, "expected '(' or symbol");
    node.is_list = true;
    for (;;) {
        Lexer::Token tok = lexer.next();
        if (tok.kind == Lexer::Token::rparen)
            return node;
        if (tok.kind == Lexer::Token::end)
            throw ParseError(tok.line, tok.column, "unexpected end of input, expected ')'");
        node.items.push_back(parse_sexpr_from(lexer, tok));
    }
}

inline Sexpr parse_sexpr(std::string_view text) {
    Lexer lexer(text);
    Lexer::Token tok = lexer.next();
    if (tok.kind == Lexer::Token::end)
        throw ParseError(tok.line, tok.column, "empty input");
    Sexpr root = parse_sexpr_from(lexer, tok);
    Lexer::Token rest = lexer.next();
    if (rest.kind != Lexer::Token::end)
        throw ParseError(rest.line, rest.column, "trailing text after top-level form");
    return root;
}

[[noreturn]] inline void fail(const Sexpr &at, const std::string &message) {
    throw ParseError(at.line, at.column, message);
}

inline const Sexpr &expect_list(const Sexpr &node, const std::string &what) {
    if (!node.is_list)
        fail(node, "expected " + what);
    return node;
}

inline const std::string &expect_symbol(const Sexpr &node, const std::string &what) {
    if (node.is_list || node.symbol.empty())
        fail(node, "expected " + what);
    return node.symbol;
}

// Parses "x y - t u v - s ..." variable/object lists; untyped names get
// the root type.
struct TypedName {
    std::string name;
    int type;
    int line;
    int column;
};

inline std::vector<TypedName> parse_typed_names(const std::vector<Sexpr> &items, std::size_t begin,
                                                TypeTable &types, bool declare_types,
                                                int default_type = 0) {
    std::vector<TypedName> out;
    std::vector<std::size_t> pending;
    for (std::size_t i = begin; i < items.size(); ++i) {
        const std::string &sym = expect_symbol(items[i], "name");
        if (sym == "-") {
            if (++i >= items.size())
                fail(items[i - 1], "expected type after '-'");
            const std::string &tname = expect_symbol(items[i], "type name");
            int type = declare_types ? types.find_or_add(tname) : types.find(tname);
            if (type < 0)
                fail(items[i], "unknown type " + tname);
            for (std::size_t p : pending)
                out[p].type = type;
            pending.clear();
        } else {
            pending.push_back(out.size());
            out.push_back(TypedName{sym, default_type, items[i].line, items[i].column});
        }
    }
    return out;
}

inline AtomTemplate parse_atom_template(const Sexpr &node, const DomainDef &domain,
                                        const std::vector<Parameter> &params) {
    expect_list(node, "atom");
    if (node.items.empty())
        fail(node, "empty atom");
    const std::string &pname = expect_symbol(node.items[0], "predicate name");
    if (pname == "not" || pname == "or" || pname == "imply" || pname == "exists" ||
        pname == "forall" || pname == "when" || pname == "increase" || pname == "=")
        fail(node, "construct '" + pname + "' is outside the supported STRIPS fragment");
    AtomTemplate atom;
    atom.predicate = domain.predicate_index(pname);
    if (atom.predicate < 0)
        fail(node.items[0], "undeclared predicate " + pname);
    for (std::size_t i = 1; i < node.items.size(); ++i) {
        const std::string &arg = expect_symbol(node.items[i], "argument");
        Term term;
        if (arg.front() == '?') {
            for (std::size_t p = 0; p < params.size(); ++p)
                if (params[p].name == arg)
                    term.param = static_cast<int>(p);
            if (term.param < 0)
                fail(node.items[i], "unbound variable " + arg);
        } else {
            term.constant = arg;
        }
        atom.args.push_back(std::move(term));
    }
    int arity = domain.predicates[atom.predicate].arity;
    if (static_cast<int>(atom.args.size()) != arity)
        fail(node, "arity mismatch: " + pname + " expects " + std::to_string(arity) +
                       " arguments, got " + std::to_string(atom.args.size()));
    return atom;
}

inline std::vector<Sexpr> conjunction_members(const Sexpr &node) {
    expect_list(node, "condition");
    if (!node.items.empty() && node.items[0].is_symbol() && node.items[0].symbol == "and")
        return std::vector<Sexpr>(node.items.begin() + 1, node.items.end());
    if (node.items.empty())
        return {};
    return {node};
}

} // namespace detail

inline DomainDef parse_domain(std::string_view text) {
    using detail::Sexpr;
    Sexpr root = detail::parse_sexpr(text);
    detail::expect_list(root, "(define ...)");
    if (root.items.size() < 2 || !root.items[0].is_symbol() || root.items[0].symbol != "define")
        detail::fail(root, "expected (define (domain ...) ...)");
    const Sexpr &head = detail::expect_list(root.items[1], "(domain NAME)");
    if (head.items.size() != 2 || head.items[0].symbol != "domain")
        detail::fail(root.items[1], "expected (domain NAME)");

    DomainDef domain;
    domain.name = detail::expect_symbol(head.items[1], "domain name");

    static const std::set<std::string> supported = {":strips", ":typing"};

    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const Sexpr &section = detail::expect_list(root.items[i], "domain section");
        if (section.items.empty())
            detail::fail(section, "empty domain section");
        const std::string &tag = detail::expect_symbol(section.items[0], "section tag");
        if (tag == ":requirements") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const std::string &req = detail::expect_symbol(section.items[j], "requirement flag");
                if (!supported.count(req))
                    throw UnsupportedRequirementError(req);
                domain.requirements.push_back(req);
            }
        } else if (tag == ":types") {
            auto typed = detail::parse_typed_names(section.items, 1, domain.types, true);
            for (const auto &t : typed) {
                int id = domain.types.find_or_add(t.name);
                domain.types.parents[id] = t.type;
            }
        } else if (tag == ":constants") {
            auto typed = detail::parse_typed_names(section.items, 1, domain.types, false);
            for (const auto &t : typed) {
                domain.constants.push_back(t.name);
                domain.constant_types.push_back(t.type);
            }
        } else if (tag == ":predicates") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const Sexpr &pred = detail::expect_list(section.items[j], "predicate declaration");
                if (pred.items.empty())
                    detail::fail(pred, "empty predicate declaration");
                PredicateSchema schema;
                schema.name = detail::expect_symbol(pred.items[0], "predicate name");
                auto vars = detail::parse_typed_names(pred.items, 1, domain.types, false);
                schema.arity = static_cast<int>(vars.size());
                for (const auto &existing : domain.predicates)
                    if (existing.name == schema.name)
                        detail::fail(pred, "duplicate predicate " + schema.name);
                domain.predicates.push_back(std::move(schema));
            }
        } else if (tag == ":action") {
            // Interpreted in a second pass, once all predicates are known.
        } else if (tag == ":functions") {
            detail::fail(section, "construct ':functions' is outside the supported STRIPS fragment");
        } else {
            detail::fail(section, "unknown domain section " + tag);
        }
    }

    std::sort(domain.predicates.begin(), domain.predicates.end(),
              [](const PredicateSchema &a, const PredicateSchema &b) {return a.name < b.name;});

    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const Sexpr &section = root.items[i];
        if (section.items.empty() || !section.items[0].is_symbol() ||
            section.items[0].symbol != ":action")
            continue;
        if (section.items.size() < 2)
            detail::fail(section, "action without a name");
        ActionSchema schema;
        schema.name = detail::expect_symbol(section.items[1], "action name");
        std::size_t j = 2;
        while (j + 1 < section.items.size()) {
            const std::string &key = detail::expect_symbol(section.items[j], "action keyword");
            const Sexpr &value = section.items[j + 1];
            j += 2;
            if (key == ":parameters") {
                detail::expect_list(value, "parameter list");
                auto vars = detail::parse_typed_names(value.items, 0, domain.types, false);
                for (const auto &v : vars) {
                    if (v.name.front() != '?')
                        throw ParseError(v.line, v.column, "parameter must start with '?'");
                    schema.parameters.push_back(Parameter{v.name, v.type});
                }
            } else if (key == ":precondition") {
                for (const Sexpr &member : detail::conjunction_members(value))
                    schema.precondition.push_back(
                        detail::parse_atom_template(member, domain, schema.parameters));
            } else if (key == ":effect") {
                for (const Sexpr &member : detail::conjunction_members(value)) {
                    detail::expect_list(member, "effect");
                    if (!member.items.empty() && member.items[0].is_symbol() &&
                        member.items[0].symbol == "not") {
                        if (member.items.size() != 2)
                            detail::fail(member, "malformed (not ...) effect");
                        schema.delete_effects.push_back(
                            detail::parse_atom_template(member.items[1], domain,
                                                        schema.parameters));
                    } else {
                        schema.add_effects.push_back(
                            detail::parse_atom_template(member, domain, schema.parameters));
                    }
                }
            } else {
                detail::fail(section.items[j - 2], "unsupported action keyword " + key);
            }
        }
        domain.schemata.push_back(std::move(schema));
    }

    std::sort(domain.schemata.begin(), domain.schemata.end(),
              [](const ActionSchema &a, const ActionSchema &b) {return a.name < b.name;});
    return domain;
}

inline LiftedTask parse_problem(std::string_view text, const DomainDef &domain) {
    using detail::Sexpr;
    Sexpr root = detail::parse_sexpr(text);
    detail::expect_list(root, "(define ...)");
    if (root.items.size() < 2 || !root.items[0].is_symbol() || root.items[0].symbol != "define")
        detail::fail(root, "expected (define (problem ...) ...)");
    const Sexpr &head = detail::expect_list(root.items[1], "(problem NAME)");
    if (head.items.size() != 2 || head.items[0].symbol != "problem")
        detail::fail(root.items[1], "expected (problem NAME)");

    LiftedTask task;
    task.name = detail::expect_symbol(head.items[1], "problem name");
    task.domain = domain;

    std::vector<std::pair<std::string, int>> declared;
    for (std::size_t i = 0; i < domain.constants.size(); ++i)
        declared.emplace_back(domain.constants[i], domain.constant_types[i]);

    const Sexpr *init_section = nullptr;
    const Sexpr *goal_section = nullptr;

    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const Sexpr &section = detail::expect_list(root.items[i], "problem section");
        if (section.items.empty())
            detail::fail(section, "empty problem section");
        const std::string &tag = detail::expect_symbol(section.items[0], "section tag");
        if (tag == ":domain") {
            if (section.items.size() != 2 ||
                detail::expect_symbol(section.items[1], "domain name") != domain.name)
                detail::fail(section, "problem references a different domain");
        } else if (tag == ":objects") {
            TypeTable scratch = task.domain.types;
            auto typed = detail::parse_typed_names(section.items, 1, scratch, false);
            for (const auto &t : typed)
                declared.emplace_back(t.name, t.type);
        } else if (tag == ":init") {
            init_section = &section;
        } else if (tag == ":goal") {
            goal_section = &section;
        } else if (tag == ":metric") {
            detail::fail(section, "construct ':metric' is outside the supported STRIPS fragment");
        } else {
            detail::fail(section, "unknown problem section " + tag);
        }
    }

    std::sort(declared.begin(), declared.end());
    for (std::size_t i = 1; i < declared.size(); ++i)
        if (declared[i].first == declared[i - 1].first)
            throw ValidationError("duplicate object " + declared[i].first);
    for (const auto &[name, type] : declared) {
        task.objects.push_back(name);
        task.object_types.push_back(type);
    }

    auto parse_ground_atom = [&](const Sexpr &node) {
        detail::expect_list(node, "atom");
        if (node.items.empty())
            detail::fail(node, "empty atom");
        const std::string &pname = detail::expect_symbol(node.items[0], "predicate name");
        if (pname == "not")
            detail::fail(node, "construct 'not' is outside the supported STRIPS fragment");
        Atom atom;
        atom.predicate = domain.predicate_index(pname);
        if (atom.predicate < 0)
            detail::fail(node.items[0], "undeclared predicate " + pname);
        for (std::size_t i = 1; i < node.items.size(); ++i) {
            const std::string &oname = detail::expect_symbol(node.items[i], "object name");
            int obj = task.object_index(oname);
            if (obj < 0)
                detail::fail(node.items[i], "undeclared object " + oname);
            atom.args.push_back(obj);
        }
        int arity = domain.predicates[atom.predicate].arity;
        if (static_cast<int>(atom.args.size()) != arity)
            detail::fail(node, "arity mismatch: " + pname + " expects " + std::to_string(arity) +
                                   " arguments, got " + std::to_string(atom.args.size()));
        return atom;
    };

    if (init_section) {
        std::vector<Atom> atoms;
        for (std::size_t j = 1; j < init_section->items.size(); ++j)
            atoms.push_back(parse_ground_atom(init_section->items[j]));
        task.init = State::of(std::move(atoms));
    }
    if (goal_section) {
        if (goal_section->items.size() != 2)
            detail::fail(*goal_section, "expected (:goal CONDITION)");
        std::vector<Atom> atoms;
        for (const Sexpr &member : detail::conjunction_members(goal_section->items[1]))
            atoms.push_back(parse_ground_atom(member));
        task.goal = State::of(std::move(atoms));
    }
    return task;
}

} // namespace wlf::pddl
