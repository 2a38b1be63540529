#include "iupc/dsl.hpp"

#include <algorithm>
#include <cctype>

#include "iupc/errors.hpp"
#include "iupc/properties.hpp"

namespace iupc {

namespace {

struct Token {
    enum class Kind { Ident, String, Int, DurationLit, Symbol, End };

    Kind kind = Kind::End;
    std::string text;          // ident or symbol spelling
    std::string string_value;  // String
    std::int64_t int_value = 0;
    Duration duration_value;
    int line = 1;
    int column = 1;
    std::size_t offset = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { tokenize(); }

    const std::vector<Token>& tokens() const { return tokens_; }

private:
    [[noreturn]] void fail(const std::string& message) {
        throw SyntaxError(message, line_, column_);
    }

    void push(Token t) {
        t.line = tok_line_;
        t.column = tok_col_;
        t.offset = tok_offset_;
        tokens_.push_back(std::move(t));
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void lex_number(bool negative) {
        std::int64_t v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (advance() - '0');
        if (negative) v = -v;
        char unit = peek();
        if ((unit == 'm' || unit == 'h' || unit == 'd') && !ident_char(peek(1))) {
            advance();
            Token t;
            t.kind = Token::Kind::DurationLit;
            switch (unit) {
                case 'm': t.duration_value = Duration::minutes(v); break;
                case 'h': t.duration_value = Duration::hours(v); break;
                default: t.duration_value = Duration::days(v); break;
            }
            push(std::move(t));
            return;
        }
        Token t;
        t.kind = Token::Kind::Int;
        t.int_value = v;
        push(std::move(t));
    }

    void lex_string(char delim) {
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated string literal");
            char c = advance();
            if (c == delim) break;
            if (c == '\n') fail("unterminated string literal");
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("unterminated string literal");
                char esc = advance();
                if (esc != '\'' && esc != '"' && esc != '\\')
                    fail(std::string("invalid escape '\\") + esc + "' in string literal");
                out += esc;
            } else {
                out += c;
            }
        }
        Token t;
        t.kind = Token::Kind::String;
        t.string_value = std::move(out);
        push(std::move(t));
    }

    void tokenize() {
        while (pos_ < text_.size()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && peek() != '\n') advance();
                continue;
            }
            tok_line_ = line_;
            tok_col_ = column_;
            tok_offset_ = pos_;
            if (ident_start(c)) {
                std::string ident;
                while (ident_char(peek())) ident += advance();
                Token t;
                t.kind = Token::Kind::Ident;
                t.text = std::move(ident);
                push(std::move(t));
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number(false);
                continue;
            }
            if (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                advance();
                lex_number(true);
                continue;
            }
            if (c == '\'' || c == '"') {
                advance();
                lex_string(c);
                continue;
            }
            auto symbol = [&](std::string s) {
                Token t;
                t.kind = Token::Kind::Symbol;
                t.text = std::move(s);
                push(std::move(t));
            };
            switch (c) {
                case '{': case '}': case '(': case ')': case ';': case ',': case '.':
                    advance();
                    symbol(std::string(1, c));
                    continue;
                case ':':
                    advance();
                    if (peek() != '=') fail("expected '=' after ':'");
                    advance();
                    symbol(":=");
                    continue;
                case '=':
                    advance();
                    if (peek() == '=') advance();  // '=' and '==' are synonyms
                    symbol("==");
                    continue;
                case '!':
                    advance();
                    if (peek() != '=') fail("expected '=' after '!'");
                    advance();
                    symbol("!=");
                    continue;
                case '<':
                    advance();
                    if (peek() == '=') {
                        advance();
                        symbol("<=");
                    } else {
                        symbol("<");
                    }
                    continue;
                case '>':
                    advance();
                    if (peek() == '=') {
                        advance();
                        symbol(">=");
                    } else {
                        symbol(">");
                    }
                    continue;
                default:
                    fail(std::string("unexpected character '") + c + "'");
            }
        }
        tok_line_ = line_;
        tok_col_ = column_;
        tok_offset_ = pos_;
        push(Token{});
    }

    std::string_view text_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    int tok_line_ = 1;
    int tok_col_ = 1;
    std::size_t tok_offset_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text), lexer_(text) {}

    RuleDocument parse_document() {
        RuleDocument doc;
        while (!at_end()) {
            if (peek_ident("constraint"))
                doc.constraints.push_back(parse_constraint_block());
            else if (peek_ident("meta"))
                doc.metas.push_back(parse_meta_block());
            else if (peek_ident("rule"))
                doc.opaque_rules.push_back(parse_rule_block());
            else
                fail("expected 'constraint', 'meta' or 'rule'");
        }
        return doc;
    }

    DataExpr parse_expr_document() {
        DataExpr e = parse_data_or();
        expect_end();
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, lexer_.tokens().size() - 1);
        return lexer_.tokens()[i];
    }

    bool at_end() const { return peek().kind == Token::Kind::End; }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        std::string found;
        switch (t.kind) {
            case Token::Kind::End: found = "end of input"; break;
            case Token::Kind::String: found = "string '" + t.string_value + "'"; break;
            case Token::Kind::Int: found = "number " + std::to_string(t.int_value); break;
            case Token::Kind::DurationLit: found = "duration"; break;
            default: found = "'" + t.text + "'"; break;
        }
        throw SyntaxError(message + ", found " + found, t.line, t.column);
    }

    Token advance() { return lexer_.tokens()[pos_ < lexer_.tokens().size() - 1 ? pos_++ : pos_]; }

    bool peek_ident(std::string_view word, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Token::Kind::Ident && t.text == word;
    }

    bool peek_symbol(std::string_view sym, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Token::Kind::Symbol && t.text == sym;
    }

    bool accept_ident(std::string_view word) {
        if (!peek_ident(word)) return false;
        ++pos_;
        return true;
    }

    bool accept_symbol(std::string_view sym) {
        if (!peek_symbol(sym)) return false;
        ++pos_;
        return true;
    }

    void expect_ident(std::string_view word) {
        if (!accept_ident(word)) fail("expected '" + std::string(word) + "'");
    }

    void expect_symbol(std::string_view sym) {
        if (!accept_symbol(sym)) fail("expected '" + std::string(sym) + "'");
    }

    void expect_end() {
        if (!at_end()) fail("expected end of input");
    }

    std::string expect_name(const std::string& what) {
        if (peek().kind != Token::Kind::Ident) fail("expected " + what);
        return advance().text;
    }

    std::string expect_string(const std::string& what) {
        if (peek().kind != Token::Kind::String) fail("expected " + what);
        return advance().string_value;
    }

    Duration expect_duration() {
        if (peek().kind != Token::Kind::DurationLit)
            fail("expected duration (integer with unit m, h or d)");
        return advance().duration_value;
    }

    std::string slice_since(std::size_t start_offset) const {
        std::size_t end_offset = peek().offset;
        std::string out(text_.substr(start_offset, end_offset - start_offset));
        while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
        return out;
    }

    // --- constraint block ----------------------------------------------------

    ProcessConstraint parse_constraint_block() {
        std::size_t start = peek().offset;
        expect_ident("constraint");
        ProcessConstraint c;
        c.id = expect_name("constraint id");
        expect_symbol("{");

        expect_ident("context");
        c.linkage.context = parse_context();
        expect_symbol(";");

        expect_ident("on");
        do {
            c.linkage.pattern.bindings.push_back(parse_binding(true));
        } while (accept_symbol(","));
        expect_symbol(";");

        if (accept_ident("require")) {
            do {
                parse_require_item(c.linkage.pattern);
            } while (accept_ident("and"));
            expect_symbol(";");
        }
        if (accept_ident("absent")) {
            do {
                c.linkage.pattern.absences.push_back(expect_string("activity label"));
            } while (accept_symbol(","));
            expect_symbol(";");
        }
        if (accept_ident("condition")) {
            do {
                parse_condition_section(c.condition);
            } while (accept_ident("and"));
            expect_symbol(";");
        }
        if (accept_ident("trigger")) {
            do {
                TriggerPosition tp;
                if (accept_ident("before"))
                    tp.position = TriggerPosition::Position::Before;
                else if (accept_ident("after"))
                    tp.position = TriggerPosition::Position::After;
                else
                    fail("expected 'before' or 'after'");
                tp.target = expect_name("pattern variable");
                c.linkage.trigger_positions.push_back(std::move(tp));
            } while (accept_symbol(","));
            expect_symbol(";");
        }
        if (accept_ident("behavior")) {
            c.behavior = parse_behavior();
            expect_symbol(";");
        }
        expect_symbol("}");
        c.source_text = slice_since(start);
        c.validate();
        c.properties = derive_properties(c);
        return c;
    }

    Context parse_context() {
        Context ctx;
        if (accept_ident("any")) {
            expect_ident("process");
            ctx.all_processes = true;
        } else {
            expect_ident("process");
            ctx.processes.push_back(expect_string("process name"));
            while (peek_symbol(",")) {
                // a comma may continue the process list or precede the
                // instance selector of a later clause; only strings/process
                // keywords continue the list
                if (!(peek(1).kind == Token::Kind::String || peek_ident("process", 1))) break;
                advance();
                accept_ident("process");
                ctx.processes.push_back(expect_string("process name"));
            }
        }
        if (accept_ident("all")) {
            ctx.all_instances = true;
        } else {
            expect_ident("instances");
            do {
                ctx.instances.push_back(expect_string("instance id"));
            } while (accept_symbol(","));
        }
        return ctx;
    }

    PatternBinding parse_binding(bool anchor) {
        accept_ident("exists");  // optional, canonical form carries it
        PatternBinding b;
        b.anchor = anchor;
        b.var = expect_name("pattern variable");
        expect_ident("is");
        b.label = expect_string("activity label");
        return b;
    }

    void parse_require_item(StructuralPattern& pattern) {
        if (peek_ident("exists") || peek_ident("is", 1)) {
            pattern.bindings.push_back(parse_binding(false));
            return;
        }
        Relation r;
        r.left = expect_name("pattern variable");
        if (accept_ident("eventually-precedes"))
            r.kind = Relation::Kind::EventuallyFollows;
        else if (accept_ident("directly-precedes"))
            r.kind = Relation::Kind::DirectlyFollows;
        else if (accept_ident("parallel-with"))
            r.kind = Relation::Kind::ParallelWith;
        else
            fail("expected 'is' binding or a relation keyword");
        r.right = expect_name("pattern variable");
        pattern.relations.push_back(std::move(r));
    }

    void parse_condition_section(Condition& condition) {
        if (accept_ident("data")) {
            expect_symbol("(");
            DataExpr e = parse_data_or();
            expect_symbol(")");
            if (condition.data)
                condition.data = DataExpr::conjunction({std::move(*condition.data), std::move(e)});
            else
                condition.data = std::move(e);
            return;
        }
        if (accept_ident("time")) {
            expect_symbol("(");
            do {
                condition.time.atoms.push_back(parse_time_atom());
            } while (accept_ident("and"));
            expect_symbol(")");
            return;
        }
        if (accept_ident("resource")) {
            expect_symbol("(");
            do {
                condition.resource.atoms.push_back(parse_resource_atom());
            } while (accept_ident("and"));
            expect_symbol(")");
            return;
        }
        fail("expected 'data', 'time' or 'resource' condition section");
    }

    TimeAtom parse_time_atom() {
        TimeAtom a;
        if (accept_ident("min_time_between"))
            a.kind = TimeAtom::Kind::MinBetween;
        else if (accept_ident("max_time_between"))
            a.kind = TimeAtom::Kind::MaxBetween;
        else
            fail("expected 'min_time_between' or 'max_time_between'");
        expect_symbol("(");
        a.first = expect_name("pattern variable");
        expect_symbol(",");
        a.second = expect_name("pattern variable");
        expect_symbol(",");
        a.gap = expect_duration();
        expect_symbol(")");
        return a;
    }

    ResourceAtom parse_resource_atom() {
        ResourceAtom a;
        if (accept_ident("role")) {
            a.kind = ResourceAtom::Kind::Role;
            expect_symbol("(");
            a.var = expect_name("pattern variable");
            expect_symbol(")");
            expect_symbol("==");
            a.name = expect_string("role name");
            return a;
        }
        if (accept_ident("uses-resource")) {
            a.kind = ResourceAtom::Kind::UsesResource;
            expect_symbol("(");
            a.var = expect_name("pattern variable");
            expect_symbol(",");
            a.name = expect_string("resource name");
            expect_symbol(")");
            return a;
        }
        if (accept_ident("same-actor"))
            a.kind = ResourceAtom::Kind::SameActor;
        else if (accept_ident("different-actor"))
            a.kind = ResourceAtom::Kind::DifferentActor;
        else
            fail("expected 'role', 'same-actor', 'different-actor' or 'uses-resource'");
        expect_symbol("(");
        a.var = expect_name("pattern variable");
        expect_symbol(",");
        a.other_var = expect_name("pattern variable");
        expect_symbol(")");
        return a;
    }

    Behavior parse_behavior() {
        Behavior b;
        if (accept_ident("attribute")) {
            b.kind = Behavior::Kind::Attribute;
            b.target = expect_name("pattern variable");
            b.key = expect_name("attribute key");
            expect_symbol(":=");
            b.value = parse_attribute_value();
            return b;
        }
        if (accept_ident("synchronize")) {
            b.kind = Behavior::Kind::Synchronize;
            b.target = expect_name("pattern variable");
            b.resource = expect_string("mutex resource name");
            return b;
        }
        if (accept_ident("raise-exception")) {
            b.kind = Behavior::Kind::RaiseException;
            b.target = expect_name("pattern variable");
            if (peek().kind == Token::Kind::String) b.message = advance().string_value;
            return b;
        }
        fail("expected 'attribute', 'synchronize' or 'raise-exception'");
    }

    AttributeValue parse_attribute_value() {
        if (accept_symbol("(")) {
            DurationSpec spec;
            spec.mean = expect_duration();
            expect_symbol(",");
            spec.deviation = expect_duration();
            expect_symbol(")");
            return spec;
        }
        if (peek().kind == Token::Kind::DurationLit) return advance().duration_value;
        if (peek().kind == Token::Kind::String) return Value{advance().string_value};
        if (peek().kind == Token::Kind::Int) return Value{advance().int_value};
        if (accept_ident("true")) return Value{true};
        if (accept_ident("false")) return Value{false};
        fail("expected attribute value");
    }

    // --- data expressions ----------------------------------------------------

    DataExpr parse_data_or() {
        std::vector<DataExpr> terms{parse_data_and()};
        while (accept_ident("or")) terms.push_back(parse_data_and());
        return DataExpr::disjunction(std::move(terms));
    }

    DataExpr parse_data_and() {
        std::vector<DataExpr> terms{parse_data_unary()};
        while (accept_ident("and")) terms.push_back(parse_data_unary());
        return DataExpr::conjunction(std::move(terms));
    }

    DataExpr parse_data_unary() {
        if (accept_ident("not")) return DataExpr::negation(parse_data_unary());
        if (accept_symbol("(")) {
            DataExpr e = parse_data_or();
            expect_symbol(")");
            return e;
        }
        return parse_data_atom();
    }

    FieldRef parse_field_ref() {
        FieldRef ref;
        std::string first = expect_name("data reference");
        if (accept_symbol(".")) {
            ref.var = std::move(first);
            ref.element = expect_name("data element name");
        } else {
            ref.element = std::move(first);
        }
        return ref;
    }

    DataExpr parse_data_atom() {
        FieldRef lhs = parse_field_ref();
        CmpOp op;
        if (accept_symbol("=="))
            op = CmpOp::Eq;
        else if (accept_symbol("!="))
            op = CmpOp::Ne;
        else if (accept_symbol("<"))
            op = CmpOp::Lt;
        else if (accept_symbol("<="))
            op = CmpOp::Le;
        else if (accept_symbol(">"))
            op = CmpOp::Gt;
        else if (accept_symbol(">="))
            op = CmpOp::Ge;
        else
            fail("expected comparison operator");
        if (peek().kind == Token::Kind::Ident && !peek_ident("true") && !peek_ident("false")) {
            if (op != CmpOp::Eq) fail("same-value atoms support '==' only");
            return DataExpr::same_value(std::move(lhs), parse_field_ref());
        }
        Value literal;
        if (peek().kind == Token::Kind::Int)
            literal = advance().int_value;
        else if (peek().kind == Token::Kind::String)
            literal = advance().string_value;
        else if (accept_ident("true"))
            literal = true;
        else if (accept_ident("false"))
            literal = false;
        else
            fail("expected literal or data reference");
        return DataExpr::compare(std::move(lhs), op, std::move(literal));
    }

    // --- meta and opaque rules -----------------------------------------------

    MetaConstraint parse_meta_block() {
        std::size_t start = peek().offset;
        expect_ident("meta");
        MetaConstraint m;
        m.id = expect_name("meta constraint id");
        expect_symbol("{");
        expect_ident("for");
        expect_ident("each");
        if (accept_ident("activity")) {
            expect_ident("uses-resource");
            ActivitySelector sel;
            sel.resource = expect_string("resource name");
            m.for_each = sel;
        } else if (accept_ident("constraint")) {
            ConstraintSelector sel;
            if (accept_ident("where")) sel.where = parse_predicate();
            m.for_each = sel;
        } else {
            fail("expected 'activity' or 'constraint' selector");
        }
        expect_ident("require");
        if (accept_ident("constraint")) {
            m.require.kind = MetaRequirement::Kind::AttachedConstraint;
            m.require.constraint_id = expect_name("constraint id");
        } else {
            m.require.kind = MetaRequirement::Kind::Predicate;
            m.require.predicate = parse_predicate();
        }
        expect_symbol(";");
        expect_symbol("}");
        m.source_text = slice_since(start);
        if (m.id.empty()) throw ModelError("meta constraint with empty id");
        return m;
    }

    PropertyPredicate parse_predicate() {
        PropertyPredicate p;
        if (accept_ident("usage")) {
            expect_symbol("==");
            p.kind = PropertyPredicate::Kind::UsageIs;
            p.value = expect_name("usage name");
            if (p.value != "compliance" && p.value != "behavioral" && p.value != "meta")
                fail("expected 'compliance', 'behavioral' or 'meta'");
            return p;
        }
        if (accept_ident("has")) {
            if (accept_ident("trigger"))
                p.kind = PropertyPredicate::Kind::HasTrigger;
            else if (accept_ident("behavior"))
                p.kind = PropertyPredicate::Kind::HasBehavior;
            else if (accept_ident("condition"))
                p.kind = PropertyPredicate::Kind::HasCondition;
            else
                fail("expected 'trigger', 'behavior' or 'condition'");
            return p;
        }
        if (accept_ident("scope")) {
            expect_ident("includes");
            p.kind = PropertyPredicate::Kind::ScopeIncludes;
            p.value = expect_name("scope name");
            if (p.value != "structure" && p.value != "data" && p.value != "resource" &&
                p.value != "time")
                fail("expected 'structure', 'data', 'resource' or 'time'");
            return p;
        }
        fail("expected property predicate");
    }

    OpaqueRule parse_rule_block() {
        expect_ident("rule");
        OpaqueRule r;
        r.id = expect_name("rule id");
        r.text = expect_string("rule text");
        expect_symbol(";");
        return r;
    }

    std::string_view text_;
    Lexer lexer_;
    std::size_t pos_ = 0;
};

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

}  // namespace

ProcessConstraint parse_constraint(std::string_view text) {
    RuleDocument doc = parse_rule_document(text);
    if (doc.constraints.size() != 1 || !doc.metas.empty() || !doc.opaque_rules.empty())
        throw SyntaxError("expected exactly one constraint block");
    return std::move(doc.constraints[0]);
}

MetaConstraint parse_meta_constraint(std::string_view text) {
    RuleDocument doc = parse_rule_document(text);
    if (doc.metas.size() != 1 || !doc.constraints.empty() || !doc.opaque_rules.empty())
        throw SyntaxError("expected exactly one meta block");
    return std::move(doc.metas[0]);
}

RuleDocument parse_rule_document(std::string_view text) {
    Parser parser(text);
    RuleDocument doc = parser.parse_document();
    std::set<std::string> ids;
    for (const ProcessConstraint& c : doc.constraints)
        if (!ids.insert(c.id).second) throw SyntaxError("duplicate rule id '" + c.id + "'");
    for (const MetaConstraint& m : doc.metas)
        if (!ids.insert(m.id).second) throw SyntaxError("duplicate rule id '" + m.id + "'");
    for (const OpaqueRule& r : doc.opaque_rules)
        if (!ids.insert(r.id).second) throw SyntaxError("duplicate rule id '" + r.id + "'");
    return doc;
}

DataExpr parse_data_expr(std::string_view text) {
    Parser parser(text);
    return parser.parse_expr_document();
}

std::string serialize_constraint(const ProcessConstraint& c) {
    std::string out = "constraint " + c.id + " {\n";

    const Context& ctx = c.linkage.context;
    out += "  context ";
    if (ctx.all_processes) {
        out += "any process";
    } else {
        out += "process ";
        for (std::size_t i = 0; i < ctx.processes.size(); ++i) {
            if (i) out += ", ";
            out += quote(ctx.processes[i]);
        }
    }
    if (ctx.all_instances) {
        out += " all";
    } else {
        out += " instances ";
        for (std::size_t i = 0; i < ctx.instances.size(); ++i) {
            if (i) out += ", ";
            out += quote(ctx.instances[i]);
        }
    }
    out += ";\n";

    const StructuralPattern& p = c.linkage.pattern;
    out += "  on ";
    bool first = true;
    for (const PatternBinding& b : p.bindings) {
        if (!b.anchor) continue;
        if (!first) out += ", ";
        first = false;
        out += "exists " + b.var + " is " + quote(b.label);
    }
    out += ";\n";

    std::vector<std::string> require_items;
    for (const PatternBinding& b : p.bindings)
        if (!b.anchor) require_items.push_back("exists " + b.var + " is " + quote(b.label));
    for (const Relation& r : p.relations) {
        std::string kind;
        switch (r.kind) {
            case Relation::Kind::EventuallyFollows: kind = "eventually-precedes"; break;
            case Relation::Kind::DirectlyFollows: kind = "directly-precedes"; break;
            case Relation::Kind::ParallelWith: kind = "parallel-with"; break;
        }
        require_items.push_back(r.left + " " + kind + " " + r.right);
    }
    if (!require_items.empty()) {
        out += "  require ";
        for (std::size_t i = 0; i < require_items.size(); ++i) {
            if (i) out += " and ";
            out += require_items[i];
        }
        out += ";\n";
    }

    if (!p.absences.empty()) {
        out += "  absent ";
        for (std::size_t i = 0; i < p.absences.size(); ++i) {
            if (i) out += ", ";
            out += quote(p.absences[i]);
        }
        out += ";\n";
    }

    if (!c.condition.empty()) {
        out += "  condition ";
        std::vector<std::string> sections;
        if (c.condition.data) sections.push_back("data(" + c.condition.data->to_string() + ")");
        if (!c.condition.time.empty())
            sections.push_back("time(" + c.condition.time.to_string() + ")");
        if (!c.condition.resource.empty())
            sections.push_back("resource(" + c.condition.resource.to_string() + ")");
        for (std::size_t i = 0; i < sections.size(); ++i) {
            if (i) out += " and ";
            out += sections[i];
        }
        out += ";\n";
    }

    if (!c.linkage.trigger_positions.empty()) {
        out += "  trigger ";
        for (std::size_t i = 0; i < c.linkage.trigger_positions.size(); ++i) {
            const TriggerPosition& tp = c.linkage.trigger_positions[i];
            if (i) out += ", ";
            out += tp.position == TriggerPosition::Position::Before ? "before " : "after ";
            out += tp.target;
        }
        out += ";\n";
    }

    if (!c.behavior.empty()) {
        out += "  behavior ";
        switch (c.behavior.kind) {
            case Behavior::Kind::Attribute:
                out += "attribute " + c.behavior.target + " " + c.behavior.key + " := " +
                       attribute_value_to_string(c.behavior.value);
                break;
            case Behavior::Kind::Synchronize:
                out += "synchronize " + c.behavior.target + " " + quote(c.behavior.resource);
                break;
            case Behavior::Kind::RaiseException:
                out += "raise-exception " + c.behavior.target;
                if (!c.behavior.message.empty()) out += " " + quote(c.behavior.message);
                break;
            case Behavior::Kind::None:
                break;
        }
        out += ";\n";
    }

    out += "}\n";
    return out;
}

std::string serialize_meta_constraint(const MetaConstraint& m) {
    std::string out = "meta " + m.id + " {\n  for each ";
    if (std::holds_alternative<ActivitySelector>(m.for_each)) {
        out += "activity uses-resource " + quote(std::get<ActivitySelector>(m.for_each).resource);
    } else {
        out += "constraint";
        const ConstraintSelector& sel = std::get<ConstraintSelector>(m.for_each);
        if (sel.where) out += " where " + sel.where->to_string();
    }
    out += " require ";
    if (m.require.kind == MetaRequirement::Kind::AttachedConstraint)
        out += "constraint " + m.require.constraint_id;
    else
        out += m.require.predicate.to_string();
    out += ";\n}\n";
    return out;
}

}  // namespace iupc
