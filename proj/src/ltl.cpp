#include "pxc/ltl.hpp"

#include "pxc/errors.hpp"

namespace pxc {

namespace ltl {

namespace {
LtlPtr node(LtlFormula::Op op, std::string atom, LtlPtr lhs, LtlPtr rhs) {
    auto f = std::make_shared<LtlFormula>();
    f->op = op;
    f->atom = std::move(atom);
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}
}  // namespace

LtlPtr atom(std::string activity) { return node(LtlFormula::Op::Atom, std::move(activity), nullptr, nullptr); }
LtlPtr not_(LtlPtr f) { return node(LtlFormula::Op::Not, {}, std::move(f), nullptr); }
LtlPtr and_(LtlPtr f, LtlPtr g) { return node(LtlFormula::Op::And, {}, std::move(f), std::move(g)); }
LtlPtr or_(LtlPtr f, LtlPtr g) { return node(LtlFormula::Op::Or, {}, std::move(f), std::move(g)); }
LtlPtr implies(LtlPtr f, LtlPtr g) { return node(LtlFormula::Op::Implies, {}, std::move(f), std::move(g)); }
LtlPtr next(LtlPtr f) { return node(LtlFormula::Op::Next, {}, std::move(f), nullptr); }
LtlPtr eventually(LtlPtr f) { return node(LtlFormula::Op::Eventually, {}, std::move(f), nullptr); }
LtlPtr globally(LtlPtr f) { return node(LtlFormula::Op::Globally, {}, std::move(f), nullptr); }
LtlPtr until(LtlPtr f, LtlPtr g) { return node(LtlFormula::Op::Until, {}, std::move(f), std::move(g)); }

}  // namespace ltl

namespace {

bool eval_at(const Trace& trace, const LtlFormula& f, int pos) {
    const int n = static_cast<int>(trace.events.size());
    switch (f.op) {
        case LtlFormula::Op::Atom:
            return trace.events[pos - 1].activity == f.atom;
        case LtlFormula::Op::Not:
            return !eval_at(trace, *f.lhs, pos);
        case LtlFormula::Op::And:
            return eval_at(trace, *f.lhs, pos) && eval_at(trace, *f.rhs, pos);
        case LtlFormula::Op::Or:
            return eval_at(trace, *f.lhs, pos) || eval_at(trace, *f.rhs, pos);
        case LtlFormula::Op::Implies:
            return !eval_at(trace, *f.lhs, pos) || eval_at(trace, *f.rhs, pos);
        case LtlFormula::Op::Next:
            return pos + 1 <= n && eval_at(trace, *f.lhs, pos + 1);
        case LtlFormula::Op::Eventually:
            for (int j = pos; j <= n; ++j)
                if (eval_at(trace, *f.lhs, j)) return true;
            return false;
        case LtlFormula::Op::Globally:
            for (int j = pos; j <= n; ++j)
                if (!eval_at(trace, *f.lhs, j)) return false;
            return true;
        case LtlFormula::Op::Until:
            for (int j = pos; j <= n; ++j) {
                if (eval_at(trace, *f.rhs, j)) return true;
                if (!eval_at(trace, *f.lhs, j)) return false;
            }
            return false;
    }
    return false;
}

}  // namespace

bool eval_ltl(const Trace& trace, const LtlFormula& formula, int pos) {
    if (pos < 1 || pos > static_cast<int>(trace.events.size()))
        fail(Errc::PositionOutOfRange,
             "position " + std::to_string(pos) + " not in [1, " + std::to_string(trace.events.size()) + "]");
    return eval_at(trace, formula, pos);
}

std::string to_string(const LtlFormula& f) {
    using Op = LtlFormula::Op;
    switch (f.op) {
        case Op::Atom: {
            std::string out = "\"";
            for (char c : f.atom) {
                if (c == '"' || c == '\\') out.push_back('\\');
                out.push_back(c);
            }
            return out + "\"";
        }
        case Op::Not: return "!" + to_string(*f.lhs);
        case Op::And: return "(" + to_string(*f.lhs) + " && " + to_string(*f.rhs) + ")";
        case Op::Or: return "(" + to_string(*f.lhs) + " || " + to_string(*f.rhs) + ")";
        case Op::Implies: return "(" + to_string(*f.lhs) + " -> " + to_string(*f.rhs) + ")";
        case Op::Next: return "X" + to_string(*f.lhs);
        case Op::Eventually: return "F" + to_string(*f.lhs);
        case Op::Globally: return "G" + to_string(*f.lhs);
        case Op::Until: return "(" + to_string(*f.lhs) + " U " + to_string(*f.rhs) + ")";
    }
    return "";
}

namespace {

class LtlParser {
public:
    explicit LtlParser(const std::string& text) : text_(text) {}

    LtlPtr parse() {
        LtlPtr f = parse_implies();
        skip_ws();
        if (pos_ != text_.size()) error("unexpected trailing input");
        return f;
    }

private:
    [[noreturn]] void error(const std::string& msg) const {
        fail(Errc::FormulaParse, msg + " at byte " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }

    bool consume(const char* tok) {
        skip_ws();
        size_t len = std::char_traits<char>::length(tok);
        if (text_.compare(pos_, len, tok) == 0) {
            pos_ += len;
            return true;
        }
        return false;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    // precedence (loosest to tightest): -> ; || ; && ; U ; unary
    LtlPtr parse_implies() {
        LtlPtr lhs = parse_or();
        if (consume("->")) return ltl::implies(std::move(lhs), parse_implies());
        return lhs;
    }

    LtlPtr parse_or() {
        LtlPtr lhs = parse_and();
        while (consume("||")) lhs = ltl::or_(std::move(lhs), parse_and());
        return lhs;
    }

    LtlPtr parse_and() {
        LtlPtr lhs = parse_until();
        while (consume("&&")) lhs = ltl::and_(std::move(lhs), parse_until());
        return lhs;
    }

    LtlPtr parse_until() {
        LtlPtr lhs = parse_unary();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == 'U') {
            ++pos_;
            return ltl::until(std::move(lhs), parse_until());
        }
        return lhs;
    }

    LtlPtr parse_unary() {
        skip_ws();
        if (pos_ >= text_.size()) error("formula expected");
        char c = text_[pos_];
        if (c == '!') {
            ++pos_;
            return ltl::not_(parse_unary());
        }
        if (c == 'X') {
            ++pos_;
            return ltl::next(parse_unary());
        }
        if (c == 'F') {
            ++pos_;
            return ltl::eventually(parse_unary());
        }
        if (c == 'G') {
            ++pos_;
            return ltl::globally(parse_unary());
        }
        if (c == '(') {
            ++pos_;
            LtlPtr f = parse_implies();
            if (!peek_is(')')) error("')' expected");
            ++pos_;
            return f;
        }
        if (c == '"') return parse_atom();
        error("atom or operator expected");
    }

    LtlPtr parse_atom() {
        ++pos_;  // opening quote
        std::string name;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                name.push_back(text_[pos_ + 1]);
                pos_ += 2;
                continue;
            }
            if (c == '"') {
                ++pos_;
                return ltl::atom(std::move(name));
            }
            name.push_back(c);
            ++pos_;
        }
        error("unterminated atom");
    }

    const std::string& text_;
    size_t pos_ = 0;
};

}  // namespace

LtlPtr parse_ltl(const std::string& text) { return LtlParser(text).parse(); }

}  // namespace pxc
