#pragma once

#include <memory>
#include <string>

#include "pxc/event_log.hpp"

namespace pxc {

/// Finite-trace temporal logic over activity names (LTLf, strong Next).
struct LtlFormula {
    enum class Op { Atom, Not, And, Or, Implies, Next, Eventually, Globally, Until };

    Op op;
    std::string atom;  // Op::Atom only
    std::shared_ptr<const LtlFormula> lhs, rhs;
};

using LtlPtr = std::shared_ptr<const LtlFormula>;

namespace ltl {
LtlPtr atom(std::string activity);
LtlPtr not_(LtlPtr f);
LtlPtr and_(LtlPtr f, LtlPtr g);
LtlPtr or_(LtlPtr f, LtlPtr g);
LtlPtr implies(LtlPtr f, LtlPtr g);
LtlPtr next(LtlPtr f);
LtlPtr eventually(LtlPtr f);
LtlPtr globally(LtlPtr f);
LtlPtr until(LtlPtr f, LtlPtr g);
}  // namespace ltl

/// Evaluates at 1-based position pos. Strong Next: X f is false at the last
/// position. F/G/U quantify over the remaining finite suffix.
bool eval_ltl(const Trace& trace, const LtlFormula& formula, int pos);

std::string to_string(const LtlFormula& formula);

/// Text syntax: atoms are quoted strings; operators ! && || -> X F G U;
/// precedence unary > U > && > || > ->. Errors carry the byte offset.
LtlPtr parse_ltl(const std::string& text);

}  // namespace pxc
