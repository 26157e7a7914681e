#pragma once

#include <set>
#include <string>
#include <vector>

#include "famicom/errors.hpp"

namespace famicom::rasp {

// Line-oriented RASP-L subset:
//
//   program    := line*
//   line       := comment | assignment        (blank lines are skipped)
//   comment    := '#' any*
//   assignment := ident '=' expr
//   expr       := ident | call
//   call       := ident '(' args? ')'
//   args       := expr (',' expr)*
//   ident      := [A-Za-z_][A-Za-z0-9_]*
//
// Every identifier in call position must name one of the counted primitives;
// anything else is a ParseError. Bare identifiers are untyped references and
// are never counted.

struct Expr {
    std::string ident;
    bool is_call = false;
    std::vector<Expr> args;
};

struct Statement {
    std::string target;
    Expr value;
    int line = 0;
};

struct Program {
    std::string source;
    std::vector<Statement> statements;
    int op_count = 0;
};

const std::set<std::string>& primitives();

/// Parses `source`; throws ParseError (with line/column) on a grammar or
/// whitelist violation, EmptyProgram when no assignment survives.
Program parse(const std::string& source);

/// Number of primitive call sites in `source`; nested calls each count.
int count_ops(const std::string& source);

/// First region delimited by triple backticks, else the whole response.
/// The opening fence's remainder of line (a language tag) is dropped.
std::string extract_fenced_block(const std::string& response);

}  // namespace famicom::rasp
