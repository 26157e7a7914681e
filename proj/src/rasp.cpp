#include "famicom/rasp.hpp"

#include <cctype>

namespace famicom::rasp {

const std::set<std::string>& primitives() {
    static const std::set<std::string> ops = {
        "select", "aggregate", "selector_width", "map",   "seq_map", "full",  "indices",
        "tokens", "shift_right",    "kqv",       "where", "sort",    "cumsum",
    };
    return ops;
}

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class LineParser {
public:
    LineParser(const std::string& line, int lineno) : line_(line), lineno_(lineno) {}

    Statement parse_assignment() {
        Statement st;
        st.line = lineno_;
        st.target = expect_ident("assignment target");
        skip_ws();
        expect('=', "'='");
        st.value = parse_expr();
        skip_ws();
        if (pos_ < line_.size()) fail("unexpected trailing input");
        return st;
    }

private:
    Expr parse_expr() {
        Expr e;
        e.ident = expect_ident("identifier");
        skip_ws();
        if (pos_ < line_.size() && line_[pos_] == '(') {
            ++pos_;
            e.is_call = true;
            if (!primitives().count(e.ident)) {
                fail("unknown operation '" + e.ident + "'");
            }
            skip_ws();
            if (pos_ < line_.size() && line_[pos_] == ')') {
                ++pos_;
                return e;
            }
            for (;;) {
                e.args.push_back(parse_expr());
                skip_ws();
                if (pos_ < line_.size() && line_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                expect(')', "')' or ','");
                break;
            }
        }
        return e;
    }

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    std::string expect_ident(const std::string& what) {
        skip_ws();
        if (pos_ >= line_.size() || !ident_start(line_[pos_])) fail("expected " + what);
        const std::size_t start = pos_;
        while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
        return line_.substr(start, pos_ - start);
    }

    void expect(char c, const std::string& what) {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != c) fail("expected " + what);
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(lineno_, static_cast<int>(pos_) + 1, msg);
    }

    const std::string& line_;
    int lineno_;
    std::size_t pos_ = 0;
};

int count_calls(const Expr& e) {
    int n = e.is_call ? 1 : 0;
    for (const Expr& a : e.args) n += count_calls(a);
    return n;
}

}  // namespace

Program parse(const std::string& source) {
    Program prog;
    prog.source = source;

    std::size_t start = 0;
    int lineno = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string::npos) end = source.size();
        std::string line = source.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++lineno;

        std::size_t first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line[first] != '#') {
            LineParser p(line, lineno);
            Statement st = p.parse_assignment();
            prog.op_count += count_calls(st.value);
            prog.statements.push_back(std::move(st));
        }

        if (end == source.size()) break;
        start = end + 1;
    }

    if (prog.statements.empty()) throw EmptyProgram("program has no statements");
    return prog;
}

int count_ops(const std::string& source) {
    return parse(source).op_count;
}

std::string extract_fenced_block(const std::string& response) {
    const std::string fence = "```";
    const std::size_t open = response.find(fence);
    if (open == std::string::npos) return response;
    const std::size_t after_open = open + fence.size();
    const std::size_t close = response.find(fence, after_open);
    if (close == std::string::npos) return response;
    std::string content = response.substr(after_open, close - after_open);

    // The opening fence usually carries a language tag; drop that first line.
    // Assignment and comment lines contain characters a tag never has, so
    // program content is preserved.
    const std::size_t nl = content.find('\n');
    if (nl != std::string::npos) {
        bool tag_like = true;
        for (char c : content.substr(0, nl)) {
            if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_' && c != '-' &&
                c != '+' && c != ' ' && c != '\r') {
                tag_like = false;
                break;
            }
        }
        if (tag_like) content = content.substr(nl + 1);
    }
    return content;
}

}  // namespace famicom::rasp
