#include "acat/torsor.hpp"

#include <fstream>
#include <sstream>

namespace acat {

std::string LinExpr::str() const {
    std::ostringstream os;
    if (cn != 0) {
        if (cn == -1) os << "-";
        else if (cn != 1) os << cn;
        os << "n";
        if (c0 > 0) os << "+" << c0;
        else if (c0 < 0) os << c0;
    } else {
        os << c0;
    }
    return os.str();
}

// ---------------------------------------------------------------- IntExpr --

struct IntExpr::Node {
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg } op;
    long long value = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const IntExpr::Node>;

struct ExprParser {
    const std::string& s;
    size_t i = 0;

    explicit ExprParser(const std::string& str) : s(str) {}

    void skip() {
        while (i < s.size() && isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }

    NodePtr make(IntExpr::Node::Op op, long long v = 0, NodePtr l = nullptr, NodePtr r = nullptr) {
        auto n = std::make_shared<IntExpr::Node>();
        n->op = op; n->value = v; n->lhs = std::move(l); n->rhs = std::move(r);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            skip();
            if (eat('+')) lhs = make(IntExpr::Node::Op::Add, 0, lhs, parse_term());
            else if (eat('-')) lhs = make(IntExpr::Node::Op::Sub, 0, lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        while (true) {
            skip();
            if (eat('*')) lhs = make(IntExpr::Node::Op::Mul, 0, lhs, parse_factor());
            else if (eat('/')) lhs = make(IntExpr::Node::Op::Div, 0, lhs, parse_factor());
            else if (i < s.size() && (s[i] == '(' || s[i] == 'n'))
                lhs = make(IntExpr::Node::Op::Mul, 0, lhs, parse_factor());  // juxtaposition
            else return lhs;
        }
    }

    NodePtr parse_factor() {
        skip();
        if (eat('-')) return make(IntExpr::Node::Op::Neg, 0, parse_factor());
        if (eat('(')) {
            NodePtr e = parse_expr();
            if (!eat(')')) throw MathError("expr: missing ')'");
            return e;
        }
        if (i < s.size() && s[i] == 'n') { ++i; return make(IntExpr::Node::Op::Var); }
        skip();
        size_t start = i;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) throw MathError("expr: expected number at '" + s.substr(start) + "'");
        return make(IntExpr::Node::Op::Const, std::stoll(s.substr(start, i - start)));
    }
};

long long eval_node(const IntExpr::Node* node, long long n) {
    using Op = IntExpr::Node::Op;
    switch (node->op) {
        case Op::Const: return node->value;
        case Op::Var: return n;
        case Op::Add: return checked_add(eval_node(node->lhs.get(), n), eval_node(node->rhs.get(), n));
        case Op::Sub: return checked_add(eval_node(node->lhs.get(), n), -eval_node(node->rhs.get(), n));
        case Op::Mul: return checked_mul(eval_node(node->lhs.get(), n), eval_node(node->rhs.get(), n));
        case Op::Div: {
            long long a = eval_node(node->lhs.get(), n);
            long long b = eval_node(node->rhs.get(), n);
            if (b == 0 || a % b != 0) throw MathError("expr: non-exact division");
            return a / b;
        }
        case Op::Neg: return -eval_node(node->lhs.get(), n);
    }
    throw MathError("expr: bad node");
}

}  // namespace

IntExpr IntExpr::parse(const std::string& text) {
    ExprParser p(text);
    IntExpr e;
    e.root_ = p.parse_expr();
    p.skip();
    if (p.i != text.size()) throw MathError("expr: trailing input in '" + text + "'");
    e.text_ = text;
    return e;
}

long long IntExpr::at(long long n) const {
    if (!root_) throw MathError("expr: empty");
    return eval_node(root_.get(), n);
}

SignExpr SignExpr::plus() { return SignExpr{}; }

SignExpr SignExpr::minus() {
    SignExpr s;
    s.constant_ = -1;
    return s;
}

SignExpr SignExpr::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t == "+1" || t == "1") return plus();
    if (t == "-1") return minus();
    // (-1)^(expr)
    const std::string head = "(-1)^";
    if (t.rfind(head, 0) == 0) {
        SignExpr s;
        std::string exp = t.substr(head.size());
        if (exp.size() >= 2 && exp.front() == '(' && exp.back() == ')')
            exp = exp.substr(1, exp.size() - 2);
        s.exp_ = IntExpr::parse(exp);
        return s;
    }
    throw MathError("sign: cannot parse '" + text + "'");
}

int SignExpr::at(long long n) const {
    if (!exp_) return constant_;
    long long e = exp_->at(n);
    return ((e % 2) + 2) % 2 == 0 ? 1 : -1;
}

std::string SignExpr::str() const {
    if (!exp_) return constant_ > 0 ? "+1" : "-1";
    return "(-1)^(" + exp_->text() + ")";
}

// ------------------------------------------------------------- TorsorWord --

int TorsorSymbol::parity(long long n) const {
    long long d = deg.at(n);
    return static_cast<int>(((d % 2) + 2) % 2);
}

std::string TorsorSymbol::str() const {
    return label + "[" + deg.str() + "]" + (dual ? "'" : "");
}

LinExpr TorsorWord::total_degree() const {
    LinExpr t;
    for (const auto& s : symbols) t = t + s.signed_deg();
    return t;
}

std::string TorsorWord::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < symbols.size(); ++i) os << (i ? " " : "") << symbols[i].str();
    if (symbols.empty()) os << "(empty)";
    return os.str();
}

namespace {

LinExpr parse_lin_expr(const std::string& text) {
    // evaluate at two points to extract the linear form; reject nonlinear
    IntExpr e = IntExpr::parse(text);
    long long v0 = e.at(0), v1 = e.at(1), v2 = e.at(2);
    LinExpr lin{v0, v1 - v0};
    if (lin.at(2) != v2) throw MathError("degree expression not linear in n: '" + text + "'");
    return lin;
}

[[noreturn]] void move_error(size_t idx, const std::string& what) {
    throw MathError("ledger move " + std::to_string(idx) + ": " + what);
}

}  // namespace

TorsorSymbol parse_torsor_symbol(const std::string& token) {
    TorsorSymbol sym;
    std::string t = token;
    if (!t.empty() && t.back() == '\'') {
        sym.dual = true;
        t.pop_back();
    }
    size_t lb = t.find('[');
    if (lb == std::string::npos || t.back() != ']')
        throw MathError("torsor symbol must look like label[deg]: '" + token + "'");
    sym.label = t.substr(0, lb);
    sym.deg = parse_lin_expr(t.substr(lb + 1, t.size() - lb - 2));
    if (sym.label.empty()) throw MathError("torsor symbol with empty label");
    return sym;
}

LedgerResult evaluate_ledger(const TorsorWord& start, const SignLedger& ledger, long long n) {
    LedgerResult res;
    res.word = start;
    res.sign = 1;
    auto& w = res.word.symbols;
    for (size_t mi = 0; mi < ledger.moves.size(); ++mi) {
        const LedgerMove& m = ledger.moves[mi];
        size_t p = m.pos;
        switch (m.kind) {
            case LedgerMove::Kind::Swap: {
                if (p + 1 >= w.size()) move_error(mi, "swap out of range");
                if (w[p].parity(n) && w[p + 1].parity(n)) res.sign = -res.sign;
                std::swap(w[p], w[p + 1]);
                break;
            }
            case LedgerMove::Kind::Merge: {
                if (p + 1 >= w.size()) move_error(mi, "merge out of range");
                if (w[p].dual || w[p + 1].dual) move_error(mi, "merge applies to non-dual symbols");
                TorsorSymbol merged;
                merged.label = m.merged_label.empty() ? w[p].label + "+" + w[p + 1].label
                                                      : m.merged_label;
                merged.deg = w[p].deg + w[p + 1].deg;
                w[p] = merged;
                w.erase(w.begin() + p + 1);
                break;
            }
            case LedgerMove::Kind::Split: {
                if (p >= w.size()) move_error(mi, "split out of range");
                if (w[p].dual) move_error(mi, "split applies to a non-dual symbol");
                if (m.split_a.dual || m.split_b.dual) move_error(mi, "split parts must be non-dual");
                if (!(m.split_a.deg + m.split_b.deg == w[p].deg))
                    move_error(mi, "split degrees do not sum to the original");
                w[p] = m.split_a;
                w.insert(w.begin() + p + 1, m.split_b);
                break;
            }
            case LedgerMove::Kind::Contract: {
                if (p + 1 >= w.size()) move_error(mi, "contract out of range");
                if (!w[p].dual || w[p + 1].dual)
                    move_error(mi, "contraction must be sigma^vee sigma (dual first); sigma sigma^vee is never contracted");
                if (w[p].label != w[p + 1].label || !(w[p].deg == w[p + 1].deg))
                    move_error(mi, "contraction of non-partner symbols");
                w.erase(w.begin() + p, w.begin() + p + 2);
                break;
            }
            case LedgerMove::Kind::Uncontract: {
                if (p > w.size()) move_error(mi, "uncontract out of range");
                if (m.inserted.dual) move_error(mi, "uncontract takes the non-dual symbol");
                TorsorSymbol dualed = m.inserted;
                dualed.dual = true;
                w.insert(w.begin() + p, {dualed, m.inserted});
                break;
            }
            case LedgerMove::Kind::Axiom: {
                if (p + m.consume > w.size()) move_error(mi, "axiom out of range");
                LinExpr before, after;
                for (size_t k = 0; k < m.consume; ++k) before = before + w[p + k].signed_deg();
                for (const auto& s : m.produce) after = after + s.signed_deg();
                if (!(before == after))
                    move_error(mi, "axiom '" + m.axiom_name + "' does not preserve degree (" +
                                       before.str() + " vs " + after.str() + ")");
                res.sign *= m.declared_sign.at(n);
                w.erase(w.begin() + p, w.begin() + p + m.consume);
                w.insert(w.begin() + p, m.produce.begin(), m.produce.end());
                break;
            }
        }
    }
    return res;
}

LedgerScript parse_ledger_script(const std::string& text) {
    LedgerScript script;
    std::istringstream in(text);
    std::string line;
    bool have_start = false;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string cmd;
        if (!(ls >> cmd)) continue;
        auto fail = [&](const std::string& what) -> void {
            throw MathError("ledger script line " + std::to_string(lineno) + ": " + what);
        };
        auto read_symbols = [&](std::vector<TorsorSymbol>& out, const std::string& stop) {
            std::string tok;
            while (ls >> tok) {
                if (!stop.empty() && tok == stop) return true;
                out.push_back(parse_torsor_symbol(tok));
            }
            return stop.empty();
        };
        if (cmd == "start") {
            if (have_start) fail("duplicate start");
            read_symbols(script.start.symbols, "");
            have_start = true;
        } else if (cmd == "swap" || cmd == "merge" || cmd == "contract") {
            LedgerMove m;
            m.kind = cmd == "swap" ? LedgerMove::Kind::Swap
                     : cmd == "merge" ? LedgerMove::Kind::Merge
                                      : LedgerMove::Kind::Contract;
            if (!(ls >> m.pos)) fail("expected position");
            std::string rest;
            if (m.kind == LedgerMove::Kind::Merge && (ls >> rest)) {
                if (rest != "as" || !(ls >> m.merged_label)) fail("merge syntax: merge I [as LABEL]");
            }
            script.ledger.moves.push_back(std::move(m));
        } else if (cmd == "split") {
            LedgerMove m;
            m.kind = LedgerMove::Kind::Split;
            std::string a, b;
            if (!(ls >> m.pos >> a >> b)) fail("split syntax: split I SYM SYM");
            m.split_a = parse_torsor_symbol(a);
            m.split_b = parse_torsor_symbol(b);
            script.ledger.moves.push_back(std::move(m));
        } else if (cmd == "uncontract") {
            LedgerMove m;
            m.kind = LedgerMove::Kind::Uncontract;
            std::string a;
            if (!(ls >> m.pos >> a)) fail("uncontract syntax: uncontract I SYM");
            m.inserted = parse_torsor_symbol(a);
            script.ledger.moves.push_back(std::move(m));
        } else if (cmd == "axiom") {
            LedgerMove m;
            m.kind = LedgerMove::Kind::Axiom;
            std::string arrow;
            if (!(ls >> m.axiom_name >> m.pos >> m.consume >> arrow) || arrow != "->")
                fail("axiom syntax: axiom NAME I COUNT -> SYM... sign EXPR [cite \"...\"]");
            std::string tok;
            bool saw_sign = false;
            while (ls >> tok) {
                if (tok == "sign") {
                    std::string rest;
                    std::getline(ls, rest);
                    size_t cite = rest.find("cite");
                    if (cite != std::string::npos) {
                        std::string c = rest.substr(cite + 4);
                        size_t q0 = c.find('"'), q1 = c.rfind('"');
                        if (q0 != std::string::npos && q1 > q0)
                            m.citation = c.substr(q0 + 1, q1 - q0 - 1);
                        rest = rest.substr(0, cite);
                    }
                    m.declared_sign = SignExpr::parse(rest);
                    saw_sign = true;
                    break;
                }
                m.produce.push_back(parse_torsor_symbol(tok));
            }
            if (!saw_sign) fail("axiom move requires a declared sign");
            script.ledger.moves.push_back(std::move(m));
        } else if (cmd == "expect") {
            std::string what;
            if (!(ls >> what)) fail("expect syntax");
            if (what == "sign") {
                std::string rest;
                std::getline(ls, rest);
                script.expect_sign = SignExpr::parse(rest);
            } else if (what == "word") {
                TorsorWord w;
                read_symbols(w.symbols, "");
                script.expect_word = std::move(w);
            } else {
                fail("expect sign|word");
            }
        } else {
            fail("unknown command '" + cmd + "'");
        }
    }
    if (!have_start) throw MathError("ledger script: missing start line");
    return script;
}

LedgerScript load_ledger_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MathError("cannot open ledger script: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ledger_script(buf.str());
}

ScriptOutcome run_ledger_script(const LedgerScript& script, long long n) {
    ScriptOutcome out;
    out.result = evaluate_ledger(script.start, script.ledger, n);
    if (script.expect_sign) {
        out.checked = true;
        out.sign_ok = script.expect_sign->at(n) == out.result.sign;
    }
    if (script.expect_word) {
        out.checked = true;
        out.word_ok = *script.expect_word == out.result.word;
    }
    return out;
}

}  // namespace acat
