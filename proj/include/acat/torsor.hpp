#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acat/util.hpp"

namespace acat {

// Degrees of orientation-type torsors are integers, possibly depending
// linearly on a formal dimension symbol n.
struct LinExpr {
    long long c0 = 0;
    long long cn = 0;

    LinExpr() = default;
    LinExpr(long long constant) : c0(constant) {}
    LinExpr(long long constant, long long n_coeff) : c0(constant), cn(n_coeff) {}

    long long at(long long n) const { return checked_add(c0, checked_mul(cn, n)); }
    LinExpr operator+(const LinExpr& o) const { return {checked_add(c0, o.c0), checked_add(cn, o.cn)}; }
    LinExpr operator-(const LinExpr& o) const { return {checked_add(c0, -o.c0), checked_add(cn, -o.cn)}; }
    LinExpr operator-() const { return {-c0, -cn}; }
    bool operator==(const LinExpr& o) const { return c0 == o.c0 && cn == o.cn; }
    std::string str() const;
};

// Integer expression in n (used for declared axiom signs, e.g. n(n+1)/2).
class IntExpr {
public:
    struct Node;

    static IntExpr parse(const std::string& text);
    long long at(long long n) const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

// A declared sign: +1, -1, or (-1)^(expr).
class SignExpr {
public:
    static SignExpr plus();
    static SignExpr minus();
    static SignExpr parse(const std::string& text);
    int at(long long n) const;
    std::string str() const;

private:
    int constant_ = 1;            // used when no exponent
    std::optional<IntExpr> exp_;  // (-1)^(exp)
};

struct TorsorSymbol {
    std::string label;
    LinExpr deg;
    bool dual = false;

    int parity(long long n) const;
    LinExpr signed_deg() const { return dual ? -deg : deg; }
    bool operator==(const TorsorSymbol& o) const {
        return label == o.label && deg == o.deg && dual == o.dual;
    }
    std::string str() const;
};

struct TorsorWord {
    std::vector<TorsorSymbol> symbols;

    LinExpr total_degree() const;
    bool operator==(const TorsorWord& o) const { return symbols == o.symbols; }
    std::string str() const;
};

// Elementary moves.  The braid swap carries the Koszul sign; merge/split and
// the dual contraction are sign-free; axiom moves carry a declared sign and a
// citation and are the only way a non-Koszul sign can enter.
struct LedgerMove {
    enum class Kind { Swap, Merge, Split, Contract, Uncontract, Axiom };
    Kind kind = Kind::Swap;
    size_t pos = 0;

    std::string merged_label;               // Merge (optional)
    TorsorSymbol split_a, split_b;          // Split
    TorsorSymbol inserted;                  // Uncontract
    std::string axiom_name;                 // Axiom
    size_t consume = 0;                     // Axiom
    std::vector<TorsorSymbol> produce;      // Axiom
    SignExpr declared_sign;                 // Axiom
    std::string citation;                   // Axiom
};

struct SignLedger {
    std::vector<LedgerMove> moves;
};

struct LedgerResult {
    TorsorWord word;
    int sign = 1;
};

// Replays the ledger against the starting word; throws MathError with the
// offending move index for any illegal move (including sigma sigma^vee).
LedgerResult evaluate_ledger(const TorsorWord& start, const SignLedger& ledger,
                             long long n = 0);

// Script format, one move per line (see README): start / swap / merge /
// split / contract / uncontract / axiom / expect.
struct LedgerScript {
    TorsorWord start;
    SignLedger ledger;
    std::optional<SignExpr> expect_sign;
    std::optional<TorsorWord> expect_word;
};

LedgerScript parse_ledger_script(const std::string& text);
LedgerScript load_ledger_script(const std::string& path);

struct ScriptOutcome {
    LedgerResult result;
    bool sign_ok = true;
    bool word_ok = true;
    bool checked = false;
};

ScriptOutcome run_ledger_script(const LedgerScript& script, long long n = 0);

TorsorSymbol parse_torsor_symbol(const std::string& token);

}  // namespace acat
