#include "ltlguard/formula.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ltlguard {

struct Formula::Node {
    Op op;
    std::string name;  // Atom only
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

bool is_unary(Op op) {
    return op == Op::Not || op == Op::Next || op == Op::Eventually || op == Op::Globally;
}

bool is_binary(Op op) {
    switch (op) {
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
        case Op::Until:
        case Op::Release:
            return true;
        default:
            return false;
    }
}

Formula Formula::True() {
    static const auto node = std::make_shared<const Node>(Node{Op::True, "", nullptr, nullptr});
    return Formula(node);
}

Formula Formula::False() {
    static const auto node = std::make_shared<const Node>(Node{Op::False, "", nullptr, nullptr});
    return Formula(node);
}

Formula Formula::Atom(std::string name) {
    if (!is_valid_atom_name(name)) {
        throw std::invalid_argument("invalid atom name: '" + name + "'");
    }
    return Formula(std::make_shared<const Node>(Node{Op::Atom, std::move(name), nullptr, nullptr}));
}

Formula Formula::Not(Formula f) {
    if (!f.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Not, "", f.node_, nullptr}));
}
Formula Formula::And(Formula l, Formula r) {
    if (!l.valid() || !r.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::And, "", l.node_, r.node_}));
}
Formula Formula::Or(Formula l, Formula r) {
    if (!l.valid() || !r.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Or, "", l.node_, r.node_}));
}
Formula Formula::Implies(Formula l, Formula r) {
    if (!l.valid() || !r.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Implies, "", l.node_, r.node_}));
}
Formula Formula::Iff(Formula l, Formula r) {
    if (!l.valid() || !r.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Iff, "", l.node_, r.node_}));
}
Formula Formula::Next(Formula f) {
    if (!f.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Next, "", f.node_, nullptr}));
}
Formula Formula::Until(Formula l, Formula r) {
    if (!l.valid() || !r.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Until, "", l.node_, r.node_}));
}
Formula Formula::Release(Formula l, Formula r) {
    if (!l.valid() || !r.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Release, "", l.node_, r.node_}));
}
Formula Formula::Eventually(Formula f) {
    if (!f.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Eventually, "", f.node_, nullptr}));
}
Formula Formula::Globally(Formula f) {
    if (!f.valid()) throw std::invalid_argument("operand is empty");
    return Formula(std::make_shared<const Node>(Node{Op::Globally, "", f.node_, nullptr}));
}

Op Formula::op() const {
    assert(node_);
    return node_->op;
}

const std::string& Formula::name() const {
    assert(node_ && node_->op == Op::Atom);
    return node_->name;
}

Formula Formula::left() const {
    assert(node_ && node_->lhs);
    return Formula(node_->lhs);
}

Formula Formula::right() const {
    assert(node_ && node_->rhs);
    return Formula(node_->rhs);
}

int Formula::compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (!a.node_) return -1;
    if (!b.node_) return 1;
    if (a.node_->op != b.node_->op) {
        return static_cast<int>(a.node_->op) < static_cast<int>(b.node_->op) ? -1 : 1;
    }
    if (a.node_->op == Op::Atom) {
        return a.node_->name.compare(b.node_->name);
    }
    if (a.node_->lhs) {
        int c = compare(a.left(), b.left());
        if (c != 0) return c;
    }
    if (a.node_->rhs) {
        return compare(a.right(), b.right());
    }
    return 0;
}

bool Formula::operator==(const Formula& other) const {
    return compare(*this, other) == 0;
}

std::size_t Formula::hash() const {
    if (!node_) return 0;
    std::size_t h = std::hash<int>{}(static_cast<int>(node_->op));
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    if (node_->op == Op::Atom) mix(std::hash<std::string>{}(node_->name));
    if (node_->lhs) mix(left().hash());
    if (node_->rhs) mix(right().hash());
    return h;
}

bool is_valid_atom_name(std::string_view name) {
    if (name.empty()) return false;
    auto first = static_cast<unsigned char>(name.front());
    if (!std::isalpha(first) && name.front() != '_') return false;
    for (char c : name.substr(1)) {
        auto uc = static_cast<unsigned char>(c);
        if (!std::isalnum(uc) && c != '_') return false;
    }
    return true;
}

namespace {

// Precedence levels used by both render and the parser.  Higher binds
// tighter.  Unary operators and atoms sit above all binary levels.
int precedence(Op op) {
    switch (op) {
        case Op::Iff: return 1;
        case Op::Implies: return 2;
        case Op::Until: return 3;
        case Op::Or: return 4;
        case Op::And: return 5;
        default: return 6;
    }
}

bool right_associative(Op op) {
    return op == Op::Iff || op == Op::Implies || op == Op::Until;
}

const char* op_text(Op op) {
    switch (op) {
        case Op::And: return "&";
        case Op::Or: return "|";
        case Op::Implies: return "->";
        case Op::Iff: return "<->";
        case Op::Until: return "U";
        case Op::Not: return "!";
        case Op::Next: return "X";
        case Op::Eventually: return "F";
        case Op::Globally: return "G";
        default: return "";
    }
}

void render_rec(const Formula& f, std::string& out, int parent_prec, bool parent_right_assoc,
                bool is_right_child) {
    // Release has no surface syntax; print the equivalent core form.
    if (f.op() == Op::Release) {
        render_rec(Formula::Not(Formula::Until(Formula::Not(f.left()), Formula::Not(f.right()))),
                   out, parent_prec, parent_right_assoc, is_right_child);
        return;
    }
    switch (f.op()) {
        case Op::True:
            out += "true";
            return;
        case Op::False:
            out += "false";
            return;
        case Op::Atom:
            out += f.name();
            return;
        default:
            break;
    }
    if (is_unary(f.op())) {
        out += op_text(f.op());
        Formula child = f.left();
        Op child_op = child.op() == Op::Release ? Op::Not : child.op();
        bool child_atomic = precedence(child_op) >= 6;
        if (child_atomic) {
            if (f.op() != Op::Not) out += ' ';
            render_rec(child, out, 6, false, false);
        } else {
            out += '(';
            render_rec(child, out, 0, false, false);
            out += ')';
        }
        return;
    }
    int prec = precedence(f.op());
    bool needs_parens;
    if (parent_prec > prec) {
        needs_parens = true;
    } else if (parent_prec == prec) {
        // Same level: the child on the non-associative side needs parentheses
        // to survive a round trip.
        needs_parens = parent_right_assoc ? !is_right_child : is_right_child;
    } else {
        needs_parens = false;
    }
    if (needs_parens) out += '(';
    bool ra = right_associative(f.op());
    render_rec(f.left(), out, prec, ra, false);
    out += ' ';
    out += op_text(f.op());
    out += ' ';
    render_rec(f.right(), out, prec, ra, true);
    if (needs_parens) out += ')';
}

}  // namespace

std::string render(const Formula& f) {
    std::string out;
    render_rec(f, out, 0, false, false);
    return out;
}

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& atoms) {
    switch (f.op()) {
        case Op::Atom:
            atoms.insert(f.name());
            return;
        case Op::True:
        case Op::False:
            return;
        default:
            collect_atoms(f.left(), atoms);
            if (is_binary(f.op())) collect_atoms(f.right(), atoms);
            return;
    }
}

}  // namespace

std::vector<std::string> atomic_propositions(const Formula& f) {
    std::set<std::string> atoms;
    collect_atoms(f, atoms);
    return {atoms.begin(), atoms.end()};
}

Formula rewrite_aps(const Formula& f, const std::map<std::string, std::string>& substitution) {
    switch (f.op()) {
        case Op::True:
        case Op::False:
            return f;
        case Op::Atom: {
            auto it = substitution.find(f.name());
            return it == substitution.end() ? f : Formula::Atom(it->second);
        }
        default:
            break;
    }
    Formula l = rewrite_aps(f.left(), substitution);
    if (!is_binary(f.op())) {
        switch (f.op()) {
            case Op::Not: return Formula::Not(l);
            case Op::Next: return Formula::Next(l);
            case Op::Eventually: return Formula::Eventually(l);
            case Op::Globally: return Formula::Globally(l);
            default: break;
        }
    }
    Formula r = rewrite_aps(f.right(), substitution);
    switch (f.op()) {
        case Op::And: return Formula::And(l, r);
        case Op::Or: return Formula::Or(l, r);
        case Op::Implies: return Formula::Implies(l, r);
        case Op::Iff: return Formula::Iff(l, r);
        case Op::Until: return Formula::Until(l, r);
        case Op::Release: return Formula::Release(l, r);
        default: throw std::logic_error("rewrite_aps: unreachable");
    }
}

namespace {

Formula nnf_pos(const Formula& f);
Formula nnf_neg(const Formula& f);

Formula nnf_pos(const Formula& f) {
    switch (f.op()) {
        case Op::True:
        case Op::False:
        case Op::Atom:
            return f;
        case Op::Not:
            return nnf_neg(f.left());
        case Op::And:
            return Formula::And(nnf_pos(f.left()), nnf_pos(f.right()));
        case Op::Or:
            return Formula::Or(nnf_pos(f.left()), nnf_pos(f.right()));
        case Op::Implies:
            return Formula::Or(nnf_neg(f.left()), nnf_pos(f.right()));
        case Op::Iff:
            return Formula::Or(Formula::And(nnf_pos(f.left()), nnf_pos(f.right())),
                               Formula::And(nnf_neg(f.left()), nnf_neg(f.right())));
        case Op::Next:
            return Formula::Next(nnf_pos(f.left()));
        case Op::Until:
            return Formula::Until(nnf_pos(f.left()), nnf_pos(f.right()));
        case Op::Release:
            return Formula::Release(nnf_pos(f.left()), nnf_pos(f.right()));
        case Op::Eventually:
            return Formula::Eventually(nnf_pos(f.left()));
        case Op::Globally:
            return Formula::Globally(nnf_pos(f.left()));
    }
    throw std::logic_error("nnf_pos: unreachable");
}

Formula nnf_neg(const Formula& f) {
    switch (f.op()) {
        case Op::True:
            return Formula::False();
        case Op::False:
            return Formula::True();
        case Op::Atom:
            return Formula::Not(f);
        case Op::Not:
            return nnf_pos(f.left());
        case Op::And:
            return Formula::Or(nnf_neg(f.left()), nnf_neg(f.right()));
        case Op::Or:
            return Formula::And(nnf_neg(f.left()), nnf_neg(f.right()));
        case Op::Implies:
            return Formula::And(nnf_pos(f.left()), nnf_neg(f.right()));
        case Op::Iff:
            return Formula::Or(Formula::And(nnf_pos(f.left()), nnf_neg(f.right())),
                               Formula::And(nnf_neg(f.left()), nnf_pos(f.right())));
        case Op::Next:
            return Formula::Next(nnf_neg(f.left()));
        case Op::Until:
            return Formula::Release(nnf_neg(f.left()), nnf_neg(f.right()));
        case Op::Release:
            return Formula::Until(nnf_neg(f.left()), nnf_neg(f.right()));
        case Op::Eventually:
            return Formula::Globally(nnf_neg(f.left()));
        case Op::Globally:
            return Formula::Eventually(nnf_neg(f.left()));
    }
    throw std::logic_error("nnf_neg: unreachable");
}

}  // namespace

Formula to_nnf(const Formula& f) {
    return nnf_pos(f);
}

Formula to_core(const Formula& f) {
    switch (f.op()) {
        case Op::True:
        case Op::Atom:
            return f;
        case Op::False:
            return Formula::Not(Formula::True());
        case Op::Not:
            return Formula::Not(to_core(f.left()));
        case Op::And:
            return Formula::And(to_core(f.left()), to_core(f.right()));
        case Op::Or:
            return Formula::Not(
                Formula::And(Formula::Not(to_core(f.left())), Formula::Not(to_core(f.right()))));
        case Op::Implies:
            return to_core(Formula::Or(Formula::Not(f.left()), f.right()));
        case Op::Iff:
            return to_core(Formula::And(Formula::Implies(f.left(), f.right()),
                                        Formula::Implies(f.right(), f.left())));
        case Op::Next:
            return Formula::Next(to_core(f.left()));
        case Op::Until:
            return Formula::Until(to_core(f.left()), to_core(f.right()));
        case Op::Release:
            return Formula::Not(
                Formula::Until(Formula::Not(to_core(f.left())), Formula::Not(to_core(f.right()))));
        case Op::Eventually:
            return Formula::Until(Formula::True(), to_core(f.left()));
        case Op::Globally:
            return Formula::Not(
                Formula::Until(Formula::True(), Formula::Not(to_core(f.left()))));
    }
    throw std::logic_error("to_core: unreachable");
}

}  // namespace ltlguard
