#include "ltlguard/lasso.hpp"

#include <stdexcept>

namespace ltlguard {

LassoWord LassoWord::unrolled_once() const {
    LassoWord out = *this;
    out.prefix.insert(out.prefix.end(), loop.begin(), loop.end());
    return out;
}

LassoWord rename_word(const LassoWord& w, const std::map<std::string, std::string>& substitution) {
    auto rename_symbol = [&substitution](const Symbol& s) {
        Symbol out;
        for (const auto& ap : s.true_set) {
            auto it = substitution.find(ap);
            out.true_set.insert(it == substitution.end() ? ap : it->second);
        }
        return out;
    };
    LassoWord out;
    out.prefix.reserve(w.prefix.size());
    out.loop.reserve(w.loop.size());
    for (const auto& s : w.prefix) out.prefix.push_back(rename_symbol(s));
    for (const auto& s : w.loop) out.loop.push_back(rename_symbol(s));
    return out;
}

namespace {

class LassoEvaluator {
  public:
    explicit LassoEvaluator(const LassoWord& w)
        : word_(w), prefix_len_(w.prefix.size()), total_(w.prefix.size() + w.loop.size()) {
        if (w.loop.empty()) throw std::invalid_argument("lasso loop must be non-empty");
    }

    bool eval(const Formula& f) { return column(f)[0]; }

  private:
    std::size_t succ(std::size_t i) const { return i + 1 < total_ ? i + 1 : prefix_len_; }

    // Satisfaction column of f at positions 0..total-1, memoized per
    // structurally distinct subformula.
    const std::vector<char>& column(const Formula& f) {
        auto [it, inserted] = cache_.try_emplace(f);
        if (!inserted) return it->second;
        std::vector<char> col(total_, 0);
        switch (f.op()) {
            case Op::True:
                col.assign(total_, 1);
                break;
            case Op::False:
                break;
            case Op::Atom:
                for (std::size_t i = 0; i < total_; ++i) col[i] = word_.at(i).holds(f.name());
                break;
            case Op::Not: {
                const auto& c = column(f.left());
                for (std::size_t i = 0; i < total_; ++i) col[i] = !c[i];
                break;
            }
            case Op::And: {
                const auto& l = column(f.left());
                const auto& r = column(f.right());
                for (std::size_t i = 0; i < total_; ++i) col[i] = l[i] && r[i];
                break;
            }
            case Op::Or: {
                const auto& l = column(f.left());
                const auto& r = column(f.right());
                for (std::size_t i = 0; i < total_; ++i) col[i] = l[i] || r[i];
                break;
            }
            case Op::Implies: {
                const auto& l = column(f.left());
                const auto& r = column(f.right());
                for (std::size_t i = 0; i < total_; ++i) col[i] = !l[i] || r[i];
                break;
            }
            case Op::Iff: {
                const auto& l = column(f.left());
                const auto& r = column(f.right());
                for (std::size_t i = 0; i < total_; ++i) col[i] = l[i] == r[i];
                break;
            }
            case Op::Next: {
                const auto& c = column(f.left());
                for (std::size_t i = 0; i < total_; ++i) col[i] = c[succ(i)];
                break;
            }
            case Op::Until: {
                const auto& l = column(f.left());
                const auto& r = column(f.right());
                least_fixpoint(col, [&](std::size_t i, char nxt) {
                    return r[i] || (l[i] && nxt);
                });
                break;
            }
            case Op::Release: {
                const auto& l = column(f.left());
                const auto& r = column(f.right());
                greatest_fixpoint(col, [&](std::size_t i, char nxt) {
                    return r[i] && (l[i] || nxt);
                });
                break;
            }
            case Op::Eventually: {
                const auto& c = column(f.left());
                least_fixpoint(col, [&](std::size_t i, char nxt) { return c[i] || nxt; });
                break;
            }
            case Op::Globally: {
                const auto& c = column(f.left());
                greatest_fixpoint(col, [&](std::size_t i, char nxt) { return c[i] && nxt; });
                break;
            }
        }
        it->second = std::move(col);
        return it->second;
    }

    // Two backward sweeps over the loop block seeded with false, then one
    // sweep over the prefix.  Any obligation that needs more than one full
    // trip around the loop repeats at the revisited position, so one wrap is
    // enough for the least fixpoint; the dual argument covers the greatest.
    template <typename Step>
    void least_fixpoint(std::vector<char>& col, Step step) {
        run_fixpoint(col, step, /*seed=*/0);
    }

    template <typename Step>
    void greatest_fixpoint(std::vector<char>& col, Step step) {
        run_fixpoint(col, step, /*seed=*/1);
    }

    template <typename Step>
    void run_fixpoint(std::vector<char>& col, Step step, char seed) {
        for (std::size_t i = prefix_len_; i < total_; ++i) col[i] = seed;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = total_; i-- > prefix_len_;) {
                col[i] = step(i, col[succ(i)]);
            }
        }
        for (std::size_t i = prefix_len_; i-- > 0;) {
            col[i] = step(i, col[succ(i)]);
        }
    }

    const LassoWord& word_;
    std::size_t prefix_len_;
    std::size_t total_;
    // std::map keeps references stable while child columns are computed.
    std::map<Formula, std::vector<char>> cache_;
};

}  // namespace

bool eval_lasso(const Formula& f, const LassoWord& w) {
    return LassoEvaluator(w).eval(f);
}

}  // namespace ltlguard
