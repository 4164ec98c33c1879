#include "ergopress/sft.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ergopress {

namespace {

// Remove symbols without successors or predecessors until nothing changes.
// Returns the surviving symbol indices in original order.
std::vector<int> trim_to_essential(const std::vector<std::vector<std::uint8_t>>& matrix) {
    const int n = static_cast<int>(matrix.size());
    std::vector<char> alive(n, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            bool has_succ = false, has_pred = false;
            for (int j = 0; j < n; ++j) {
                if (alive[j] && matrix[i][j]) has_succ = true;
                if (alive[j] && matrix[j][i]) has_pred = true;
            }
            if (!has_succ || !has_pred) {
                alive[i] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (alive[i]) keep.push_back(i);
    return keep;
}

std::vector<std::vector<std::uint8_t>> matrix_from_pairs(
    std::size_t n, const std::vector<std::pair<int, int>>& transitions) {
    std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n, 0));
    for (auto [a, b] : transitions) {
        if (a < 0 || b < 0 || a >= static_cast<int>(n) || b >= static_cast<int>(n))
            throw ValidationError("transition index outside alphabet");
        m[a][b] = 1;
    }
    return m;
}

} // namespace

Sft::Sft(std::vector<std::string> alphabet, const std::vector<std::pair<int, int>>& transitions)
    : Sft([&] {
          auto matrix = matrix_from_pairs(alphabet.size(), transitions);
          return Sft(std::move(alphabet), std::move(matrix));
      }()) {}

Sft::Sft(std::vector<std::string> alphabet, std::vector<std::vector<std::uint8_t>> matrix) {
    const int n = static_cast<int>(alphabet.size());
    if (n == 0) throw EmptyShiftError("alphabet is empty");
    if (static_cast<int>(matrix.size()) != n)
        throw ValidationError("transition matrix size does not match alphabet");
    for (auto& row : matrix)
        if (static_cast<int>(row.size()) != n)
            throw ValidationError("transition matrix is not square");
    for (const auto& s : alphabet) {
        if (s.empty()) throw ValidationError("symbol names must be nonempty");
        if (s.find_first_of(",.\"\n") != std::string::npos)
            throw ValidationError("symbol name '" + s + "' contains a reserved character");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (alphabet[i] == alphabet[j])
                throw ValidationError("duplicate symbol name '" + alphabet[i] + "'");

    std::vector<int> keep = trim_to_essential(matrix);
    if (keep.empty()) throw EmptyShiftError();

    alphabet_.reserve(keep.size());
    for (int i : keep) alphabet_.push_back(alphabet[i]);
    matrix_.assign(keep.size(), std::vector<std::uint8_t>(keep.size(), 0));
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b)
            matrix_[a][b] = matrix[keep[a]][keep[b]] ? 1 : 0;
    build_adjacency();
}

void Sft::build_adjacency() {
    const int n = size();
    succ_.assign(n, {});
    pred_.assign(n, {});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (matrix_[a][b]) {
                succ_[a].push_back(b);
                pred_[b].push_back(a);
            }
}

Sft Sft::full_shift(int k) {
    if (k <= 0) throw EmptyShiftError("full shift needs at least one symbol");
    std::vector<std::string> alphabet;
    for (int i = 0; i < k; ++i) alphabet.push_back(std::to_string(i));
    std::vector<std::vector<std::uint8_t>> matrix(k, std::vector<std::uint8_t>(k, 1));
    return Sft(std::move(alphabet), std::move(matrix));
}

int Sft::symbol_index(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (alphabet_[i] == name) return i;
    return -1;
}

bool Sft::is_full() const {
    for (const auto& row : matrix_)
        for (auto e : row)
            if (!e) return false;
    return true;
}

bool Sft::strongly_connected() const {
    const int n = size();
    auto reach = [&](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        return std::count(seen.begin(), seen.end(), 1) == n;
    };
    return reach(succ_) && reach(pred_);
}

std::size_t Sft::transition_count() const {
    std::size_t c = 0;
    for (const auto& row : matrix_)
        for (auto e : row) c += e;
    return c;
}

bool Sft::word_admissible(const Word& w) const {
    for (int s : w)
        if (s < 0 || s >= size()) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!allowed(w[i], w[i + 1])) return false;
    return true;
}

std::string word_to_string(const Word& w, const Sft& sft) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += '.';
        out += sft.symbol(w[i]);
    }
    return out;
}

std::vector<Word> enumerate_words(const Sft& sft, int n) {
    if (n < 0) throw ValidationError("word length must be nonnegative");
    std::vector<Word> out;
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    Word w;
    w.reserve(n);
    // iterative DFS in lexicographic order
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            out.push_back(w);
            return;
        }
        if (depth == 0) {
            for (int a = 0; a < sft.size(); ++a) {
                w.push_back(a);
                self(self, 1);
                w.pop_back();
            }
        } else {
            for (int b : sft.successors(w.back())) {
                w.push_back(b);
                self(self, depth + 1);
                w.pop_back();
            }
        }
    };
    rec(rec, 0);
    return out;
}

std::size_t count_words(const Sft& sft, int n) {
    if (n < 0) throw ValidationError("word length must be nonnegative");
    if (n == 0) return 1;
    std::vector<std::size_t> c(sft.size(), 1);
    for (int t = 1; t < n; ++t) {
        std::vector<std::size_t> next(sft.size(), 0);
        for (int b = 0; b < sft.size(); ++b)
            for (int a : sft.predecessors(b)) next[b] += c[a];
        c.swap(next);
    }
    std::size_t total = 0;
    for (auto v : c) total += v;
    return total;
}

HigherBlock higher_block_recode(const Sft& sft, int m) {
    if (m < 1) throw ValidationError("block length must be at least 1");
    std::vector<Word> blocks = enumerate_words(sft, m);
    std::vector<std::string> names;
    names.reserve(blocks.size());
    for (const auto& b : blocks) {
        std::string s;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i) s += '+';
            s += sft.symbol(b[i]);
        }
        names.push_back(s);
    }
    const int nb = static_cast<int>(blocks.size());
    std::vector<std::vector<std::uint8_t>> matrix(nb, std::vector<std::uint8_t>(nb, 0));
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            bool ok;
            if (m == 1) {
                ok = sft.allowed(blocks[i][0], blocks[j][0]);
            } else {
                // overlap by m-1; the seam pair is then inside blocks[j]
                ok = true;
                for (int k = 0; k + 1 < m; ++k)
                    if (blocks[i][k + 1] != blocks[j][k]) ok = false;
            }
            matrix[i][j] = ok ? 1 : 0;
        }
    HigherBlock hb{m, Sft(std::move(names), std::move(matrix)), std::move(blocks)};
    if (hb.sft.size() != nb)
        throw ValidationError("higher-block recoding lost symbols; source was not essential");
    return hb;
}

Word HigherBlock::to_blocks(const Word& base_word) const {
    const int L = static_cast<int>(base_word.size());
    if (L < m) throw ValidationError("word shorter than block length");
    Word out;
    out.reserve(L - m + 1);
    for (int s = 0; s + m <= L; ++s) {
        Word b(base_word.begin() + s, base_word.begin() + s + m);
        int idx = block_index(b);
        if (idx < 0) throw InadmissibleWordError("word is not admissible at block " + std::to_string(s));
        out.push_back(idx);
    }
    return out;
}

Word HigherBlock::from_blocks(const Word& block_word) const {
    if (block_word.empty()) return {};
    Word out = blocks[block_word[0]];
    for (std::size_t i = 1; i < block_word.size(); ++i)
        out.push_back(blocks[block_word[i]][m - 1]);
    return out;
}

int HigherBlock::block_index(const Word& base_block) const {
    auto it = std::lower_bound(blocks.begin(), blocks.end(), base_block);
    if (it == blocks.end() || *it != base_block) return -1;
    return static_cast<int>(it - blocks.begin());
}

SlidingBlockCode::SlidingBlockCode(Sft source, Sft target, std::vector<int> rule, std::string name)
    : source_(std::move(source)), target_(std::move(target)), rule_(std::move(rule)),
      name_(std::move(name)) {
    if (static_cast<int>(rule_.size()) != source_.size())
        throw ValidationError(name_ +
                              ": rule must be 1-block (one entry per source symbol); "
                              "recode wider windows with higher_block_recode first");
    for (int v : rule_)
        if (v < 0 || v >= target_.size())
            throw ValidationError(name_ + ": rule maps outside the target alphabet");
    for (int a = 0; a < source_.size(); ++a)
        for (int b : source_.successors(a))
            if (!target_.allowed(rule_[a], rule_[b]))
                throw ValidationError(name_ + ": rule is not transition-compatible on (" +
                                      source_.symbol(a) + "," + source_.symbol(b) + ")");
    preimages_.assign(target_.size(), {});
    for (int a = 0; a < source_.size(); ++a) preimages_[rule_[a]].push_back(a);
}

SlidingBlockCode SlidingBlockCode::compose(const SlidingBlockCode& first,
                                           const SlidingBlockCode& second,
                                           const std::string& name) {
    if (first.target().alphabet() != second.source().alphabet())
        throw ValidationError("codes do not compose: alphabets differ");
    std::vector<int> rule(first.source().size());
    for (int a = 0; a < first.source().size(); ++a) rule[a] = second.apply(first.apply(a));
    return SlidingBlockCode(first.source(), second.target(), std::move(rule), name);
}

Word apply_code(const SlidingBlockCode& code, const Word& w) {
    if (!code.source().word_admissible(w))
        throw InadmissibleWordError("word is not admissible in the source shift");
    Word out;
    out.reserve(w.size());
    for (int s : w) out.push_back(code.apply(s));
    return out;
}

Potential::Potential(std::vector<double> v) : values(std::move(v)) {
    for (double x : values)
        if (!std::isfinite(x)) throw ValidationError("potential values must be finite");
}

double Potential::sup_norm() const {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::fabs(x));
    return m;
}

double birkhoff_sum(const Potential& f, const Word& w) {
    if (w.empty()) throw ValidationError("birkhoff_sum of the empty word");
    double s = 0.0;
    for (int sym : w) {
        if (sym < 0 || sym >= static_cast<int>(f.values.size()))
            throw InadmissibleWordError("word symbol outside potential domain");
        s += f.values[sym];
    }
    return s;
}

Tower::Tower(Sft x_, Sft y_, Sft z_, SlidingBlockCode pi_, SlidingBlockCode phi_)
    : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)), pi(std::move(pi_)),
      phi(std::move(phi_)), psi(SlidingBlockCode::compose(pi, phi, "psi")) {
    if (pi.source().alphabet() != x.alphabet() || pi.target().alphabet() != y.alphabet())
        throw ValidationError("pi does not connect x to y");
    if (phi.source().alphabet() != y.alphabet() || phi.target().alphabet() != z.alphabet())
        throw ValidationError("phi does not connect y to z");
}

namespace {

// Does every admissible target L-word of `code` have an admissible source
// preimage word? Feasibility DP over target words, first failure reported.
ValidationEntry check_level(const SlidingBlockCode& code, int L) {
    ValidationEntry e{code.name(), L, true, {}};
    const Sft& tgt = code.target();
    const Sft& src = code.source();
    Word v;
    std::vector<std::vector<char>> feas; // per depth, over source symbols
    auto rec = [&](auto&& self, int depth) -> bool {
        if (depth == L) return true;
        const bool first = depth == 0;
        for (int c = 0; c < tgt.size(); ++c) {
            if (!first && !tgt.allowed(v.back(), c)) continue;
            std::vector<char> next(src.size(), 0);
            bool any = false;
            if (first) {
                for (int a : code.preimages(c)) {
                    next[a] = 1;
                    any = true;
                }
            } else {
                const auto& cur = feas[depth - 1];
                for (int b : code.preimages(c)) {
                    for (int a : src.predecessors(b))
                        if (cur[a]) {
                            next[b] = 1;
                            any = true;
                            break;
                        }
                }
            }
            v.push_back(c);
            if (!any) {
                // finish v with any admissible continuation as the witness
                Word witness = v;
                while (static_cast<int>(witness.size()) < L)
                    witness.push_back(tgt.successors(witness.back()).front());
                e.surjective = false;
                e.missing = witness;
                return false;
            }
            feas.push_back(std::move(next));
            if (!self(self, depth + 1)) return false;
            feas.pop_back();
            v.pop_back();
        }
        return true;
    };
    rec(rec, 0);
    return e;
}

} // namespace

ValidationReport validate_code(const SlidingBlockCode& code, int horizon) {
    if (horizon < 1) throw ValidationError("validation horizon must be positive");
    ValidationReport r;
    for (int L = 1; L <= horizon; ++L) {
        ValidationEntry e = check_level(code, L);
        r.pass = r.pass && e.surjective;
        r.entries.push_back(std::move(e));
    }
    return r;
}

ValidationReport validate_tower(const Tower& t, int horizon) {
    ValidationReport r;
    for (const auto* code : {&t.pi, &t.phi, &t.psi}) {
        ValidationReport part = validate_code(*code, horizon);
        r.pass = r.pass && part.pass;
        for (auto& e : part.entries) r.entries.push_back(std::move(e));
    }
    return r;
}

} // namespace ergopress
