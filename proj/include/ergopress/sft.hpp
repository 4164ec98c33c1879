#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ergopress/errors.hpp"

namespace ergopress {

// A word is a sequence of symbol indices into an Sft's alphabet.
using Word = std::vector<int>;

std::string word_to_string(const Word& w, const class Sft& sft);

// One-sided shift of finite type: an ordered alphabet plus an allowed-pair
// relation. Construction trims the presentation to its essential part
// (every surviving symbol has an allowed successor and predecessor) and
// throws EmptyShiftError if nothing survives.
class Sft {
public:
    Sft(std::vector<std::string> alphabet, const std::vector<std::pair<int, int>>& transitions);
    Sft(std::vector<std::string> alphabet, std::vector<std::vector<std::uint8_t>> matrix);

    static Sft full_shift(int k);

    int size() const { return static_cast<int>(alphabet_.size()); }
    const std::string& symbol(int i) const { return alphabet_[i]; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    bool allowed(int a, int b) const { return matrix_[a][b] != 0; }
    const std::vector<int>& successors(int a) const { return succ_[a]; }
    const std::vector<int>& predecessors(int b) const { return pred_[b]; }
    const std::vector<std::vector<std::uint8_t>>& matrix() const { return matrix_; }

    // Index of a symbol name, -1 if absent.
    int symbol_index(const std::string& name) const;

    bool is_full() const;
    bool strongly_connected() const;
    std::size_t transition_count() const;

    bool word_admissible(const Word& w) const;

private:
    std::vector<std::string> alphabet_;
    std::vector<std::vector<std::uint8_t>> matrix_;
    std::vector<std::vector<int>> succ_;
    std::vector<std::vector<int>> pred_;

    void build_adjacency();
};

// All admissible n-words in lexicographic order of symbol indices.
// n = 0 yields the single empty word.
std::vector<Word> enumerate_words(const Sft& sft, int n);
std::size_t count_words(const Sft& sft, int n);

// Higher-block presentation: alphabet = admissible m-words, transitions =
// overlap compatibility. Carries the word translation maps both ways.
struct HigherBlock {
    int m = 1;
    Sft sft;                  // the recoded shift
    std::vector<Word> blocks; // block index -> base m-word, lex order

    // (n+m-1)-word of the base <-> n-word of the recoding.
    Word to_blocks(const Word& base_word) const;
    Word from_blocks(const Word& block_word) const;
    int block_index(const Word& base_block) const;
};

HigherBlock higher_block_recode(const Sft& sft, int m);

// 1-block sliding block code between SFTs. The constructor enforces
// transition compatibility; word-level surjectivity is checked by
// validate_code / validate_tower up to a horizon.
class SlidingBlockCode {
public:
    SlidingBlockCode(Sft source, Sft target, std::vector<int> rule, std::string name = "code");

    const Sft& source() const { return source_; }
    const Sft& target() const { return target_; }
    const std::string& name() const { return name_; }
    int apply(int sym) const { return rule_[sym]; }
    const std::vector<int>& rule() const { return rule_; }
    const std::vector<int>& preimages(int target_sym) const { return preimages_[target_sym]; }

    static SlidingBlockCode compose(const SlidingBlockCode& first, const SlidingBlockCode& second,
                                    const std::string& name = "composite");

private:
    Sft source_;
    Sft target_;
    std::vector<int> rule_;
    std::vector<std::vector<int>> preimages_;
    std::string name_;
};

// Symbolwise image of an admissible word. Throws InadmissibleWordError if w
// is not admissible in the source.
Word apply_code(const SlidingBlockCode& code, const Word& w);

// Locally constant potential, one real value per x-symbol (nats per step).
struct Potential {
    std::vector<double> values;

    explicit Potential(std::vector<double> v);
    static Potential zero(const Sft& x) { return Potential(std::vector<double>(x.size(), 0.0)); }
    double sup_norm() const;
};

// Birkhoff sum over the cylinder of w; exact sup because potentials are
// window-1. Throws on the empty word.
double birkhoff_sum(const Potential& f, const Word& w);

// Two 1-block factor codes X -> Y -> Z with the composite psi = phi o pi.
struct Tower {
    Sft x, y, z;
    SlidingBlockCode pi, phi, psi;

    Tower(Sft x_, Sft y_, Sft z_, SlidingBlockCode pi_, SlidingBlockCode phi_);
};

struct ValidationEntry {
    std::string code;
    int level = 0;
    bool surjective = true;
    Word missing; // first target word with no preimage, if any
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationEntry> entries;
};

ValidationReport validate_code(const SlidingBlockCode& code, int horizon);
ValidationReport validate_tower(const Tower& t, int horizon);

} // namespace ergopress
