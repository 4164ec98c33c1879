#pragma once

#include "ergopress/sft.hpp"

namespace ergopress {

// Golden-mean shift on {0,1}: the word 11 is forbidden.
Sft golden_mean();

// Deterministic p-cycle: symbol i may only be followed by i+1 mod p.
Sft cycle_sft(int p);

// X = (A x B x Z)^N with the z-component constrained by `z`, Y = (B x Z)^N,
// projections as the factor codes. z = full_shift(1) gives the plain
// product tower over a point.
Tower product_tower(int size_a, int size_b, const Sft& z);

// X = Y via the identity code, over a one-point Z.
Tower identity_tower(const Sft& x);

// Product of two SFTs: pairs (a,b) with both coordinates constrained.
Sft product_sft(const Sft& a, const Sft& b);

// Extend a tower by an independent full factor on `extra` symbols:
// X' = X x full(extra), pi' = pi o projection. Potential pulls back.
Tower extend_by_full_factor(const Tower& t, int extra);
Potential pullback_to_extension(const Potential& f, const Tower& original, int extra);

// The k-th power system: alphabet = k-words, transitions = admissible
// concatenation, codes applied blockwise, potential summed over blocks.
struct PowerSystem {
    Tower tower;
    Potential potential;
    int k = 1;
    std::vector<Word> z_blocks; // power-z symbol -> base k-word

    PowerSystem(Tower t, Potential f, int k_, std::vector<Word> zb)
        : tower(std::move(t)), potential(std::move(f)), k(k_), z_blocks(std::move(zb)) {}

    // z-word of the power system corresponding to a kn-word of the original
    Word block_z_word(const Word& z_word) const;
};

PowerSystem power_system(const Tower& t, const Potential& f, int k);

} // namespace ergopress
