#pragma once

#include "ergopress/rng.hpp"
#include "ergopress/sft.hpp"

namespace ergopress {

struct RandomTower {
    Tower tower;
    Potential potential;
};

// Random tower: X is drawn with alphabet size 2..4 and edge density in
// [0.5, 1], trimmed and required strongly connected; Y and Z arise by
// quotienting along random symbol-merging maps, so both factor codes are
// 1-block and symbol-surjective by construction. Word-level surjectivity is
// checked up to `horizon` and the draw is retried (up to 100 times) until
// it validates. Potentials are window-1 with values in [-1, 1].
RandomTower random_tower(Rng& rng, int horizon = 6);

Potential random_potential(const Sft& x, Rng& rng);

} // namespace ergopress
