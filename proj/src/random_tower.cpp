#include "ergopress/random_tower.hpp"

#include <optional>

namespace ergopress {

namespace {

std::optional<Sft> draw_sft(Rng& rng) {
    const int k = 2 + rng.uniform_int(3);
    const double density = rng.uniform(0.5, 1.0);
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back(std::to_string(i));
    std::vector<std::vector<std::uint8_t>> matrix(k, std::vector<std::uint8_t>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) matrix[i][j] = rng.uniform() < density ? 1 : 0;
    try {
        Sft s(std::move(names), std::move(matrix));
        if (!s.strongly_connected()) return std::nullopt;
        return s;
    } catch (const EmptyShiftError&) {
        return std::nullopt;
    }
}

// Quotient of `source` along a random surjection onto a smaller alphabet.
// Transitions are the images of the source transitions, which keeps the
// 1-block code transition-compatible and symbol-surjective by construction.
struct Quotient {
    Sft sft;
    std::vector<int> merge;
};

std::optional<Quotient> draw_quotient(const Sft& source, Rng& rng, const std::string& prefix) {
    const int ks = source.size();
    const int kt = 1 + rng.uniform_int(ks);
    std::vector<int> merge(ks);
    // force surjectivity: first kt symbols hit each class once, rest random
    for (int i = 0; i < ks; ++i) merge[i] = i < kt ? i : rng.uniform_int(kt);
    std::vector<std::string> names;
    for (int c = 0; c < kt; ++c) names.push_back(prefix + std::to_string(c));
    std::vector<std::vector<std::uint8_t>> matrix(kt, std::vector<std::uint8_t>(kt, 0));
    for (int a = 0; a < ks; ++a)
        for (int b : source.successors(a)) matrix[merge[a]][merge[b]] = 1;
    try {
        Sft s(std::move(names), std::move(matrix));
        if (s.size() != kt) return std::nullopt; // trim removed a class
        return Quotient{std::move(s), std::move(merge)};
    } catch (const EmptyShiftError&) {
        return std::nullopt;
    }
}

} // namespace

Potential random_potential(const Sft& x, Rng& rng) {
    std::vector<double> values(x.size());
    for (double& v : values) v = rng.uniform(-1.0, 1.0);
    return Potential(std::move(values));
}

RandomTower random_tower(Rng& rng, int horizon) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto x = draw_sft(rng);
        if (!x) continue;
        auto qy = draw_quotient(*x, rng, "y");
        if (!qy) continue;
        auto qz = draw_quotient(qy->sft, rng, "z");
        if (!qz) continue;
        try {
            SlidingBlockCode pi(*x, qy->sft, qy->merge, "pi");
            SlidingBlockCode phi(qy->sft, qz->sft, qz->merge, "phi");
            Tower tower(*x, qy->sft, qz->sft, std::move(pi), std::move(phi));
            if (!validate_tower(tower, horizon).pass) continue;
            Potential f = random_potential(*x, rng);
            return RandomTower{std::move(tower), std::move(f)};
        } catch (const ValidationError&) {
            continue;
        }
    }
    throw GenerationFailedError("no valid tower after 100 attempts");
}

} // namespace ergopress
