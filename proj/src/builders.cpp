#include "ergopress/builders.hpp"

#include <map>

namespace ergopress {

Sft golden_mean() {
    return Sft({"0", "1"}, std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}});
}

Sft cycle_sft(int p) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < p; ++i) {
        names.push_back(std::to_string(i));
        edges.emplace_back(i, (i + 1) % p);
    }
    return Sft(std::move(names), edges);
}

Sft product_sft(const Sft& a, const Sft& b) {
    std::vector<std::string> names;
    const int na = a.size(), nb = b.size();
    names.reserve(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) names.push_back(a.symbol(i) + b.symbol(j));
    std::vector<std::vector<std::uint8_t>> matrix(na * nb, std::vector<std::uint8_t>(na * nb, 0));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            for (int i2 = 0; i2 < na; ++i2)
                for (int j2 = 0; j2 < nb; ++j2)
                    matrix[i * nb + j][i2 * nb + j2] = (a.allowed(i, i2) && b.allowed(j, j2)) ? 1 : 0;
    return Sft(std::move(names), std::move(matrix));
}

Tower product_tower(int size_a, int size_b, const Sft& z) {
    const int nz = z.size();
    const int nx = size_a * size_b * nz;
    const int ny = size_b * nz;

    std::vector<std::string> x_names, y_names;
    for (int a = 0; a < size_a; ++a)
        for (int b = 0; b < size_b; ++b)
            for (int c = 0; c < nz; ++c)
                x_names.push_back(std::to_string(a) + std::to_string(b) + z.symbol(c));
    for (int b = 0; b < size_b; ++b)
        for (int c = 0; c < nz; ++c) y_names.push_back(std::to_string(b) + z.symbol(c));

    auto xi = [&](int a, int b, int c) { return (a * size_b + b) * nz + c; };
    auto yi = [&](int b, int c) { return b * nz + c; };

    std::vector<std::vector<std::uint8_t>> xm(nx, std::vector<std::uint8_t>(nx, 0));
    for (int a = 0; a < size_a; ++a)
        for (int b = 0; b < size_b; ++b)
            for (int c = 0; c < nz; ++c)
                for (int a2 = 0; a2 < size_a; ++a2)
                    for (int b2 = 0; b2 < size_b; ++b2)
                        for (int c2 = 0; c2 < nz; ++c2)
                            xm[xi(a, b, c)][xi(a2, b2, c2)] = z.allowed(c, c2) ? 1 : 0;
    std::vector<std::vector<std::uint8_t>> ym(ny, std::vector<std::uint8_t>(ny, 0));
    for (int b = 0; b < size_b; ++b)
        for (int c = 0; c < nz; ++c)
            for (int b2 = 0; b2 < size_b; ++b2)
                for (int c2 = 0; c2 < nz; ++c2) ym[yi(b, c)][yi(b2, c2)] = z.allowed(c, c2) ? 1 : 0;

    Sft x(std::move(x_names), std::move(xm));
    Sft y(std::move(y_names), std::move(ym));

    std::vector<int> pi_rule(nx), phi_rule(ny);
    for (int a = 0; a < size_a; ++a)
        for (int b = 0; b < size_b; ++b)
            for (int c = 0; c < nz; ++c) pi_rule[xi(a, b, c)] = yi(b, c);
    for (int b = 0; b < size_b; ++b)
        for (int c = 0; c < nz; ++c) phi_rule[yi(b, c)] = c;

    SlidingBlockCode pi(x, y, std::move(pi_rule), "pi");
    SlidingBlockCode phi(y, z, std::move(phi_rule), "phi");
    return Tower(std::move(x), std::move(y), z, std::move(pi), std::move(phi));
}

Tower identity_tower(const Sft& x) {
    std::vector<int> id(x.size());
    for (int i = 0; i < x.size(); ++i) id[i] = i;
    Sft point = Sft::full_shift(1);
    SlidingBlockCode pi(x, x, std::move(id), "pi");
    SlidingBlockCode phi(x, point, std::vector<int>(x.size(), 0), "phi");
    return Tower(x, x, std::move(point), std::move(pi), std::move(phi));
}

Tower extend_by_full_factor(const Tower& t, int extra) {
    Sft x3 = product_sft(t.x, Sft::full_shift(extra));
    std::vector<int> proj(x3.size());
    for (int i = 0; i < t.x.size(); ++i)
        for (int e = 0; e < extra; ++e) proj[i * extra + e] = i;
    SlidingBlockCode pi2(x3, t.x, std::move(proj), "pi2");
    SlidingBlockCode pi3 = SlidingBlockCode::compose(pi2, t.pi, "pi");
    return Tower(std::move(x3), t.y, t.z, std::move(pi3), t.phi);
}

Potential pullback_to_extension(const Potential& f, const Tower& original, int extra) {
    std::vector<double> values;
    values.reserve(f.values.size() * extra);
    for (int i = 0; i < original.x.size(); ++i)
        for (int e = 0; e < extra; ++e) values.push_back(f.values[i]);
    return Potential(std::move(values));
}

namespace {

// k-block power presentation of one SFT (non-overlapping concatenation).
struct PowerPart {
    Sft sft;
    std::vector<Word> blocks;
};

PowerPart power_sft(const Sft& s, int k) {
    std::vector<Word> blocks = enumerate_words(s, k);
    std::vector<std::string> names;
    names.reserve(blocks.size());
    for (const auto& b : blocks) {
        std::string name;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i) name += '+';
            name += s.symbol(b[i]);
        }
        names.push_back(name);
    }
    const int nb = static_cast<int>(blocks.size());
    std::vector<std::vector<std::uint8_t>> matrix(nb, std::vector<std::uint8_t>(nb, 0));
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            matrix[i][j] = s.allowed(blocks[i][k - 1], blocks[j][0]) ? 1 : 0;
    PowerPart part{Sft(std::move(names), std::move(matrix)), std::move(blocks)};
    if (part.sft.size() != nb)
        throw ValidationError("power presentation lost symbols; source was not essential");
    return part;
}

std::vector<int> blockwise_rule(const PowerPart& src, const PowerPart& tgt,
                                const SlidingBlockCode& code) {
    std::map<Word, int> tgt_index;
    for (std::size_t i = 0; i < tgt.blocks.size(); ++i) tgt_index[tgt.blocks[i]] = static_cast<int>(i);
    std::vector<int> rule;
    rule.reserve(src.blocks.size());
    for (const auto& b : src.blocks) {
        Word image;
        image.reserve(b.size());
        for (int sym : b) image.push_back(code.apply(sym));
        rule.push_back(tgt_index.at(image));
    }
    return rule;
}

} // namespace

PowerSystem power_system(const Tower& t, const Potential& f, int k) {
    if (k < 1) throw ValidationError("power must be positive");
    PowerPart xp = power_sft(t.x, k);
    PowerPart yp = power_sft(t.y, k);
    PowerPart zp = power_sft(t.z, k);

    SlidingBlockCode pi(xp.sft, yp.sft, blockwise_rule(xp, yp, t.pi), "pi^k");
    SlidingBlockCode phi(yp.sft, zp.sft, blockwise_rule(yp, zp, t.phi), "phi^k");

    std::vector<double> values;
    values.reserve(xp.blocks.size());
    for (const auto& b : xp.blocks) values.push_back(birkhoff_sum(f, b));

    Tower tower(xp.sft, yp.sft, zp.sft, std::move(pi), std::move(phi));
    std::vector<Word> z_blocks = zp.blocks;
    return PowerSystem(std::move(tower), Potential(std::move(values)), k, std::move(z_blocks));
}

Word PowerSystem::block_z_word(const Word& z_word) const {
    if (z_word.size() % k != 0) throw ValidationError("z-word length must be a multiple of k");
    std::map<Word, int> index;
    for (std::size_t i = 0; i < z_blocks.size(); ++i) index[z_blocks[i]] = static_cast<int>(i);
    Word out;
    out.reserve(z_word.size() / k);
    for (std::size_t s = 0; s + k <= z_word.size(); s += k) {
        Word block(z_word.begin() + s, z_word.begin() + s + k);
        auto it = index.find(block);
        if (it == index.end()) throw InadmissibleWordError("z-word block is not admissible");
        out.push_back(it->second);
    }
    return out;
}

} // namespace ergopress
