#pragma once

#include "donkin/calc_context.hpp"
#include "donkin/character.hpp"

#include <algorithm>
#include <queue>

namespace donkin {

// All dominant mu <= lam (cone order) with lam - mu in the root lattice;
// exactly the dominant weights of the dual Weyl module with highest weight
// lam. Walks downward by positive roots through dominant weights, which
// reaches everything because covers in the dominance order on dominant
// weights differ by a positive root.
inline std::vector<Coords> dominant_weights_of(const RootSystem& rs, const Coords& lam) {
    if (!rs.is_dominant(lam)) throw InputError("dominant_weights_of requires a dominant weight");
    std::vector<Coords> out;
    std::unordered_set<Coords, CoordsHash> seen;
    std::vector<Coords> queue{lam};
    seen.insert(lam);
    std::size_t head = 0;
    const int rank = rs.rank();
    while (head < queue.size()) {
        Coords v = queue[head++];
        out.push_back(v);
        for (const auto& beta : rs.positive_roots()) {
            Coords w(v);
            bool dominant = true;
            for (int j = 0; j < rank; ++j) {
                w[j] -= beta.fund[j];
                if (w[j] < 0) dominant = false;
            }
            if (dominant && seen.insert(w).second) queue.push_back(w);
        }
    }
    return out;
}

namespace detail {

// Freudenthal's recursion over the dominant weight table of chi(lam).
inline DominantCharacter freudenthal_compute(const std::shared_ptr<const RootSystem>& rsp,
                                             const Coords& lam) {
    const RootSystem& rs = *rsp;
    const int rank = rs.rank();
    std::vector<Coords> doms = dominant_weights_of(rs, lam);

    // Process by increasing height of lam - mu.
    auto depth_of = [&](const Coords& mu) {
        Coords scaled;
        Coords delta(lam);
        for (int j = 0; j < rank; ++j) delta[j] -= mu[j];
        rs.root_coords_scaled(delta, scaled);
        std::int64_t h = 0;
        for (int i = 0; i < rank; ++i) {
            std::int64_t d = rs.block_det_of_node(i);
            if (scaled[i] % d != 0) throw InternalError("weight outside root lattice coset");
            h += scaled[i] / d;
        }
        return h;
    };
    std::stable_sort(doms.begin(), doms.end(), [&](const Coords& a, const Coords& b) {
        return depth_of(a) < depth_of(b);
    });

    std::unordered_map<Coords, BigInt, CoordsHash> mult;
    mult.reserve(doms.size() * 2);
    mult[lam] = 1;

    Coords lam_rho(lam), mu_rho, w, scaled_delta;
    for (auto& x : lam_rho) x += 1;
    const std::int64_t n_lr = rs.gram_num(lam_rho, lam_rho);
    const auto& roots = rs.positive_roots();

    for (std::size_t di = 1; di < doms.size(); ++di) {
        const Coords& mu = doms[di];
        Coords delta(lam);
        for (int j = 0; j < rank; ++j) delta[j] -= mu[j];
        rs.root_coords_scaled(delta, scaled_delta);

        BigInt total = 0;
        for (std::size_t ri = 0; ri < roots.size(); ++ri) {
            const PosRoot& beta = roots[ri];
            // Largest k with mu + k*beta still <= lam in the root cone.
            std::int64_t kmax = -1;
            for (int i = 0; i < rank; ++i) {
                std::int64_t rc = beta.root_coords[i];
                if (rc <= 0) continue;
                std::int64_t lim = scaled_delta[i] / (rs.block_det_of_node(i) * rc);
                kmax = (kmax < 0) ? lim : std::min(kmax, lim);
            }
            if (kmax < 1) continue;
            const std::int64_t base = rs.gram_num_with_root(mu, static_cast<int>(ri));
            const std::int64_t incr = rs.gram_num_with_root(beta.fund, static_cast<int>(ri));
            w = mu;
            for (std::int64_t k = 1; k <= kmax; ++k) {
                for (int j = 0; j < rank; ++j) w[j] += beta.fund[j];
                Coords rep(w);
                rs.make_dominant(rep);
                auto it = mult.find(rep);
                if (it == mult.end()) break;  // weight strings are unbroken
                total += it->second * (base + k * incr);
            }
        }
        mu_rho = mu;
        for (auto& x : mu_rho) x += 1;
        BigInt denom = n_lr - rs.gram_num(mu_rho, mu_rho);
        mult[mu] = exact_div(2 * total, denom, "Freudenthal");
    }

    DominantCharacter ch(rsp);
    for (const auto& [muk, m] : mult)
        if (m != 0) ch.add(muk, m);
    ch.check_genuine();
    return ch;
}

}  // namespace detail

// Character of the dual Weyl module with highest weight lam, memoized in the
// context and, when configured, in the persistent cache.
inline std::shared_ptr<const DominantCharacter> freudenthal(
    const CalcContext& ctx, const std::shared_ptr<const RootSystem>& rs, const Coords& lam) {
    if (!rs->is_dominant(lam)) throw InputError("freudenthal requires a dominant weight");
    const std::string key = CalcContext::memo_key(*rs, lam);
    if (auto hit = ctx.memo_lookup(key)) return hit;
    if (ctx.disk()) {
        if (auto disk = ctx.disk()->load(rs, lam)) {
            auto ptr = std::make_shared<const DominantCharacter>(std::move(*disk));
            return ctx.memo_store(key, ptr);
        }
    }
    auto ptr = std::make_shared<const DominantCharacter>(detail::freudenthal_compute(rs, lam));
    if (ctx.disk()) ctx.disk()->store(rs, lam, *ptr);
    return ctx.memo_store(key, ptr);
}

}  // namespace donkin
