#pragma once

#include "donkin/freudenthal.hpp"
#include "donkin/tensor_ops.hpp"

#include <deque>

namespace donkin {

struct Prime {
    std::int64_t p = 2;

    explicit Prime(std::int64_t v) : p(v) {
        if (p < 2) throw InputError("prime must be >= 2");
        for (std::int64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw InputError(std::to_string(p) + " is not prime");
    }
};

inline std::int64_t p_adic_valuation(std::int64_t p, std::int64_t m) {
    std::int64_t v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

// s_{beta,mp} . lam = lam - (<lam+rho, beta^vee> - m p) beta  (dot action)
inline Coords affine_reflect(const RootSystem& rs, const PosRoot& beta, std::int64_t m,
                             std::int64_t p, const Coords& lam) {
    Coords lr(lam);
    for (auto& x : lr) x += 1;
    std::int64_t t = rs.pairing(lr, beta) - m * p;
    Coords out(lam);
    for (int j = 0; j < rs.rank(); ++j) out[j] -= t * beta.fund[j];
    return out;
}

// Canonical W_p dot-orbit representative: the unique orbit point mu with
// 0 <= <mu+rho, beta^vee> <= p for every positive root. Alternates finite
// Weyl descent with wall reflections that strictly decrease |mu+rho|, so the
// loop terminates.
inline Coords alcove_rep(const RootSystem& rs, std::int64_t p, const Coords& lam) {
    Coords v(lam);
    for (auto& x : v) x += 1;  // act linearly on lam + rho
    const int rank = rs.rank();
    for (;;) {
        rs.make_dominant(v);
        bool inside = true;
        for (const auto& beta : rs.positive_roots()) {
            std::int64_t t = rs.pairing(v, beta);
            if (t <= p) continue;
            inside = false;
            std::int64_t r = t % (2 * p);
            // Translation by p*beta shifts the pairing by 2p; a wall
            // reflection negates it mod 2p. Land in [0, p].
            std::int64_t target = (r <= p) ? r : 2 * p - r;
            // <v - c*beta, beta^vee> = t - 2c, so c = (t - target)/2.
            std::int64_t delta = t - target;
            if (delta % 2 != 0) throw InternalError("alcove reduction parity");
            for (int j = 0; j < rank; ++j) v[j] -= (delta / 2) * beta.fund[j];
            break;
        }
        if (inside) break;
    }
    for (auto& x : v) x -= 1;
    return v;
}

inline bool linked(const RootSystem& rs, std::int64_t p, const Coords& lam, const Coords& mu) {
    return alcove_rep(rs, p, lam) == alcove_rep(rs, p, mu);
}

// lam dominant lies in the closure of the bottom alcove.
inline bool bottom_alcove(const RootSystem& rs, std::int64_t p, const Coords& lam) {
    if (!rs.is_dominant(lam)) throw InputError("bottom_alcove requires a dominant weight");
    Coords lr(lam);
    for (auto& x : lr) x += 1;
    for (const auto& beta : rs.positive_roots())
        if (rs.pairing(lr, beta) > p) return false;
    return true;
}

// Strong linkage mu up-arrow lam: a chain of dominance-increasing affine
// reflections inside the interval [mu, lam]. Bounded breadth-first search;
// diagnostic use, the certification engine itself only needs `linked`.
inline bool up_arrow(const RootSystem& rs, std::int64_t p, const Coords& mu, const Coords& lam) {
    if (mu == lam) return true;
    if (!rs.dominance_leq(mu, lam)) return false;
    const int rank = rs.rank();
    std::unordered_set<Coords, CoordsHash> seen{mu};
    std::deque<Coords> queue{mu};
    Coords scaled;
    while (!queue.empty()) {
        Coords nu = queue.front();
        queue.pop_front();
        Coords nr(nu);
        for (auto& x : nr) x += 1;
        for (const auto& beta : rs.positive_roots()) {
            std::int64_t t = rs.pairing(nr, beta);
            // Upward reflections: nu -> nu + (mp - t) beta with mp > t.
            std::int64_t m0 = t >= 0 ? t / p + 1 : -((-t) / p);
            for (std::int64_t m = m0;; ++m) {
                std::int64_t step = m * p - t;
                if (step <= 0) continue;
                Coords cand(nu);
                for (int j = 0; j < rank; ++j) cand[j] += step * beta.fund[j];
                if (!rs.dominance_leq(cand, lam)) break;
                if (cand == lam) return true;
                if (seen.insert(cand).second) queue.push_back(cand);
            }
        }
    }
    return false;
}

// Jantzen sum formula for the Weyl module with highest weight lam:
//   sum_{beta>0} sum_{0<m<<lam+rho,beta^vee>} nu_p(m) chi(lam - (<lam+rho,beta^vee> - m) beta)
// normalized through reduce_rho. Zero iff the (dual) Weyl module is simple.
inline WeylSum jantzen_sum(const RootSystem& rs, std::int64_t p, const Coords& lam) {
    if (!rs.is_dominant(lam)) throw InputError("jantzen_sum requires a dominant weight");
    auto rsp = RootSystem::get(rs.spec());
    WeylSum out(rsp);
    Coords lr(lam);
    for (auto& x : lr) x += 1;
    const int rank = rs.rank();
    for (const auto& beta : rs.positive_roots()) {
        const std::int64_t n = rs.pairing(lr, beta);
        for (std::int64_t m = p; m < n; m += p) {
            std::int64_t v = p_adic_valuation(p, m);
            Coords w(lam);
            for (int j = 0; j < rank; ++j) w[j] -= (n - m) * beta.fund[j];
            ReduceResult r = rs.reduce_rho(w);
            if (r.singular) continue;
            out.add(r.dominant, r.sign > 0 ? BigInt(v) : BigInt(-v));
        }
    }
    return out;
}

// True iff no other dominant weight of the dual Weyl module is W_p-linked to
// lam; sufficient for irreducibility by the linkage principle.
inline bool irreducible_by_linkage(const RootSystem& rs, std::int64_t p, const Coords& lam) {
    Coords rep = alcove_rep(rs, p, lam);
    for (const auto& mu : dominant_weights_of(rs, lam)) {
        if (mu == lam) continue;
        if (alcove_rep(rs, p, mu) == rep) return false;
    }
    return true;
}

struct IrredVerdict {
    bool yes = false;
    std::string reason;  // per-component reasons when yes; first obstruction otherwise
};

// Certified irreducibility of the dual Weyl module: bottom alcove, linkage
// separation, or vanishing Jantzen sum, componentwise over products. Never
// asserts reducibility.
inline IrredVerdict nabla_irreducible(const RootSystem& rs, std::int64_t p, const Coords& lam) {
    if (!rs.is_dominant(lam)) throw InputError("nabla_irreducible requires a dominant weight");
    IrredVerdict v;
    std::string reasons;
    for (int c = 0; c < rs.num_components(); ++c) {
        auto sub = rs.component_system(c);
        Coords part = rs.component_slice(lam, c);
        std::string tag = sub->spec().to_string() + " " + sub->format_weight(part);
        if (bottom_alcove(*sub, p, part)) {
            reasons += (reasons.empty() ? "" : "; ") + tag + ": bottom alcove";
        } else if (irreducible_by_linkage(*sub, p, part)) {
            reasons += (reasons.empty() ? "" : "; ") + tag + ": linkage separates all lower dominant weights";
        } else if (jantzen_sum(*sub, p, part).empty()) {
            reasons += (reasons.empty() ? "" : "; ") + tag + ": Jantzen sum vanishes";
        } else {
            v.yes = false;
            v.reason = tag + ": not certified (sum formula nonzero and linkage fails)";
            return v;
        }
    }
    v.yes = true;
    v.reason = reasons;
    return v;
}

}  // namespace donkin
