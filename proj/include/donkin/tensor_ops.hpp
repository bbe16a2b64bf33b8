#pragma once

#include "donkin/freudenthal.hpp"

#include <map>

namespace donkin {

namespace detail {

struct CanonicalDesc {
    const RootSystem* rs;
    bool operator()(const Coords& a, const Coords& b) const { return rs->canonical_less(b, a); }
};

using OrderedMap = std::map<Coords, BigInt, CanonicalDesc>;

}  // namespace detail

// Inverse of to_weights: peel Weyl characters off the maximal remaining key.
// Accepts virtual (signed) inputs; always terminates because every new key
// lies strictly below the key just removed.
inline WeylSum decompose(const CalcContext& ctx, const DominantCharacter& ch) {
    const auto& rs = ch.system();
    detail::OrderedMap cur{detail::CanonicalDesc{rs.get()}};
    for (const auto& [w, m] : ch.entries())
        if (m != 0) cur.emplace(w, m);
    WeylSum out(rs);
    while (!cur.empty()) {
        auto top = cur.begin();
        Coords lam = top->first;
        BigInt c = top->second;
        out.add(lam, c);
        auto table = freudenthal(ctx, rs, lam);
        for (const auto& [mu, m] : table->entries()) {
            auto [it, inserted] = cur.try_emplace(mu, BigInt(0));
            it->second -= c * m;
            if (it->second == 0) cur.erase(it);
        }
    }
    return out;
}

// sum of coeff * freudenthal(index); signed in general.
inline DominantCharacter to_weights(const CalcContext& ctx, const WeylSum& s) {
    DominantCharacter out(s.system(), /*is_virtual=*/true);
    for (const auto& [lam, c] : s.entries()) {
        auto table = freudenthal(ctx, s.system(), lam);
        for (const auto& [mu, m] : table->entries()) out.add(mu, c * m);
    }
    return out;
}

namespace detail {

// Brauer-Klimyk step: accumulate anchor (x) chi(expand) into `acc`, expanding
// the weight diagram of `expand` orbit by orbit.
inline void klimyk_accumulate(const CalcContext& ctx, const std::shared_ptr<const RootSystem>& rs,
                              const Coords& anchor, const Coords& expand, const BigInt& coeff,
                              CoeffMap& acc) {
    auto table = freudenthal(ctx, rs, expand);
    const int rank = rs->rank();
    for (const auto& [mu, m] : table->entries()) {
        BigInt scale = coeff * m;
        rs->weyl_orbit(mu, ctx.orbit_cap(), [&](const Coords& w) {
            Coords sum(anchor);
            for (int j = 0; j < rank; ++j) sum[j] += w[j];
            ReduceResult r = rs->reduce_rho(sum);
            if (r.singular) return;
            coeff_add(acc, r.dominant, r.sign > 0 ? scale : -scale);
        });
    }
}

}  // namespace detail

// Weyl-character decomposition of chi(a) (x) chi(b), bilinearly extended;
// each elementary product expands the smaller factor's weight diagram.
inline WeylSum tensor(const CalcContext& ctx, const WeylSum& a, const WeylSum& b) {
    if (!(a.system()->spec() == b.system()->spec()))
        throw InputError("tensor arguments live in different root systems");
    const auto& rs = a.system();
    detail::CoeffMap acc;
    for (const auto& [la, ca] : a.entries()) {
        BigInt dim_a = weyl_dim(*rs, la);
        for (const auto& [lb, cb] : b.entries()) {
            BigInt dim_b = weyl_dim(*rs, lb);
            BigInt c = ca * cb;
            if (dim_b <= dim_a) detail::klimyk_accumulate(ctx, rs, la, lb, c, acc);
            else detail::klimyk_accumulate(ctx, rs, lb, la, c, acc);
        }
    }
    WeylSum out(rs);
    for (const auto& [w, c] : acc) out.add(w, c);
    return out;
}

// Adams operation psi^k: scale every weight of the expansion by k, then
// decompose. Dominant keys stay dominant under scaling, so this never
// expands an orbit.
inline WeylSum adams(const CalcContext& ctx, std::uint32_t k, const WeylSum& s) {
    if (k == 0) throw InputError("adams requires k >= 1");
    if (k == 1) return s;
    const auto& rs = s.system();
    DominantCharacter scaled(rs, /*is_virtual=*/true);
    for (const auto& [lam, c] : s.entries()) {
        auto table = freudenthal(ctx, rs, lam);
        for (const auto& [mu, m] : table->entries()) {
            Coords km(mu);
            for (auto& x : km) x *= k;
            scaled.add(km, c * m);
        }
    }
    return decompose(ctx, scaled);
}

namespace detail {

inline WeylSum scalar_div(const WeylSum& s, std::int64_t k) {
    WeylSum out(s.system());
    for (const auto& [w, c] : s.entries())
        out.add(w, exact_div(c, k, "power-sum recursion"));
    return out;
}

inline WeylSum power_via_newton(const CalcContext& ctx, std::uint32_t k, const WeylSum& s,
                                bool alternating) {
    std::vector<WeylSum> psi(k + 1), e(k + 1);
    for (std::uint32_t i = 1; i <= k; ++i) psi[i] = adams(ctx, i, s);
    e[0] = WeylSum::unit(s.system());
    for (std::uint32_t j = 1; j <= k; ++j) {
        WeylSum acc(s.system());
        for (std::uint32_t i = 1; i <= j; ++i) {
            WeylSum term = tensor(ctx, e[j - i], psi[i]);
            bool negate = alternating && (i % 2 == 0);
            for (const auto& [w, c] : term.entries()) acc.add(w, negate ? -c : c);
        }
        e[j] = scalar_div(acc, j);
    }
    return e[k];
}

}  // namespace detail

// Exterior power Lambda^k via the Newton identity
//   k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} psi^i(s),
// with the division by k required to be exact.
inline WeylSum alt_power(const CalcContext& ctx, std::uint32_t k, const WeylSum& s) {
    if (k == 0) return WeylSum::unit(s.system());
    if (k == 1) return s;
    return detail::power_via_newton(ctx, k, s, /*alternating=*/true);
}

// Symmetric power S^k via k h_k = sum_{i=1..k} h_{k-i} psi^i(s).
inline WeylSum sym_power(const CalcContext& ctx, std::uint32_t k, const WeylSum& s) {
    if (k == 0) return WeylSum::unit(s.system());
    if (k == 1) return s;
    return detail::power_via_newton(ctx, k, s, /*alternating=*/false);
}

inline BigInt dim_of(const WeylSum& s) { return s.dimension(); }

}  // namespace donkin
