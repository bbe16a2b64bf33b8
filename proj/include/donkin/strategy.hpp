#pragma once

#include "donkin/modular.hpp"

namespace donkin {

// Auxiliary-module recipe: an expression tree over already-certified
// fundamental weights with Tensor and AltPower nodes.
struct Recipe {
    enum class Kind { Leaf, Tensor, AltPower };
    Kind kind = Kind::Leaf;
    Coords leaf;
    std::uint32_t power = 0;
    std::vector<Recipe> args;

    static Recipe leaf_of(Coords w) {
        Recipe r;
        r.kind = Kind::Leaf;
        r.leaf = std::move(w);
        return r;
    }
    static Recipe tensor_of(Recipe a, Recipe b) {
        Recipe r;
        r.kind = Kind::Tensor;
        r.args = {std::move(a), std::move(b)};
        return r;
    }
    static Recipe alt_of(std::uint32_t k, Recipe a) {
        Recipe r;
        r.kind = Kind::AltPower;
        r.power = k;
        r.args = {std::move(a)};
        return r;
    }

    void collect_leaves(std::vector<Coords>& out) const {
        if (kind == Kind::Leaf) out.push_back(leaf);
        for (const auto& a : args) a.collect_leaves(out);
    }

    // AltPower with k >= 2 models a wedge of modules and requires p > 2.
    WeylSum eval(const CalcContext& ctx, const std::shared_ptr<const RootSystem>& rs,
                 std::int64_t p) const {
        switch (kind) {
            case Kind::Leaf:
                return WeylSum::single(rs, leaf);
            case Kind::Tensor:
                return tensor(ctx, args[0].eval(ctx, rs, p), args[1].eval(ctx, rs, p));
            case Kind::AltPower:
                if (power >= 2 && p <= 2)
                    throw InputError("AltPower(k>=2) is only valid for p > 2");
                return alt_power(ctx, power, args[0].eval(ctx, rs, p));
        }
        throw InternalError("bad recipe node");
    }

    std::string describe(const RootSystem& rs) const {
        switch (kind) {
            case Kind::Leaf:
                return "chi" + rs.format_weight(leaf);
            case Kind::Tensor:
                return "Tensor(" + args[0].describe(rs) + ", " + args[1].describe(rs) + ")";
            case Kind::AltPower:
                return "Alt^" + std::to_string(power) + "(" + args[0].describe(rs) + ")";
        }
        return "?";
    }
};

struct PrimeCondition {
    enum class Kind { All, Eq, Neq, Gt } kind = Kind::All;
    std::int64_t value = 0;

    bool matches(std::int64_t p) const {
        switch (kind) {
            case Kind::All: return true;
            case Kind::Eq: return p == value;
            case Kind::Neq: return p != value;
            case Kind::Gt: return p > value;
        }
        return false;
    }
    std::string str() const {
        switch (kind) {
            case Kind::All: return "all p";
            case Kind::Eq: return "p=" + std::to_string(value);
            case Kind::Neq: return "p!=" + std::to_string(value);
            case Kind::Gt: return "p>" + std::to_string(value);
        }
        return "?";
    }
};

enum class StrategyKind {
    IrreducibleLayers,
    SocleProduct,
    Aux,
    StarSymmetry,
    AdjointSpecial,  // the E6/C4 adjoint-weight argument
};

struct StrategyRow {
    Coords weight;
    PrimeCondition cond;
    StrategyKind kind = StrategyKind::Aux;
    Recipe recipe;   // Aux
    Coords star_of;  // StarSymmetry
};

struct PairStrategy {
    std::string pair_name;
    std::int64_t min_p = 3;
    bool three_pieces = false;
    std::vector<Coords> sigma_patterns;  // sigma_i = (p-1) * pattern_i
    std::vector<std::int64_t> external_primes;  // condition-3 external certificate
    std::vector<StrategyRow> rows;
    std::vector<Coords> slow_weights;  // rows omitted under --skip-slow
};

namespace detail {

inline Coords fw(int rank, int i) {
    Coords c(static_cast<std::size_t>(rank), 0);
    c[i - 1] = 1;
    return c;
}

inline StrategyRow row_layers(int rank, int i) {
    return {fw(rank, i), {}, StrategyKind::IrreducibleLayers, {}, {}};
}
inline StrategyRow row_socle(int rank, int i) {
    return {fw(rank, i), {}, StrategyKind::SocleProduct, {}, {}};
}
inline StrategyRow row_alt(int rank, int i, std::uint32_t k, int j, PrimeCondition c = {}) {
    return {fw(rank, i), c, StrategyKind::Aux,
            Recipe::alt_of(k, Recipe::leaf_of(fw(rank, j))), {}};
}
inline StrategyRow row_tensor(int rank, int i, int j1, int j2, PrimeCondition c = {}) {
    return {fw(rank, i), c, StrategyKind::Aux,
            Recipe::tensor_of(Recipe::leaf_of(fw(rank, j1)), Recipe::leaf_of(fw(rank, j2))), {}};
}
inline StrategyRow row_star(int rank, int i, int of) {
    return {fw(rank, i), {}, StrategyKind::StarSymmetry, {}, fw(rank, of)};
}

inline PrimeCondition eq(std::int64_t p) { return {PrimeCondition::Kind::Eq, p}; }
inline PrimeCondition neq(std::int64_t p) { return {PrimeCondition::Kind::Neq, p}; }
inline PrimeCondition gt(std::int64_t p) { return {PrimeCondition::Kind::Gt, p}; }

}  // namespace detail

// The shipped per-pair strategy tables. Row order is a linear extension of
// the dominance order on the fundamental weights, so each row may rely on
// everything strictly below it.
inline const PairStrategy& strategy_table(const std::string& pair_name) {
    using namespace detail;
    static const std::map<std::string, PairStrategy> tables = [] {
        std::map<std::string, PairStrategy> t;
        {
            PairStrategy s;
            s.pair_name = "E6/F4";
            s.min_p = 2;
            s.three_pieces = true;
            s.sigma_patterns = {Coords{1, 0, 1, 0, 0, 0}, Coords{0, 1, 0, 1, 0, 0},
                                Coords{0, 0, 0, 0, 1, 1}};
            s.external_primes = {3};
            t.emplace(s.pair_name, s);
        }
        auto e8_common = [&](PairStrategy& s) {
            s.rows.push_back(row_alt(8, 7, 2, 8));
            s.rows.push_back(row_tensor(8, 2, 1, 8));
            s.rows.push_back(row_tensor(8, 6, 1, 1, eq(3)));
            s.rows.push_back(row_alt(8, 6, 3, 8, gt(3)));
            s.rows.push_back(row_alt(8, 3, 2, 1));
            s.rows.push_back(row_tensor(8, 5, 1, 2, eq(3)));
            s.rows.push_back(row_alt(8, 5, 4, 8, gt(3)));
            s.rows.push_back(row_alt(8, 4, 2, 2));
            s.slow_weights = {fw(8, 4), fw(8, 5), fw(8, 6)};
        };
        {
            PairStrategy s;
            s.pair_name = "E8/D8";
            s.rows.push_back(row_layers(8, 8));
            s.rows.push_back(row_layers(8, 1));
            e8_common(s);
            t.emplace(s.pair_name, s);
        }
        {
            PairStrategy s;
            s.pair_name = "E8/E7A1";
            s.rows.push_back(row_layers(8, 8));
            s.rows.push_back(row_socle(8, 1));
            e8_common(s);
            t.emplace(s.pair_name, s);
        }
        {
            PairStrategy s;
            s.pair_name = "E7/A7";
            s.rows.push_back(row_layers(7, 7));
            s.rows.push_back(row_layers(7, 1));
            s.rows.push_back(row_alt(7, 6, 2, 7));
            s.rows.push_back({fw(7, 2), eq(7), StrategyKind::IrreducibleLayers, {}, {}});
            s.rows.push_back(row_tensor(7, 2, 1, 7, neq(7)));
            s.rows.push_back(row_alt(7, 3, 2, 1));
            s.rows.push_back(row_tensor(7, 5, 1, 2, eq(3)));
            s.rows.push_back(row_alt(7, 5, 3, 7, neq(3)));
            s.rows.push_back(row_alt(7, 4, 2, 2));
            t.emplace(s.pair_name, s);
        }
        {
            PairStrategy s;
            s.pair_name = "E7/D6A1";
            s.rows.push_back(row_socle(7, 7));
            s.rows.push_back(row_socle(7, 1));
            s.rows.push_back(row_alt(7, 6, 2, 7));
            s.rows.push_back(row_socle(7, 2));
            s.rows.push_back(row_alt(7, 3, 2, 1));
            s.rows.push_back(row_tensor(7, 5, 1, 2, eq(3)));
            s.rows.push_back(row_alt(7, 5, 3, 7, neq(3)));
            s.rows.push_back(row_alt(7, 4, 2, 2));
            t.emplace(s.pair_name, s);
        }
        auto e6_tail = [&](PairStrategy& s) {
            s.rows.push_back(row_star(6, 6, 1));
            s.rows.push_back(row_alt(6, 3, 2, 1));
            s.rows.push_back(row_star(6, 5, 3));
            s.rows.push_back(row_alt(6, 4, 2, 2));
        };
        {
            PairStrategy s;
            s.pair_name = "E6/A5A1";
            s.rows.push_back(row_socle(6, 1));
            s.rows.push_back(row_socle(6, 2));
            e6_tail(s);
            t.emplace(s.pair_name, s);
        }
        {
            PairStrategy s;
            s.pair_name = "E6/C4";
            s.rows.push_back(row_layers(6, 1));
            s.rows.push_back({fw(6, 2), {}, StrategyKind::AdjointSpecial, {}, {}});
            e6_tail(s);
            t.emplace(s.pair_name, s);
        }
        {
            PairStrategy s;
            s.pair_name = "F4/B4";
            s.rows.push_back(row_layers(4, 4));
            s.rows.push_back(row_layers(4, 1));
            s.rows.push_back(row_alt(4, 3, 2, 4));
            s.rows.push_back(row_alt(4, 2, 2, 1));
            t.emplace(s.pair_name, s);
        }
        {
            PairStrategy s;
            s.pair_name = "F4/C3A1";
            s.rows.push_back(row_socle(4, 4));
            s.rows.push_back(row_socle(4, 1));
            s.rows.push_back(row_alt(4, 3, 2, 4));
            s.rows.push_back(row_alt(4, 2, 2, 1));
            t.emplace(s.pair_name, s);
        }
        return t;
    }();
    auto it = tables.find(pair_name);
    if (it == tables.end()) throw InputError("no shipped strategy table for pair '" + pair_name + "'");
    return it->second;
}

inline std::vector<std::string> shipped_pairs() {
    return {"E6/F4",  "E6/A5A1", "E6/C4",   "E7/A7", "E7/D6A1",
            "E8/D8",  "E8/E7A1", "F4/B4",   "F4/C3A1"};
}

}  // namespace donkin
