#pragma once

#include "donkin/embedding.hpp"
#include "donkin/strategy.hpp"

#include <chrono>
#include <set>

namespace donkin {

struct PairCase {
    Embedding embedding;
    std::int64_t p = 3;

    PairCase(Embedding e, Prime prime) : embedding(std::move(e)), p(prime.p) {}
    const std::shared_ptr<const RootSystem>& G() const { return embedding.source; }
    const std::shared_ptr<const RootSystem>& H() const { return embedding.target; }
};

enum class StepStatus { Certified, CertifiedWithExternal, Failed, Skipped };

inline const char* step_status_name(StepStatus s) {
    switch (s) {
        case StepStatus::Certified: return "Certified";
        case StepStatus::CertifiedWithExternal: return "CertifiedWithExternal";
        case StepStatus::Failed: return "Failed";
        case StepStatus::Skipped: return "Skipped";
    }
    return "?";
}

struct CertStep {
    Coords weight;  // empty for the pair-level Steinberg-factor step
    std::string label;
    std::string strategy;
    StepStatus status = StepStatus::Failed;
    std::vector<std::string> evidence;
    std::vector<std::string> depends_on;

    bool ok() const {
        return status == StepStatus::Certified || status == StepStatus::CertifiedWithExternal;
    }
};

// The certified set S, keyed by weight. Zero is in S from the start.
struct CertSet {
    const RootSystem* G = nullptr;
    std::map<Coords, StepStatus> entries;

    bool contains(const Coords& w) const {
        if (std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x == 0; })) return true;
        return entries.count(w) > 0;
    }
    void insert(const Coords& w, StepStatus s) { entries.emplace(w, s); }
};

struct Report {
    std::string pair;
    std::int64_t p = 0;
    std::vector<CertStep> steps;
    std::string general_induction;
    std::string status;  // Certified / CertifiedWithExternal / Incomplete / Failed
    double elapsed_ms = 0.0;
    std::size_t cache_entries = 0;

    bool ok() const { return status != "Failed"; }
};

// ---------------------------------------------------------------------------

// Weyl-character support of an auxiliary module: the recipe's character
// decomposition, every coefficient of which must be nonnegative.
inline WeylSum supp_nabla(const CalcContext& ctx, const std::shared_ptr<const RootSystem>& rs,
                          const Recipe& recipe, std::int64_t p) {
    WeylSum s = recipe.eval(ctx, rs, p);
    for (const auto& [w, c] : s.entries())
        if (c < 0)
            throw InternalError("auxiliary-module character has negative coefficient at " +
                                rs->format_weight(w));
    return s;
}

namespace detail {

inline bool is_fundamental(const Coords& w) {
    int ones = 0;
    for (auto x : w) {
        if (x == 1) ++ones;
        else if (x != 0) return false;
    }
    return ones == 1;
}

// A weight counts as available for the induction when it is certified
// outright, or it is non-fundamental and every fundamental weight below it
// (cone order) is certified: the strong induction then supplies it through
// the generic tensor-product argument.
inline bool inductively_covered(const RootSystem& G, const Coords& mu, const CertSet& S,
                                std::string& how) {
    if (S.contains(mu)) {
        how = "certified";
        return true;
    }
    if (is_fundamental(mu)) return false;
    for (int i = 0; i < G.rank(); ++i) {
        Coords f(static_cast<std::size_t>(G.rank()), 0);
        f[i] = 1;
        if (G.dominance_leq(f, mu) && !S.contains(f)) return false;
    }
    how = "non-fundamental; every fundamental weight below it is certified";
    return true;
}

}  // namespace detail

// The auxiliary-module test: every other constituent of the recipe is either
// strictly smaller and inductively available, or in a different W_p orbit.
inline CertStep verify_aux(const CalcContext& ctx, const PairCase& pc, const Coords& lam,
                           const Recipe& recipe, const CertSet& S) {
    const auto& G = pc.G();
    CertStep step;
    step.weight = lam;
    step.label = G->format_weight(lam);
    step.strategy = "aux-module " + recipe.describe(*G);
    std::vector<Coords> leaves;
    recipe.collect_leaves(leaves);
    for (const auto& leaf : leaves) {
        if (!S.contains(leaf)) {
            step.status = StepStatus::Failed;
            step.evidence.push_back("recipe leaf " + G->format_weight(leaf) +
                                    " is not yet certified");
            return step;
        }
        step.depends_on.push_back(G->format_weight(leaf));
    }
    WeylSum supp;
    try {
        supp = supp_nabla(ctx, G, recipe, pc.p);
    } catch (const std::exception& ex) {
        step.status = StepStatus::Failed;
        step.evidence.push_back(ex.what());
        return step;
    }
    if (supp.at(lam) == 0) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("target weight does not occur in the auxiliary module");
        return step;
    }
    step.evidence.push_back("supp of " + recipe.describe(*G) + " has " +
                            std::to_string(supp.size()) + " constituents; target coefficient " +
                            supp.at(lam).str());
    for (const auto& [mu, c] : supp.sorted_entries()) {
        if (mu == lam) continue;
        std::string how;
        if (G->dominance_lt(mu, lam) && detail::inductively_covered(*G, mu, S, how)) {
            step.evidence.push_back(G->format_weight(mu) + " < target and " + how);
            continue;
        }
        if (!linked(*G, pc.p, mu, lam)) {
            step.evidence.push_back(G->format_weight(mu) +
                                    " lies in a different affine Weyl orbit");
            continue;
        }
        step.status = StepStatus::Failed;
        step.evidence.push_back("constituent " + G->format_weight(mu) +
                                " is linked to the target and not inductively available");
        return step;
    }
    step.status = StepStatus::Certified;
    return step;
}

// Restriction decomposes with nonnegative coefficients and every layer is a
// certified-irreducible dual Weyl module for H.
inline CertStep verify_irreducible_layers(const CalcContext& ctx, const PairCase& pc,
                                          const Coords& lam) {
    const auto& G = pc.G();
    const auto& H = pc.H();
    CertStep step;
    step.weight = lam;
    step.label = G->format_weight(lam);
    step.strategy = "irreducible-layers";
    WeylSum b;
    try {
        b = branch(ctx, pc.embedding, lam);
    } catch (const std::exception& ex) {
        step.status = StepStatus::Failed;
        step.evidence.push_back(ex.what());
        return step;
    }
    BigInt total = 0;
    for (const auto& [mu, c] : b.sorted_entries()) {
        IrredVerdict v = nabla_irreducible(*H, pc.p, mu);
        BigInt d = weyl_dim(*H, mu);
        total += c * d;
        if (!v.yes) {
            step.status = StepStatus::Failed;
            step.evidence.push_back("layer " + H->format_weight(mu) + " (dim " + d.str() +
                                    "): " + v.reason);
            return step;
        }
        step.evidence.push_back("layer " + H->format_weight(mu) + " x" + c.str() + " (dim " +
                                d.str() + ") irreducible: " + v.reason);
    }
    BigInt src_dim = weyl_dim(*G, lam);
    if (total != src_dim) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("dimension bookkeeping failed: " + total.str() + " vs " +
                                src_dim.str());
        return step;
    }
    step.evidence.push_back("dimension bookkeeping: " + src_dim.str());
    step.status = StepStatus::Certified;
    return step;
}

// The socle argument for H = K x F with K a Levi factor of G and F of type
// A1: each K-weight pairs with a single irreducible F-character.
inline CertStep verify_socle_product(const CalcContext& ctx, const PairCase& pc,
                                     const Coords& lam) {
    const auto& G = pc.G();
    const auto& H = pc.H();
    CertStep step;
    step.weight = lam;
    step.label = G->format_weight(lam);
    step.strategy = "socle-product";
    if (H->num_components() != 2 || !(H->spec().components[1] == SimpleType{'A', 1})) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("socle strategy needs H = K x A1");
        return step;
    }
    // The K factor must be generated by simple roots of G, i.e. a standard
    // Levi subgroup, for the Levi-pair input to the argument.
    if (pc.embedding.provenance != Provenance::SubsystemRoots) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("socle strategy needs subsystem-roots provenance");
        return step;
    }
    const int k_rank = H->component_span(0).second;
    for (int i = 0; i < k_rank; ++i) {
        const Coords& rc = pc.embedding.subsystem_roots[i];
        std::int64_t sum = 0, nonneg = 1;
        for (auto x : rc) {
            sum += x;
            if (x < 0) nonneg = 0;
        }
        if (!nonneg || sum != 1) {
            step.status = StepStatus::Failed;
            step.evidence.push_back("K factor is not a standard Levi subgroup");
            return step;
        }
    }
    step.evidence.push_back("K = " + H->component_system(0)->spec().to_string() +
                            " is a standard Levi subgroup of G; (G, K) is a Donkin pair");
    WeylSum b;
    try {
        b = branch(ctx, pc.embedding, lam);
    } catch (const std::exception& ex) {
        step.status = StepStatus::Failed;
        step.evidence.push_back(ex.what());
        return step;
    }
    auto F = H->component_system(1);
    std::map<Coords, std::vector<std::pair<Coords, BigInt>>> by_k;
    for (const auto& [mu, c] : b.sorted_entries())
        by_k[H->component_slice(mu, 0)].push_back({H->component_slice(mu, 1), c});
    for (const auto& [k_wt, f_parts] : by_k) {
        if (f_parts.size() != 1 || f_parts[0].second != 1) {
            step.status = StepStatus::Failed;
            step.evidence.push_back("K-weight " + H->component_system(0)->format_weight(k_wt) +
                                    " pairs with more than one F-character; manual review needed");
            return step;
        }
        const Coords& f_wt = f_parts[0].first;
        IrredVerdict v = nabla_irreducible(*F, pc.p, f_wt);
        if (!v.yes) {
            step.status = StepStatus::Failed;
            step.evidence.push_back("F-character " + F->format_weight(f_wt) +
                                    " not certified irreducible");
            return step;
        }
        step.evidence.push_back("layer (" + H->component_system(0)->format_weight(k_wt) + ", " +
                                F->format_weight(f_wt) + "): unique F-character, irreducible (" +
                                v.reason + ")");
    }
    step.status = StepStatus::Certified;
    return step;
}

// Symmetry transfer: lam = mu* with mu already certified; the outer
// automorphism commutes with the defining involution of H.
inline CertStep verify_star_symmetry(const PairCase& pc, const Coords& lam, const Coords& of,
                                     const CertSet& S) {
    const auto& G = pc.G();
    CertStep step;
    step.weight = lam;
    step.label = G->format_weight(lam);
    step.strategy = "star-symmetry of " + G->format_weight(of);
    if (G->star(of) != lam) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("star(" + G->format_weight(of) + ") != " + G->format_weight(lam));
        return step;
    }
    if (!S.contains(of)) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("source weight not certified");
        return step;
    }
    step.depends_on.push_back(G->format_weight(of));
    step.evidence.push_back("target equals -w0 of a certified weight; the graph symmetry "
                            "preserves the pair");
    step.status = StepStatus::Certified;
    return step;
}

// Character-level facts for the restricted adjoint module of the E6/C4 pair;
// the no-invariant claim is an external input, so the step never upgrades
// past CertifiedWithExternal.
inline CertStep verify_e6c4_omega2(const CalcContext& ctx, const PairCase& pc) {
    const auto& G = pc.G();
    const auto& H = pc.H();
    Coords lam(static_cast<std::size_t>(G->rank()), 0);
    lam[1] = 1;  // the adjoint weight
    CertStep step;
    step.weight = lam;
    step.label = G->format_weight(lam);
    step.strategy = "adjoint-special";
    auto fail = [&](const std::string& msg) {
        step.status = StepStatus::Failed;
        step.evidence.push_back(msg);
        return step;
    };
    auto adj = freudenthal(ctx, G, lam);
    auto res = restrict_character(ctx, pc.embedding, *adj);
    Coords zero(static_cast<std::size_t>(H->rank()), 0);
    if (res.at(zero) != 6) return fail("restricted adjoint zero-weight multiplicity is not 6");
    step.evidence.push_back("restricted adjoint has zero-weight multiplicity 6");
    WeylSum b;
    try {
        b = branch(ctx, pc.embedding, lam);
    } catch (const std::exception& ex) {
        return fail(ex.what());
    }
    Coords two_w1(static_cast<std::size_t>(H->rank()), 0);
    two_w1[0] = 2;
    Coords w4(static_cast<std::size_t>(H->rank()), 0);
    w4[3] = 1;
    if (b.at(two_w1) < 1) return fail("branch does not contain the H-adjoint 2w1");
    if (!(b.size() == 2 && b.at(two_w1) == 1 && b.at(w4) == 1))
        return fail("branch is not 2w1 + w4: " + serialize_lines(b));
    step.evidence.push_back("branch = chi(2w1) + chi(w4), dimensions 36 + 42 = 78");
    IrredVerdict sub = nabla_irreducible(*H, pc.p, two_w1);
    if (!sub.yes) return fail("H-adjoint submodule not certified irreducible");
    step.evidence.push_back("submodule chi(2w1) irreducible: " + sub.reason);
    if (pc.p == 3) {
        WeylSum j = jantzen_sum(*H, 3, w4);
        WeylSum expected_j(H);
        expected_j.add(zero, 1);
        if (!(j == expected_j))
            return fail("p=3 sum formula for the quotient is not a single trivial character");
        step.evidence.push_back(
            "p=3: sum formula for the quotient weight is a single trivial character, so the "
            "quotient has two composition factors of dimensions 41 and 1 (78 - 36 - 1 = 41)");
    } else {
        IrredVerdict q = nabla_irreducible(*H, pc.p, w4);
        if (!q.yes) return fail("quotient chi(w4) not certified irreducible");
        step.evidence.push_back("quotient chi(w4) irreducible: " + q.reason);
    }
    step.evidence.push_back(
        "external input: the zero-weight space of the restricted adjoint contains no nonzero "
        "H-invariant (a Lie-algebra computation outside this tool); with vanishing extensions "
        "between the listed layers this yields the good filtration");
    step.status = StepStatus::CertifiedWithExternal;
    return step;
}

// The Steinberg-factorization test: three dominant pieces summing to the
// Steinberg weight, middle sums restricting to the H-Steinberg weight, and a
// surjectivity certificate for the first piece.
inline CertStep verify_three_pieces(const PairCase& pc, const std::vector<Coords>& sigma,
                                    bool allow_external) {
    const auto& G = pc.G();
    const auto& H = pc.H();
    CertStep step;
    step.label = "sigma-triple";
    step.strategy = "steinberg-three-pieces";
    if (sigma.size() != 3) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("need exactly three pieces");
        return step;
    }
    step.weight = sigma[0];
    for (const auto& s : sigma)
        if (!G->is_dominant(s)) {
            step.status = StepStatus::Failed;
            step.evidence.push_back("piece " + G->format_weight(s) + " is not dominant");
            return step;
        }
    // (1) sigma_1 + sigma_2 + sigma_3 = (p-1) rho_G
    Coords total(static_cast<std::size_t>(G->rank()), 0);
    for (const auto& s : sigma)
        for (int j = 0; j < G->rank(); ++j) total[j] += s[j];
    Coords st(static_cast<std::size_t>(G->rank()), pc.p - 1);
    if (total != st) {
        step.status = StepStatus::Failed;
        step.evidence.push_back("(1) fails: pieces sum to " + G->format_weight(total) +
                                ", not the Steinberg weight " + G->format_weight(st));
        return step;
    }
    step.evidence.push_back("(1) pieces sum to the Steinberg weight " + G->format_weight(st));
    // (2) both middle sums restrict to (p-1) rho_H
    Coords st_h(static_cast<std::size_t>(H->rank()), pc.p - 1);
    for (int pair = 0; pair < 2; ++pair) {
        Coords mid(static_cast<std::size_t>(G->rank()), 0);
        for (int j = 0; j < G->rank(); ++j) mid[j] = sigma[pair][j] + sigma[pair + 1][j];
        Coords res = pc.embedding.restrict_weight(mid);
        if (res != st_h) {
            step.status = StepStatus::Failed;
            step.evidence.push_back("(2) fails: sigma_" + std::to_string(pair + 1) + "+sigma_" +
                                    std::to_string(pair + 2) + " restricts to " +
                                    H->format_weight(res) + ", not " + H->format_weight(st_h));
            return step;
        }
    }
    step.evidence.push_back("(2) both middle sums restrict to the H-Steinberg weight " +
                            H->format_weight(st_h));
    // (3) surjectivity onto the restricted dual Weyl module for sigma_1.
    Coords res1 = pc.embedding.restrict_weight(sigma[0]);
    IrredVerdict direct = nabla_irreducible(*H, pc.p, res1);
    if (direct.yes) {
        step.evidence.push_back("(3) restricted first-piece module " + H->format_weight(res1) +
                                " is irreducible (" + direct.reason +
                                "), so the natural map onto it is surjective");
        step.status = StepStatus::Certified;
        return step;
    }
    // Surjectivity for a sum of fundamental weights follows from surjectivity
    // for each fundamental factor via cup products; those hold when the
    // restricted fundamental modules are irreducible.
    bool fundamentals_ok = true;
    std::vector<std::string> notes;
    for (int i = 0; i < G->rank() && fundamentals_ok; ++i) {
        if (sigma[0][i] == 0) continue;
        Coords f(static_cast<std::size_t>(G->rank()), 0);
        f[i] = 1;
        Coords rf = pc.embedding.restrict_weight(f);
        IrredVerdict v = nabla_irreducible(*H, pc.p, rf);
        if (v.yes)
            notes.push_back("factor w" + std::to_string(i + 1) + ": restriction " +
                            H->format_weight(rf) + " irreducible (" + v.reason + ")");
        else fundamentals_ok = false;
    }
    if (fundamentals_ok) {
        step.evidence.push_back(
            "(3) surjectivity reduces to the fundamental factors of the first piece via cup "
            "products:");
        for (auto& n : notes) step.evidence.push_back("    " + n);
        step.status = StepStatus::Certified;
        return step;
    }
    if (allow_external) {
        step.evidence.push_back(
            "(3) external input: the natural map onto the restricted first-piece module is "
            "surjective (verified outside this tool by an explicit weight-vector computation "
            "in the 27-dimensional module)");
        step.status = StepStatus::CertifiedWithExternal;
        return step;
    }
    step.status = StepStatus::Failed;
    step.evidence.push_back("(3) no surjectivity certificate available");
    return step;
}

// Short-node obstruction to the three-pieces test for a folding: every
// H-coordinate of the restricted rho_G must be at most 2 for pieces to exist.
struct ThreePiecesObstruction {
    bool possible = true;
    int node = 0;               // 1-based H node violating the bound
    std::int64_t coefficient = 0;
};

inline ThreePiecesObstruction three_pieces_obstruction(const Embedding& e) {
    ThreePiecesObstruction out;
    Coords rho_g(static_cast<std::size_t>(e.source->rank()), 1);
    Coords res = e.restrict_weight(rho_g);
    for (int i = 0; i < e.target->rank(); ++i) {
        if (res[i] > 2) {
            out.possible = false;
            out.node = i + 1;
            out.coefficient = res[i];
            return out;
        }
    }
    return out;
}

struct RunOptions {
    bool skip_slow = false;
};

// Mechanizes the induction over dominant weights for one (pair, p) case:
// processes the fundamental weights in the table's dominance-compatible
// order, each with its designated strategy, then appends the generic
// non-fundamental note.
inline Report run_pair(const CalcContext& ctx, const PairCase& pc, const PairStrategy& table,
                       const RunOptions& opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    const auto& G = pc.G();
    Report rep;
    rep.pair = table.pair_name;
    rep.p = pc.p;
    if (pc.p < table.min_p)
        throw InputError("pair " + table.pair_name + " is only certified for p >= " +
                         std::to_string(table.min_p));

    if (table.three_pieces) {
        std::vector<Coords> sigma;
        for (const auto& pat : table.sigma_patterns) {
            Coords s(pat);
            for (auto& x : s) x *= (pc.p - 1);
            sigma.push_back(s);
        }
        bool ext = std::count(table.external_primes.begin(), table.external_primes.end(), pc.p) > 0;
        CertStep step = verify_three_pieces(pc, sigma, ext);
        rep.steps.push_back(step);
        rep.general_induction =
            "the three-pieces criterion certifies the pair for every dominant weight at once";
        rep.status = !step.ok()                                   ? "Failed"
                     : step.status == StepStatus::CertifiedWithExternal ? "CertifiedWithExternal"
                                                                        : "Certified";
        rep.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        rep.cache_entries = ctx.memo_size();
        return rep;
    }

    // The table must be a linear extension of the dominance order.
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (std::size_t j = i + 1; j < table.rows.size(); ++j)
            if (G->dominance_lt(table.rows[j].weight, table.rows[i].weight))
                throw InternalError("strategy table for " + table.pair_name +
                                    " is not dominance-compatible");

    CertSet S;
    S.G = G.get();
    bool any_external = false, any_skipped = false, failed = false;
    std::set<Coords> done;
    for (const auto& row : table.rows) {
        if (failed) break;
        if (!row.cond.matches(pc.p)) continue;
        if (done.count(row.weight)) continue;
        done.insert(row.weight);
        if (opts.skip_slow &&
            std::count(table.slow_weights.begin(), table.slow_weights.end(), row.weight)) {
            CertStep step;
            step.weight = row.weight;
            step.label = G->format_weight(row.weight);
            step.strategy = "(skipped: slow tier)";
            step.status = StepStatus::Skipped;
            rep.steps.push_back(step);
            any_skipped = true;
            continue;
        }
        CertStep step;
        switch (row.kind) {
            case StrategyKind::IrreducibleLayers:
                step = verify_irreducible_layers(ctx, pc, row.weight);
                break;
            case StrategyKind::SocleProduct:
                step = verify_socle_product(ctx, pc, row.weight);
                break;
            case StrategyKind::Aux:
                step = verify_aux(ctx, pc, row.weight, row.recipe, S);
                break;
            case StrategyKind::StarSymmetry:
                step = verify_star_symmetry(pc, row.weight, row.star_of, S);
                break;
            case StrategyKind::AdjointSpecial:
                step = verify_e6c4_omega2(ctx, pc);
                break;
        }
        if (row.cond.kind != PrimeCondition::Kind::All)
            step.strategy += " [" + row.cond.str() + "]";
        if (step.status == StepStatus::CertifiedWithExternal) any_external = true;
        if (step.ok()) S.insert(row.weight, step.status);
        else failed = true;
        rep.steps.push_back(std::move(step));
    }
    rep.general_induction =
        "non-fundamental dominant weights follow by induction: for lam = lam1 + lam2 the tensor "
        "product of the two smaller dual Weyl modules contains chi(lam) exactly once and every "
        "other constituent is strictly smaller";
    rep.status = failed        ? "Failed"
                 : any_skipped ? "Incomplete"
                 : any_external ? "CertifiedWithExternal"
                                : "Certified";
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.cache_entries = ctx.memo_size();
    return rep;
}

inline Report run_pair(const CalcContext& ctx, const PairCase& pc, const RunOptions& opts = {}) {
    return run_pair(ctx, pc, strategy_table(pc.embedding.name), opts);
}

}  // namespace donkin
