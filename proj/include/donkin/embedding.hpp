#pragma once

#include "donkin/tensor_ops.hpp"

#include <sstream>

namespace donkin {

enum class Provenance { SubsystemRoots, FoldingTable, Composite };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::SubsystemRoots: return "subsystem-roots";
        case Provenance::FoldingTable: return "folding-table";
        case Provenance::Composite: return "composite";
    }
    return "?";
}

// A weight-lattice restriction map X(T) -> X(T cap H). The matrix sends
// source fundamental-weight coordinates to target ones.
struct Embedding {
    std::string name;
    std::shared_ptr<const RootSystem> source;
    std::shared_ptr<const RootSystem> target;
    std::vector<Coords> matrix;  // target_rank rows of length source_rank
    Provenance provenance = Provenance::FoldingTable;
    std::vector<Coords> subsystem_roots;  // simple-root coords in source, if applicable

    Coords restrict_weight(const Coords& lam) const {
        if (static_cast<int>(lam.size()) != source->rank())
            throw InputError("weight rank does not match the embedding source");
        Coords out(static_cast<std::size_t>(target->rank()), 0);
        for (int i = 0; i < target->rank(); ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < source->rank(); ++j) s += matrix[i][j] * lam[j];
            out[i] = s;
        }
        return out;
    }
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};
struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const ValidationCheck& c) { return c.passed; });
    }
    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return c.name + ": " + c.detail;
        return "";
    }
};

// Maps every weight of `ch` through the embedding and re-compresses to
// dominant target keys. The restricted multiset is W(H)-invariant for a
// genuine embedding, so the compressed entry at a dominant target weight is
// the multiplicity of that exact weight; total dimension is preserved.
inline DominantCharacter restrict_character(const CalcContext& ctx, const Embedding& e,
                                            const DominantCharacter& ch) {
    detail::CoeffMap acc;
    const int tr = e.target->rank();
    for (const auto& [mu, m] : ch.entries()) {
        e.source->weyl_orbit(mu, ctx.orbit_cap(), [&](const Coords& w) {
            Coords img(static_cast<std::size_t>(tr), 0);
            bool dominant = true;
            for (int i = 0; i < tr; ++i) {
                std::int64_t s = 0;
                for (int j = 0; j < e.source->rank(); ++j) s += e.matrix[i][j] * w[j];
                if (s < 0) dominant = false;
                img[i] = s;
            }
            if (dominant) detail::coeff_add(acc, img, m);
        });
    }
    DominantCharacter out(e.target, ch.is_virtual());
    for (const auto& [w, m] : acc) out.add(w, m);
    return out;
}

// Weyl-character decomposition of the restricted dual Weyl module; genuine
// modules must branch with nonnegative coefficients.
inline WeylSum branch(const CalcContext& ctx, const Embedding& e, const Coords& lam) {
    if (!e.source->is_dominant(lam)) throw InputError("branch requires a dominant weight");
    auto ch = freudenthal(ctx, e.source, lam);
    WeylSum dec = decompose(ctx, restrict_character(ctx, e, *ch));
    for (const auto& [w, c] : dec.entries())
        if (c < 0)
            throw VerificationError("branch of " + e.source->format_weight(lam) + " along " +
                                    e.name + " has negative coefficient at " +
                                    e.target->format_weight(w) + ": embedding falsified");
    return dec;
}

namespace detail {

inline BigRat rank_of_matrix(const std::vector<Coords>& rows, int cols) {
    std::vector<std::vector<BigRat>> m;
    for (const auto& r : rows) {
        std::vector<BigRat> row;
        for (int j = 0; j < cols; ++j) row.emplace_back(r[j]);
        m.push_back(std::move(row));
    }
    int rank = 0;
    int col = 0;
    for (std::size_t row = 0; row < m.size() && col < cols; ++col) {
        std::size_t piv = row;
        while (piv < m.size() && m[piv][col] == BigRat(0)) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t r2 = 0; r2 < m.size(); ++r2) {
            if (r2 == row || m[r2][col] == BigRat(0)) continue;
            BigRat f = m[r2][col] / m[row][col];
            for (int j = col; j < cols; ++j) m[r2][j] -= f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return BigRat(rank);
}

// Coroot pairing functional of an arbitrary root given by simple-root coords.
inline Coords coroot_functional(const RootSystem& rs, const Coords& root_coords) {
    const int n = rs.rank();
    Coords fund(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fund[j] += root_coords[i] * rs.cartan_row(i)[j];
    std::int64_t nbb = rs.gram_num(fund, fund);
    if (nbb == 0) throw InputError("zero vector is not a root");
    // <fw_j, beta^vee> = 2 * gram_den*(fw_j, beta) / (gram_den*(beta,beta))
    Coords out(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        Coords ej(static_cast<std::size_t>(n), 0);
        ej[j] = 1;
        std::int64_t num = 2 * rs.gram_num(ej, fund);
        if (num % nbb != 0) throw InputError("vector is not a root of the source system");
        out[j] = num / nbb;
    }
    return out;
}

}  // namespace detail

// Builds the restriction matrix of a maximal-rank subgroup from an explicit
// list of source roots serving as H-simple roots: row j = <., beta_j^vee>.
inline Embedding subsystem_embedding(const std::string& name,
                                     std::shared_ptr<const RootSystem> src,
                                     std::shared_ptr<const RootSystem> tgt,
                                     std::vector<Coords> roots_in_simple_basis) {
    Embedding e;
    e.name = name;
    e.source = std::move(src);
    e.target = std::move(tgt);
    e.provenance = Provenance::SubsystemRoots;
    e.subsystem_roots = std::move(roots_in_simple_basis);
    if (static_cast<int>(e.subsystem_roots.size()) != e.target->rank())
        throw InputError("embedding " + name + ": need " + std::to_string(e.target->rank()) +
                         " subsystem roots");
    for (const auto& rc : e.subsystem_roots)
        e.matrix.push_back(detail::coroot_functional(*e.source, rc));
    return e;
}

inline Embedding folding_embedding(const std::string& name,
                                   std::shared_ptr<const RootSystem> src,
                                   std::shared_ptr<const RootSystem> tgt,
                                   std::vector<Coords> fw_images) {
    Embedding e;
    e.name = name;
    e.source = std::move(src);
    e.target = std::move(tgt);
    e.provenance = Provenance::FoldingTable;
    if (static_cast<int>(fw_images.size()) != e.source->rank())
        throw InputError("embedding " + name + ": need one image per source fundamental weight");
    e.matrix.assign(static_cast<std::size_t>(e.target->rank()),
                    Coords(static_cast<std::size_t>(e.source->rank()), 0));
    for (int j = 0; j < e.source->rank(); ++j) {
        if (static_cast<int>(fw_images[j].size()) != e.target->rank())
            throw InputError("embedding " + name + ": image rank mismatch");
        for (int i = 0; i < e.target->rank(); ++i) e.matrix[i][j] = fw_images[j][i];
    }
    return e;
}

// Runs every structural invariant: full row rank, Cartan-matrix reproduction
// for subsystem provenance, and adjoint-branching dimension conservation.
inline ValidationReport validate_embedding(const CalcContext& ctx, const Embedding& e) {
    ValidationReport rep;
    {
        ValidationCheck c{"row-rank", false, ""};
        BigRat r = detail::rank_of_matrix(e.matrix, e.source->rank());
        c.passed = (r == BigRat(e.target->rank()));
        if (!c.passed) c.detail = "matrix rank below target rank";
        rep.checks.push_back(c);
    }
    if (e.provenance == Provenance::SubsystemRoots) {
        ValidationCheck c{"cartan-reproduction", true, ""};
        const int n = e.target->rank();
        for (int i = 0; i < n && c.passed; ++i) {
            Coords fund_i(static_cast<std::size_t>(e.source->rank()), 0);
            for (int a = 0; a < e.source->rank(); ++a)
                for (int b = 0; b < e.source->rank(); ++b)
                    fund_i[b] += e.subsystem_roots[i][a] * e.source->cartan_row(a)[b];
            for (int j = 0; j < n && c.passed; ++j) {
                std::int64_t got = 0;
                for (int b = 0; b < e.source->rank(); ++b) got += e.matrix[j][b] * fund_i[b];
                if (got != e.target->cartan(i, j)) {
                    c.passed = false;
                    c.detail = "Cartan mismatch at (" + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + "): got " + std::to_string(got) +
                               ", want " + std::to_string(e.target->cartan(i, j));
                }
            }
        }
        rep.checks.push_back(c);
    }
    {
        ValidationCheck c{"adjoint-dimension-conservation", false, ""};
        try {
            DominantCharacter adj(e.source);
            for (int comp = 0; comp < e.source->num_components(); ++comp) {
                auto table = freudenthal(ctx, e.source, e.source->highest_root(comp).fund);
                for (const auto& [w, m] : table->entries()) adj.add(w, m);
            }
            BigInt src_dim = adj.dimension();
            DominantCharacter res = restrict_character(ctx, e, adj);
            BigInt tgt_dim = res.dimension();
            c.passed = (src_dim == tgt_dim);
            if (!c.passed)
                c.detail = "adjoint dimension " + src_dim.str() + " restricted to " + tgt_dim.str();
        } catch (const std::exception& ex) {
            c.detail = ex.what();
        }
        rep.checks.push_back(c);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Shipped catalog. Subsystem pairs list their H-simple roots in the source
// simple-root basis (the A1 factors use the lowest root); foldings give the
// fundamental-weight image table directly. Users can add embeddings from
// files in the same stanza format.
// ---------------------------------------------------------------------------

inline const char* builtin_embeddings_text() {
    return R"(embedding E6/F4
source E6
target F4
provenance folding-table
image [0,0,0,1]
image [1,0,0,0]
image [0,0,1,0]
image [0,1,0,0]
image [0,0,1,0]
image [0,0,0,1]
end

embedding E6/C4
source E6
target C4
provenance folding-table
image [0,1,0,0]
image [2,0,0,0]
image [1,0,1,0]
image [2,0,0,1]
image [1,0,1,0]
image [0,1,0,0]
end

embedding E6/A5A1
source E6
target A5A1
provenance subsystem-roots
root [1,0,0,0,0,0]
root [0,0,1,0,0,0]
root [0,0,0,1,0,0]
root [0,0,0,0,1,0]
root [0,0,0,0,0,1]
root [-1,-2,-2,-3,-2,-1]
end

embedding E7/A7
source E7
target A7
provenance subsystem-roots
root [-2,-2,-3,-4,-3,-2,-1]
root [1,0,0,0,0,0,0]
root [0,0,1,0,0,0,0]
root [0,0,0,1,0,0,0]
root [0,0,0,0,1,0,0]
root [0,0,0,0,0,1,0]
root [0,0,0,0,0,0,1]
end

embedding E7/D6A1
source E7
target D6A1
provenance subsystem-roots
root [0,0,0,0,0,0,1]
root [0,0,0,0,0,1,0]
root [0,0,0,0,1,0,0]
root [0,0,0,1,0,0,0]
root [0,0,1,0,0,0,0]
root [0,1,0,0,0,0,0]
root [-2,-2,-3,-4,-3,-2,-1]
end

embedding E8/D8
source E8
target D8
provenance subsystem-roots
root [-2,-3,-4,-6,-5,-4,-3,-2]
root [0,0,0,0,0,0,0,1]
root [0,0,0,0,0,0,1,0]
root [0,0,0,0,0,1,0,0]
root [0,0,0,0,1,0,0,0]
root [0,0,0,1,0,0,0,0]
root [0,0,1,0,0,0,0,0]
root [0,1,0,0,0,0,0,0]
end

embedding E8/E7A1
source E8
target E7A1
provenance subsystem-roots
root [1,0,0,0,0,0,0,0]
root [0,1,0,0,0,0,0,0]
root [0,0,1,0,0,0,0,0]
root [0,0,0,1,0,0,0,0]
root [0,0,0,0,1,0,0,0]
root [0,0,0,0,0,1,0,0]
root [0,0,0,0,0,0,1,0]
root [-2,-3,-4,-6,-5,-4,-3,-2]
end

embedding F4/B4
source F4
target B4
provenance subsystem-roots
root [-2,-3,-4,-2]
root [1,0,0,0]
root [0,1,0,0]
root [0,0,1,0]
end

embedding F4/C3A1
source F4
target C3A1
provenance subsystem-roots
root [0,0,0,1]
root [0,0,1,0]
root [0,1,0,0]
root [-2,-3,-4,-2]
end

embedding A4/B2
source A4
target B2
provenance folding-table
image [1,0]
image [0,2]
image [0,2]
image [1,0]
end
)";
}

inline std::vector<Embedding> parse_embeddings(const std::string& text) {
    std::vector<Embedding> out;
    std::istringstream in(text);
    std::string line;
    std::string name, src, tgt, prov;
    std::vector<std::string> rows;
    auto flush = [&]() {
        if (name.empty()) return;
        auto source = RootSystem::get(src);
        auto target = RootSystem::get(tgt);
        if (prov == "subsystem-roots") {
            std::vector<Coords> roots;
            for (const auto& r : rows) roots.push_back(source->parse_weight(r));
            out.push_back(subsystem_embedding(name, source, target, roots));
        } else if (prov == "folding-table") {
            std::vector<Coords> images;
            for (const auto& r : rows) images.push_back(target->parse_weight(r));
            out.push_back(folding_embedding(name, source, target, images));
        } else {
            throw InputError("embedding " + name + ": unknown provenance '" + prov + "'");
        }
        name.clear();
        src.clear();
        tgt.clear();
        prov.clear();
        rows.clear();
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "embedding") ls >> name;
        else if (word == "source") ls >> src;
        else if (word == "target") ls >> tgt;
        else if (word == "provenance") ls >> prov;
        else if (word == "image" || word == "root") {
            std::string rest;
            ls >> rest;
            rows.push_back(rest);
        } else if (word == "end") flush();
        else if (word[0] == '#') continue;
        else throw InputError("bad embedding stanza line: '" + line + "'");
    }
    flush();
    return out;
}

inline std::string serialize_embedding(const Embedding& e) {
    std::string s = "embedding " + e.name + "\nsource " + e.source->spec().to_string() +
                    "\ntarget " + e.target->spec().to_string() + "\nprovenance " +
                    provenance_name(e.provenance) + "\n";
    if (e.provenance == Provenance::SubsystemRoots) {
        for (const auto& r : e.subsystem_roots) s += "root " + e.source->format_weight(r) + "\n";
    } else {
        for (int j = 0; j < e.source->rank(); ++j) {
            Coords img(static_cast<std::size_t>(e.target->rank()), 0);
            for (int i = 0; i < e.target->rank(); ++i) img[i] = e.matrix[i][j];
            s += "image " + e.target->format_weight(img) + "\n";
        }
    }
    s += "end\n";
    return s;
}

// Commutator-of-Levi embedding for a subset of source nodes (1-based).
inline Embedding levi_embedding(const std::shared_ptr<const RootSystem>& src,
                                std::vector<int> nodes_1based) {
    std::vector<int> nodes;
    for (int v : nodes_1based) {
        if (v < 1 || v > src->rank()) throw InputError("Levi node out of range");
        nodes.push_back(v - 1);
    }
    if (nodes.empty()) throw InputError("Levi subset must be nonempty");
    auto comps = src->classify_subdiagram(nodes);
    RootSystemSpec tspec;
    std::vector<Coords> roots;
    for (const auto& c : comps) {
        tspec.components.push_back(c.type);
        for (int n : c.nodes) {
            Coords rc(static_cast<std::size_t>(src->rank()), 0);
            rc[n] = 1;
            roots.push_back(rc);
        }
    }
    std::string name = "levi:" + src->spec().to_string() + ":";
    for (std::size_t i = 0; i < nodes_1based.size(); ++i)
        name += (i ? "," : "") + std::to_string(nodes_1based[i]);
    return subsystem_embedding(name, src, RootSystem::get(tspec), roots);
}

// Diagonal copy of `spec` inside its own `copies`-fold product.
inline Embedding diagonal_embedding(const RootSystemSpec& spec, int copies) {
    if (copies < 1) throw InputError("diagonal embedding needs at least one copy");
    RootSystemSpec big;
    for (int k = 0; k < copies; ++k)
        big.components.insert(big.components.end(), spec.components.begin(),
                              spec.components.end());
    Embedding e;
    e.name = "diag:" + spec.to_string() + ":" + std::to_string(copies);
    e.source = RootSystem::get(big);
    e.target = RootSystem::get(spec);
    e.provenance = Provenance::Composite;
    const int tr = e.target->rank();
    e.matrix.assign(static_cast<std::size_t>(tr), Coords(static_cast<std::size_t>(tr * copies), 0));
    for (int k = 0; k < copies; ++k)
        for (int i = 0; i < tr; ++i) e.matrix[i][k * tr + i] = 1;
    return e;
}

// Looks up a shipped pair, or builds a parametric levi:/diag: embedding.
// Every returned embedding has passed validate_embedding.
inline Embedding catalog(const CalcContext& ctx, const std::string& pair_name) {
    static std::mutex mu;
    static std::map<std::string, Embedding> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(pair_name);
        if (it != cache.end()) return it->second;
    }
    Embedding e;
    if (pair_name.rfind("levi:", 0) == 0) {
        auto rest = pair_name.substr(5);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw InputError("levi syntax: levi:SPEC:n1,n2,...");
        auto src = RootSystem::get(rest.substr(0, colon));
        std::vector<int> nodes;
        std::istringstream ns(rest.substr(colon + 1));
        std::string tok;
        while (std::getline(ns, tok, ',')) nodes.push_back(std::stoi(tok));
        e = levi_embedding(src, nodes);
    } else if (pair_name.rfind("diag:", 0) == 0) {
        auto rest = pair_name.substr(5);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw InputError("diag syntax: diag:SPEC:copies");
        e = diagonal_embedding(RootSystemSpec::parse(rest.substr(0, colon)),
                               std::stoi(rest.substr(colon + 1)));
    } else {
        static const std::vector<Embedding>* builtins = [] {
            return new std::vector<Embedding>(parse_embeddings(builtin_embeddings_text()));
        }();
        const Embedding* found = nullptr;
        for (const auto& b : *builtins)
            if (b.name == pair_name) found = &b;
        if (!found) throw InputError("unknown pair '" + pair_name + "'");
        e = *found;
    }
    ValidationReport rep = validate_embedding(ctx, e);
    if (!rep.ok())
        throw VerificationError("embedding " + e.name + " failed validation: " +
                                rep.first_failure());
    {
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(pair_name, e);
    }
    return e;
}

}  // namespace donkin
