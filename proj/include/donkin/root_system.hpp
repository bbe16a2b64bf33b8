#pragma once

#include "donkin/numeric.hpp"
#include "donkin/type_spec.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace donkin {

class RootSystem;

// A positive root, stored both in the fundamental-weight basis and in the
// simple-root basis. `coroot` holds the pairing functional <., beta^vee>
// as integer coefficients on fundamental-weight coordinates.
struct PosRoot {
    Coords fund;
    Coords root_coords;
    Coords coroot;
    bool is_long = true;
    int component = 0;
    int height = 0;
};

struct ReduceResult {
    bool singular = false;
    int sign = 1;          // det(w) for the reducing Weyl element
    Coords dominant;       // w(mu+rho)-rho, dominant; empty when singular
};

namespace detail {

// Exact inverse and determinant of a small integer matrix.
struct RatMatrix {
    int n = 0;
    std::vector<BigRat> a;  // row-major
    BigRat& at(int i, int j) { return a[i * n + j]; }
    const BigRat& at(int i, int j) const { return a[i * n + j]; }
};

inline void invert_exact(const std::vector<std::vector<std::int64_t>>& m, RatMatrix& inv,
                         BigRat& det) {
    const int n = static_cast<int>(m.size());
    RatMatrix work;
    work.n = n;
    work.a.assign(static_cast<std::size_t>(n) * n, BigRat(0));
    inv.n = n;
    inv.a.assign(static_cast<std::size_t>(n) * n, BigRat(0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) work.at(i, j) = BigRat(m[i][j]);
        inv.at(i, i) = BigRat(1);
    }
    det = BigRat(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (work.at(r, col) != BigRat(0)) { pivot = r; break; }
        if (pivot < 0) throw InternalError("singular Cartan block");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(work.a[pivot * n + j], work.a[col * n + j]);
                std::swap(inv.a[pivot * n + j], inv.a[col * n + j]);
            }
            det = -det;
        }
        BigRat p = work.at(col, col);
        det *= p;
        for (int j = 0; j < n; ++j) {
            work.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            BigRat f = work.at(r, col);
            if (f == BigRat(0)) continue;
            for (int j = 0; j < n; ++j) {
                work.at(r, j) -= f * work.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
}

inline std::int64_t rat_to_i64(const BigRat& r, const char* where) {
    if (r.denominator() != 1) throw InternalError(std::string("non-integer value in ") + where);
    return static_cast<std::int64_t>(r.numerator());
}

}  // namespace detail

// Immutable root-system data for a (product of) simple type(s), Bourbaki
// conventions throughout. Build once, share freely across threads.
class RootSystem {
public:
    static std::shared_ptr<const RootSystem> build(const RootSystemSpec& spec) {
        spec.validate();
        return std::shared_ptr<const RootSystem>(new RootSystem(spec));
    }

    // Process-wide cache of built systems.
    static std::shared_ptr<const RootSystem> get(const RootSystemSpec& spec) {
        static std::mutex mu;
        static std::map<std::string, std::shared_ptr<const RootSystem>> reg;
        std::lock_guard<std::mutex> lock(mu);
        auto key = spec.to_string();
        auto it = reg.find(key);
        if (it != reg.end()) return it->second;
        auto rs = build(spec);
        reg.emplace(key, rs);
        return rs;
    }
    static std::shared_ptr<const RootSystem> get(const std::string& spec_text) {
        return get(RootSystemSpec::parse(spec_text));
    }

    const RootSystemSpec& spec() const { return spec_; }
    int rank() const { return rank_; }
    int num_components() const { return static_cast<int>(spec_.components.size()); }
    std::pair<int, int> component_span(int c) const { return comp_span_[c]; }
    int component_of_node(int i) const { return comp_of_node_[i]; }
    const std::vector<PosRoot>& positive_roots() const { return positive_roots_; }
    const Coords& cartan_row(int i) const { return cartan_[i]; }
    std::int64_t cartan(int i, int j) const { return cartan_[i][j]; }
    const Coords& rho() const { return rho_; }
    const BigInt& weyl_order() const { return weyl_order_; }
    const PosRoot& highest_root(int comp) const { return positive_roots_[highest_root_idx_[comp]]; }
    const PosRoot& highest_short_root(int comp) const {
        return positive_roots_[highest_short_idx_[comp]];
    }

    // <lam, alpha_j^vee> for a simple coroot is just the j-th coordinate.
    std::int64_t pairing(const Coords& lam, const PosRoot& beta) const {
        std::int64_t s = 0;
        for (int j = 0; j < rank_; ++j) s += beta.coroot[j] * lam[j];
        return s;
    }

    bool is_dominant(const Coords& v) const {
        return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x >= 0; });
    }

    void simple_reflect(Coords& v, int i) const {
        const std::int64_t c = v[i];
        if (c == 0) return;
        const Coords& row = cartan_[i];
        for (int j = 0; j < rank_; ++j) v[j] -= c * row[j];
    }

    // Dominant representative under the linear Weyl action; returns the
    // parity (+1/-1) of the reducing word.
    int make_dominant(Coords& v) const {
        int sign = 1;
        bool moved = true;
        while (moved) {
            moved = false;
            for (int i = 0; i < rank_; ++i) {
                if (v[i] < 0) {
                    simple_reflect(v, i);
                    sign = -sign;
                    moved = true;
                }
            }
        }
        return sign;
    }

    Coords orbit_rep(const Coords& lam) const {
        Coords v(lam);
        make_dominant(v);
        return v;
    }

    // Normalizes chi(mu) for arbitrary mu: singular, or sign * chi(dominant).
    ReduceResult reduce_rho(const Coords& mu) const {
        Coords v(mu);
        for (int j = 0; j < rank_; ++j) v[j] += 1;  // mu + rho
        ReduceResult r;
        r.sign = make_dominant(v);
        for (int j = 0; j < rank_; ++j) {
            if (v[j] == 0) {
                r.singular = true;
                return r;
            }
            v[j] -= 1;
        }
        r.dominant = std::move(v);
        return r;
    }

    // mu <= lam in the closed rational cone spanned by the positive roots.
    bool dominance_leq(const Coords& mu, const Coords& lam) const {
        for (int i = 0; i < rank_; ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < rank_; ++j) s += adjT_[i][j] * (lam[j] - mu[j]);
            if (s < 0) return false;
        }
        return true;
    }
    bool dominance_lt(const Coords& mu, const Coords& lam) const {
        return mu != lam && dominance_leq(mu, lam);
    }

    // lam - mu lies in the integral root lattice.
    bool same_root_lattice_coset(const Coords& mu, const Coords& lam) const {
        for (int i = 0; i < rank_; ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < rank_; ++j) s += adjT_[i][j] * (lam[j] - mu[j]);
            if (s % block_det_[comp_of_node_[i]] != 0) return false;
        }
        return true;
    }

    // Exact simple-root coordinates scaled by the block determinant:
    // out[i] = det(block(i)) * c_i(lam).
    void root_coords_scaled(const Coords& lam, Coords& out) const {
        out.assign(static_cast<std::size_t>(rank_), 0);
        for (int i = 0; i < rank_; ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < rank_; ++j) s += adjT_[i][j] * lam[j];
            out[i] = s;
        }
    }
    std::int64_t block_det_of_node(int i) const { return block_det_[comp_of_node_[i]]; }

    // Scaled height functional: height(lam) * ht_den() as an integer.
    std::int64_t height_num(const Coords& lam) const {
        std::int64_t s = 0;
        for (int j = 0; j < rank_; ++j) s += ht_num_[j] * lam[j];
        return s;
    }
    std::int64_t ht_den() const { return ht_den_; }

    // Canonical strict order: by height, ties broken lexicographically.
    // decompose() picks maxima in this order; serialization emits descending.
    bool canonical_less(const Coords& a, const Coords& b) const {
        std::int64_t ha = height_num(a), hb = height_num(b);
        if (ha != hb) return ha < hb;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

    // Scaled invariant form: gram_num(x,y) = gram_den * (x, y).
    std::int64_t gram_num(const Coords& x, const Coords& y) const {
        std::int64_t s = 0;
        for (int i = 0; i < rank_; ++i) {
            std::int64_t row = 0;
            for (int j = 0; j < rank_; ++j) row += gram_S_[i][j] * y[j];
            s += x[i] * row;
        }
        return s;
    }
    std::int64_t gram_den() const { return gram_den_; }
    // gram_den * (x, beta) computed from the cached S*beta vector.
    std::int64_t gram_num_with_root(const Coords& x, int root_idx) const {
        const Coords& sb = s_beta_[root_idx];
        std::int64_t s = 0;
        for (int j = 0; j < rank_; ++j) s += sb[j] * x[j];
        return s;
    }

    // Order of the parabolic Weyl subgroup generated by the nodes in `mask`.
    BigInt parabolic_order(std::uint32_t mask) const {
        {
            std::lock_guard<std::mutex> lock(parabolic_mu_);
            auto it = parabolic_memo_.find(mask);
            if (it != parabolic_memo_.end()) return it->second;
        }
        BigInt order = 1;
        std::vector<int> nodes;
        for (int i = 0; i < rank_; ++i)
            if (mask & (1u << i)) nodes.push_back(i);
        for (const auto& comp : split_connected(nodes)) {
            SimpleType t = classify_component(comp).type;
            order *= simple_weyl_order(t);
        }
        std::lock_guard<std::mutex> lock(parabolic_mu_);
        parabolic_memo_.emplace(mask, order);
        return order;
    }

    BigInt orbit_size(const Coords& lam) const {
        Coords dom = orbit_rep(lam);
        std::uint32_t mask = 0;
        for (int i = 0; i < rank_; ++i)
            if (dom[i] == 0) mask |= (1u << i);
        BigInt stab = parabolic_order(mask);
        BigInt q = weyl_order_ / stab;
        if (q * stab != weyl_order_) throw InternalError("orbit size division not exact");
        return q;
    }

    // Full Weyl orbit through `lam`, one callback per element. Refuses to
    // expand orbits larger than `cap`.
    template <class Fn>
    void weyl_orbit(const Coords& lam, std::uint64_t cap, Fn&& fn) const {
        BigInt size = orbit_size(lam);
        if (size > cap)
            throw CapExceeded("Weyl orbit of size " + size.str() + " exceeds cap " +
                              std::to_string(cap));
        Coords dom = orbit_rep(lam);
        std::unordered_set<Coords, CoordsHash> seen;
        std::vector<Coords> queue{dom};
        seen.insert(dom);
        std::size_t head = 0;
        while (head < queue.size()) {
            Coords v = queue[head++];
            fn(static_cast<const Coords&>(v));
            for (int i = 0; i < rank_; ++i) {
                if (v[i] == 0) continue;
                Coords w(v);
                simple_reflect(w, i);
                if (seen.insert(w).second) queue.push_back(w);
            }
        }
        if (BigInt(static_cast<std::int64_t>(queue.size())) != size)
            throw InternalError("orbit enumeration disagrees with orbit-stabilizer size");
    }

    std::vector<Coords> weyl_orbit_list(const Coords& lam, std::uint64_t cap) const {
        std::vector<Coords> out;
        weyl_orbit(lam, cap, [&](const Coords& w) { out.push_back(w); });
        return out;
    }

    // -w0(lam): the dominant representative of -lam.
    Coords star(const Coords& lam) const {
        Coords v(lam);
        for (auto& x : v) x = -x;
        make_dominant(v);
        return v;
    }

    // --- Bourbaki epsilon coordinates (single E-series component only) ---

    bool has_epsilon() const { return !eps_simple_.empty(); }

    // Converts a rational vector in Bourbaki epsilon coordinates to
    // fundamental-weight coordinates; rejects vectors off the weight lattice.
    Coords from_epsilon(const std::vector<BigRat>& eps) const {
        if (!has_epsilon())
            throw InputError("epsilon coordinates only supported for single E-series systems");
        if (eps.size() != 8) throw InputError("epsilon vector must have 8 entries");
        Coords lam(static_cast<std::size_t>(rank_), 0);
        for (int i = 0; i < rank_; ++i) {
            BigRat v(0);
            for (int k = 0; k < 8; ++k) v += eps[k] * eps_simple_[i][k];
            if (v.denominator() != 1)
                throw InputError("vector pairs non-integrally with a simple coroot: not a weight");
            lam[i] = static_cast<std::int64_t>(v.numerator());
        }
        for (int k = 0; k < 8; ++k) {
            BigRat back(0);
            for (int i = 0; i < rank_; ++i) back += BigRat(lam[i]) * eps_fw_[i][k];
            if (back != eps[k])
                throw InputError("epsilon vector does not lie in the weight lattice");
        }
        return lam;
    }

    // --- weight text syntax: [a,b,...|c,...] with '|' between components ---

    std::string format_weight(const Coords& lam) const {
        std::string s = "[";
        for (int c = 0; c < num_components(); ++c) {
            if (c) s += '|';
            auto [lo, hi] = comp_span_[c];
            for (int j = lo; j < hi; ++j) {
                if (j > lo) s += ',';
                s += std::to_string(lam[j]);
            }
        }
        s += ']';
        return s;
    }

    Coords parse_weight(const std::string& text) const {
        std::string t = text;
        if (t.size() < 2 || t.front() != '[' || t.back() != ']')
            throw InputError("weight must be bracketed, e.g. [1,0,0]: got '" + text + "'");
        t = t.substr(1, t.size() - 2);
        Coords lam;
        std::string cur;
        auto flush = [&]() {
            if (cur.empty()) throw InputError("empty coordinate in weight '" + text + "'");
            lam.push_back(std::stoll(cur));
            cur.clear();
        };
        for (char ch : t) {
            if (ch == ',' || ch == '|') flush();
            else if (!std::isspace(static_cast<unsigned char>(ch))) cur += ch;
        }
        flush();
        if (static_cast<int>(lam.size()) != rank_)
            throw InputError("weight '" + text + "' has " + std::to_string(lam.size()) +
                             " coordinates; " + spec_.to_string() + " has rank " +
                             std::to_string(rank_));
        return lam;
    }

    // Component sub-system plus coordinate slicing, for componentwise checks.
    std::shared_ptr<const RootSystem> component_system(int c) const {
        RootSystemSpec s;
        s.components.push_back(spec_.components[c]);
        return RootSystem::get(s);
    }
    Coords component_slice(const Coords& lam, int c) const {
        auto [lo, hi] = comp_span_[c];
        return Coords(lam.begin() + lo, lam.begin() + hi);
    }
    Coords join_components(const std::vector<Coords>& parts) const {
        Coords out;
        for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
        if (static_cast<int>(out.size()) != rank_) throw InternalError("bad component join");
        return out;
    }

    struct ClassifiedComponent {
        SimpleType type;
        std::vector<int> nodes;  // source nodes in Bourbaki order for `type`
    };

    // Classifies the sub-diagram spanned by `nodes` into simple components.
    std::vector<ClassifiedComponent> classify_subdiagram(const std::vector<int>& nodes) const {
        std::vector<ClassifiedComponent> out;
        for (const auto& comp : split_connected(nodes)) out.push_back(classify_component(comp));
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return a.nodes.front() < b.nodes.front();
        });
        return out;
    }

    static BigInt simple_weyl_order(const SimpleType& t) {
        BigInt o = 1;
        auto fact = [](int n) {
            BigInt f = 1;
            for (int i = 2; i <= n; ++i) f *= i;
            return f;
        };
        switch (t.family) {
            case 'A': o = fact(t.rank + 1); break;
            case 'B':
            case 'C': o = fact(t.rank) << t.rank; break;
            case 'D': o = fact(t.rank) << (t.rank - 1); break;
            case 'G': o = 12; break;
            case 'F': o = 1152; break;
            case 'E':
                if (t.rank == 6) o = 51840;
                else if (t.rank == 7) o = 2903040;
                else o = 696729600;
                break;
            default: throw InternalError("bad family");
        }
        return o;
    }

private:
    explicit RootSystem(const RootSystemSpec& spec) : spec_(spec) {
        rank_ = spec_.total_rank();
        if (rank_ > 16) throw InputError("total rank above 16 is not supported");
        build_cartan();
        enumerate_positive_roots();
        build_lattice_data();
        build_form();
        finish_roots();
        weyl_order_ = 1;
        for (const auto& c : spec_.components) weyl_order_ *= simple_weyl_order(c);
        rho_.assign(static_cast<std::size_t>(rank_), 1);
        build_epsilon();
    }

    void build_cartan() {
        cartan_.assign(static_cast<std::size_t>(rank_), Coords(static_cast<std::size_t>(rank_), 0));
        d_num_.assign(static_cast<std::size_t>(rank_), 1);
        d_den_.assign(static_cast<std::size_t>(rank_), 1);
        comp_of_node_.assign(static_cast<std::size_t>(rank_), 0);
        int base = 0, ci = 0;
        for (const auto& t : spec_.components) {
            comp_span_.push_back({base, base + t.rank});
            for (int k = 0; k < t.rank; ++k) comp_of_node_[base + k] = ci;
            fill_block(t, base);
            base += t.rank;
            ++ci;
        }
        for (int i = 0; i < rank_; ++i) cartan_[i][i] = 2;
    }

    void set_edge(int i, int j, std::int64_t aij, std::int64_t aji) {
        cartan_[i][j] = aij;
        cartan_[j][i] = aji;
    }

    void fill_block(const SimpleType& t, int b) {
        const int n = t.rank;
        auto chain = [&](int upto) {
            for (int k = 0; k + 1 < upto; ++k) set_edge(b + k, b + k + 1, -1, -1);
        };
        switch (t.family) {
            case 'A':
                chain(n);
                break;
            case 'B':
                chain(n - 1);
                set_edge(b + n - 2, b + n - 1, -2, -1);  // <a_{n-1}, a_n^vee> = -2
                d_num_[b + n - 1] = 1;
                d_den_[b + n - 1] = 2;  // alpha_n short
                break;
            case 'C':
                chain(n - 1);
                set_edge(b + n - 2, b + n - 1, -1, -2);
                for (int k = 0; k < n - 1; ++k) {
                    d_num_[b + k] = 1;
                    d_den_[b + k] = 2;  // alpha_1..alpha_{n-1} short
                }
                break;
            case 'D':
                if (n == 2) break;  // two orthogonal nodes
                chain(n - 1);
                set_edge(b + n - 3, b + n - 1, -1, -1);
                break;
            case 'G':
                set_edge(b, b + 1, -1, -3);  // alpha_1 short
                d_num_[b] = 1;
                d_den_[b] = 3;
                break;
            case 'F':
                set_edge(b + 0, b + 1, -1, -1);
                set_edge(b + 1, b + 2, -2, -1);
                set_edge(b + 2, b + 3, -1, -1);
                d_num_[b + 2] = d_num_[b + 3] = 1;
                d_den_[b + 2] = d_den_[b + 3] = 2;  // alpha_3, alpha_4 short
                break;
            case 'E':
                // Bourbaki: chain 1-3-4-5-...-n with node 2 attached to node 4.
                set_edge(b + 0, b + 2, -1, -1);
                set_edge(b + 1, b + 3, -1, -1);
                for (int k = 2; k + 1 < n; ++k) set_edge(b + k, b + k + 1, -1, -1);
                break;
            default:
                throw InternalError("bad family");
        }
    }

    void enumerate_positive_roots() {
        std::unordered_map<Coords, int, CoordsHash> index_by_rc;
        auto add_root = [&](Coords rc) {
            PosRoot r;
            r.root_coords = rc;
            r.height = static_cast<int>(std::accumulate(rc.begin(), rc.end(), std::int64_t(0)));
            r.fund.assign(static_cast<std::size_t>(rank_), 0);
            int comp = -1;
            for (int i = 0; i < rank_; ++i) {
                if (rc[i] != 0) comp = comp_of_node_[i];
                for (int j = 0; j < rank_; ++j) r.fund[j] += rc[i] * cartan_[i][j];
            }
            r.component = comp;
            index_by_rc.emplace(r.root_coords, static_cast<int>(positive_roots_.size()));
            positive_roots_.push_back(std::move(r));
        };
        for (int i = 0; i < rank_; ++i) {
            Coords rc(static_cast<std::size_t>(rank_), 0);
            rc[i] = 1;
            add_root(std::move(rc));
        }
        std::size_t level_begin = 0;
        while (level_begin < positive_roots_.size()) {
            std::size_t level_end = positive_roots_.size();
            for (std::size_t ri = level_begin; ri < level_end; ++ri) {
                for (int i = 0; i < rank_; ++i) {
                    if (comp_of_node_[i] != positive_roots_[ri].component) continue;
                    Coords cand(positive_roots_[ri].root_coords);
                    cand[i] += 1;
                    if (index_by_rc.count(cand)) continue;
                    // String rule: beta + alpha_i is a root iff p - <beta, alpha_i^vee> > 0,
                    // where p is the depth of the alpha_i-string below beta.
                    std::int64_t p = 0;
                    Coords down(positive_roots_[ri].root_coords);
                    while (true) {
                        if (down[i] == 0) break;
                        down[i] -= 1;
                        bool is_zero = std::all_of(down.begin(), down.end(),
                                                   [](std::int64_t x) { return x == 0; });
                        if (is_zero || index_by_rc.count(down)) ++p;
                        else break;
                    }
                    if (p - positive_roots_[ri].fund[i] > 0) add_root(std::move(cand));
                }
            }
            level_begin = level_end;
        }
        std::sort(positive_roots_.begin(), positive_roots_.end(),
                  [](const PosRoot& a, const PosRoot& b) {
                      if (a.height != b.height) return a.height < b.height;
                      return a.root_coords < b.root_coords;
                  });
    }

    void build_lattice_data() {
        adjT_.assign(static_cast<std::size_t>(rank_), Coords(static_cast<std::size_t>(rank_), 0));
        block_det_.assign(spec_.components.size(), 1);
        for (int c = 0; c < num_components(); ++c) {
            auto [lo, hi] = comp_span_[c];
            int n = hi - lo;
            std::vector<std::vector<std::int64_t>> at(n, std::vector<std::int64_t>(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) at[i][j] = cartan_[lo + j][lo + i];  // transpose
            detail::RatMatrix inv;
            BigRat det;
            detail::invert_exact(at, inv, det);
            std::int64_t d = detail::rat_to_i64(det, "Cartan determinant");
            if (d <= 0) throw InternalError("non-positive Cartan determinant");
            block_det_[c] = d;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    adjT_[lo + i][lo + j] =
                        detail::rat_to_i64(inv.at(i, j) * BigRat(d), "Cartan adjugate");
        }
        ht_den_ = 1;
        for (auto d : block_det_) ht_den_ = std::lcm(ht_den_, d);
        ht_num_.assign(static_cast<std::size_t>(rank_), 0);
        for (int i = 0; i < rank_; ++i) {
            std::int64_t scale = ht_den_ / block_det_[comp_of_node_[i]];
            for (int j = 0; j < rank_; ++j) ht_num_[j] += adjT_[i][j] * scale;
        }
    }

    void build_form() {
        // (fw_i, fw_j) = d_i * ((A^T)^{-1})_{ij}; store as S / gram_den.
        std::vector<std::vector<BigRat>> g(static_cast<std::size_t>(rank_),
                                           std::vector<BigRat>(static_cast<std::size_t>(rank_)));
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j)
                g[i][j] = BigRat(d_num_[i], d_den_[i]) *
                          BigRat(adjT_[i][j], block_det_[comp_of_node_[i]]);
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j)
                if (g[i][j] != g[j][i]) throw InternalError("Gram matrix not symmetric");
        BigInt den = 1;
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j)
                den = boost::multiprecision::lcm(den, g[i][j].denominator());
        gram_den_ = static_cast<std::int64_t>(den);
        gram_S_.assign(static_cast<std::size_t>(rank_), Coords(static_cast<std::size_t>(rank_), 0));
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j)
                gram_S_[i][j] = detail::rat_to_i64(g[i][j] * BigRat(den), "scaled Gram");
    }

    void finish_roots() {
        highest_root_idx_.assign(spec_.components.size(), -1);
        highest_short_idx_.assign(spec_.components.size(), -1);
        s_beta_.resize(positive_roots_.size());
        for (std::size_t ri = 0; ri < positive_roots_.size(); ++ri) {
            PosRoot& r = positive_roots_[ri];
            Coords sb(static_cast<std::size_t>(rank_), 0);
            for (int i = 0; i < rank_; ++i) {
                std::int64_t s = 0;
                for (int j = 0; j < rank_; ++j) s += gram_S_[i][j] * r.fund[j];
                sb[i] = s;
            }
            std::int64_t nbb = 0;  // gram_den * (beta, beta)
            for (int j = 0; j < rank_; ++j) nbb += sb[j] * r.fund[j];
            r.is_long = (nbb == 2 * gram_den_);
            r.coroot.assign(static_cast<std::size_t>(rank_), 0);
            for (int j = 0; j < rank_; ++j) {
                std::int64_t num = 2 * sb[j];
                if (num % nbb != 0) throw InternalError("non-integral coroot pairing");
                r.coroot[j] = num / nbb;
            }
            s_beta_[ri] = std::move(sb);
            int c = r.component;
            auto better = [&](int cur) {
                return cur < 0 || positive_roots_[cur].height < r.height;
            };
            if (better(highest_root_idx_[c])) highest_root_idx_[c] = static_cast<int>(ri);
            if (!r.is_long || simply_laced_component(c))
                if (better(highest_short_idx_[c])) highest_short_idx_[c] = static_cast<int>(ri);
        }
    }

    bool simply_laced_component(int c) const {
        auto [lo, hi] = comp_span_[c];
        for (int i = lo; i < hi; ++i)
            if (d_den_[i] != 1) return false;
        return true;
    }

    void build_epsilon() {
        if (num_components() != 1 || spec_.components[0].family != 'E') return;
        const int n = rank_;
        auto half = BigRat(1, 2);
        std::vector<std::vector<BigRat>> simple(static_cast<std::size_t>(n),
                                                std::vector<BigRat>(8, BigRat(0)));
        // Bourbaki Planches V-VII: common alpha_1, alpha_2 for E6/E7/E8.
        simple[0][0] = half;
        simple[0][7] = half;
        for (int k = 1; k <= 6; ++k) simple[0][k] = -half;
        simple[1][0] = 1;
        simple[1][1] = 1;
        for (int i = 2; i < n; ++i) {
            simple[i][i - 2] = -1;
            simple[i][i - 1] = 1;
        }
        eps_simple_ = std::move(simple);
        // Fundamental weights in epsilon coordinates via (A^T)^{-1}.
        eps_fw_.assign(static_cast<std::size_t>(n), std::vector<BigRat>(8, BigRat(0)));
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                BigRat c(adjT_[k][i], block_det_[0]);
                for (int e = 0; e < 8; ++e) eps_fw_[i][e] += c * eps_simple_[k][e];
            }
        }
    }

    std::vector<std::vector<int>> split_connected(const std::vector<int>& nodes) const {
        std::vector<std::vector<int>> comps;
        std::vector<int> rest(nodes);
        std::sort(rest.begin(), rest.end());
        std::vector<bool> used(rest.size(), false);
        for (std::size_t s = 0; s < rest.size(); ++s) {
            if (used[s]) continue;
            std::vector<int> comp{rest[s]};
            used[s] = true;
            for (std::size_t h = 0; h < comp.size(); ++h) {
                for (std::size_t t = 0; t < rest.size(); ++t) {
                    if (used[t]) continue;
                    if (cartan_[comp[h]][rest[t]] != 0) {
                        used[t] = true;
                        comp.push_back(rest[t]);
                    }
                }
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        return comps;
    }

    ClassifiedComponent classify_component(const std::vector<int>& nodes) const {
        const int n = static_cast<int>(nodes.size());
        auto adjacent = [&](int a, int b) { return cartan_[a][b] != 0; };
        auto bond = [&](int a, int b) { return cartan_[a][b] * cartan_[b][a]; };
        auto shorter = [&](int a, int b) {  // d_a < d_b
            return d_num_[a] * d_den_[b] < d_num_[b] * d_den_[a];
        };
        if (n == 1) return {{'A', 1}, nodes};
        std::vector<std::vector<int>> nbr(nodes.size());
        int max_bond = 1;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && adjacent(nodes[a], nodes[b])) {
                    nbr[a].push_back(b);
                    max_bond = std::max<int>(max_bond, static_cast<int>(bond(nodes[a], nodes[b])));
                }
        int branch = -1;
        for (int a = 0; a < n; ++a) {
            if (nbr[a].size() > 3) throw InternalError("sub-diagram not of finite type");
            if (nbr[a].size() == 3) {
                if (branch >= 0) throw InternalError("sub-diagram not of finite type");
                branch = a;
            }
        }
        if (max_bond == 3) {
            if (n != 2) throw InternalError("triple bond in diagram of size > 2");
            int a = nodes[0], b = nodes[1];
            if (!shorter(a, b)) std::swap(a, b);
            return {{'G', 2}, {a, b}};  // Bourbaki G2: alpha_1 short
        }
        if (branch < 0) {
            // A path. Orient it from one endpoint.
            int end = -1;
            for (int a = 0; a < n; ++a)
                if (nbr[a].size() == 1) { end = a; break; }
            if (end < 0) throw InternalError("cycle in sub-diagram");
            auto walk = [&](int from) {
                std::vector<int> path{from};
                int prev = -1, cur = from;
                while (static_cast<int>(path.size()) < n) {
                    int nxt = -1;
                    for (int b : nbr[cur])
                        if (b != prev) nxt = b;
                    path.push_back(nxt);
                    prev = cur;
                    cur = nxt;
                }
                return path;
            };
            std::vector<int> path = walk(end);
            if (max_bond == 1) {
                std::vector<int> fwd, rev;
                for (int a : path) fwd.push_back(nodes[a]);
                rev.assign(fwd.rbegin(), fwd.rend());
                return {{'A', n}, std::min(fwd, rev)};
            }
            // One double bond somewhere along the path.
            int dpos = -1;
            for (int k = 0; k + 1 < n; ++k)
                if (bond(nodes[path[k]], nodes[path[k + 1]]) == 2) dpos = k;
            if (n == 4 && dpos == 1) {
                // F4; Bourbaki order starts at the long end.
                std::vector<int> fwd;
                for (int a : path) fwd.push_back(nodes[a]);
                if (shorter(fwd[0], fwd[3])) std::reverse(fwd.begin(), fwd.end());
                return {{'F', 4}, fwd};
            }
            std::vector<int> fwd;
            for (int a : path) fwd.push_back(nodes[a]);
            if (dpos == 0) std::reverse(fwd.begin(), fwd.end());
            else if (dpos != n - 2)
                throw InternalError("double bond not at diagram end");
            // Double bond now between the last two nodes.
            char fam = shorter(fwd[n - 1], fwd[n - 2]) ? 'B' : 'C';
            if (n == 2 && fam == 'C') {
                std::reverse(fwd.begin(), fwd.end());
                fam = 'B';
            }
            return {{fam, n}, fwd};
        }
        // Branch node present: D or E series.
        if (max_bond != 1) throw InternalError("branched diagram with multiple bond");
        std::vector<std::vector<int>> arms;
        for (int first : nbr[branch]) {
            std::vector<int> arm{first};
            int prev = branch, cur = first;
            while (nbr[cur].size() == 2) {
                int nxt = nbr[cur][0] == prev ? nbr[cur][1] : nbr[cur][0];
                arm.push_back(nxt);
                prev = cur;
                cur = nxt;
            }
            arms.push_back(arm);
        }
        std::sort(arms.begin(), arms.end(), [&](const auto& x, const auto& y) {
            if (x.size() != y.size()) return x.size() < y.size();
            return nodes[x.front()] < nodes[y.front()];
        });
        auto asz = [&](int k) { return static_cast<int>(arms[k].size()); };
        if (asz(0) != 1) throw InternalError("sub-diagram not of finite type");
        auto src = [&](int a) { return nodes[a]; };
        if (asz(1) == 1) {
            // D_n: long chain from the far end through the branch node, then
            // the two short-arm tips.
            std::vector<int> order;
            for (auto it = arms[2].rbegin(); it != arms[2].rend(); ++it) order.push_back(src(*it));
            order.push_back(src(branch));
            int t1 = src(arms[0][0]), t2 = src(arms[1][0]);
            order.push_back(std::min(t1, t2));
            order.push_back(std::max(t1, t2));
            return {{'D', n}, order};
        }
        if (asz(1) != 2 || asz(2) < 2 || asz(2) > 4 || n < 6 || n > 8)
            throw InternalError("sub-diagram not of finite type");
        // E series. For E6 the two length-2 arms are interchangeable; pick the
        // orientation giving the lexicographically smaller node list.
        auto make_order = [&](const std::vector<int>& arm2, const std::vector<int>& armlong) {
            std::vector<int> order;
            order.push_back(src(arm2[1]));      // alpha_1
            order.push_back(src(arms[0][0]));   // alpha_2
            order.push_back(src(arm2[0]));      // alpha_3
            order.push_back(src(branch));       // alpha_4
            for (int a : armlong) order.push_back(src(a));  // alpha_5..alpha_n
            return order;
        };
        std::vector<int> order = make_order(arms[1], arms[2]);
        if (asz(2) == 2) order = std::min(order, make_order(arms[2], arms[1]));
        return {{'E', n}, order};
    }

    RootSystemSpec spec_;
    int rank_ = 0;
    std::vector<Coords> cartan_;
    std::vector<std::int64_t> d_num_, d_den_;
    std::vector<int> comp_of_node_;
    std::vector<std::pair<int, int>> comp_span_;
    std::vector<PosRoot> positive_roots_;
    std::vector<Coords> adjT_;
    std::vector<std::int64_t> block_det_;
    Coords ht_num_;
    std::int64_t ht_den_ = 1;
    std::vector<Coords> gram_S_;
    std::int64_t gram_den_ = 1;
    std::vector<Coords> s_beta_;
    std::vector<int> highest_root_idx_, highest_short_idx_;
    BigInt weyl_order_;
    Coords rho_;
    std::vector<std::vector<BigRat>> eps_simple_, eps_fw_;
    mutable std::mutex parabolic_mu_;
    mutable std::unordered_map<std::uint32_t, BigInt> parabolic_memo_;
};

// Thin value type carrying its owning system; two weights compare equal only
// when their systems agree.
struct Weight {
    std::shared_ptr<const RootSystem> system;
    Coords coords;

    friend bool operator==(const Weight& a, const Weight& b) {
        if (a.system != b.system &&
            (!a.system || !b.system || !(a.system->spec() == b.system->spec())))
            return false;
        return a.coords == b.coords;
    }
    std::string str() const { return system->format_weight(coords); }
};

}  // namespace donkin
