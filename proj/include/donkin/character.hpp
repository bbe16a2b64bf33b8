#pragma once

#include "donkin/root_system.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace donkin {

namespace detail {

using CoeffMap = std::unordered_map<Coords, BigInt, CoordsHash>;

inline void coeff_add(CoeffMap& m, const Coords& w, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = m.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) m.erase(it);
    }
}

inline std::vector<std::pair<Coords, BigInt>> sorted_desc(const RootSystem& rs,
                                                          const CoeffMap& m) {
    std::vector<std::pair<Coords, BigInt>> v(m.begin(), m.end());
    std::sort(v.begin(), v.end(), [&rs](const auto& a, const auto& b) {
        return rs.canonical_less(b.first, a.first);
    });
    return v;
}

}  // namespace detail

// exact dim of the Weyl character chi(lam): prod <lam+rho, beta^vee> / <rho, beta^vee>
inline BigInt weyl_dim(const RootSystem& rs, const Coords& lam) {
    if (!rs.is_dominant(lam)) throw InputError("weyl_dim requires a dominant weight");
    Coords lr(lam);
    for (auto& x : lr) x += 1;
    BigInt num = 1, den = 1;
    for (const auto& beta : rs.positive_roots()) {
        num *= rs.pairing(lr, beta);
        den *= rs.pairing(rs.rho(), beta) + 0;
    }
    return exact_div(num, den, "weyl_dim");
}

// Orbit-compressed weight multiplicities: one entry per dominant weight,
// standing for its full Weyl orbit. Genuine module characters have all
// multiplicities >= 0; virtual ones may be signed.
class DominantCharacter {
public:
    DominantCharacter() = default;
    explicit DominantCharacter(std::shared_ptr<const RootSystem> rs, bool is_virtual = false)
        : system_(std::move(rs)), virtual_(is_virtual) {}

    const std::shared_ptr<const RootSystem>& system() const { return system_; }
    bool is_virtual() const { return virtual_; }
    void set_virtual(bool v) { virtual_ = v; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const detail::CoeffMap& entries() const { return entries_; }

    void add(const Coords& w, const BigInt& mult) {
        if (!system_->is_dominant(w))
            throw InternalError("DominantCharacter key is not dominant");
        detail::coeff_add(entries_, w, mult);
    }

    BigInt at(const Coords& w) const {
        auto it = entries_.find(w);
        return it == entries_.end() ? BigInt(0) : it->second;
    }

    void check_genuine() const {
        if (virtual_) return;
        for (const auto& [w, m] : entries_)
            if (m < 0)
                throw VerificationError("negative multiplicity at " + system_->format_weight(w) +
                                        " in a genuine character");
    }

    bool all_nonnegative() const {
        for (const auto& [w, m] : entries_)
            if (m < 0) return false;
        return true;
    }

    // total dimension: sum of multiplicity * orbit size
    BigInt dimension() const {
        BigInt d = 0;
        for (const auto& [w, m] : entries_) d += m * system_->orbit_size(w);
        return d;
    }

    std::vector<std::pair<Coords, BigInt>> sorted_entries() const {
        return detail::sorted_desc(*system_, entries_);
    }

    friend bool operator==(const DominantCharacter& a, const DominantCharacter& b) {
        return a.system_->spec() == b.system_->spec() && a.entries_ == b.entries_;
    }

private:
    std::shared_ptr<const RootSystem> system_;
    detail::CoeffMap entries_;
    bool virtual_ = false;
};

// Signed formal combination of Weyl characters chi(lam), dominant indices.
class WeylSum {
public:
    WeylSum() = default;
    explicit WeylSum(std::shared_ptr<const RootSystem> rs) : system_(std::move(rs)) {}

    static WeylSum unit(std::shared_ptr<const RootSystem> rs) {
        WeylSum s(rs);
        s.add(Coords(static_cast<std::size_t>(rs->rank()), 0), 1);
        return s;
    }
    static WeylSum single(std::shared_ptr<const RootSystem> rs, const Coords& lam,
                          const BigInt& c = 1) {
        WeylSum s(std::move(rs));
        s.add(lam, c);
        return s;
    }

    const std::shared_ptr<const RootSystem>& system() const { return system_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const detail::CoeffMap& entries() const { return entries_; }

    void add(const Coords& w, const BigInt& c) {
        if (!system_->is_dominant(w)) throw InternalError("WeylSum index is not dominant");
        detail::coeff_add(entries_, w, c);
    }

    BigInt at(const Coords& w) const {
        auto it = entries_.find(w);
        return it == entries_.end() ? BigInt(0) : it->second;
    }

    bool all_nonnegative() const {
        for (const auto& [w, c] : entries_)
            if (c < 0) return false;
        return true;
    }

    BigInt dimension() const {
        BigInt d = 0;
        for (const auto& [w, c] : entries_) d += c * weyl_dim(*system_, w);
        return d;
    }

    std::vector<std::pair<Coords, BigInt>> sorted_entries() const {
        return detail::sorted_desc(*system_, entries_);
    }

    friend bool operator==(const WeylSum& a, const WeylSum& b) {
        return a.system_->spec() == b.system_->spec() && a.entries_ == b.entries_;
    }

private:
    std::shared_ptr<const RootSystem> system_;
    detail::CoeffMap entries_;
};

// Shared text form: one `<weight> <coefficient>` line per entry, descending
// canonical order. Used verbatim by the cache files and the CLI.
template <class SumT>
inline std::string serialize_lines(const SumT& s) {
    std::string out;
    for (const auto& [w, c] : s.sorted_entries()) {
        out += s.system()->format_weight(w);
        out += ' ';
        out += c.str();
        out += '\n';
    }
    return out;
}

inline void parse_lines_into(const std::string& text,
                             const std::function<void(const std::string&, const std::string&)>& fn) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        auto sp = line.find(' ');
        if (sp == std::string::npos) throw InputError("bad character line: '" + line + "'");
        fn(line.substr(0, sp), line.substr(sp + 1));
    }
}

}  // namespace donkin
