#pragma once

#include "donkin/engine.hpp"

#include <json.hpp>

#include <fstream>
#include <thread>

namespace donkin {

struct CampaignEntry {
    std::string pair;
    std::vector<std::int64_t> primes;
};

struct StrategyOverride {
    std::string pair;
    Coords weight;       // parsed against the pair's source system
    std::string weight_text;
    StrategyRow row;
};

struct Campaign {
    std::string name = "campaign";
    std::vector<CampaignEntry> entries;
    std::vector<StrategyOverride> overrides;
};

// Campaign files are text stanzas:
//   campaign <name>
//   pair <name> primes <p1> <p2> ...
//   override <pair> <weight> (layers|socle|alt <k> <w>|tensor <w1> <w2>|star <w>)
inline Campaign parse_campaign(std::istream& in) {
    Campaign c;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "campaign") {
            ls >> c.name;
        } else if (word == "pair") {
            CampaignEntry e;
            std::string kw;
            ls >> e.pair >> kw;
            if (kw != "primes") throw InputError("expected 'primes' in campaign line: " + line);
            std::int64_t p;
            while (ls >> p) e.primes.push_back(Prime(p).p);
            if (e.primes.empty()) throw InputError("no primes listed for pair " + e.pair);
            c.entries.push_back(std::move(e));
        } else if (word == "override") {
            StrategyOverride o;
            std::string strat;
            ls >> o.pair >> o.weight_text >> strat;
            auto src = RootSystem::get(o.pair.substr(0, o.pair.find('/')));
            o.weight = src->parse_weight(o.weight_text);
            o.row.weight = o.weight;
            if (strat == "layers") o.row.kind = StrategyKind::IrreducibleLayers;
            else if (strat == "socle") o.row.kind = StrategyKind::SocleProduct;
            else if (strat == "alt") {
                std::uint32_t k;
                std::string w;
                ls >> k >> w;
                o.row.kind = StrategyKind::Aux;
                o.row.recipe = Recipe::alt_of(k, Recipe::leaf_of(src->parse_weight(w)));
            } else if (strat == "tensor") {
                std::string w1, w2;
                ls >> w1 >> w2;
                o.row.kind = StrategyKind::Aux;
                o.row.recipe = Recipe::tensor_of(Recipe::leaf_of(src->parse_weight(w1)),
                                                 Recipe::leaf_of(src->parse_weight(w2)));
            } else if (strat == "star") {
                std::string w;
                ls >> w;
                o.row.kind = StrategyKind::StarSymmetry;
                o.row.star_of = src->parse_weight(w);
            } else {
                throw InputError("unknown override strategy '" + strat + "'");
            }
            c.overrides.push_back(std::move(o));
        } else {
            throw InputError("bad campaign line: '" + line + "'");
        }
    }
    return c;
}

inline Campaign parse_campaign_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open campaign file '" + path + "'");
    return parse_campaign(in);
}

inline PairStrategy apply_overrides(const PairStrategy& base,
                                    const std::vector<StrategyOverride>& overrides) {
    PairStrategy out = base;
    for (const auto& o : overrides) {
        if (o.pair != base.pair_name) continue;
        bool replaced = false;
        for (auto& row : out.rows) {
            if (row.weight == o.weight) {
                StrategyRow nr = o.row;
                nr.cond = PrimeCondition{};  // overrides are unconditional
                row = nr;
                replaced = true;
            }
        }
        if (!replaced) throw InputError("override targets unknown table row " + o.weight_text +
                                        " for pair " + o.pair);
        // Collapse duplicate rows left by p-conditional variants.
        std::vector<StrategyRow> dedup;
        std::set<Coords> seen_uncond;
        for (auto& row : out.rows) {
            if (row.weight == o.weight) {
                if (seen_uncond.count(row.weight)) continue;
                seen_uncond.insert(row.weight);
            }
            dedup.push_back(row);
        }
        out.rows = std::move(dedup);
    }
    return out;
}

inline nlohmann::json report_to_json(const Report& r) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : r.steps) {
        steps.push_back({{"weight", s.label},
                         {"strategy", s.strategy},
                         {"status", step_status_name(s.status)},
                         {"evidence", s.evidence},
                         {"depends_on", s.depends_on}});
    }
    return nlohmann::json{{"case", {{"pair", r.pair}, {"prime", r.p}}},
                          {"steps", steps},
                          {"general_induction", r.general_induction},
                          {"status", r.status},
                          {"stats", {{"elapsed_ms", r.elapsed_ms}, {"cached_characters", r.cache_entries}}}};
}

inline std::string report_to_text(const Report& r) {
    std::string out = r.pair + " p=" + std::to_string(r.p) + ": " + r.status + "\n";
    for (const auto& s : r.steps) {
        out += "  " + s.label + "  [" + s.strategy + "]  " + step_status_name(s.status) + "\n";
        for (const auto& e : s.evidence) out += "      " + e + "\n";
    }
    out += "  note: " + r.general_induction + "\n";
    return out;
}

struct CampaignResult {
    std::vector<Report> reports;
    bool all_certified = true;  // Certified or CertifiedWithExternal (Skipped steps tolerated)
};

// Runs every (pair, prime) case of a campaign. Cases are independent; with
// jobs > 1 they run on a small worker pool, sharing the character caches.
inline CampaignResult run_campaign(const CalcContext& ctx, const Campaign& c,
                                   const RunOptions& opts, int jobs = 1) {
    struct Job {
        std::string pair;
        std::int64_t p;
    };
    std::vector<Job> todo;
    for (const auto& e : c.entries)
        for (auto p : e.primes) todo.push_back({e.pair, p});
    CampaignResult result;
    result.reports.resize(todo.size());
    auto run_one = [&](std::size_t i) {
        const auto& job = todo[i];
        PairStrategy table = apply_overrides(strategy_table(job.pair), c.overrides);
        PairCase pc(catalog(ctx, job.pair), Prime(job.p));
        result.reports[i] = run_pair(ctx, pc, table, opts);
    };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < todo.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= todo.size()) return;
                    run_one(i);
                }
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& r : result.reports)
        if (r.status == "Failed") result.all_certified = false;
    return result;
}

inline const char* brundan_campaign_text() {
    return R"(campaign brundan
pair E6/F4 primes 2 3 5 7 11 13
pair E6/A5A1 primes 3 5 7 11 13
pair E6/C4 primes 3 5 7 11 13
pair E7/A7 primes 3 5 7 11 13
pair E7/D6A1 primes 3 5 7 11 13
pair E8/D8 primes 3 5 7 11 13
pair E8/E7A1 primes 3 5 7 11 13
pair F4/B4 primes 3 5 7 11 13
pair F4/C3A1 primes 3 5 7 11 13
)";
}

}  // namespace donkin
