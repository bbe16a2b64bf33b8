#pragma once

#include "donkin/campaign.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace donkin {

// Exit codes are a stable contract: 0 success, 2 input error, 3 resource
// cap, 4 verification failure.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInput = 2,
    kExitCap = 3,
    kExitVerification = 4,
};

struct CliConfig {
    std::string cache_dir = ".donkin-cache";
    bool no_cache = false;
    std::uint64_t orbit_cap = kDefaultOrbitCap;
    std::vector<std::int64_t> primes = {3, 5, 7, 11, 13};
    int jobs = 1;
    std::vector<std::string> embedding_files;
};

inline void load_config_file(const std::string& path, CliConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key, eq;
        if (!(ls >> key)) continue;
        ls >> eq;
        std::string value = eq;
        if (eq == "=") ls >> value;
        if (key == "cache_dir") cfg.cache_dir = value;
        else if (key == "orbit_cap") cfg.orbit_cap = std::stoull(value);
        else if (key == "jobs") cfg.jobs = std::stoi(value);
        else if (key == "primes") {
            cfg.primes.clear();
            cfg.primes.push_back(Prime(std::stoll(value)).p);
            std::string more;
            while (ls >> more) cfg.primes.push_back(Prime(std::stoll(more)).p);
        } else throw InputError("unknown config key '" + key + "'");
    }
    for (auto p : cfg.primes) Prime{p};
}

namespace detail {

struct CliState {
    CliConfig cfg;
    std::unique_ptr<CharacterCache> cache;
    std::unique_ptr<CalcContext> ctx;
    std::vector<Embedding> user_embeddings;

    void init() {
        if (!cfg.no_cache) cache = std::make_unique<CharacterCache>(cfg.cache_dir);
        ctx = std::make_unique<CalcContext>(cfg.orbit_cap, cache.get());
        for (const auto& f : cfg.embedding_files) {
            std::ifstream in(f);
            if (!in) throw InputError("cannot open embeddings file '" + f + "'");
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            for (auto& e : parse_embeddings(text)) {
                ValidationReport rep = validate_embedding(*ctx, e);
                if (!rep.ok())
                    throw VerificationError("embedding " + e.name +
                                            " failed validation: " + rep.first_failure());
                user_embeddings.push_back(std::move(e));
            }
        }
    }

    Embedding find_pair(const std::string& name) const {
        for (const auto& e : user_embeddings)
            if (e.name == name) return e;
        return catalog(*ctx, name);
    }
};

inline std::string weylsum_or_zero(const WeylSum& s) {
    return s.empty() ? std::string("0\n") : serialize_lines(s);
}

}  // namespace detail

// Full command-line surface; kept as a library function so the tests can
// drive it in-process.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"donkin - dual Weyl characters, branching, linkage, and good-filtration "
                 "certificates for symmetric subgroup pairs"};
    app.require_subcommand(1);
    detail::CliState st;
    if (const char* env = std::getenv("DONKIN_CACHE_DIR")) st.cfg.cache_dir = env;
    std::string config_file;
    app.add_option("--config", config_file, "configuration file (key = value lines)");
    auto* cache_opt = app.add_option("--cache-dir", st.cfg.cache_dir, "character cache directory");
    app.add_flag("--no-cache", st.cfg.no_cache, "disable the persistent character cache");
    auto* cap_opt = app.add_option("--orbit-cap", st.cfg.orbit_cap,
                                   "orbit expansion cap (>= 10000)");
    auto* jobs_opt = app.add_option("--jobs", st.cfg.jobs, "parallel campaign workers");
    app.add_option("--embeddings", st.cfg.embedding_files,
                   "extra embedding stanza files (searched before the shipped catalog)");

    std::string spec_text, pair_text, weight1, weight2, campaign_path, cache_action;
    std::int64_t prime_arg = 3;
    std::uint32_t power = 2;
    std::string out_dir = "reports";
    bool skip_slow = false;

    auto* c_char = app.add_subcommand("char", "weight multiplicities of a dual Weyl module");
    c_char->add_option("spec", spec_text)->required();
    c_char->add_option("weight", weight1)->required();

    auto* c_restrict = app.add_subcommand("restrict", "restricted character along a pair");
    c_restrict->add_option("pair", pair_text)->required();
    c_restrict->add_option("weight", weight1)->required();

    auto* c_branch = app.add_subcommand("branch", "Weyl-character decomposition of a restriction");
    c_branch->add_option("pair", pair_text)->required();
    c_branch->add_option("weight", weight1)->required();

    auto* c_tensor = app.add_subcommand("tensor", "tensor product decomposition");
    c_tensor->add_option("spec", spec_text)->required();
    c_tensor->add_option("w1", weight1)->required();
    c_tensor->add_option("w2", weight2)->required();

    auto* c_alt = app.add_subcommand("alt", "exterior power decomposition");
    c_alt->add_option("k", power)->required();
    c_alt->add_option("spec", spec_text)->required();
    c_alt->add_option("weight", weight1)->required();

    auto* c_sym = app.add_subcommand("sym", "symmetric power decomposition");
    c_sym->add_option("k", power)->required();
    c_sym->add_option("spec", spec_text)->required();
    c_sym->add_option("weight", weight1)->required();

    auto* c_link = app.add_subcommand("linkage", "affine Weyl dot-orbit test");
    c_link->add_option("spec", spec_text)->required();
    c_link->add_option("p", prime_arg)->required();
    c_link->add_option("w1", weight1)->required();
    c_link->add_option("w2", weight2)->required();

    auto* c_jantzen = app.add_subcommand("jantzen", "Jantzen sum formula");
    c_jantzen->add_option("spec", spec_text)->required();
    c_jantzen->add_option("p", prime_arg)->required();
    c_jantzen->add_option("weight", weight1)->required();

    auto* c_verify = app.add_subcommand("verify", "run a certification campaign");
    c_verify->add_option("campaign", campaign_path,
                         "campaign file, or 'brundan' for the shipped campaign")
        ->required();
    c_verify->add_option("--out", out_dir, "report output directory");
    c_verify->add_flag("--skip-slow", skip_slow, "skip the slow E8 exterior-power rows");

    auto* c_cache = app.add_subcommand("cache", "cache maintenance: stats|clear|verify");
    c_cache->add_option("action", cache_action)->required();

    std::vector<const char*> argv;
    std::string prog = "donkin";
    argv.push_back(prog.c_str());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (!config_file.empty()) {
            CliConfig file_cfg = st.cfg;
            load_config_file(config_file, file_cfg);
            // flags win over the config file
            if (cache_opt->count() == 0 && !std::getenv("DONKIN_CACHE_DIR"))
                st.cfg.cache_dir = file_cfg.cache_dir;
            if (cap_opt->count() == 0) st.cfg.orbit_cap = file_cfg.orbit_cap;
            if (jobs_opt->count() == 0) st.cfg.jobs = file_cfg.jobs;
            st.cfg.primes = file_cfg.primes;
        }
        st.init();
        auto& ctx = *st.ctx;

        if (c_char->parsed()) {
            auto rs = RootSystem::get(spec_text);
            auto lam = rs->parse_weight(weight1);
            auto ch = freudenthal(ctx, rs, lam);
            out << serialize_lines(*ch);
            out << "dimension " << ch->dimension().str() << "\n";
        } else if (c_restrict->parsed()) {
            Embedding e = st.find_pair(pair_text);
            auto lam = e.source->parse_weight(weight1);
            auto res = restrict_character(ctx, e, *freudenthal(ctx, e.source, lam));
            out << serialize_lines(res);
            out << "dimension " << res.dimension().str() << "\n";
        } else if (c_branch->parsed()) {
            Embedding e = st.find_pair(pair_text);
            out << detail::weylsum_or_zero(branch(ctx, e, e.source->parse_weight(weight1)));
        } else if (c_tensor->parsed()) {
            auto rs = RootSystem::get(spec_text);
            auto s = tensor(ctx, WeylSum::single(rs, rs->parse_weight(weight1)),
                            WeylSum::single(rs, rs->parse_weight(weight2)));
            out << detail::weylsum_or_zero(s);
        } else if (c_alt->parsed() || c_sym->parsed()) {
            auto rs = RootSystem::get(spec_text);
            auto base = WeylSum::single(rs, rs->parse_weight(weight1));
            auto s = c_alt->parsed() ? alt_power(ctx, power, base) : sym_power(ctx, power, base);
            out << detail::weylsum_or_zero(s);
        } else if (c_link->parsed()) {
            auto rs = RootSystem::get(spec_text);
            Prime p(prime_arg);
            auto a = rs->parse_weight(weight1);
            auto b = rs->parse_weight(weight2);
            Coords ra = alcove_rep(*rs, p.p, a), rb = alcove_rep(*rs, p.p, b);
            out << (ra == rb ? "LINKED" : "UNLINKED") << "\n";
            out << "alcove " << rs->format_weight(a) << " -> " << rs->format_weight(ra) << "\n";
            out << "alcove " << rs->format_weight(b) << " -> " << rs->format_weight(rb) << "\n";
        } else if (c_jantzen->parsed()) {
            auto rs = RootSystem::get(spec_text);
            Prime p(prime_arg);
            out << detail::weylsum_or_zero(jantzen_sum(*rs, p.p, rs->parse_weight(weight1)));
        } else if (c_verify->parsed()) {
            Campaign camp;
            if (campaign_path == "brundan") {
                std::istringstream in(brundan_campaign_text());
                camp = parse_campaign(in);
            } else {
                camp = parse_campaign_file(campaign_path);
            }
            RunOptions opts;
            opts.skip_slow = skip_slow;
            auto t0 = std::chrono::steady_clock::now();
            CampaignResult res = run_campaign(ctx, camp, opts, st.cfg.jobs);
            std::filesystem::create_directories(out_dir);
            for (const auto& r : res.reports) {
                std::string base = r.pair;
                std::replace(base.begin(), base.end(), '/', '-');
                base += "-p" + std::to_string(r.p);
                {
                    std::ofstream jf(std::filesystem::path(out_dir) / (base + ".json"));
                    jf << report_to_json(r).dump(2) << "\n";
                }
                {
                    std::ofstream tf(std::filesystem::path(out_dir) / (base + ".txt"));
                    tf << report_to_text(r);
                }
                out << r.pair << " p=" << r.p << ": " << r.status << "\n";
            }
            double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            err << "campaign " << camp.name << ": " << res.reports.size() << " cases in "
                << elapsed << " s; reports in " << out_dir << "\n";
            if (!res.all_certified) {
                out << "campaign " << camp.name << ": FAILED\n";
                return kExitVerification;
            }
            out << "campaign " << camp.name << ": all cases certified\n";
        } else if (c_cache->parsed()) {
            if (!st.cache) throw InputError("cache commands need the cache enabled");
            if (cache_action == "stats") {
                auto s = st.cache->scan(false);
                out << "entries " << s.entries << "\n";
                out << "bytes " << s.bytes << "\n";
            } else if (cache_action == "clear") {
                out << "removed " << st.cache->clear() << "\n";
            } else if (cache_action == "verify") {
                auto s = st.cache->scan(true);
                out << "entries " << s.entries << "\n";
                out << "corrupt " << s.bad << "\n";
                if (s.bad) return kExitVerification;
                out << "OK\n";
            } else {
                throw InputError("cache action must be stats, clear, or verify");
            }
        }
        return kExitOk;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const CapExceeded& e) {
        err << "resource cap: " << e.what() << "\n";
        return kExitCap;
    } catch (const VerificationError& e) {
        err << "verification failure: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace donkin
