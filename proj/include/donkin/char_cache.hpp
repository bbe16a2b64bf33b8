#pragma once

#include "donkin/character.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>

namespace donkin {

// Persistent, human-diffable character store. One file per (system, weight),
// payload in the shared text format plus a checksum line. Writes go through
// a temp file and rename, so readers never observe partial entries.
class CharacterCache {
public:
    explicit CharacterCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    const std::filesystem::path& dir() const { return dir_; }

    std::optional<DominantCharacter> load(const std::shared_ptr<const RootSystem>& rs,
                                          const Coords& lam) const {
        auto path = entry_path(*rs, lam);
        std::error_code ec;
        if (!std::filesystem::exists(path, ec)) return std::nullopt;
        std::string payload, stored_sum;
        if (!read_entry(path, payload, stored_sum)) return std::nullopt;
        if (checksum(payload) != stored_sum) return std::nullopt;  // corrupt: recompute
        try {
            DominantCharacter ch(rs);
            std::istringstream in(payload);
            std::string header;
            std::getline(in, header);  // "char <spec> <weight>"
            if (header != header_line(*rs, lam)) return std::nullopt;
            std::string rest((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            parse_lines_into(rest, [&](const std::string& w, const std::string& c) {
                ch.add(rs->parse_weight(w), BigInt(c));
            });
            ++hits_;
            return ch;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    void store(const std::shared_ptr<const RootSystem>& rs, const Coords& lam,
               const DominantCharacter& ch) const {
        std::string payload = header_line(*rs, lam) + "\n" + serialize_lines(ch);
        std::string body = payload + "checksum " + checksum(payload) + "\n";
        auto path = entry_path(*rs, lam);
        std::lock_guard<std::mutex> lock(write_mu_);
        auto tmp = dir_ / (".tmp-" + std::to_string(std::random_device{}()));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << body;
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec) std::filesystem::remove(tmp, ec);
        ++writes_;
    }

    struct Stats {
        std::size_t entries = 0;
        std::size_t bad = 0;
        std::uintmax_t bytes = 0;
    };

    // Scans every entry, validating checksums when `verify` is set.
    Stats scan(bool verify) const {
        Stats st;
        std::error_code ec;
        for (const auto& e : std::filesystem::directory_iterator(dir_, ec)) {
            if (!e.is_regular_file() || e.path().extension() != ".chr") continue;
            ++st.entries;
            st.bytes += e.file_size();
            if (verify) {
                std::string payload, sum;
                if (!read_entry(e.path(), payload, sum) || checksum(payload) != sum) ++st.bad;
            }
        }
        return st;
    }

    std::size_t clear() const {
        std::size_t n = 0;
        std::error_code ec;
        for (const auto& e : std::filesystem::directory_iterator(dir_, ec)) {
            if (!e.is_regular_file() || e.path().extension() != ".chr") continue;
            std::filesystem::remove(e.path(), ec);
            ++n;
        }
        return n;
    }

    std::size_t hit_count() const { return hits_; }
    std::size_t write_count() const { return writes_; }

private:
    static std::string header_line(const RootSystem& rs, const Coords& lam) {
        return "char " + rs.spec().to_string() + " " + rs.format_weight(lam);
    }

    std::filesystem::path entry_path(const RootSystem& rs, const Coords& lam) const {
        std::string name = rs.spec().to_string();
        for (auto c : lam) name += "_" + std::to_string(c);
        return dir_ / (name + ".chr");
    }

    static std::string checksum(const std::string& payload) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a(payload.data(), payload.size())));
        return buf;
    }

    static bool read_entry(const std::filesystem::path& path, std::string& payload,
                           std::string& sum) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return false;
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto pos = all.rfind("checksum ");
        if (pos == std::string::npos || pos == 0) return false;
        payload = all.substr(0, pos);
        sum = all.substr(pos + 9);
        while (!sum.empty() && (sum.back() == '\n' || sum.back() == '\r')) sum.pop_back();
        return true;
    }

    std::filesystem::path dir_;
    mutable std::mutex write_mu_;
    mutable std::atomic<std::size_t> hits_{0}, writes_{0};
};

}  // namespace donkin
