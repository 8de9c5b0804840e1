#pragma once

#include "normset/config.hpp"
#include "normset/functional.hpp"
#include "normset/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace normset {

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// The coding function sigma, realized as a persistent registry.
//
// sigma is required to be injective into L_2 with the growth condition
// sigma(...) > 2^{n_m} * max supp f_m (faithful) resp. the additive scaled
// bound. The registry assigns the smallest unused L_2 element that satisfies
// the growth bound and exceeds every previously assigned weight, so weights
// are drawn from L_2 in increasing order of first use and injectivity holds
// by construction. Determinism comes from the assignment order; replaying a
// saved session file reproduces the exact weights.
// ---------------------------------------------------------------------------

class CodingRegistry final : public SigmaOracle {
  public:
    explicit CodingRegistry(SpaceConfig cfg) : cfg_(std::move(cfg)) {}

    CodingRegistry(const CodingRegistry&) = delete;
    CodingRegistry& operator=(const CodingRegistry&) = delete;

    const SpaceConfig& config() const { return cfg_; }

    struct Assignment {
        std::string hash;
        std::string canonical;
        Nat weight;
    };

    // Deterministic, injective. Repeated queries with an identical history
    // return the identical weight.
    Nat assign(const std::vector<std::pair<TermPtr, Nat>>& history) {
        if (history.empty()) throw MalformedInput("sigma: empty history");
        for (std::size_t i = 0; i + 1 < history.size(); ++i) {
            const auto& a = history[i].first;
            const auto& b = history[i + 1].first;
            if (!a->has_support() || !b->has_support() || !(*a->max_supp < *b->min_supp))
                throw MalformedInput("sigma: history functionals must be successive");
        }
        const auto& [last_f, last_n] = history.back();
        if (!last_f->has_support()) throw MalformedInput("sigma: empty functional in history");

        std::scoped_lock lock(mu_);
        std::string canonical = canonical_history_string(history);
        auto it = by_canonical_.find(canonical);
        if (it != by_canonical_.end()) return log_[it->second].weight;

        Nat w = next_weight_locked(last_n, *last_f->max_supp);
        Assignment a{fnv1a_hex(canonical), canonical, w};
        by_canonical_.emplace(canonical, log_.size());
        log_.push_back(std::move(a));
        return w;
    }

    std::optional<Nat> lookup_history(const std::string& canonical) const override {
        std::scoped_lock lock(mu_);
        auto it = by_canonical_.find(canonical);
        if (it == by_canonical_.end()) return std::nullopt;
        return log_[it->second].weight;
    }

    std::vector<Assignment> assignments() const {
        std::scoped_lock lock(mu_);
        return log_;
    }

    nlohmann::json to_json() const {
        std::scoped_lock lock(mu_);
        nlohmann::json arr = nlohmann::json::array();
        for (auto& a : log_) {
            nlohmann::json j;
            j["hash"] = a.hash;
            j["history"] = a.canonical;
            j["weight"] = nat_to_string(a.weight);
            arr.push_back(std::move(j));
        }
        nlohmann::json out;
        out["mode"] = mode_name(cfg_.mode);
        out["assignments"] = std::move(arr);
        return out;
    }

    void save_file(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw MalformedInput("cannot open registry file for writing: " + path);
        f << to_json().dump(2) << "\n";
    }

    // Replaces the registry contents; replay is bit-exact because assignments
    // are stored in first-use order with their weights.
    void load_json(const nlohmann::json& j) {
        std::scoped_lock lock(mu_);
        if (j.value("mode", mode_name(cfg_.mode)) != mode_name(cfg_.mode))
            throw MalformedInput("registry mode does not match the session config");
        log_.clear();
        by_canonical_.clear();
        Nat last(0);
        for (auto& e : j.at("assignments")) {
            Assignment a;
            a.hash = e.at("hash").get<std::string>();
            a.canonical = e.at("history").get<std::string>();
            a.weight = parse_nat(e.at("weight").get<std::string>());
            if (fnv1a_hex(a.canonical) != a.hash)
                throw MalformedInput("registry hash mismatch (corrupt session file)");
            if (!(a.weight > last)) throw MalformedInput("registry weights not increasing");
            if (!cfg_.in_L2(a.weight)) throw MalformedInput("registry weight outside L_2");
            last = a.weight;
            by_canonical_.emplace(a.canonical, log_.size());
            log_.push_back(std::move(a));
        }
    }

    void load_file(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw MalformedInput("cannot open registry file: " + path);
        nlohmann::json j;
        f >> j;
        load_json(j);
    }

  private:
    Nat next_weight_locked(const Nat& n_m, const Nat& max_supp) {
        Nat floor = log_.empty() ? Nat(0) : log_.back().weight;
        if (cfg_.mode == Mode::scaled) {
            Nat bound = nat_max(floor, n_m + max_supp + 1);
            return cfg_.smallest_L2_above(bound);
        }
        // faithful: scan the materialized prefix of L_2
        for (std::size_t k = 1; k < cfg_.faithful_prefix.size(); k += 2) {
            const Nat& cand = cfg_.faithful_prefix[k];
            if (cand > floor && cfg_.sigma_weight_ok(cand, n_m, max_supp)) return cand;
        }
        throw InfeasibleAtBudget(
            "sigma: no materializable element of faithful L_2 satisfies the growth bound");
    }

    SpaceConfig cfg_;
    mutable std::mutex mu_;
    std::vector<Assignment> log_;
    std::unordered_map<std::string, std::size_t> by_canonical_;
};

}  // namespace normset
